#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace qboson {

using Integer = mpz_class;
using Rational = mpq_class;

/// Parse "p" or "p/q" (base 10). Throws std::invalid_argument on malformed
/// input or zero denominator.
inline Rational rat_parse(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    for (char ch : s) {
        if (ch != '-' && ch != '/' && (ch < '0' || ch > '9'))
            throw std::invalid_argument("malformed rational literal: " + s);
    }
    mpq_class r;
    if (r.set_str(s, 10) != 0)
        throw std::invalid_argument("malformed rational literal: " + s);
    if (r.get_den() == 0)
        throw std::invalid_argument("zero denominator in rational literal: " + s);
    r.canonicalize();
    return r;
}

inline std::string rat_str(const Rational& r) { return r.get_str(); }

inline bool rat_is_integer(const Rational& r) { return r.get_den() == 1; }

inline Integer rat_floor_den_lcm(const Integer& acc, const Rational& r) {
    Integer l;
    mpz_lcm(l.get_mpz_t(), acc.get_mpz_t(), r.get_den().get_mpz_t());
    return l;
}

} // namespace qboson
