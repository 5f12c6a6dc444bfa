#pragma once

#include <cctype>
#include <stdexcept>
#include <string>
#include <utility>

#include "qboson/polynomial.hpp"
#include "qboson/rational.hpp"

namespace qboson {

/// Exact element of Q(v), the fraction field of polynomials in v. For a
/// datum with common exponent denominator D, v stands for q^(1/D), so every
/// rational q-power that arises is an integral Laurent power of v.
///
/// Canonical form invariants: gcd(num, den) = 1, den is monic and nonzero;
/// zero is 0/1. Negative powers of v live in the denominator (1/v^k), never
/// as negative exponents.
class Scalar {
  public:
    Scalar() : num_(), den_(Poly::one()) {}
    Scalar(int n) : num_(Rational(n)), den_(Poly::one()) {}
    explicit Scalar(const Rational& r) : num_(r), den_(Poly::one()) {}
    explicit Scalar(Poly num) : num_(std::move(num)), den_(Poly::one()) {}
    Scalar(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero()) throw std::invalid_argument("Scalar: zero denominator");
        reduce();
    }

    /// v^k for any integer k (negative k goes to the denominator).
    static Scalar v_power(long k) {
        if (k >= 0) return Scalar(Poly::monomial(static_cast<int>(k), Rational(1)));
        return Scalar(Poly::one(), Poly::monomial(static_cast<int>(-k), Rational(1)));
    }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_ == Poly::one() && den_ == Poly::one(); }
    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }

    friend Scalar operator+(const Scalar& a, const Scalar& b) {
        return Scalar(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Scalar operator-(const Scalar& a, const Scalar& b) {
        return Scalar(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    Scalar operator-() const {
        Scalar r(*this);
        r.num_ = -r.num_;
        return r;
    }
    friend Scalar operator*(const Scalar& a, const Scalar& b) {
        return Scalar(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend Scalar operator/(const Scalar& a, const Scalar& b) {
        if (b.is_zero()) throw std::domain_error("Scalar: division by zero");
        return Scalar(a.num_ * b.den_, a.den_ * b.num_);
    }
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

    Scalar inverse() const {
        if (is_zero()) throw std::domain_error("Scalar: inverse of zero");
        return Scalar(den_, num_);
    }

    Scalar pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        Scalar r(1), base(*this);
        while (e > 0) {
            if (e & 1) r *= base;
            base *= base;
            e >>= 1;
        }
        return r;
    }

    /// Canonical form makes this a genuine equality test.
    friend bool operator==(const Scalar& a, const Scalar& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    /// Specialization v -> 1 (classical limit). Throws if the reduced
    /// denominator vanishes there.
    Rational eval_at_one() const {
        Rational d = den_.eval(Rational(1));
        if (d == 0) throw std::domain_error("Scalar: pole at v = 1");
        return num_.eval(Rational(1)) / d;
    }

    /// Canonical string; the variable prints as "q" when D = 1 and "v"
    /// otherwise (v = q^(1/D)). Examples: "0", "q^2 + 1", "(q^2 + 1)/(q)".
    std::string str(long D) const {
        const std::string var = (D == 1) ? "q" : "v";
        if (den_ == Poly::one()) return num_.str(var);
        return "(" + num_.str(var) + ")/(" + den_.str(var) + ")";
    }

  private:
    void reduce() {
        if (num_.is_zero()) {
            den_ = Poly::one();
            return;
        }
        Poly g = Poly::gcd(num_, den_);
        if (g.degree() > 0) {
            num_ = Poly::divrem(num_, g).first;
            den_ = Poly::divrem(den_, g).first;
        }
        Rational lead = den_.lead();
        if (lead != 1) {
            num_ = (Rational(1) / lead) * num_;
            den_ = (Rational(1) / lead) * den_;
        }
    }

    Poly num_, den_;
};

/// q^e as an element of Q(v), v = q^(1/D): requires e*D integral.
inline Scalar q_power(const Rational& e, long D) {
    Rational k = e * Rational(D);
    if (!rat_is_integer(k))
        throw std::invalid_argument("q_power: exponent " + rat_str(e) +
                                    " has denominator not dividing D = " + std::to_string(D));
    if (!k.get_num().fits_slong_p())
        throw std::invalid_argument("q_power: exponent too large");
    return Scalar::v_power(k.get_num().get_si());
}

/// Truncated geometric sum 1 + q^c + ... + q^{(k-1)c}; equals k when c = 0.
inline Scalar q_geometric(long k, const Rational& c, long D) {
    if (k < 0) throw std::invalid_argument("q_geometric: negative length");
    Scalar s(0);
    for (long t = 0; t < k; ++t) s += q_power(Rational(t) * c, D);
    return s;
}

/// Balanced quantum integer [n]_d = (q^{nd} - q^{-nd}) / (q^d - q^{-d}).
inline Scalar quantum_integer(long n, const Rational& d, long D) {
    if (d == 0) throw std::invalid_argument("quantum_integer: d = 0");
    Scalar den = q_power(d, D) - q_power(-d, D);
    Scalar num = q_power(Rational(n) * d, D) - q_power(Rational(-n) * d, D);
    return num / den;
}

inline Scalar quantum_factorial(long n, const Rational& d, long D) {
    if (n < 0) throw std::invalid_argument("quantum_factorial: negative n");
    Scalar r(1);
    for (long t = 2; t <= n; ++t) r *= quantum_integer(t, d, D);
    return r;
}

/// Balanced quantum binomial [m over t]_d. Requires 0 <= t <= m.
inline Scalar quantum_binomial(long m, long t, const Rational& d, long D) {
    if (t < 0 || t > m)
        throw std::invalid_argument("quantum_binomial: need 0 <= t <= m");
    return quantum_factorial(m, d, D) /
           (quantum_factorial(t, d, D) * quantum_factorial(m - t, d, D));
}

namespace detail {

/// Recursive-descent parser for canonical Scalar strings and datum
/// rational-function literals. Grammar:
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := '-' factor | base ('^' int)?
///   base   := integer | 'q' | 'v' | '(' expr ')'
/// 'q' maps to v^D, 'v' to v. Whitespace is ignored.
class ScalarParser {
  public:
    ScalarParser(const std::string& s, long D) : s_(s), d_(D) {}

    Scalar parse() {
        Scalar r = expr();
        skip_ws();
        if (pos_ != s_.size())
            throw std::invalid_argument("scalar parse: trailing input at '" +
                                        s_.substr(pos_) + "'");
        return r;
    }

  private:
    Scalar expr() {
        Scalar r = term();
        for (;;) {
            skip_ws();
            if (eat('+'))
                r += term();
            else if (eat('-'))
                r -= term();
            else
                return r;
        }
    }

    Scalar term() {
        Scalar r = factor();
        for (;;) {
            skip_ws();
            if (eat('*'))
                r *= factor();
            else if (eat('/'))
                r /= factor();
            else
                return r;
        }
    }

    Scalar factor() {
        skip_ws();
        if (eat('-')) return -factor();
        Scalar b = base();
        skip_ws();
        if (eat('^')) return b.pow(integer());
        return b;
    }

    Scalar base() {
        skip_ws();
        if (pos_ >= s_.size()) throw std::invalid_argument("scalar parse: unexpected end");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Scalar r = expr();
            skip_ws();
            if (!eat(')')) throw std::invalid_argument("scalar parse: missing ')'");
            return r;
        }
        if (c == 'q') {
            ++pos_;
            return q_power(Rational(1), d_);
        }
        if (c == 'v') {
            ++pos_;
            return Scalar::v_power(1);
        }
        if (std::isdigit(static_cast<unsigned char>(c)))
            return Scalar(Rational(integer()));
        throw std::invalid_argument(std::string("scalar parse: unexpected '") + c + "'");
    }

    long integer() {
        skip_ws();
        bool neg = eat('-');
        size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == start) throw std::invalid_argument("scalar parse: expected integer");
        long val = std::stol(s_.substr(start, pos_ - start));
        return neg ? -val : val;
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    const std::string& s_;
    long d_;
    size_t pos_ = 0;
};

} // namespace detail

/// Parse an exact rational-function literal in q (or v) into a Scalar.
inline Scalar parse_scalar(const std::string& s, long D) {
    return detail::ScalarParser(s, D).parse();
}

} // namespace qboson
