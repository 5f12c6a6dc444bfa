#pragma once

#include <map>
#include <string>
#include <vector>

#include "qboson/cartan.hpp"
#include "qboson/scalar.hpp"
#include "qboson/weight.hpp"

namespace qboson {

/// Word in the raising letters E_i, stored as the index sequence.
using EWord = std::vector<int>;

inline Weight word_weight(int n, const EWord& w) {
    Weight wt = weight_zero(n);
    for (int i : w) ++wt[static_cast<size_t>(i)];
    return wt;
}

inline std::string word_str(const CartanDatum& d, const EWord& w) {
    if (w.empty()) return "1";
    std::string s;
    for (size_t k = 0; k < w.size(); ++k) {
        if (k) s += "*";
        s += "E" + d.labels[static_cast<size_t>(w[k])];
    }
    return s;
}

/// All words of the given weight, lexicographically ascending.
inline std::vector<EWord> words_of_weight(const Weight& wt) {
    std::vector<EWord> out;
    int h = height(wt);
    EWord cur;
    Weight left = wt;
    auto rec = [&](auto&& self) -> void {
        if (static_cast<int>(cur.size()) == h) {
            out.push_back(cur);
            return;
        }
        for (size_t i = 0; i < left.size(); ++i) {
            if (left[i] == 0) continue;
            --left[i];
            cur.push_back(static_cast<int>(i));
            self(self);
            cur.pop_back();
            ++left[i];
        }
    };
    rec(rec);
    return out;
}

/// Finitely supported Scalar combination of E-words. Terms are kept sorted
/// (std::map is lex on the index sequences) and never store zero
/// coefficients, so equality is coefficientwise.
struct FreeElement {
    std::map<EWord, Scalar> terms;

    static FreeElement zero() { return {}; }
    static FreeElement unit() { return word(EWord{}); }
    static FreeElement letter(int i) { return word(EWord{i}); }
    static FreeElement word(const EWord& w) {
        FreeElement e;
        e.terms[w] = Scalar(1);
        return e;
    }

    bool is_zero() const { return terms.empty(); }

    void add_term(const EWord& w, const Scalar& c) {
        if (c.is_zero()) return;
        auto it = terms.find(w);
        if (it == terms.end()) {
            terms.emplace(w, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) terms.erase(it);
        }
    }

    Scalar coeff(const EWord& w) const {
        auto it = terms.find(w);
        return it == terms.end() ? Scalar(0) : it->second;
    }

    friend FreeElement operator+(const FreeElement& a, const FreeElement& b) {
        FreeElement r(a);
        for (const auto& [w, c] : b.terms) r.add_term(w, c);
        return r;
    }
    friend FreeElement operator-(const FreeElement& a, const FreeElement& b) {
        FreeElement r(a);
        for (const auto& [w, c] : b.terms) r.add_term(w, -c);
        return r;
    }
    friend FreeElement operator*(const Scalar& c, const FreeElement& a) {
        FreeElement r;
        if (c.is_zero()) return r;
        for (const auto& [w, x] : a.terms) r.terms[w] = c * x;
        return r;
    }
    friend bool operator==(const FreeElement& a, const FreeElement& b) {
        return a.terms == b.terms;
    }

    /// Split into weight-homogeneous parts.
    std::map<Weight, FreeElement> split(int n) const {
        std::map<Weight, FreeElement> parts;
        for (const auto& [w, c] : terms) parts[word_weight(n, w)].terms[w] = c;
        return parts;
    }

    /// The weight if homogeneous (zero counts as homogeneous of any weight).
    bool homogeneous_weight(int n, Weight& out) const {
        bool first = true;
        for (const auto& [w, c] : terms) {
            Weight wt = word_weight(n, w);
            if (first) {
                out = wt;
                first = false;
            } else if (wt != out) {
                return false;
            }
        }
        return true;
    }

    std::string str(const CartanDatum& d) const {
        if (terms.empty()) return "0";
        std::string s;
        bool first = true;
        for (const auto& [w, c] : terms) {
            if (!first) s += " + ";
            first = false;
            if (c.is_one())
                s += word_str(d, w);
            else
                s += "(" + c.str(d.D) + ")*" + word_str(d, w);
        }
        return s;
    }
};

inline FreeElement free_multiply(const FreeElement& a, const FreeElement& b) {
    FreeElement r;
    for (const auto& [wa, ca] : a.terms) {
        for (const auto& [wb, cb] : b.terms) {
            EWord w(wa);
            w.insert(w.end(), wb.begin(), wb.end());
            r.add_term(w, ca * cb);
        }
    }
    return r;
}

/// q^{(i, alpha)} = q^{sum_k alpha_k (i,k)}: the factor a lowering operator
/// picks up when commuted across a weight-alpha element.
inline Scalar weight_twist(const CartanDatum& d, int i, const Weight& alpha) {
    Rational e(0);
    for (size_t k = 0; k < alpha.size(); ++k)
        if (alpha[k] != 0) e += Rational(alpha[k]) * d.pairing(i, static_cast<int>(k));
    return q_power(e, d.D);
}

/// Contraction along index i: on a word E_{j_1}...E_{j_t},
///   del_i(w) = sum over positions s with j_s = i of
///              q^{(i, j_1 + ... + j_{s-1})} * (w with letter s removed).
/// This is exactly how F_i reaches the vacuum through w, one matched letter
/// at a time, and it satisfies the twisted Leibniz rule
///   del_i(x y) = del_i(x) y + q^{(i,|x|)} x del_i(y).
inline FreeElement contract(const CartanDatum& d, int i, const FreeElement& x) {
    FreeElement r;
    for (const auto& [w, c] : x.terms) {
        Rational prefix(0);
        for (size_t s = 0; s < w.size(); ++s) {
            if (w[s] == i) {
                EWord rest;
                rest.reserve(w.size() - 1);
                rest.insert(rest.end(), w.begin(), w.begin() + static_cast<long>(s));
                rest.insert(rest.end(), w.begin() + static_cast<long>(s) + 1, w.end());
                r.add_term(rest, c * q_power(prefix, d.D));
            }
            prefix += d.pairing(i, w[s]);
        }
    }
    return r;
}

} // namespace qboson
