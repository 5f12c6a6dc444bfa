#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qboson/rational.hpp"

namespace qboson {

/// Dense univariate polynomial over Q. Coefficient k is the coefficient of
/// x^k; the coefficient vector never has trailing zeros (zero poly is empty).
class Poly {
  public:
    Poly() = default;
    explicit Poly(const Rational& constant) {
        if (constant != 0) c_.push_back(constant);
    }

    static Poly monomial(int k, const Rational& a) {
        Poly p;
        if (a == 0) return p;
        if (k < 0) throw std::invalid_argument("Poly::monomial: negative exponent");
        p.c_.assign(static_cast<size_t>(k) + 1, Rational(0));
        p.c_.back() = a;
        return p;
    }

    static Poly one() { return Poly(Rational(1)); }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; } // -1 for zero

    Rational coeff(int k) const {
        if (k < 0 || k >= static_cast<int>(c_.size())) return Rational(0);
        return c_[static_cast<size_t>(k)];
    }

    const Rational& lead() const {
        if (is_zero()) throw std::logic_error("Poly::lead on zero");
        return c_.back();
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        Poly r;
        r.c_.resize(std::max(a.c_.size(), b.c_.size()), Rational(0));
        for (size_t k = 0; k < r.c_.size(); ++k) {
            if (k < a.c_.size()) r.c_[k] += a.c_[k];
            if (k < b.c_.size()) r.c_[k] += b.c_[k];
        }
        r.trim();
        return r;
    }

    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

    Poly operator-() const {
        Poly r(*this);
        for (auto& x : r.c_) x = -x;
        return r;
    }

    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        Poly r;
        r.c_.assign(a.c_.size() + b.c_.size() - 1, Rational(0));
        for (size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) continue;
            for (size_t j = 0; j < b.c_.size(); ++j)
                if (b.c_[j] != 0) r.c_[i + j] += a.c_[i] * b.c_[j];
        }
        r.trim();
        return r;
    }

    friend Poly operator*(const Rational& a, const Poly& b) {
        if (a == 0) return Poly();
        Poly r(b);
        for (auto& x : r.c_) x *= a;
        return r;
    }

    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

    /// Euclidean division: a = q*b + r with deg r < deg b. b must be nonzero.
    static std::pair<Poly, Poly> divrem(const Poly& a, const Poly& b) {
        if (b.is_zero()) throw std::invalid_argument("Poly::divrem by zero");
        Poly q, r(a);
        if (r.degree() >= b.degree())
            q.c_.assign(static_cast<size_t>(r.degree() - b.degree()) + 1, Rational(0));
        while (!r.is_zero() && r.degree() >= b.degree()) {
            int shift = r.degree() - b.degree();
            Rational f = r.lead() / b.lead();
            q.c_[static_cast<size_t>(shift)] = f;
            // r -= f * x^shift * b
            for (int k = 0; k <= b.degree(); ++k)
                r.c_[static_cast<size_t>(k + shift)] -= f * b.c_[static_cast<size_t>(k)];
            r.trim();
        }
        q.trim();
        return {q, r};
    }

    /// Monic gcd via the Euclidean algorithm (monic remainders keep the
    /// rational coefficients small). gcd(0,0) = 0.
    static Poly gcd(Poly a, Poly b) {
        a.make_monic();
        b.make_monic();
        while (!b.is_zero()) {
            Poly r = divrem(a, b).second;
            r.make_monic();
            a = std::move(b);
            b = std::move(r);
        }
        return a;
    }

    void make_monic() {
        if (is_zero()) return;
        Rational f = lead();
        if (f == 1) return;
        for (auto& x : c_) x /= f;
    }

    Rational eval(const Rational& x) const {
        Rational r(0);
        for (size_t k = c_.size(); k-- > 0;) r = r * x + c_[k];
        return r;
    }

    /// Render with terms in descending exponent, e.g. "q^2 - 2*q + 1/2".
    std::string str(const std::string& var) const {
        if (is_zero()) return "0";
        std::string out;
        for (int k = degree(); k >= 0; --k) {
            Rational a = coeff(k);
            if (a == 0) continue;
            bool neg = a < 0;
            Rational mag = neg ? Rational(-a) : a;
            if (out.empty())
                out += neg ? "-" : "";
            else
                out += neg ? " - " : " + ";
            bool unit = (mag == 1) && k > 0;
            if (!unit) out += rat_str(mag);
            if (k > 0) {
                if (!unit) out += "*";
                out += var;
                if (k > 1) out += "^" + std::to_string(k);
            }
        }
        return out;
    }

  private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    std::vector<Rational> c_;
};

} // namespace qboson
