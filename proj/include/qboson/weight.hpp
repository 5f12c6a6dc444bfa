#pragma once

#include <string>
#include <vector>

namespace qboson {

/// Multidegree over the datum's index set: entry k counts the letter k.
using Weight = std::vector<int>;

inline int height(const Weight& w) {
    int h = 0;
    for (int x : w) h += x;
    return h;
}

inline Weight weight_zero(int n) { return Weight(static_cast<size_t>(n), 0); }

inline Weight weight_unit(int n, int i) {
    Weight w = weight_zero(n);
    w[static_cast<size_t>(i)] = 1;
    return w;
}

inline Weight operator+(const Weight& a, const Weight& b) {
    Weight r(a);
    for (size_t k = 0; k < r.size(); ++k) r[k] += b[k];
    return r;
}

/// Componentwise difference; entries may go negative (callers check).
inline Weight operator-(const Weight& a, const Weight& b) {
    Weight r(a);
    for (size_t k = 0; k < r.size(); ++k) r[k] -= b[k];
    return r;
}

inline bool weight_nonneg(const Weight& w) {
    for (int x : w)
        if (x < 0) return false;
    return true;
}

inline bool weight_leq(const Weight& a, const Weight& b) {
    for (size_t k = 0; k < a.size(); ++k)
        if (a[k] > b[k]) return false;
    return true;
}

inline std::string weight_str(const Weight& w) {
    std::string s = "(";
    for (size_t k = 0; k < w.size(); ++k) {
        if (k) s += ",";
        s += std::to_string(w[k]);
    }
    return s + ")";
}

/// All weights of the given height in n coordinates, lexicographically
/// ascending.
inline std::vector<Weight> weights_of_height(int n, int h) {
    std::vector<Weight> out;
    Weight cur(static_cast<size_t>(n), 0);
    auto rec = [&](auto&& self, int pos, int rest) -> void {
        if (pos == n - 1) {
            cur[static_cast<size_t>(pos)] = rest;
            out.push_back(cur);
            return;
        }
        for (int k = 0; k <= rest; ++k) {
            cur[static_cast<size_t>(pos)] = k;
            self(self, pos + 1, rest - k);
        }
    };
    if (n > 0 && h >= 0) rec(rec, 0, h);
    return out;
}

} // namespace qboson
