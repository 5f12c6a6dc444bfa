#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <vector>

#include "qboson/cartan.hpp"
#include "qboson/freealg.hpp"
#include "qboson/linalg.hpp"
#include "qboson/scalar.hpp"
#include "qboson/weight.hpp"

namespace qboson {

/// One weight slice of the quotient algebra: every free word of that weight,
/// which of them survive as basis vectors, and how the rest project onto
/// them. Basis words are the lexicographically least representatives.
struct DegreeBasis {
    Weight weight;
    std::vector<EWord> monomials; // all free words of this weight, lex ascending
    std::vector<int> basis;       // indices into monomials, ascending
    Matrix proj;                  // monomials.size() x basis.size(): residue coords

    long rank() const { return static_cast<long>(basis.size()); }

    int monomial_index(const EWord& w) const {
        auto it = std::lower_bound(monomials.begin(), monomials.end(), w);
        if (it == monomials.end() || *it != w)
            throw std::logic_error("monomial_index: word has the wrong weight");
        return static_cast<int>(it - monomials.begin());
    }
};

namespace detail {

/// Quotient of a free slice with m labeled basis vectors by the row space of
/// `rows` (coefficient rows in ascending label order). Columns are pivoted in
/// descending label order so the eliminated labels are the greatest ones and
/// the kept labels are the least. proj has one row per label: its expansion
/// over the kept labels.
struct SliceQuotient {
    std::vector<int> kept; // surviving label indices, ascending
    Matrix proj;           // m x kept.size()
};

inline SliceQuotient slice_quotient(const Matrix& rows_asc, size_t m) {
    Matrix rows;
    rows.reserve(rows_asc.size());
    for (const Row& r : rows_asc) {
        Row rev(m, Scalar(0));
        bool nonzero = false;
        for (size_t c = 0; c < m; ++c) {
            if (r[c].is_zero()) continue;
            rev[m - 1 - c] = r[c];
            nonzero = true;
        }
        if (nonzero) rows.push_back(std::move(rev));
    }
    Echelon e = rref(std::move(rows));

    SliceQuotient q;
    std::vector<bool> eliminated(m, false);
    for (int c : e.pivot_cols) eliminated[m - 1 - static_cast<size_t>(c)] = true;
    std::vector<int> pos(m, -1);
    for (size_t idx = 0; idx < m; ++idx) {
        if (eliminated[idx]) continue;
        pos[idx] = static_cast<int>(q.kept.size());
        q.kept.push_back(static_cast<int>(idx));
    }
    q.proj = matrix_zero(m, q.kept.size());
    for (size_t idx = 0; idx < m; ++idx)
        if (pos[idx] >= 0) q.proj[idx][static_cast<size_t>(pos[idx])] = Scalar(1);
    for (size_t r = 0; r < e.rows.size(); ++r) {
        size_t pividx = m - 1 - static_cast<size_t>(e.pivot_cols[r]);
        for (size_t c = 0; c < m; ++c) {
            if (static_cast<int>(c) == e.pivot_cols[r]) continue;
            const Scalar& v = e.rows[r][c];
            if (v.is_zero()) continue;
            // eliminated label = -sum(coeff * kept label)
            q.proj[pividx][static_cast<size_t>(pos[m - 1 - c])] = -v;
        }
    }
    return q;
}

/// All weights gamma with 0 <= gamma <= bound, lexicographically ascending.
inline std::vector<Weight> weights_below(const Weight& bound) {
    std::vector<Weight> out;
    Weight cur(bound.size(), 0);
    auto rec = [&](auto&& self, size_t pos) -> void {
        if (pos == bound.size()) {
            out.push_back(cur);
            return;
        }
        for (int k = 0; k <= bound[pos]; ++k) {
            cur[pos] = k;
            self(self, pos + 1);
        }
    };
    rec(rec, 0);
    return out;
}

} // namespace detail

/// The graded algebra generated by the raising letters with the defining
/// relations imposed: for every real index i and every other index j the
/// alternating quantum-binomial sum
///   sum_{t=0}^{a_ij+1} (-1)^t [a_ij+1 choose t]_{d_i} E_i^t E_j E_i^{a_ij+1-t}
/// vanishes, and letters with orthogonal rows commute. Weight slices are
/// finite dimensional, computed on demand, and cached.
class BPlus {
  public:
    explicit BPlus(CartanDatum datum) : datum_(std::move(datum)) {
        rels_ = defining_relations(datum_);
    }

    const CartanDatum& datum() const { return datum_; }
    const std::vector<FreeElement>& relations() const { return rels_; }

    /// Impose one more homogeneous relation (used to probe what breaks when
    /// the presentation is perturbed). Invalidates cached slices.
    void inject_relation(const FreeElement& r) {
        Weight wt;
        if (!r.homogeneous_weight(datum_.n(), wt) || r.is_zero())
            throw std::invalid_argument("inject_relation: need a nonzero homogeneous element");
        rels_.push_back(r);
        tab_.clear();
    }

    const DegreeBasis& degree_basis(const Weight& wt) const {
        auto it = tab_.find(wt);
        if (it != tab_.end()) return it->second;
        return tab_.emplace(wt, compute_slice(wt)).first->second;
    }

    long dim(const Weight& wt) const { return degree_basis(wt).rank(); }

    /// Hand a precomputed slice to the cache (e.g. loaded from disk). The
    /// slice is trusted as-is.
    void adopt(DegreeBasis db) const { tab_[db.weight] = std::move(db); }

    bool slice_cached(const Weight& wt) const { return tab_.count(wt) != 0; }

    /// Residue of a free element: each weight component is replaced by its
    /// expansion over the basis words of that weight.
    FreeElement normal_form(const FreeElement& x) const {
        FreeElement out;
        for (const auto& [wt, part] : x.split(datum_.n())) {
            const DegreeBasis& db = degree_basis(wt);
            Row coords(db.basis.size(), Scalar(0));
            for (const auto& [w, c] : part.terms) {
                int m = db.monomial_index(w);
                for (size_t b = 0; b < db.basis.size(); ++b)
                    if (!db.proj[static_cast<size_t>(m)][b].is_zero())
                        coords[b] += c * db.proj[static_cast<size_t>(m)][b];
            }
            for (size_t b = 0; b < coords.size(); ++b)
                out.add_term(db.monomials[static_cast<size_t>(db.basis[b])], coords[b]);
        }
        return out;
    }

    FreeElement mul(const FreeElement& a, const FreeElement& b) const {
        return normal_form(free_multiply(a, b));
    }

    FreeElement contract_nf(int i, const FreeElement& x) const {
        return normal_form(contract(datum_, i, x));
    }

    /// Coordinates of (the residue of) a weight-homogeneous element over the
    /// basis words of that weight.
    Row coords(const Weight& wt, const FreeElement& x) const {
        const DegreeBasis& db = degree_basis(wt);
        Row out(db.basis.size(), Scalar(0));
        Weight check;
        if (!x.homogeneous_weight(datum_.n(), check) || (!x.is_zero() && check != wt))
            throw std::invalid_argument("coords: element is not homogeneous of that weight");
        for (const auto& [w, c] : x.terms) {
            int m = db.monomial_index(w);
            for (size_t b = 0; b < db.basis.size(); ++b)
                if (!db.proj[static_cast<size_t>(m)][b].is_zero())
                    out[b] += c * db.proj[static_cast<size_t>(m)][b];
        }
        return out;
    }

    FreeElement from_coords(const Weight& wt, const Row& coords) const {
        const DegreeBasis& db = degree_basis(wt);
        FreeElement out;
        for (size_t b = 0; b < coords.size(); ++b)
            out.add_term(db.monomials[static_cast<size_t>(db.basis[b])], coords[b]);
        return out;
    }

    /// Every relation instance x*r*y of the given weight, as free elements.
    std::vector<FreeElement> relation_instances(const Weight& wt) const {
        std::vector<FreeElement> out;
        int n = datum_.n();
        for (const FreeElement& r : rels_) {
            Weight beta;
            r.homogeneous_weight(n, beta);
            if (!weight_leq(beta, wt)) continue;
            Weight rem = wt - beta;
            for (const Weight& gamma : detail::weights_below(rem)) {
                Weight delta = rem - gamma;
                for (const EWord& x : words_of_weight(gamma))
                    for (const EWord& y : words_of_weight(delta))
                        out.push_back(free_multiply(
                            free_multiply(FreeElement::word(x), r), FreeElement::word(y)));
            }
        }
        return out;
    }

    static std::vector<FreeElement> defining_relations(const CartanDatum& d) {
        std::vector<FreeElement> rels;
        int n = d.n();
        for (int i = 0; i < n; ++i) {
            if (!d.real(i)) continue;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                long a = d.a(i, j);
                FreeElement s;
                for (long t = 0; t <= a + 1; ++t) {
                    Scalar c = quantum_binomial(a + 1, t, d.d(i), d.D);
                    if (t % 2) c = -c;
                    EWord w;
                    for (long k = 0; k < t; ++k) w.push_back(i);
                    w.push_back(j);
                    for (long k = 0; k < a + 1 - t; ++k) w.push_back(i);
                    s.add_term(w, c);
                }
                rels.push_back(s);
            }
        }
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                if (d.pairing(i, j) != 0) continue;
                FreeElement c = FreeElement::word(EWord{i, j}) - FreeElement::word(EWord{j, i});
                rels.push_back(c);
            }
        return rels;
    }

  private:
    DegreeBasis compute_slice(const Weight& wt) const {
        DegreeBasis db;
        db.weight = wt;
        db.monomials = words_of_weight(wt);
        size_t m = db.monomials.size();

        Matrix rows;
        for (const FreeElement& inst : relation_instances(wt)) {
            Row row(m, Scalar(0));
            for (const auto& [w, c] : inst.terms) {
                size_t idx = static_cast<size_t>(
                    std::lower_bound(db.monomials.begin(), db.monomials.end(), w) -
                    db.monomials.begin());
                row[idx] = c;
            }
            rows.push_back(std::move(row));
        }
        detail::SliceQuotient q = detail::slice_quotient(rows, m);
        db.basis = std::move(q.kept);
        db.proj = std::move(q.proj);
        return db;
    }

    CartanDatum datum_;
    std::vector<FreeElement> rels_;
    mutable std::map<Weight, DegreeBasis> tab_;
};

/// Does the contraction along every index send the relation span of each
/// weight <= the bound into the relation span one step down? This is the
/// structural fact that makes the lowering action on the quotient well
/// defined. Returns the first offending (weight, index) pair if any.
struct StabilityReport {
    bool ok = true;
    Weight weight;
    int index = -1;
};

inline StabilityReport check_contraction_stability(const BPlus& alg, int max_height) {
    const CartanDatum& d = alg.datum();
    StabilityReport rep;
    for (int h = 2; h <= max_height; ++h) {
        for (const Weight& wt : weights_of_height(d.n(), h)) {
            auto insts = alg.relation_instances(wt);
            if (insts.empty()) continue;
            for (int i = 0; i < d.n(); ++i) {
                if (wt[static_cast<size_t>(i)] == 0) continue;
                for (const FreeElement& inst : insts) {
                    if (!alg.contract_nf(i, inst).is_zero()) {
                        rep.ok = false;
                        rep.weight = wt;
                        rep.index = i;
                        return rep;
                    }
                }
            }
        }
    }
    return rep;
}

} // namespace qboson
