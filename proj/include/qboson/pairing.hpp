#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "qboson/bplus.hpp"
#include "qboson/cartan.hpp"
#include "qboson/freealg.hpp"
#include "qboson/linalg.hpp"
#include "qboson/weight.hpp"

namespace qboson {

/// <fword | x>: run the lowering word into x over the vacuum and read off
/// the multiple of the vacuum that survives. fword[0] is applied first
/// (innermost), so fword is the reversal of the operator word
/// F_{w_k} ... F_{w_1}. Mismatched weights pair to zero automatically.
inline Scalar pair_vacuum(const CartanDatum& d, const EWord& fword, FreeElement x) {
    for (int i : fword) {
        if (x.is_zero()) break;
        x = contract(d, i, x);
    }
    return x.coeff(EWord{});
}

/// Gram matrix of one weight slice over the full set of free words:
/// entry (r, c) = <reverse(word_r) | word_c>. Row r is labeled by the same
/// word as column r, paired through its reversal so the matrix is symmetric.
struct GramSlice {
    Weight weight;
    std::vector<EWord> monomials; // lex ascending; labels rows and columns
    Matrix gram;
};

inline GramSlice gram_slice(const CartanDatum& d, const Weight& wt) {
    GramSlice g;
    g.weight = wt;
    g.monomials = words_of_weight(wt);
    size_t m = g.monomials.size();
    g.gram = matrix_zero(m, m);
    for (size_t r = 0; r < m; ++r) {
        EWord fword(g.monomials[r].rbegin(), g.monomials[r].rend());
        for (size_t c = 0; c < m; ++c)
            g.gram[r][c] = pair_vacuum(d, fword, FreeElement::word(g.monomials[c]));
    }
    return g;
}

/// Basis of the right radical {x : <fword|x> = 0 for all fwords of this
/// weight}, as coefficient vectors over the free words.
inline std::vector<Row> radical_basis(const GramSlice& g) {
    return kernel_basis(rref(g.gram), g.monomials.size());
}

/// One row of the simplicity ledger: a weight slice, the quotient dimension,
/// and the rank of the vacuum pairing on that slice. The pairing kills every
/// relation, so rank <= dim always; equality means the radical is exactly
/// the relation span and nothing degenerate hides in the slice.
struct SimplicitySlice {
    Weight weight;
    long dim = 0;
    long gram_rank = 0;
    bool full() const { return dim == gram_rank; }
};

struct SimplicityReport {
    bool simple = true;
    int max_height = 0;
    std::vector<SimplicitySlice> slices;
    std::optional<Weight> first_failure;
};

inline SimplicityReport simplicity_certificate(const BPlus& alg, int max_height) {
    SimplicityReport rep;
    rep.max_height = max_height;
    const CartanDatum& d = alg.datum();
    for (int h = 1; h <= max_height; ++h) {
        for (const Weight& wt : weights_of_height(d.n(), h)) {
            SimplicitySlice s;
            s.weight = wt;
            s.dim = alg.dim(wt);
            s.gram_rank = rank_of(gram_slice(d, wt).gram);
            if (!s.full() && !rep.first_failure) {
                rep.simple = false;
                rep.first_failure = wt;
            }
            rep.slices.push_back(std::move(s));
        }
    }
    return rep;
}

} // namespace qboson
