#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "qboson/cartan.hpp"
#include "qboson/linalg.hpp"
#include "qboson/omod.hpp"
#include "qboson/scalar.hpp"

namespace qboson {

/// Truncated extremal-projector series along one index:
///   P = sum_{k=0}^{order} c_k E_i^k F_i^k
/// with the coefficients forced by requiring F_i P = 0 term by term. Writing
/// g_k = q_geometric(k, (i,i)), the exchange rule gives
///   F_i E_i^k = q^{k(i,i)} E_i^k F_i + g_k E_i^{k-1},
/// so collecting E_i^k F_i^{k+1} in F_i P yields the recurrence
///   c_{k+1} = -q^{k(i,i)} c_k / g_{k+1},  c_0 = 1.
struct ProjectorSeries {
    int index = 0;
    long order = 0;
    std::vector<Scalar> c;        // c[0..order]
    std::vector<Scalar> residual; // residual[k] = c_k q^{k(i,i)} + c_{k+1} g_{k+1}
};

inline ProjectorSeries projector_series(const CartanDatum& d, int i, long order) {
    if (i < 0 || i >= d.n()) throw std::invalid_argument("projector_series: bad index");
    if (order < 0) throw std::invalid_argument("projector_series: negative order");
    ProjectorSeries p;
    p.index = i;
    p.order = order;
    Rational norm = d.pairing(i, i);
    p.c.push_back(Scalar(1));
    for (long k = 0; k < order; ++k) {
        Scalar gk1 = q_geometric(k + 1, norm, d.D);
        Scalar twist = q_power(Rational(k) * norm, d.D);
        p.c.push_back(Scalar(0) - (twist * p.c.back()) * gk1.inverse());
        p.residual.push_back(p.c[static_cast<size_t>(k)] * twist +
                             p.c.back() * gk1);
    }
    return p;
}

/// Apply the truncated series to a module vector. Throws if the lowering
/// chain has not died by the series order (the order is too small for this
/// vector), or if a raising step would cross the module's height bound.
inline ModuleVector apply_projector(const ProjectorSeries& p, const ModuleTrunc& m,
                                    const ModuleVector& v) {
    int i = p.index;
    std::vector<ModuleVector> chain{v};
    for (long k = 1; k <= p.order && !chain.back().is_zero(); ++k)
        chain.push_back(m.f(i, chain.back()));
    if (!chain.back().is_zero() && !m.f(i, chain.back()).is_zero())
        throw std::runtime_error(
            "apply_projector: lowering chain still alive past order " +
            std::to_string(p.order));

    ModuleVector out;
    for (size_t k = 0; k < chain.size(); ++k) {
        if (chain[k].is_zero()) continue;
        ModuleVector term = chain[k];
        for (size_t s = 0; s < k; ++s) {
            bool truncated = false;
            term = m.e(i, term, &truncated);
            if (truncated)
                throw std::runtime_error(
                    "apply_projector: raising crossed the height bound");
        }
        out = out + p.c[k] * term;
    }
    return out;
}

struct ResolutionEntry {
    int height = 0;
    Scalar s;                  // weight of E^h P F^h in the resolution
    bool diagonal_only = true; // E^k P F^k killed this height for every k != h
};

struct ProjectorReport {
    bool f_gamma_zero = true; // F_i (P v) = 0
    bool gamma_e_zero = true; // P (E_i v) = 0
    bool idempotent = true;   // P (P v) = P v
    int first_failure_degree = -1;
    std::vector<ResolutionEntry> resolution;
    bool resolution_ok = true;
    bool ok() const {
        return f_gamma_zero && gamma_e_zero && idempotent && resolution_ok;
    }
};

/// Check the projector properties on every stored component basis vector of
/// height <= check_height. The raising identity P E_i v = 0 is checked where
/// E_i v stays below the module's bound. On a rank-one depth-zero module the
/// report also solves for the resolution-of-identity weights s_h with
///   sum_h s_h E^h P F^h = id   (heights 0..check_height),
/// verifying along the way that E^k P F^k kills height h for every k != h;
/// the solved s_h are returned for inspection.
inline ProjectorReport verify_projector(const ProjectorSeries& p, const ModuleTrunc& m,
                                        int check_height) {
    ProjectorReport rep;
    int i = p.index;
    auto fail = [&rep](bool& flag, int degree) {
        flag = false;
        if (rep.first_failure_degree < 0 || degree < rep.first_failure_degree)
            rep.first_failure_degree = degree;
    };

    // crossing into a deeper copy keeps the height, so the raising half of
    // the series can overshoot by up to max_depth: reserve that headroom
    int h_cap = std::min(check_height, m.height_bound() - std::max(m.max_depth(), 0));
    for (int h = 0; h <= h_cap; ++h) {
        for (int k = 0; k <= m.max_depth(); ++k) {
            if (m.cdim(k) == 0) continue;
            for (const Weight& wt : weights_of_height(m.datum().n(), h)) {
                ComponentKey key{k, wt};
                for (const ModuleVector& v : m.component_basis(key)) {
                    ModuleVector g = apply_projector(p, m, v);
                    if (!m.f(i, g).is_zero()) fail(rep.f_gamma_zero, h);
                    if (!(apply_projector(p, m, g) == g)) fail(rep.idempotent, h);
                    if (h + 1 <= h_cap) {
                        ModuleVector ev = m.e(i, v);
                        if (!apply_projector(p, m, ev).is_zero())
                            fail(rep.gamma_e_zero, h + 1);
                    }
                }
            }
        }
    }

    if (m.datum().n() == 1 && m.max_depth() == 0) {
        int hmax = std::min(check_height, m.height_bound());
        std::vector<ModuleVector> tower{m.generator()};
        for (int h = 1; h <= hmax; ++h) tower.push_back(m.e(0, tower.back()));

        // A[h][k]: coefficient of tower[h] in E^k P F^k tower[h]
        size_t nn = static_cast<size_t>(hmax + 1);
        Matrix a = matrix_zero(nn, nn);
        std::vector<std::vector<ModuleVector>> image(nn);
        bool shape_ok = true;
        for (size_t h = 0; h < nn; ++h) {
            LevelFrame fr = level_frame(m, static_cast<int>(h));
            Row base = flatten(m, fr, tower[h]);
            for (size_t k = 0; k < nn; ++k) {
                ModuleVector cur = tower[h];
                for (size_t s = 0; s < k && !cur.is_zero(); ++s) cur = m.f(0, cur);
                cur = apply_projector(p, m, cur);
                for (size_t s = 0; s < k && !cur.is_zero(); ++s) cur = m.e(0, cur);
                image[h].push_back(cur);
                Row row = flatten(m, fr, cur);
                // rank-one slices: the image must lie on the tower line
                Scalar coef(0);
                for (size_t t = 0; t < row.size(); ++t) {
                    if (base[t].is_zero()) {
                        if (!row[t].is_zero()) shape_ok = false;
                    } else {
                        coef = row[t] * base[t].inverse();
                    }
                }
                a[h][k] = coef;
                if (k != h && !coef.is_zero()) shape_ok = false;
            }
        }
        Row ones(nn, Scalar(1));
        SolveResult res = solve(a, ones);
        rep.resolution_ok = shape_ok && res.consistent;
        if (res.consistent) {
            for (size_t h = 0; h < nn; ++h) {
                ResolutionEntry ent;
                ent.height = static_cast<int>(h);
                ent.s = res.particular[h];
                for (size_t k = 0; k < nn; ++k)
                    if (k != h && !a[h][k].is_zero()) ent.diagonal_only = false;
                rep.resolution.push_back(std::move(ent));
            }
            // direct recheck of the solved identity on every height
            for (size_t h = 0; h < nn && rep.resolution_ok; ++h) {
                ModuleVector acc;
                for (size_t k = 0; k < nn; ++k)
                    acc = acc + res.particular[k] * image[h][k];
                if (!(acc == tower[h])) rep.resolution_ok = false;
            }
        }
        if (!rep.resolution_ok && rep.first_failure_degree < 0)
            rep.first_failure_degree = 0;
    }
    return rep;
}

} // namespace qboson
