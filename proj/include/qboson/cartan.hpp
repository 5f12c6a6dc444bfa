#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qboson/rational.hpp"

namespace qboson {

/// Validated Borcherds–Cartan datum: a finite index set with a symmetric
/// rational bilinear form (i,j) subject to
///   (a) symmetry,
///   (b) (i,j) <= 0 for i != j,
///   (c) 2(i,j)/(i,i) integral whenever (i,i) > 0.
/// Index i is real when (i,i) > 0 and imaginary when (i,i) <= 0.
struct CartanDatum {
    std::vector<std::string> labels;
    std::vector<std::vector<Rational>> form;
    /// Least common denominator of all (i,j) and all d_i = (i,i)/2, so that
    /// v = q^(1/D) makes every arising q-power an integral power of v.
    long D = 1;

    int n() const { return static_cast<int>(labels.size()); }

    const Rational& pairing(int i, int j) const {
        return form[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }

    Rational d(int i) const { return pairing(i, i) / 2; }

    bool real(int i) const { return pairing(i, i) > 0; }
    bool imaginary(int i) const { return !real(i); }

    /// a_ij = -2(i,j)/(i,i); defined for real i, integral by condition (c).
    /// Nonnegative for i != j, and -2 on the diagonal.
    long a(int i, int j) const {
        Rational v = Rational(-2) * pairing(i, j) / pairing(i, i);
        return static_cast<long>(v.get_num().get_si());
    }

    int label_index(const std::string& lbl) const {
        for (int i = 0; i < n(); ++i)
            if (labels[static_cast<size_t>(i)] == lbl) return i;
        return -1;
    }
};

struct Diagnostic {
    std::string where;
    std::string message;
};

struct ValidationResult {
    std::optional<CartanDatum> datum;
    std::vector<Diagnostic> errors;
    std::vector<Diagnostic> warnings;
    bool ok() const { return datum.has_value(); }
};

namespace detail {

/// Determinant by fraction-exact Gaussian elimination; n is small.
inline Rational form_determinant(std::vector<std::vector<Rational>> m) {
    size_t n = m.size();
    Rational det(1);
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && m[piv][col] == 0) ++piv;
        if (piv == n) return Rational(0);
        if (piv != col) {
            std::swap(m[piv], m[col]);
            det = -det;
        }
        det *= m[col][col];
        for (size_t r = col + 1; r < n; ++r) {
            if (m[r][col] == 0) continue;
            Rational f = m[r][col] / m[col][col];
            for (size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
        }
    }
    return det;
}

} // namespace detail

/// Check conditions (a)-(c), derive D, and classify indices. Returns either
/// the datum or the full diagnostic list; degenerate forms are legal but
/// worth a warning.
inline ValidationResult validate_datum(const std::vector<std::string>& labels,
                                       const std::vector<std::vector<Rational>>& form) {
    ValidationResult res;
    auto err = [&](const std::string& where, const std::string& msg) {
        res.errors.push_back({where, msg});
    };

    size_t n = labels.size();
    if (n == 0) err("labels", "index set must be nonempty");
    {
        std::set<std::string> seen;
        for (const auto& l : labels)
            if (!seen.insert(l).second) err("labels", "duplicate label '" + l + "'");
    }
    if (form.size() != n) err("form", "form must be square of size matching labels");
    for (size_t i = 0; i < form.size(); ++i)
        if (form[i].size() != n)
            err("form", "row " + std::to_string(i) + " has wrong length");
    if (!res.errors.empty()) return res;

    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            if (form[i][j] != form[j][i])
                err("form(" + labels[i] + "," + labels[j] + ")", "form is not symmetric");

    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (i != j && form[i][j] > 0)
                err("form(" + labels[i] + "," + labels[j] + ")",
                    "off-diagonal entry must be <= 0");

    for (size_t i = 0; i < n; ++i) {
        if (form[i][i] > 0) {
            for (size_t j = 0; j < n; ++j) {
                Rational c = Rational(2) * form[i][j] / form[i][i];
                if (!rat_is_integer(c))
                    err("form(" + labels[i] + "," + labels[j] + ")",
                        "2(i,j)/(i,i) = " + rat_str(c) + " is not an integer for real index '" +
                            labels[i] + "'");
            }
        }
    }
    if (!res.errors.empty()) return res;

    CartanDatum d;
    d.labels = labels;
    d.form = form;
    Integer lcm(1);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) lcm = rat_floor_den_lcm(lcm, form[i][j]);
        lcm = rat_floor_den_lcm(lcm, form[i][i] / 2);
    }
    if (!lcm.fits_slong_p()) {
        err("form", "common exponent denominator does not fit a machine word");
        return res;
    }
    d.D = lcm.get_si();

    if (detail::form_determinant(form) == 0)
        res.warnings.push_back({"form", "form is degenerate (determinant 0)"});

    res.datum = std::move(d);
    return res;
}

/// Convenience for callers that treat invalid data as exceptional.
inline CartanDatum datum_or_throw(const std::vector<std::string>& labels,
                                  const std::vector<std::vector<Rational>>& form) {
    ValidationResult r = validate_datum(labels, form);
    if (!r.ok()) {
        std::string msg = "invalid Cartan datum:";
        for (const auto& e : r.errors) msg += " [" + e.where + "] " + e.message;
        throw std::invalid_argument(msg);
    }
    return *r.datum;
}

} // namespace qboson
