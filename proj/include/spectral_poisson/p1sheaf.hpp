#ifndef SPECTRAL_POISSON_P1SHEAF_HPP
#define SPECTRAL_POISSON_P1SHEAF_HPP

#include "spectral_poisson/exact/laurent.hpp"
#include "spectral_poisson/exact/matrix.hpp"

#include <stdexcept>
#include <vector>

/**
 * Line bundles O(d) on the projective line in the two-chart model.
 *
 * Chart 0 has coordinate z, chart 1 has coordinate w = 1/z. A section of O(d)
 * given by f(z) on chart 0 reads w^d f(1/w) on chart 1. Throughout the
 * library every local section is stored in "z-form": its expression in the
 * chart-0 trivialisation, as a Laurent polynomial in z. In z-form
 *
 *   - a chart-0 section has only exponents >= 0,
 *   - a chart-1 section has only exponents <= d,
 *   - an overlap section is an arbitrary Laurent polynomial,
 *
 * and bundle maps between line bundles are plain multiplication by global
 * sections, whichever chart we are on.
 */
namespace sp::p1 {

using exact::LaurentPoly;
using exact::Rational;
using exact::RatVector;

inline bool is_chart0_section(const LaurentPoly& f) { return f.is_polynomial(); }

inline bool is_chart1_section(const LaurentPoly& f, int d) {
    auto hi = f.max_exponent();
    return !hi || *hi <= d;
}

inline bool is_global_section(const LaurentPoly& f, int d) { return f.support_within(0, d); }

/// z-form of a chart-1 section given as a Laurent polynomial g(w).
inline LaurentPoly chart1_to_zform(const LaurentPoly& g_of_w, int d) { return g_of_w.inverted().shifted(d); }

/// Chart-1 expression g(w) of a z-form section.
inline LaurentPoly zform_to_chart1(const LaurentPoly& f, int d) { return f.shifted(-d).inverted(); }

/// Degree-0 Cech cochain of O(d): one local section per chart, both in z-form.
struct Cochain0 {
    LaurentPoly chart0;
    LaurentPoly chart1;
    int twist = 0;

    bool well_formed() const { return is_chart0_section(chart0) && is_chart1_section(chart1, twist); }
};

/// Degree-1 Cech cochain of O(d): one section on the overlap.
struct Cochain1 {
    LaurentPoly overlap;
    int twist = 0;
};

/// {1, z, ..., z^d}; empty for d < 0.
inline std::vector<LaurentPoly> h0_basis(int d) {
    std::vector<LaurentPoly> b;
    for (int k = 0; k <= d; ++k) b.push_back(LaurentPoly::monomial(k));
    return b;
}

/// {z^k : d+1 <= k <= -1}; empty for d >= -1.
inline std::vector<LaurentPoly> h1_basis(int d) {
    std::vector<LaurentPoly> b;
    for (int k = d + 1; k <= -1; ++k) b.push_back(LaurentPoly::monomial(k));
    return b;
}

inline int h0_dim(int d) { return d >= 0 ? d + 1 : 0; }
inline int h1_dim(int d) { return d <= -2 ? -d - 1 : 0; }

/// Cech differential: chart-1 component minus chart-0 component on the overlap.
inline Cochain1 cech_delta(const Cochain0& c) { return {c.chart1 - c.chart0, c.twist}; }

/// Coordinates of the H^1(O(d)) class of an overlap section in h1_basis(d).
inline RatVector h1_class(const LaurentPoly& overlap, int d) {
    RatVector v;
    for (int k = d + 1; k <= -1; ++k) v.push_back(overlap.coeff(k));
    return v;
}

/// Coordinates of a global section of O(d) in h0_basis(d).
inline RatVector h0_coords(const LaurentPoly& f, int d) {
    if (!is_global_section(f, d)) throw std::invalid_argument("h0_coords: not a global section of O(" + std::to_string(d) + ")");
    RatVector v;
    for (int k = 0; k <= d; ++k) v.push_back(f.coeff(k));
    return v;
}

/**
 * Splits an overlap section whose H^1 class vanishes into a 0-cochain c with
 * cech_delta(c) equal to it. Non-negative exponents go to chart 0, negative
 * ones to chart 1.
 */
inline Cochain0 split_coboundary(const LaurentPoly& overlap, int d) {
    for (int k = d + 1; k <= -1; ++k)
        if (overlap.coeff(k) != 0) throw std::logic_error("split_coboundary: class in H^1 is nonzero");
    Cochain0 c;
    c.twist = d;
    for (const auto& [e, q] : overlap.terms()) {
        if (e >= 0)
            c.chart0.set(e, -q);
        else
            c.chart1.set(e, q);
    }
    return c;
}

/// Residue of an overlap section of K = O(-2): the coefficient of z^{-1}.
inline Rational residue(const LaurentPoly& overlap_of_k) { return overlap_of_k.coeff(-1); }

/**
 * Serre duality pairing H^0(O(d)) x H^1(O(-2-d)) -> Q, normalised as the
 * coefficient of z^{-1} of the product.
 */
inline Rational residue_pair(const LaurentPoly& a, int d, const LaurentPoly& b, int e) {
    if (d + e != -2) throw std::invalid_argument("residue_pair: twists must sum to -2");
    if (!is_global_section(a, d)) throw std::invalid_argument("residue_pair: first argument is not a global section");
    return residue(a * b);
}

/// Matrix of residue_pair in the monomial bases h0_basis(d) x h1_basis(-2-d).
inline exact::RatMatrix residue_pair_matrix(int d) {
    const auto h0 = h0_basis(d);
    const auto h1 = h1_basis(-2 - d);
    exact::RatMatrix m(h0.size(), h1.size());
    for (std::size_t i = 0; i < h0.size(); ++i)
        for (std::size_t j = 0; j < h1.size(); ++j) m(i, j) = residue_pair(h0[i], d, h1[j], -2 - d);
    return m;
}

}  // namespace sp::p1

#endif
