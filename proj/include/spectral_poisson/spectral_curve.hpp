#ifndef SPECTRAL_POISSON_SPECTRAL_CURVE_HPP
#define SPECTRAL_POISSON_SPECTRAL_CURVE_HPP

#include "spectral_poisson/exact/upoly.hpp"
#include "spectral_poisson/p1sheaf.hpp"

#include <stdexcept>
#include <vector>

namespace sp::spectral {

using exact::BiPoly;
using exact::LaurentPoly;
using exact::Rational;

/**
 * Spectral curve in S = Tot(O(n)) over the projective line.
 *
 * On chart 0 it is F0(z, y) = y^r + c_1(z) y^{r-1} + ... + c_r(z), with c_i a
 * global section of O(i n). On chart 1, with w = 1/z and y1 = w^n y,
 * F1(w, y1) = w^{rn} F0(1/w, y1 / w^n), whose y1^{r-i} coefficient is the
 * chart-1 expression of c_i.
 */
struct SpectralCurve {
    int n = 1;
    int r = 1;
    std::vector<LaurentPoly> coeffs;  // c_1 .. c_r as z-form global sections

    void validate() const {
        if (r < 1) throw std::invalid_argument("spectral curve: r must be >= 1");
        if (static_cast<int>(coeffs.size()) != r) throw std::invalid_argument("spectral curve: expected r coefficients");
        for (int i = 1; i <= r; ++i)
            if (!p1::is_global_section(coeffs[static_cast<std::size_t>(i - 1)], i * n))
                throw std::invalid_argument("spectral curve: c_" + std::to_string(i) + " is not a section of O(" +
                                            std::to_string(i * n) + ")");
    }

    BiPoly chart0() const {
        BiPoly f(static_cast<std::size_t>(r) + 1);
        f[static_cast<std::size_t>(r)] = LaurentPoly(Rational(1));
        for (int i = 1; i <= r; ++i) f[static_cast<std::size_t>(r - i)] = coeffs[static_cast<std::size_t>(i - 1)];
        return f;
    }

    /// Coefficients are polynomials in w.
    BiPoly chart1() const {
        BiPoly f(static_cast<std::size_t>(r) + 1);
        f[static_cast<std::size_t>(r)] = LaurentPoly(Rational(1));
        for (int i = 1; i <= r; ++i)
            f[static_cast<std::size_t>(r - i)] = p1::zform_to_chart1(coeffs[static_cast<std::size_t>(i - 1)], i * n);
        return f;
    }

    friend bool operator==(const SpectralCurve& a, const SpectralCurve& b) {
        return a.n == b.n && a.r == b.r && a.coeffs == b.coeffs;
    }
};

enum class Smoothness { Smooth, SingularOrUndetermined };

inline const char* to_string(Smoothness s) { return s == Smoothness::Smooth ? "Smooth" : "SingularOrUndetermined"; }

namespace detail {

inline void for_each_combination(std::size_t n, std::size_t k, const auto& fn) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    if (k > n) return;
    while (true) {
        fn(idx);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace detail

/**
 * Generator of the 0-th Fitting ideal (over the coordinate ring of the chart
 * of the base) of Q[z,y]/(F, F_y, F_z), for F monic in y.
 *
 * The quotient Q[z][y]/(F) is free over Q[z] with basis 1, y, ..., y^{r-1};
 * the ideal (F_y, F_z) is generated as a Q[z]-module by y^i F_y and y^i F_z,
 * which gives an r x 2r presentation matrix. Returns the monic gcd of its
 * maximal minors (zero if all vanish).
 */
inline LaurentPoly singular_fitting_generator(const BiPoly& f) {
    const std::size_t r = f.size() - 1;
    const BiPoly fy = exact::bipoly_dy(f);
    const BiPoly fz = exact::bipoly_dz(f);
    std::vector<std::vector<LaurentPoly>> columns;
    for (const BiPoly* g : {&fy, &fz}) {
        for (std::size_t i = 0; i < r; ++i) {
            BiPoly shifted(i, LaurentPoly());
            shifted.insert(shifted.end(), g->begin(), g->end());
            BiPoly rem = exact::bipoly_rem_monic(shifted, f);
            rem.resize(r);
            columns.push_back(std::move(rem));
        }
    }
    std::vector<LaurentPoly> minors;
    detail::for_each_combination(columns.size(), r, [&](const std::vector<std::size_t>& pick) {
        std::vector<std::vector<LaurentPoly>> m(r, std::vector<LaurentPoly>(r));
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) m[i][j] = columns[pick[j]][i];
        minors.push_back(exact::poly_matrix_det(std::move(m)));
    });
    return exact::poly_gcd(minors);
}

/// Smooth iff the Fitting generator is a nonzero constant on both charts.
inline Smoothness smoothness_certificate(const SpectralCurve& c) {
    c.validate();
    for (const BiPoly& f : {c.chart0(), c.chart1()}) {
        const LaurentPoly g = singular_fitting_generator(f);
        if (g.is_zero() || g.degree() != 0) return Smoothness::SingularOrUndetermined;
    }
    return Smoothness::Smooth;
}

/// Discriminant Res_y(F, F_y) on the given chart form.
inline LaurentPoly discriminant(const BiPoly& f) { return exact::resultant_y(f, exact::bipoly_dy(f)); }

/// Euler characteristic of pi_* O_Y = O + O(-n) + ... + O(-(r-1)n).
inline int structure_sheaf_euler_characteristic(int r, int n) {
    int chi = 0;
    for (int i = 0; i < r; ++i) chi += p1::h0_dim(-i * n) - p1::h1_dim(-i * n);
    return chi;
}

/// Arithmetic genus 1 - chi(O_Y) = 1 - r + n r (r-1) / 2.
inline int genus(const SpectralCurve& c) { return 1 - structure_sheaf_euler_characteristic(c.r, c.n); }

/// h^0(Y, p^*N^r restricted to Y) = sum_i h^0(O((r-i) n)), the deformations of Y inside S.
inline int normal_sections_dim(int r, int n) {
    int h = 0;
    for (int i = 0; i < r; ++i) h += p1::h0_dim(r * n - i * n);
    return h;
}

}  // namespace sp::spectral

#endif
