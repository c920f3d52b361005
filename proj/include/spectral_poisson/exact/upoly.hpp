#ifndef SPECTRAL_POISSON_EXACT_UPOLY_HPP
#define SPECTRAL_POISSON_EXACT_UPOLY_HPP

#include "spectral_poisson/exact/laurent.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace sp::exact {

// Euclidean-domain helpers for ordinary polynomials in Q[z], stored as
// LaurentPoly with non-negative support.

inline std::pair<LaurentPoly, LaurentPoly> poly_divmod(const LaurentPoly& a, const LaurentPoly& b) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    if (!a.is_polynomial() || !b.is_polynomial())
        throw std::invalid_argument("poly_divmod expects ordinary polynomials");
    LaurentPoly q, r = a;
    const int db = b.degree();
    const Rational lb = b.leading_coeff();
    while (!r.is_zero() && r.degree() >= db) {
        const int shift = r.degree() - db;
        const Rational c = r.leading_coeff() / lb;
        q.add_term(shift, c);
        r -= b.shifted(shift) * c;
    }
    return {q, r};
}

inline LaurentPoly make_monic(const LaurentPoly& a) {
    if (a.is_zero()) return a;
    return a * (Rational(1) / a.leading_coeff());
}

/// Monic gcd; gcd(0, 0) = 0.
inline LaurentPoly poly_gcd(LaurentPoly a, LaurentPoly b) {
    while (!b.is_zero()) {
        auto r = poly_divmod(a, b).second;
        a = std::move(b);
        b = make_monic(r);
    }
    return make_monic(a);
}

inline LaurentPoly poly_gcd(const std::vector<LaurentPoly>& polys) {
    LaurentPoly g;
    for (const auto& p : polys) {
        g = poly_gcd(g, p);
        if (!g.is_zero() && g.degree() == 0) break;
    }
    return g;
}

/// Polynomial in y whose coefficients are polynomials in z; index = y-power.
using BiPoly = std::vector<LaurentPoly>;

inline void bipoly_trim(BiPoly& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

inline BiPoly bipoly_mul(const BiPoly& a, const BiPoly& b) {
    if (a.empty() || b.empty()) return {};
    BiPoly out(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    bipoly_trim(out);
    return out;
}

inline BiPoly bipoly_add(BiPoly a, const BiPoly& b) {
    if (a.size() < b.size()) a.resize(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
    bipoly_trim(a);
    return a;
}

inline BiPoly bipoly_dy(const BiPoly& p) {
    BiPoly out;
    for (std::size_t i = 1; i < p.size(); ++i) out.push_back(p[i] * Rational(static_cast<long>(i)));
    bipoly_trim(out);
    return out;
}

inline BiPoly bipoly_dz(const BiPoly& p) {
    BiPoly out;
    for (const auto& c : p) out.push_back(c.derivative());
    bipoly_trim(out);
    return out;
}

/// Remainder of p modulo a polynomial that is monic in y. No division in Q[z] occurs.
inline BiPoly bipoly_rem_monic(BiPoly p, const BiPoly& monic) {
    if (monic.empty() || monic.back() != LaurentPoly(Rational(1)))
        throw std::invalid_argument("bipoly_rem_monic: divisor must be monic in y");
    const std::size_t r = monic.size() - 1;
    bipoly_trim(p);
    while (p.size() > r) {
        const std::size_t shift = p.size() - 1 - r;
        const LaurentPoly lead = p.back();
        for (std::size_t i = 0; i <= r; ++i) p[shift + i] -= lead * monic[i];
        bipoly_trim(p);
    }
    return p;
}

/// Determinant of a square matrix over Q[z] by fraction-free (Bareiss) elimination.
inline LaurentPoly poly_matrix_det(std::vector<std::vector<LaurentPoly>> m) {
    const std::size_t n = m.size();
    if (n == 0) return LaurentPoly(Rational(1));
    LaurentPoly prev(Rational(1));
    bool negate = false;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k].is_zero()) {
            std::size_t swap = k + 1;
            while (swap < n && m[swap][k].is_zero()) ++swap;
            if (swap == n) return LaurentPoly();
            std::swap(m[k], m[swap]);
            negate = !negate;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                auto num = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                auto [q, rem] = poly_divmod(num, prev);
                if (!rem.is_zero()) throw std::logic_error("Bareiss step left a remainder");
                m[i][j] = std::move(q);
            }
            m[i][k] = LaurentPoly();
        }
        prev = m[k][k];
    }
    return negate ? -m[n - 1][n - 1] : m[n - 1][n - 1];
}

/// Resultant in y of two polynomials over Q[z] via the Sylvester matrix.
inline LaurentPoly resultant_y(BiPoly f, BiPoly g) {
    bipoly_trim(f);
    bipoly_trim(g);
    if (f.empty() || g.empty()) return LaurentPoly();
    const std::size_t df = f.size() - 1, dg = g.size() - 1;
    const std::size_t n = df + dg;
    if (n == 0) return LaurentPoly(Rational(1));
    std::vector<std::vector<LaurentPoly>> s(n, std::vector<LaurentPoly>(n));
    for (std::size_t i = 0; i < dg; ++i)
        for (std::size_t j = 0; j <= df; ++j) s[i][i + j] = f[df - j];
    for (std::size_t i = 0; i < df; ++i)
        for (std::size_t j = 0; j <= dg; ++j) s[dg + i][i + j] = g[dg - j];
    return poly_matrix_det(std::move(s));
}

}  // namespace sp::exact

#endif
