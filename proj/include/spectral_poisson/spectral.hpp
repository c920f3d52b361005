#ifndef SPECTRAL_POISSON_SPECTRAL_HPP
#define SPECTRAL_POISSON_SPECTRAL_HPP

#include "spectral_poisson/hitchin.hpp"
#include "spectral_poisson/spectral_curve.hpp"

#include <stdexcept>

namespace sp::spectral {

using hitchin::BundleP1;
using hitchin::HitchinPair;
using exact::BiPoly;
using exact::PolyMatrix;

/**
 * A spectral sheaf L on S = Tot(O(n)), held through its pushforward: the
 * split bundle P = p_* L together with psi = p_* x : P -> P (x) O(n).
 *
 * p is affine, so the pushforward loses nothing; every Ext group of L is
 * computed from (P, psi) on the base.
 */
struct SpectralSheafRep {
    BundleP1 pushforward;
    int n = 1;
    PolyMatrix psi;

    int rank() const { return static_cast<int>(pushforward.rank()); }
    int degree() const { return pushforward.degree(); }

    /// chi(L) = chi(p_* L), summed from the cohomology of the summands.
    int euler_characteristic() const {
        int chi = 0;
        for (int a : pushforward.splitting) chi += p1::h0_dim(a) - p1::h1_dim(a);
        return chi;
    }

    /// The support: 0-th Fitting ideal of the presentation p^*(P (x) N^v) -> p^*P by p^*psi - x.
    SpectralCurve support() const { return hitchin::spectral_curve(HitchinPair{pushforward, n, psi}); }

    BiPoly fitting_generator() const;
};

/**
 * det(x - psi) over Q[z][x], by cofactor expansion along the first row: the
 * single maximal minor of the presentation p^*(P (x) N^v) -> p^*P, h = p^*psi - x
 * (up to the unit (-1)^r).
 */
inline BiPoly presentation_determinant(const PolyMatrix& psi) {
    const std::size_t r = psi.rows();
    auto entry = [&](std::size_t i, std::size_t j) {
        BiPoly e{-psi(i, j)};
        if (i == j) e.push_back(exact::LaurentPoly(exact::Rational(1)));
        exact::bipoly_trim(e);
        return e;
    };
    std::vector<std::size_t> rows(r), cols(r);
    for (std::size_t i = 0; i < r; ++i) rows[i] = cols[i] = i;
    auto det = [&](auto&& self, const std::vector<std::size_t>& rs, const std::vector<std::size_t>& cs) -> BiPoly {
        if (rs.empty()) return BiPoly{exact::LaurentPoly(exact::Rational(1))};
        BiPoly out;
        const std::vector<std::size_t> sub_rows(rs.begin() + 1, rs.end());
        for (std::size_t k = 0; k < cs.size(); ++k) {
            BiPoly term = entry(rs[0], cs[k]);
            if (term.empty()) continue;
            std::vector<std::size_t> sub_cols = cs;
            sub_cols.erase(sub_cols.begin() + static_cast<std::ptrdiff_t>(k));
            term = exact::bipoly_mul(term, self(self, sub_rows, sub_cols));
            if (k % 2 == 1)
                for (auto& c : term) c = -c;
            out = exact::bipoly_add(out, term);
        }
        return out;
    };
    return det(det, rows, cols);
}

inline BiPoly SpectralSheafRep::fitting_generator() const { return presentation_determinant(psi); }

/// The spectral correspondence on representations. Requires a certified stable pair.
inline SpectralSheafRep phi(const HitchinPair& p) {
    if (!hitchin::certified_stable(p)) throw std::invalid_argument("phi: pair is not certified stable");
    return {p.bundle, p.n, p.theta};
}

/// theta = p_* x on E = p_* L.
inline HitchinPair phi_inverse(const SpectralSheafRep& s) {
    HitchinPair p{s.pushforward, s.n, s.psi};
    p.validate();
    return p;
}

/**
 * Pushforward of O_Y for a spectral curve Y: Q[z][y]/(F) has Q[z]-basis
 * 1, y, ..., y^{r-1}, the summand y^i lives in O(-i n), and multiplication by
 * y is the companion matrix of F.
 */
inline SpectralSheafRep structure_sheaf(const SpectralCurve& c) {
    c.validate();
    const auto r = static_cast<std::size_t>(c.r);
    SpectralSheafRep s;
    s.n = c.n;
    for (std::size_t i = 0; i < r; ++i) s.pushforward.splitting.push_back(-static_cast<int>(i) * c.n);
    s.psi = PolyMatrix(r, r);
    for (std::size_t i = 0; i + 1 < r; ++i) s.psi(i + 1, i) = exact::LaurentPoly(exact::Rational(1));
    // y * y^{r-1} = -(c_1 y^{r-1} + ... + c_r)
    for (std::size_t j = 1; j <= r; ++j) s.psi(r - j, r - 1) = -c.coeffs[j - 1];
    return s;
}

}  // namespace sp::spectral

#endif
