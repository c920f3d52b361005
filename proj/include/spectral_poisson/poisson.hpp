#ifndef SPECTRAL_POISSON_POISSON_HPP
#define SPECTRAL_POISSON_POISSON_HPP

#include "spectral_poisson/defm.hpp"
#include "spectral_poisson/hitchin.hpp"
#include "spectral_poisson/spectral.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace sp::poisson {

using defm::CoefficientMorphism;
using defm::CoefficientSheaf;
using defm::HyperCochain;
using defm::HyperCohomology;
using exact::LaurentPoly;
using exact::PolyMatrix;
using exact::Rational;
using exact::RatMatrix;
using exact::RatVector;
using hitchin::HitchinPair;
using hitchin::PoissonSection;

enum class Side { Hitchin, Sheaf };

/// Matrix of a Poisson map T^v -> T: columns are cotangent basis classes, rows tangent ones.
struct PoissonMatrix {
    RatMatrix matrix;
    Side side = Side::Hitchin;
};

struct Options {
    int window_extra = 0;
    bool inject_sign_fault = false;  // negates sigma_0 on the sheaf side; must make verification fail
};

/// Tangent and cotangent spaces of the Hitchin moduli at a pair, with their Serre pairing.
struct HitchinSide {
    HyperCohomology tangent;
    HyperCohomology cotangent;
    defm::DualityData duality;
    RatMatrix pairing;  // cotangent x tangent

    explicit HitchinSide(const HitchinPair& p, int window_extra = 0)
        : tangent(defm::end_complex(p), window_extra),
          cotangent(defm::cotangent_complex(p), window_extra),
          duality(defm::trace_duality(p.rank())),
          pairing(defm::serre_pairing_matrix(duality, cotangent, tangent)) {}
};

/**
 * Ext^1(L, L) and Ext^1(L, L (x) K_S) for the spectral sheaf L, computed on the
 * base through the pushforward complexes f_W, together with the evaluation
 * pairing between them.
 */
struct SheafSide {
    spectral::SpectralSheafRep sheaf;
    CoefficientSheaf w_tangent;    // W = L
    CoefficientSheaf w_cotangent;  // W = L (x) K_S, K_S = p^*(K (x) N^v) = p^*O(-n-2)
    HyperCohomology ext_tangent;
    HyperCohomology ext_cotangent;
    defm::DualityData duality;
    RatMatrix pairing;  // ext_cotangent x ext_tangent

    SheafSide(const HitchinPair& p, const spectral::SpectralSheafRep& l, int window_extra = 0)
        : sheaf(l),
          w_tangent(CoefficientSheaf::of(l, 0)),
          w_cotangent(CoefficientSheaf::of(l, -l.n - 2)),
          ext_tangent(defm::phi_W(p, w_tangent), window_extra),
          ext_cotangent(defm::phi_W(p, w_cotangent), window_extra),
          duality(evaluation_duality(p.rank(), l.pushforward.rank())),
          pairing(defm::serre_pairing_matrix(duality, ext_cotangent, ext_tangent)) {}

    /// e_j^v (x) f_k against e_k'^v (x) f_j'... : (j, k) pairs with (k, j) in the layout j rP + k.
    static defm::DualityData evaluation_duality(std::size_t r, std::size_t rp) {
        if (r != rp) throw std::invalid_argument("evaluation_duality: ranks differ");
        defm::DualityData d;
        for (std::size_t j = 0; j < r; ++j)
            for (std::size_t k = 0; k < rp; ++k) {
                d.degree0_partner.push_back(k * rp + j);
                d.degree1_partner.push_back(k * rp + j);
            }
        return d;
    }
};

inline void check_preconditions(const HitchinPair& p, const PoissonSection& sigma) {
    p.validate();
    sigma.validate(p.n);
    if (!hitchin::certified_stable(p)) throw std::invalid_argument("pair is not certified stable");
}

/// B^H: multiply both terms of the cotangent complex by sigma_0 and read off tangent coordinates.
inline PoissonMatrix poisson_hitchin(const HitchinSide& side, const PoissonSection& sigma) {
    const std::size_t dim = side.tangent.complex().source.rank();
    const LaurentPoly s = sigma.section();
    const defm::ChainMap by_sigma{PolyMatrix::scalar(dim, s), PolyMatrix::scalar(dim, s)};
    return {side.cotangent.induced(by_sigma, side.tangent), Side::Hitchin};
}

inline PoissonMatrix poisson_hitchin(const HitchinPair& p, const PoissonSection& sigma, int window_extra = 0) {
    check_preconditions(p, sigma);
    return poisson_hitchin(HitchinSide(p, window_extra), sigma);
}

/// Multiplication by s = p^*sigma_0 : L (x) K_S -> L, in the native Ext bases.
inline RatMatrix poisson_sheaf_native(const HitchinPair& p, const SheafSide& side, const PoissonSection& sigma,
                                      bool inject_sign_fault = false) {
    LaurentPoly s = sigma.section();
    if (inject_sign_fault) s = -s;
    const std::size_t rp = side.sheaf.pushforward.rank();
    const CoefficientMorphism by_s{side.w_cotangent, side.w_tangent, PolyMatrix::scalar(rp, s)};
    return defm::functoriality_map(p, by_s, side.ext_cotangent, side.ext_tangent);
}

/**
 * The identifications with the Hitchin side: phi : Ext^1(L, L) -> H^1(End complex)
 * and phi' : Ext^1(L, L (x) K_S) -> H^1(cotangent complex), both induced by
 * switching the factors of E^v (x) E.
 */
struct Identifications {
    RatMatrix phi;        // tangent x ext_tangent
    RatMatrix phi_prime;  // cotangent x ext_cotangent
};

inline Identifications identifications(const HitchinSide& h, const SheafSide& s) {
    const PolyMatrix sw = defm::factor_switch(s.sheaf.pushforward.rank());
    const defm::ChainMap flip{sw, sw};
    return {s.ext_tangent.induced(flip, h.tangent), s.ext_cotangent.induced(flip, h.cotangent)};
}

/// B transported to the Hitchin bases: phi o B_native o phi'^{-1}.
inline PoissonMatrix poisson_sheaf(const HitchinPair& p, const HitchinSide& h, const SheafSide& s,
                                   const PoissonSection& sigma, bool inject_sign_fault = false) {
    const auto ids = identifications(h, s);
    const auto inv = exact::inverse(ids.phi_prime);
    if (!inv) throw std::logic_error("poisson_sheaf: phi' is not invertible");
    return {ids.phi * poisson_sheaf_native(p, s, sigma, inject_sign_fault) * *inv, Side::Sheaf};
}

inline PoissonMatrix poisson_sheaf(const HitchinPair& p, const PoissonSection& sigma, int window_extra = 0) {
    check_preconditions(p, sigma);
    HitchinSide h(p, window_extra);
    SheafSide s(p, spectral::phi(p), window_extra);
    return poisson_sheaf(p, h, s, sigma);
}

struct TheoremReport {
    HitchinPair pair;
    PoissonSection sigma;
    std::size_t tangent_dim = 0;
    std::size_t cotangent_dim = 0;
    RatMatrix poisson_hitchin;       // B^H
    RatMatrix poisson_sheaf_native;  // B in the Ext bases
    RatMatrix poisson_sheaf;         // B in the Hitchin bases
    RatMatrix phi;
    RatMatrix phi_prime;
    RatMatrix pairing_hitchin;
    RatMatrix pairing_sheaf;
    RatMatrix difference;  // poisson_sheaf - poisson_hitchin
    bool phi_invertible = false;
    bool adjoint_identity = false;  // pairing_sheaf == phi'^T pairing_hitchin phi
    bool pass = false;
};

/**
 * Checks Phi_* B^H = B at one point: computes both Poisson maps through
 * independent cochain pipelines, the identifications phi and phi', the
 * adjointness of phi' and phi under the two Serre pairings, and the exact
 * difference of B^H and the transported B.
 */
inline TheoremReport verify_theorem(const HitchinPair& p, const PoissonSection& sigma, const Options& opt = {}) {
    check_preconditions(p, sigma);
    TheoremReport rep;
    rep.pair = p;
    rep.sigma = sigma;
    const HitchinSide h(p, opt.window_extra);
    const SheafSide s(p, spectral::phi(p), opt.window_extra);
    rep.tangent_dim = h.tangent.h1();
    rep.cotangent_dim = h.cotangent.h1();
    rep.pairing_hitchin = h.pairing;
    rep.pairing_sheaf = s.pairing;

    const auto ids = identifications(h, s);
    rep.phi = ids.phi;
    rep.phi_prime = ids.phi_prime;
    const auto phi_prime_inv = exact::inverse(ids.phi_prime);
    rep.phi_invertible = exact::inverse(ids.phi).has_value() && phi_prime_inv.has_value();
    rep.adjoint_identity = (ids.phi_prime.transpose() * h.pairing * ids.phi) == s.pairing;

    rep.poisson_hitchin = poisson_hitchin(h, sigma).matrix;
    rep.poisson_sheaf_native = poisson_sheaf_native(p, s, sigma, opt.inject_sign_fault);
    if (!rep.phi_invertible) {
        rep.pass = false;
        return rep;
    }
    rep.poisson_sheaf = ids.phi * rep.poisson_sheaf_native * *phi_prime_inv;
    rep.difference = rep.poisson_sheaf - rep.poisson_hitchin;
    rep.pass = rep.difference.is_zero() && rep.adjoint_identity;
    return rep;
}

struct SkewReport {
    bool skew = false;
    std::size_t rank = 0;
    bool even_rank = false;
    bool ok() const { return skew && even_rank; }
};

/// <B xi, eta> + <B eta, xi> = 0 for all basis covectors, and rank B even.
inline SkewReport skew_check(const HitchinSide& h, const RatMatrix& b) {
    const RatMatrix gb = h.pairing * b;  // (k, i) = <xi_k, B xi_i>
    SkewReport r;
    r.skew = (gb + gb.transpose()).is_zero();
    r.rank = exact::rank(b);
    r.even_rank = r.rank % 2 == 0;
    return r;
}

/**
 * Derivative of the Hitchin map along a tangent class (a, b): the derivative
 * of the characteristic coefficients of theta + eps b, via Newton's
 * identities. The chart-0 and chart-1 computations must agree (the a-part
 * only conjugates theta); the result is returned in hitchin_map coordinates.
 */
inline RatVector hitchin_differential(const HitchinPair& p, const HyperCochain& v) {
    const std::size_t r = p.rank();
    auto derivative = [&](const std::vector<LaurentPoly>& b) {
        PolyMatrix bm(r, r);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) bm(i, j) = b[defm::flat(i, j, r)];
        std::vector<LaurentPoly> tr(r + 1), dtr(r + 1);
        PolyMatrix power = PolyMatrix::identity(r);  // theta^{k-1}
        for (std::size_t k = 1; k <= r; ++k) {
            dtr[k] = (power * bm).trace() * Rational(static_cast<long>(k));
            power = power * p.theta;
            tr[k] = power.trace();
        }
        std::vector<LaurentPoly> c(r + 1), dc(r + 1);
        for (std::size_t k = 1; k <= r; ++k) {
            LaurentPoly acc = tr[k], dacc = dtr[k];
            for (std::size_t j = 1; j < k; ++j) {
                acc += c[j] * tr[k - j];
                dacc += dc[j] * tr[k - j] + c[j] * dtr[k - j];
            }
            const Rational inv_k(exact::Integer(-1), exact::Integer(static_cast<long>(k)));
            c[k] = acc * inv_k;
            dc[k] = dacc * inv_k;
        }
        return dc;
    };
    const auto d0 = derivative(v.b0);
    const auto d1 = derivative(v.b1);
    if (d0 != d1) throw std::logic_error("hitchin_differential: chart derivatives disagree");
    RatVector out;
    for (std::size_t k = 1; k <= r; ++k) {
        const auto c = p1::h0_coords(d0[k], static_cast<int>(k) * p.n);
        out.insert(out.end(), c.begin(), c.end());
    }
    return out;
}

struct CommutationReport {
    RatMatrix brackets;  // {H_l, H_l'} over coordinate functionals of the Hitchin base
    Rational max_abs = 0;
    std::size_t differential_rank = 0;
};

/**
 * Poisson brackets of the Hitchin-map coordinate functions. dH_l is the
 * covector whose Serre pairing with each tangent class v is l(dHitchin(v));
 * {H_l, H_l'} = dH_l'(B^H dH_l).
 */
inline CommutationReport hamiltonian_commutation(const HitchinPair& p, const HitchinSide& h, const RatMatrix& b) {
    const std::size_t base = hitchin::hitchin_base_dim(p.rank(), p.n);
    RatMatrix j(base, h.tangent.h1());
    for (std::size_t col = 0; col < h.tangent.h1(); ++col) {
        const auto d = hitchin_differential(p, h.tangent.basis()[col].cochain);
        for (std::size_t row = 0; row < base; ++row) j(row, col) = d[row];
    }
    const auto g_t_inv = exact::inverse(h.pairing.transpose());
    if (!g_t_inv) throw std::logic_error("hamiltonian_commutation: Serre pairing is degenerate");
    const RatMatrix covectors = *g_t_inv * j.transpose();  // cotangent x base
    CommutationReport rep;
    rep.brackets = j * b * covectors;
    rep.differential_rank = exact::rank(j);
    for (std::size_t a = 0; a < rep.brackets.rows(); ++a)
        for (std::size_t c = 0; c < rep.brackets.cols(); ++c)
            rep.max_abs = std::max(rep.max_abs, exact::abs(rep.brackets(a, c)));
    return rep;
}

}  // namespace sp::poisson

#endif
