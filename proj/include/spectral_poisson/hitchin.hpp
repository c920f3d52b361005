#ifndef SPECTRAL_POISSON_HITCHIN_HPP
#define SPECTRAL_POISSON_HITCHIN_HPP

#include "spectral_poisson/exact/matrix.hpp"
#include "spectral_poisson/exact/polymatrix.hpp"
#include "spectral_poisson/p1sheaf.hpp"
#include "spectral_poisson/spectral_curve.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace sp::hitchin {

using exact::LaurentPoly;
using exact::PolyMatrix;
using exact::Rational;
using exact::RatMatrix;
using exact::RatVector;

/// Split bundle O(a_1) + ... + O(a_r) on the projective line.
struct BundleP1 {
    std::vector<int> splitting;

    std::size_t rank() const noexcept { return splitting.size(); }
    int degree() const { return std::accumulate(splitting.begin(), splitting.end(), 0); }
    int operator[](std::size_t i) const { return splitting[i]; }

    friend bool operator==(const BundleP1&, const BundleP1&) = default;
};

/// Degree of the line bundle holding entry (i, j) of a map E -> E (x) O(n).
inline int entry_degree(const BundleP1& e, std::size_t i, std::size_t j, int n) { return e[i] + n - e[j]; }

/**
 * Hitchin pair (E, theta) on the projective line with N = O(n), n >= 1.
 *
 * theta(i, j) is the component O(a_j) -> O(a_i) (x) O(n), a global section of
 * O(a_i + n - a_j) written in z-form.
 */
struct HitchinPair {
    BundleP1 bundle;
    int n = 1;
    PolyMatrix theta;

    std::size_t rank() const noexcept { return bundle.rank(); }

    void validate() const {
        if (bundle.rank() < 1) throw std::invalid_argument("Hitchin pair: rank must be >= 1");
        if (n < 1) throw std::invalid_argument("Hitchin pair: twist n must be >= 1 (deg N K^-1 >= 3)");
        const std::size_t r = bundle.rank();
        if (theta.rows() != r || theta.cols() != r) throw std::invalid_argument("Hitchin pair: theta must be r x r");
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j)
                if (!p1::is_global_section(theta(i, j), entry_degree(bundle, i, j, n)))
                    throw std::invalid_argument("Hitchin pair: theta(" + std::to_string(i) + "," + std::to_string(j) +
                                                ") is not a section of O(" +
                                                std::to_string(entry_degree(bundle, i, j, n)) + ")");
    }

    friend bool operator==(const HitchinPair& a, const HitchinPair& b) {
        return a.bundle == b.bundle && a.n == b.n && a.theta == b.theta;
    }
};

/// sigma_0, a nonzero section of N (x) K^{-1} = O(n + 2).
struct PoissonSection {
    std::vector<Rational> coeffs;  // n + 3 coefficients of 1, z, ..., z^{n+2}

    LaurentPoly section() const { return LaurentPoly::from_coefficients(coeffs); }

    void validate(int n) const {
        if (static_cast<int>(coeffs.size()) != n + 3)
            throw std::invalid_argument("sigma0 must have n + 3 = " + std::to_string(n + 3) + " coefficients");
        if (section().is_zero()) throw std::invalid_argument("sigma0 must be nonzero");
    }
};

/**
 * Characteristic coefficients c_1..c_r with
 * x^r + c_1 x^{r-1} + ... + c_r = (-1)^r det(theta - x) = det(x - theta),
 * computed from power traces by Newton's identities.
 */
inline std::vector<LaurentPoly> char_poly(const HitchinPair& p) {
    const std::size_t r = p.rank();
    std::vector<LaurentPoly> traces(r + 1);
    PolyMatrix power = PolyMatrix::identity(r);
    for (std::size_t k = 1; k <= r; ++k) {
        power = power * p.theta;
        traces[k] = power.trace();
    }
    std::vector<LaurentPoly> c(r + 1);
    for (std::size_t k = 1; k <= r; ++k) {
        LaurentPoly acc = traces[k];
        for (std::size_t j = 1; j < k; ++j) acc += c[j] * traces[k - j];
        c[k] = acc * Rational(exact::Integer(-1), exact::Integer(static_cast<long>(k)));
    }
    return {c.begin() + 1, c.end()};
}

inline spectral::SpectralCurve spectral_curve(const HitchinPair& p) {
    return {p.n, static_cast<int>(p.rank()), char_poly(p)};
}

/// Monomial coefficients of c_1, ..., c_r concatenated; c_i contributes i n + 1 entries.
inline RatVector hitchin_map(const HitchinPair& p) {
    const auto c = char_poly(p);
    RatVector out;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const auto v = p1::h0_coords(c[i], static_cast<int>(i + 1) * p.n);
        out.insert(out.end(), v.begin(), v.end());
    }
    return out;
}

inline std::size_t hitchin_base_dim(std::size_t r, int n) {
    std::size_t d = 0;
    for (std::size_t i = 1; i <= r; ++i) d += static_cast<std::size_t>(static_cast<int>(i) * n + 1);
    return d;
}

enum class StabilityCertificate { SmoothSpectralCurve, IntegralSpectralCurve, Unknown };

inline const char* to_string(StabilityCertificate c) {
    switch (c) {
        case StabilityCertificate::SmoothSpectralCurve: return "SmoothSpectralCurve";
        case StabilityCertificate::IntegralSpectralCurve: return "IntegralSpectralCurve";
        default: return "Unknown";
    }
}

/**
 * Sufficient stability test. A rank-one spectral curve is a section, hence
 * integral. For r >= 2 a smooth spectral curve is integral (n >= 1), and the
 * spectral sheaf, rank one on an integral curve, has no destabilising
 * subsheaf. Everything else is reported as Unknown.
 */
inline StabilityCertificate is_stable(const HitchinPair& p) {
    p.validate();
    if (p.rank() == 1) return StabilityCertificate::IntegralSpectralCurve;
    if (spectral::smoothness_certificate(spectral_curve(p)) == spectral::Smoothness::Smooth)
        return StabilityCertificate::SmoothSpectralCurve;
    return StabilityCertificate::Unknown;
}

inline bool certified_stable(const HitchinPair& p) { return is_stable(p) != StabilityCertificate::Unknown; }

/// Dimension of {phi in H^0(End E) : phi theta = theta phi}.
inline std::size_t endomorphism_check(const HitchinPair& p) {
    const std::size_t r = p.rank();
    const auto& a = p.bundle;
    // Unknowns: coefficients of phi(i, j) in H^0(O(a_i - a_j)).
    std::vector<std::size_t> offset(r * r + 1, 0);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j)
            offset[i * r + j + 1] = offset[i * r + j] + static_cast<std::size_t>(p1::h0_dim(a[i] - a[j]));
    const std::size_t unknowns = offset[r * r];
    // Equations: coefficient of z^m in ([phi, theta])(i, j), a section of O(a_i - a_j + n).
    std::vector<RatVector> rows;
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
            const int deg = a[i] - a[j] + p.n;
            for (int m = 0; m <= deg; ++m) {
                RatVector row(unknowns);
                for (std::size_t k = 0; k < r; ++k) {
                    // (phi theta)(i,j) includes phi(i,k) theta(k,j)
                    for (int e = 0; e < p1::h0_dim(a[i] - a[k]); ++e)
                        row[offset[i * r + k] + static_cast<std::size_t>(e)] += p.theta(k, j).coeff(m - e);
                    // -(theta phi)(i,j) includes theta(i,k) phi(k,j)
                    for (int e = 0; e < p1::h0_dim(a[k] - a[j]); ++e)
                        row[offset[k * r + j] + static_cast<std::size_t>(e)] -= p.theta(i, k).coeff(m - e);
                }
                rows.push_back(std::move(row));
            }
        }
    if (unknowns == 0) return 0;
    return unknowns - exact::rank(exact::RatMatrix::from_rows(rows, unknowns));
}

/// 64-bit Mersenne Twister with a platform-independent integer mapping.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform integer in [lo, hi], by rejection on the raw 64-bit output.
    std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
        if (hi < lo) throw std::invalid_argument("Rng::uniform: empty range");
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        if (span == 0) return static_cast<std::int64_t>(engine_());
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
        std::uint64_t x;
        do x = engine_();
        while (x >= limit);
        return lo + static_cast<std::int64_t>(x % span);
    }

private:
    std::mt19937_64 engine_;
};

inline LaurentPoly random_section(Rng& rng, int degree, int bound) {
    LaurentPoly f;
    for (int k = 0; k <= degree; ++k) f.set(k, Rational(static_cast<long>(rng.uniform(-bound, bound))));
    return f;
}

/// Splitting type 0 = a_1 >= a_2 >= ... with consecutive gaps in [0, n].
inline BundleP1 random_splitting(Rng& rng, std::size_t r, int n) {
    BundleP1 e;
    int a = 0;
    for (std::size_t i = 0; i < r; ++i) {
        e.splitting.push_back(a);
        a -= static_cast<int>(rng.uniform(0, n));
    }
    return e;
}

inline HitchinPair random_pair(Rng& rng, std::size_t r, int n, int bound) {
    HitchinPair p;
    p.n = n;
    p.bundle = random_splitting(rng, r, n);
    p.theta = PolyMatrix(r, r);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
            const int d = entry_degree(p.bundle, i, j, n);
            if (d >= 0) p.theta(i, j) = random_section(rng, d, bound);
        }
    return p;
}

inline PoissonSection random_sigma0(Rng& rng, int n, int bound) {
    const int b = std::max(bound, 1);
    PoissonSection s;
    do {
        s.coeffs.clear();
        for (int k = 0; k < n + 3; ++k) s.coeffs.emplace_back(static_cast<long>(rng.uniform(-b, b)));
    } while (s.section().is_zero());
    return s;
}

}  // namespace sp::hitchin

#endif
