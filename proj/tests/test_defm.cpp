#include "spectral_poisson/defm.hpp"
#include "spectral_poisson/spectral.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace sp;
using defm::HyperCochain;
using defm::HyperCohomology;
using defm::TwoTermComplex;
using exact::LaurentPoly;
using exact::PolyMatrix;
using exact::Rational;
using exact::RatMatrix;
using hitchin::HitchinPair;

namespace {

TwoTermComplex random_complex(hitchin::Rng& rng) {
    TwoTermComplex c;
    const auto rs = rng.uniform(1, 3), rt = rng.uniform(1, 3);
    for (long k = 0; k < rs; ++k) c.source.splitting.push_back(static_cast<int>(rng.uniform(-4, 3)));
    for (long l = 0; l < rt; ++l) c.target.splitting.push_back(static_cast<int>(rng.uniform(-3, 4)));
    c.d = PolyMatrix(c.target.rank(), c.source.rank());
    for (std::size_t l = 0; l < c.target.rank(); ++l)
        for (std::size_t k = 0; k < c.source.rank(); ++k) {
            const int deg = c.target[l] - c.source[k];
            if (deg >= 0 && rng.uniform(0, 3) > 0) c.d(l, k) = hitchin::random_section(rng, deg, 3);
        }
    return c;
}

HitchinPair stable_pair(hitchin::Rng& rng, std::size_t r, int n) {
    while (true) {
        auto p = hitchin::random_pair(rng, r, n, 4);
        if (hitchin::certified_stable(p)) return p;
    }
}

HyperCochain combination(const HyperCohomology& h, const exact::RatVector& coeffs) {
    HyperCochain x = HyperCochain::zero(h.complex());
    for (std::size_t i = 0; i < coeffs.size(); ++i) x += coeffs[i] * h.basis()[i].cochain;
    return x;
}

}  // namespace

TEST_CASE("hypercohomology of random two-term complexes") {
    hitchin::Rng rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        const auto c = random_complex(rng);
        const HyperCohomology h(c);
        CAPTURE(trial, c.source.splitting, c.target.splitting);
        // Euler characteristic
        CHECK(static_cast<int>(h.h0()) - static_cast<int>(h.h1()) + static_cast<int>(h.h2()) ==
              defm::euler_characteristic(c.source) - defm::euler_characteristic(c.target));
        // Independent windowed computation at three windows
        for (int extra = 0; extra <= 2; ++extra) {
            const defm::WindowedComplex w(c, h.window() + extra);
            CHECK(defm::windowed_dims(c, h.window() + extra) == defm::HyperDims{h.h0(), h.h1(), h.h2()});
            CHECK(w.independent_mod_coboundaries(h.basis()));
        }
        // Basis elements are cocycles; their coordinates are unit vectors.
        for (std::size_t i = 0; i < h.h1(); ++i) {
            REQUIRE(defm::is_cocycle(c, h.basis()[i].cochain));
            exact::RatVector e(h.h1());
            e[i] = 1;
            CHECK(h.coordinates(h.basis()[i].cochain) == e);
        }
        // Coordinates see through coboundaries.
        exact::RatVector coeffs(h.h1());
        for (auto& q : coeffs) q = static_cast<long>(rng.uniform(-4, 4));
        const auto x = combination(h, coeffs) + defm::random_coboundary(c, h.window(), rng);
        REQUIRE(defm::is_cocycle(c, x));
        CHECK(h.coordinates(x) == coeffs);
        CHECK(defm::WindowedComplex(c, h.window()).is_coboundary(defm::random_coboundary(c, h.window(), rng)));
    }
}

TEST_CASE("coordinates reject non-cocycles") {
    TwoTermComplex c{{{0}}, {{1}}, PolyMatrix(1, 1)};
    c.d(0, 0) = LaurentPoly::from_ints({0, 1});
    const HyperCohomology h(c);
    HyperCochain x = HyperCochain::zero(c);
    x.a[0] = LaurentPoly::monomial(-1);
    CHECK_THROWS_AS(h.coordinates(x), std::invalid_argument);
}

TEST_CASE("End-complex dimensions of stable pairs") {
    hitchin::Rng rng(2);
    for (int n = 1; n <= 3; ++n) {
        const auto p = stable_pair(rng, 1, n);
        const HyperCohomology h(defm::end_complex(p));
        CHECK(h.h0() == 1);
        CHECK(h.h1() == static_cast<std::size_t>(n) + 1);
        CHECK(h.h2() == 0);
    }
    const auto p21 = stable_pair(rng, 2, 1);
    const HyperCohomology h21(defm::end_complex(p21));
    CHECK(std::tuple{h21.h0(), h21.h1(), h21.h2()} == std::tuple{std::size_t{1}, std::size_t{5}, std::size_t{0}});
    const auto p32 = stable_pair(rng, 3, 2);
    const HyperCohomology h32(defm::end_complex(p32));
    CHECK(std::tuple{h32.h0(), h32.h1(), h32.h2()} == std::tuple{std::size_t{1}, std::size_t{19}, std::size_t{0}});
    // H^0 counts endomorphisms commuting with theta.
    CHECK(h32.h0() == hitchin::endomorphism_check(p32));
}

TEST_CASE("Serre pairing is well defined and perfect") {
    hitchin::Rng rng(4);
    for (const auto& [r, n] : {std::pair{std::size_t{1}, 2}, std::pair{std::size_t{2}, 1}, std::pair{std::size_t{2}, 2},
                               std::pair{std::size_t{3}, 1}}) {
        const auto p = stable_pair(rng, r, n);
        const HyperCohomology t(defm::end_complex(p)), ct(defm::cotangent_complex(p));
        const auto dual = defm::trace_duality(r);
        const auto g = defm::serre_pairing_matrix(dual, ct, t);
        CHECK(ct.h1() == t.h1());
        CHECK(exact::determinant(g) != 0);
        for (int trial = 0; trial < 20; ++trial) {
            const auto i = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(ct.h1()) - 1));
            const auto j = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(t.h1()) - 1));
            const auto xi = ct.basis()[i].cochain + defm::random_coboundary(ct.complex(), ct.window(), rng);
            const auto v = t.basis()[j].cochain + defm::random_coboundary(t.complex(), t.window(), rng);
            CHECK(defm::serre_pairing(dual, xi, v) == g(i, j));
        }
    }
}

TEST_CASE("the opposite sign convention is not well defined") {
    hitchin::Rng rng(6);
    const auto p = stable_pair(rng, 2, 2);
    const HyperCohomology t(defm::end_complex(p)), ct(defm::cotangent_complex(p));
    const auto dual = defm::trace_duality(2);
    auto flipped = [&](const HyperCochain& xi, const HyperCochain& v) {
        LaurentPoly first, second;
        for (std::size_t k = 0; k < xi.a.size(); ++k) first += xi.a[k] * v.b1[dual.degree0_partner[k]];
        for (std::size_t l = 0; l < xi.b0.size(); ++l) second += xi.b0[l] * v.a[dual.degree1_partner[l]];
        return p1::residue(first) + p1::residue(second);
    };
    bool changed = false;
    for (int trial = 0; trial < 20 && !changed; ++trial)
        for (std::size_t i = 0; i < ct.h1() && !changed; ++i)
            for (std::size_t j = 0; j < t.h1() && !changed; ++j) {
                const auto xi = ct.basis()[i].cochain;
                const auto v = t.basis()[j].cochain + defm::random_coboundary(t.complex(), t.window(), rng);
                changed = flipped(xi, v) != flipped(xi, t.basis()[j].cochain);
            }
    CHECK(changed);
}

TEST_CASE("phi_W for W = L is the End complex up to switching factors") {
    hitchin::Rng rng(8);
    for (const auto& [r, n] : {std::pair{std::size_t{1}, 1}, std::pair{std::size_t{2}, 2}, std::pair{std::size_t{3}, 1}}) {
        const auto p = stable_pair(rng, r, n);
        const auto l = spectral::phi(p);
        const auto fl = defm::phi_W(p, defm::CoefficientSheaf::of(l, 0));
        const auto end = defm::end_complex(p);
        const auto sw = defm::factor_switch(r);
        // The switch maps summands to summands of the same degree and commutes with the differentials.
        for (std::size_t a = 0; a < r * r; ++a)
            for (std::size_t b = 0; b < r * r; ++b)
                if (!sw(a, b).is_zero()) {
                    CHECK(end.source[a] == fl.source[b]);
                    CHECK(end.target[a] == fl.target[b]);
                }
        const defm::ChainMap flip{sw, sw};
        REQUIRE(flip.commutes(fl, end));
        const HyperCohomology hf(fl), he(end);
        CHECK(hf.h1() == he.h1());
        const auto m = hf.induced(flip, he);
        CHECK(exact::inverse(m).has_value());
        // Twisting by K_S gives the cotangent complex.
        const auto flk = defm::phi_W(p, defm::CoefficientSheaf::of(l, -n - 2));
        CHECK(flip.commutes(flk, defm::cotangent_complex(p)));
    }
}

TEST_CASE("functoriality of phi_W") {
    hitchin::Rng rng(10);
    const auto p = stable_pair(rng, 2, 2);
    const auto l = spectral::phi(p);
    const int n = p.n;
    const defm::CoefficientSheaf lk = defm::CoefficientSheaf::of(l, -n - 2), ll = defm::CoefficientSheaf::of(l, 0),
                                  ln = defm::CoefficientSheaf::of(l, n);
    const HyperCohomology hk(defm::phi_W(p, lk)), hl(defm::phi_W(p, ll)), hn(defm::phi_W(p, ln));

    const auto id = defm::functoriality_map(p, {ll, ll, PolyMatrix::identity(2)}, hl, hl);
    CHECK(id == RatMatrix::identity(hl.h1()));
    CHECK(defm::functoriality_map(p, {ll, ll, PolyMatrix(2, 2)}, hl, hl).is_zero());

    const auto sigma = hitchin::random_sigma0(rng, n, 3).section();
    const PolyMatrix mu1 = PolyMatrix::scalar(2, sigma);  // L (x) K_S -> L
    const PolyMatrix mu2 = p.theta;                       // L -> L (x) p^*N
    const auto m1 = defm::functoriality_map(p, {lk, ll, mu1}, hk, hl);
    const auto m2 = defm::functoriality_map(p, {ll, ln, mu2}, hl, hn);
    const auto m12 = defm::functoriality_map(p, {lk, ln, mu2 * mu1}, hk, hn);
    CHECK(m12 == m2 * m1);

    PolyMatrix bad(2, 2);
    bad(0, 0) = LaurentPoly(Rational(1));
    CHECK_THROWS_AS(defm::functoriality_map(p, {ll, ll, bad}, hl, hl), std::invalid_argument);
}
