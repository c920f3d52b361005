#include "spectral_poisson/hitchin.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <numeric>

using namespace sp;
using exact::BiPoly;
using exact::LaurentPoly;
using exact::PolyMatrix;
using exact::Rational;
using hitchin::HitchinPair;

namespace {

/// det(x - theta) in Q[z][x] by the Leibniz formula.
BiPoly leibniz_char_poly(const PolyMatrix& theta) {
    const std::size_t r = theta.rows();
    std::vector<std::size_t> perm(r);
    std::iota(perm.begin(), perm.end(), 0);
    BiPoly total;
    do {
        int inversions = 0;
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = i + 1; j < r; ++j) inversions += perm[i] > perm[j] ? 1 : 0;
        BiPoly term{LaurentPoly(Rational(inversions % 2 ? -1 : 1))};
        for (std::size_t i = 0; i < r; ++i) {
            BiPoly entry{-theta(i, perm[i])};
            if (perm[i] == i) entry.push_back(LaurentPoly(Rational(1)));
            term = exact::bipoly_mul(term, entry);
        }
        total = exact::bipoly_add(total, term);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

HitchinPair example_pair() {
    HitchinPair p;
    p.bundle.splitting = {-1, 0};
    p.n = 1;
    p.theta = PolyMatrix(2, 2);
    p.theta(0, 0) = LaurentPoly::from_ints({0, 1});
    p.theta(0, 1) = LaurentPoly::from_ints({1});
    p.theta(1, 0) = LaurentPoly::from_ints({1, 0, 1});
    p.theta(1, 1) = LaurentPoly::from_ints({0, -1});
    return p;
}

}  // namespace

TEST_CASE("pair validation") {
    auto p = example_pair();
    CHECK_NOTHROW(p.validate());
    p.theta(0, 1) = LaurentPoly::from_ints({1, 1});  // O(0) entry of degree 1
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    auto q = example_pair();
    q.n = 0;
    CHECK_THROWS_AS(q.validate(), std::invalid_argument);
    CHECK(hitchin::entry_degree(q.bundle, 1, 0, 1) == 2);

    hitchin::PoissonSection s{{1, 0, 0, 1}};
    CHECK_NOTHROW(s.validate(1));
    CHECK_THROWS_AS(s.validate(2), std::invalid_argument);
    CHECK_THROWS_AS((hitchin::PoissonSection{{0, 0, 0, 0}}.validate(1)), std::invalid_argument);
}

TEST_CASE("characteristic polynomial of the worked example") {
    const auto c = hitchin::char_poly(example_pair());
    REQUIRE(c.size() == 2);
    CHECK(c[0].is_zero());
    CHECK(c[1] == LaurentPoly::from_ints({-1, 0, -2}));
    const auto h = hitchin::hitchin_map(example_pair());
    CHECK(h == exact::RatVector{0, 0, -1, 0, -2});
    CHECK(hitchin::hitchin_base_dim(2, 1) == 5);
    CHECK(hitchin::hitchin_base_dim(3, 2) == 3 + 5 + 7);
}

TEST_CASE("char_poly matches the Leibniz determinant and Cayley-Hamilton") {
    hitchin::Rng rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const auto r = static_cast<std::size_t>(rng.uniform(1, 4));
        const int n = static_cast<int>(rng.uniform(1, 3));
        const auto p = hitchin::random_pair(rng, r, n, 4);
        REQUIRE_NOTHROW(p.validate());
        const auto c = hitchin::char_poly(p);
        const auto oracle = leibniz_char_poly(p.theta);
        REQUIRE(oracle.size() == r + 1);
        for (std::size_t i = 1; i <= r; ++i) {
            CHECK(c[i - 1] == oracle[r - i]);
            CHECK(p1::is_global_section(c[i - 1], static_cast<int>(i) * n));
        }
        CHECK(c[0] == -p.theta.trace());
        PolyMatrix acc = PolyMatrix::identity(r);
        for (std::size_t k = 1; k <= r; ++k) {
            acc = acc * p.theta + PolyMatrix::scalar(r, c[k - 1]);
        }
        CHECK(acc.is_zero());
    }
}

TEST_CASE("Hitchin map is invariant under automorphisms of E") {
    hitchin::Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const auto r = static_cast<std::size_t>(rng.uniform(2, 3));
        const int n = static_cast<int>(rng.uniform(1, 3));
        const auto p = hitchin::random_pair(rng, r, n, 4);
        // g = 1 + u E_{ij}, u a section of O(a_i - a_j), with inverse 1 - u E_{ij}.
        const auto i = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(r) - 1));
        auto j = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(r) - 2));
        if (j >= i) ++j;
        const int d = p.bundle[i] - p.bundle[j];
        if (d < 0) continue;
        const auto u = hitchin::random_section(rng, d, 3);
        PolyMatrix g = PolyMatrix::identity(r), g_inv = PolyMatrix::identity(r);
        g(i, j) = u;
        g_inv(i, j) = -u;
        REQUIRE((g * g_inv) == PolyMatrix::identity(r));
        HitchinPair q{p.bundle, p.n, g * p.theta * g_inv};
        REQUIRE_NOTHROW(q.validate());
        CHECK(hitchin::hitchin_map(q) == hitchin::hitchin_map(p));
    }
}

TEST_CASE("stability certificates and the endomorphism check") {
    hitchin::Rng rng(3);
    const auto p1 = hitchin::random_pair(rng, 1, 2, 3);
    CHECK(hitchin::is_stable(p1) == hitchin::StabilityCertificate::IntegralSpectralCurve);
    CHECK(hitchin::endomorphism_check(p1) == 1);

    CHECK(hitchin::is_stable(example_pair()) == hitchin::StabilityCertificate::SmoothSpectralCurve);
    CHECK(hitchin::endomorphism_check(example_pair()) == 1);

    HitchinPair zero{{{0, 0}}, 1, PolyMatrix(2, 2)};
    CHECK(hitchin::is_stable(zero) == hitchin::StabilityCertificate::Unknown);
    CHECK(hitchin::endomorphism_check(zero) == 4);

    std::size_t stable = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const auto p = hitchin::random_pair(rng, 3, 1, 4);
        if (!hitchin::certified_stable(p)) continue;
        ++stable;
        CHECK(hitchin::endomorphism_check(p) == 1);
    }
    CHECK(stable > 0);
}

TEST_CASE("random generation is deterministic") {
    hitchin::Rng a(99), b(99);
    for (int k = 0; k < 5; ++k) CHECK(hitchin::random_pair(a, 3, 2, 5) == hitchin::random_pair(b, 3, 2, 5));
    hitchin::Rng c(1);
    for (int k = 0; k < 1000; ++k) {
        const auto v = c.uniform(-3, 3);
        REQUIRE(v >= -3);
        REQUIRE(v <= 3);
    }
    for (int k = 0; k < 20; ++k) {
        const auto e = hitchin::random_splitting(c, 4, 2);
        CHECK(e[0] == 0);
        for (std::size_t i = 1; i < 4; ++i) {
            CHECK(e[i - 1] - e[i] >= 0);
            CHECK(e[i - 1] - e[i] <= 2);
        }
    }
    CHECK_FALSE(hitchin::random_sigma0(c, 1, 0).section().is_zero());
}
