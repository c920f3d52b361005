#include "spectral_poisson/p1sheaf.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace sp;
using exact::LaurentPoly;
using exact::Rational;
using exact::RatMatrix;

namespace {

struct CechDims {
    std::size_t h0, h1;
};

/// Brute-force Cech cohomology of O(d) on a degree window: chart-0 exponents
/// [0, d + W], chart-1 exponents [-W, d], overlap exponents [-W, d + W].
CechDims windowed_oracle(int d, int w) {
    const int c0 = std::max(d + w + 1, 0);
    const int c1 = std::max(d + w + 1, 0);
    const int lo = -w, hi = d + w;
    const std::size_t overlap = static_cast<std::size_t>(hi - lo + 1);
    RatMatrix delta(overlap, static_cast<std::size_t>(c0 + c1));
    for (int k = 0; k < c0; ++k) delta(static_cast<std::size_t>(k - lo), static_cast<std::size_t>(k)) = -1;
    for (int k = 0; k < c1; ++k) {
        const int e = -w + k;
        delta(static_cast<std::size_t>(e - lo), static_cast<std::size_t>(c0 + k)) = 1;
    }
    const std::size_t rk = exact::rank(delta);
    return {static_cast<std::size_t>(c0 + c1) - rk, overlap - rk};
}

}  // namespace

TEST_CASE("section bases of O(d)") {
    CHECK(p1::h0_basis(2) == std::vector<LaurentPoly>{LaurentPoly::monomial(0), LaurentPoly::monomial(1), LaurentPoly::monomial(2)});
    CHECK(p1::h0_basis(-1).empty());
    CHECK(p1::h1_basis(-3) == std::vector<LaurentPoly>{LaurentPoly::monomial(-2), LaurentPoly::monomial(-1)});
    CHECK(p1::h1_basis(-1).empty());
    CHECK(p1::h1_basis(4).empty());
}

TEST_CASE("cohomology dimensions agree with a brute-force Cech oracle") {
    for (int d = -8; d <= 8; ++d) {
        const auto o = windowed_oracle(d, std::abs(d) + 2);
        CAPTURE(d);
        CHECK(static_cast<std::size_t>(p1::h0_dim(d)) == o.h0);
        CHECK(static_cast<std::size_t>(p1::h1_dim(d)) == o.h1);
        CHECK(p1::h0_basis(d).size() == o.h0);
        CHECK(p1::h1_basis(d).size() == o.h1);
        // Riemann-Roch on the projective line
        CHECK(p1::h0_dim(d) - p1::h1_dim(d) == d + 1);
    }
}

TEST_CASE("Cech differential and chart conventions") {
    const p1::Cochain0 c{LaurentPoly::monomial(2), LaurentPoly(), 3};
    CHECK(p1::cech_delta(c).overlap == LaurentPoly::monomial(2, Rational(-1)));

    // z^2 is a section of O(3): on chart 1 it reads w^{3-2} = w.
    CHECK(p1::zform_to_chart1(LaurentPoly::monomial(2), 3) == LaurentPoly::monomial(1));
    CHECK(p1::chart1_to_zform(LaurentPoly::monomial(1), 3) == LaurentPoly::monomial(2));
    CHECK(p1::is_global_section(LaurentPoly::from_ints({1, 2, 3, 4}), 3));
    CHECK_FALSE(p1::is_global_section(LaurentPoly::monomial(4), 3));
    CHECK(p1::is_chart1_section(LaurentPoly::monomial(-5), 3));
    CHECK_FALSE(p1::is_chart1_section(LaurentPoly::monomial(4), 3));

    // A global section has zero Cech differential.
    const auto g = LaurentPoly::from_ints({1, -1, 2});
    CHECK(p1::cech_delta({g, g, 2}).overlap.is_zero());
}

TEST_CASE("coboundary splitting inverts the differential on trivial classes") {
    const int d = -3;
    const auto overlap = LaurentPoly::from_ints({5, 0, 1, 2, 3}, -4);  // 5 z^-4 + z^-2 + 2 z^-1 + 3
    // Remove the H^1 part (exponents -2, -1) first.
    LaurentPoly trivial = overlap;
    for (int k = d + 1; k <= -1; ++k) trivial.set(k, 0);
    const auto c = p1::split_coboundary(trivial, d);
    CHECK(c.well_formed());
    CHECK(p1::cech_delta(c).overlap == trivial);
    CHECK_THROWS_AS(p1::split_coboundary(overlap, d), std::logic_error);
    CHECK(p1::h1_class(overlap, d) == exact::RatVector{Rational(1), Rational(2)});
}

TEST_CASE("residue pairing is perfect") {
    // d = 1: H^0(O(1)) = <1, z>, H^1(O(-3)) = <z^-2, z^-1>; the pairing is antidiagonal.
    CHECK(p1::residue_pair_matrix(1) == RatMatrix::from_ints({{0, 1}, {1, 0}}));
    for (int d = 0; d <= 6; ++d) {
        const auto m = p1::residue_pair_matrix(d);
        CHECK(m.rows() == m.cols());
        CHECK(exact::determinant(m) != 0);
    }
    CHECK_THROWS_AS(p1::residue_pair(LaurentPoly::monomial(0), 1, LaurentPoly::monomial(-1), -2), std::invalid_argument);
    // The pairing only sees classes: adding a coboundary of O(-3) does not change it.
    const auto a = LaurentPoly::from_ints({2, 3});
    const auto b = LaurentPoly::monomial(-2);
    const auto cob = LaurentPoly::from_ints({1, 1, 1}) + LaurentPoly::monomial(-5);  // chart-0 + chart-1 parts
    CHECK(p1::residue_pair(a, 1, b + cob, -3) == p1::residue_pair(a, 1, b, -3));
}
