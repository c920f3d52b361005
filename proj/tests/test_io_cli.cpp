#include "spectral_poisson/cli.hpp"
#include "spectral_poisson/io.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace sp;
using cli::RunConfig;
using exact::LaurentPoly;
using exact::PolyMatrix;
using io::json;

namespace {

hitchin::HitchinPair documented_r2n1() {
    hitchin::HitchinPair p{{{0, 0}}, 1, PolyMatrix(2, 2)};
    p.theta(0, 1) = LaurentPoly::from_ints({1});
    p.theta(1, 0) = LaurentPoly::from_ints({0, 1});
    return p;
}

}  // namespace

TEST_CASE("pairs round-trip through JSON with exact rationals") {
    hitchin::HitchinPair p{{{0, -1}}, 2, PolyMatrix(2, 2)};
    p.theta(0, 0) = LaurentPoly::from_coefficients({exact::parse_rational("-7/3"), 0, 1});
    p.theta(0, 1) = LaurentPoly::from_ints({1, 2, 3, 4});
    p.theta(1, 0) = LaurentPoly::from_ints({5, 6});
    REQUIRE_NOTHROW(p.validate());
    const hitchin::PoissonSection s{{1, 0, exact::parse_rational("1/2"), 0, 0}};
    const json j = io::to_json(p, s);
    CHECK(j["theta"][0][0][0] == "-7/3");
    CHECK(j["theta"][1][1].empty());
    const json reparsed = io::parse(j.dump(), "test");
    CHECK(io::pair_from_json(reparsed) == p);
    CHECK(io::sigma_from_json(reparsed["sigma0"], 2).coeffs == s.coeffs);
}

TEST_CASE("malformed and invalid input is reported") {
    CHECK_THROWS_AS(io::parse("{\"n\": 1,, }", "x"), io::InputError);
    try {
        io::parse("{\"n\": 1,, }", "x");
    } catch (const io::InputError& e) {
        CHECK(std::string(e.what()).find("byte 9") != std::string::npos);
    }
    CHECK_THROWS_AS(io::pair_from_json(json::parse(R"({"n": 1})")), io::InputError);
    CHECK_THROWS_AS(io::pair_from_json(json::parse(R"({"n": 1, "splitting": [0], "theta": [[["1/0"]]]})")),
                    io::InputError);
    CHECK_THROWS_AS(io::pair_from_json(json::parse(R"({"n": 1, "splitting": [0], "theta": [[["1", "2", "3"]]]})")),
                    io::InputError);
    CHECK_THROWS_AS(io::sigma_from_json(json::parse(R"(["0", "0", "0", "0"])"), 1), io::InputError);
    CHECK_THROWS_AS(io::read_file("/nonexistent/pair.json"), io::InputError);
}

TEST_CASE("spectral curve serialisation") {
    const auto c = hitchin::spectral_curve(documented_r2n1());
    const json j = io::to_json(c);
    CHECK(j["r"] == 2);
    CHECK(j["F0"] == json::parse(R"([[1, 0, "-1"], [0, 2, "1"]])"));
}

TEST_CASE("range and sigma0 parsing") {
    CHECK(cli::parse_range("3") == std::pair{3, 3});
    CHECK(cli::parse_range("1-3") == std::pair{1, 3});
    CHECK_THROWS_AS(cli::parse_range("a"), io::InputError);
    CHECK_THROWS_AS(cli::parse_range("1-"), io::InputError);
    CHECK(cli::parse_sigma0("1,0,-1/2,0", 1).coeffs[2] == exact::parse_rational("-1/2"));
    CHECK_THROWS_AS(cli::parse_sigma0("1,0", 1), io::InputError);
}

TEST_CASE("gen is deterministic and rejects degenerate bounds") {
    RunConfig cfg;
    cfg.seed = 1;
    const auto a = cli::cmd_gen(cfg), b = cli::cmd_gen(cfg);
    CHECK(a.exit_code == cli::kOk);
    CHECK(a.output.dump() == b.output.dump());
    const auto p = io::pair_from_json(a.output);
    CHECK(hitchin::is_stable(p) == hitchin::StabilityCertificate::SmoothSpectralCurve);

    RunConfig one = cfg;
    one.r_lo = one.r_hi = 1;
    const auto s = cli::generate(5, 1, 2, 5, 1);
    CHECK(s.has_value());
    CHECK(s->tries == 1);
    CHECK(cli::cmd_gen(one).exit_code == cli::kOk);

    RunConfig zero = cfg;
    zero.bound = 0;
    zero.max_tries = 10;
    CHECK(cli::cmd_gen(zero).exit_code == cli::kVerificationFailure);
}

TEST_CASE("analyze reports the expected invariants") {
    const auto r21 = cli::cmd_analyze(io::to_json(documented_r2n1()));
    CHECK(r21.exit_code == cli::kOk);
    CHECK(r21.output["hypercohomology"] == json::array({1, 5, 0}));
    CHECK(r21.output["genus"] == 0);
    CHECK(r21.output["chi"] == 2);
    CHECK(r21.output["smoothness"] == "Smooth");
    CHECK(r21.output["serre_pairing_nondegenerate"] == true);

    RunConfig cfg;
    cfg.r_lo = cfg.r_hi = 3;
    cfg.n_lo = cfg.n_hi = 2;
    const auto r32 = cli::cmd_analyze(cli::cmd_gen(cfg).output);
    CHECK(r32.output["hypercohomology"] == json::array({1, 19, 0}));
    CHECK(r32.output["genus"] == 4);

    cfg.r_lo = cfg.r_hi = 1;
    cfg.n_lo = cfg.n_hi = 1;
    const auto r11 = cli::cmd_analyze(cli::cmd_gen(cfg).output);
    CHECK(r11.output["hypercohomology"] == json::array({1, 2, 0}));
    CHECK(r11.output["genus"] == 0);
    CHECK(r11.output["stability"] == "IntegralSpectralCurve");
}

TEST_CASE("suite output is deterministic; an empty grid passes with a warning") {
    RunConfig cfg;
    cfg.r_lo = 1;
    cfg.r_hi = 2;
    cfg.n_lo = 1;
    cfg.n_hi = 2;
    cfg.samples = 2;
    cfg.seed = 77;
    const auto a = cli::cmd_suite(cfg), b = cli::cmd_suite(cfg);
    CHECK(a.exit_code == cli::kOk);
    CHECK(a.output.dump() == b.output.dump());
    CHECK(a.output["points"].size() == 8);

    RunConfig empty = cfg;
    empty.r_lo = 2;
    empty.r_hi = 1;
    const auto e = cli::cmd_suite(empty);
    CHECK(e.exit_code == cli::kOk);
    CHECK(e.message.find("warning") != std::string::npos);
}
