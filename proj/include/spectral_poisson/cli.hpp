#ifndef SPECTRAL_POISSON_CLI_HPP
#define SPECTRAL_POISSON_CLI_HPP

#include "spectral_poisson/io.hpp"
#include "spectral_poisson/poisson.hpp"

#include <chrono>
#include <cstdio>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace sp::cli {

using io::json;

enum ExitCode : int { kOk = 0, kVerificationFailure = 1, kInputError = 2 };

struct RunConfig {
    std::uint64_t seed = 1;
    int r_lo = 2, r_hi = 2;
    int n_lo = 1, n_hi = 1;
    int bound = 5;
    int samples = 1;
    int window_extra = 0;
    int max_tries = 1000;
    bool inject_sign_fault = false;
    std::optional<std::string> input;   // pair file
    std::optional<std::string> sigma0;  // comma-separated coefficients overriding the file / generator
    std::optional<std::string> out;

    void validate() const {
        if (r_lo < 1) throw io::InputError("r must be >= 1");
        if (n_lo < 1) throw io::InputError("n must be >= 1");
        if (bound < 0) throw io::InputError("bound must be >= 0");
        if (samples < 0) throw io::InputError("samples must be >= 0");
        if (window_extra < 0) throw io::InputError("window-extra must be >= 0");
        if (max_tries < 1) throw io::InputError("max-tries must be >= 1");
    }
};

struct Result {
    json output;
    int exit_code = kOk;
    std::string message;  // human-readable text for stderr
};

/// "a" or "a-b".
inline std::pair<int, int> parse_range(const std::string& s) {
    try {
        const auto dash = s.find('-', 1);
        std::size_t used = 0;
        if (dash == std::string::npos) {
            const int v = std::stoi(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return {v, v};
        }
        const std::string lo = s.substr(0, dash), hi = s.substr(dash + 1);
        const int a = std::stoi(lo, &used);
        if (used != lo.size()) throw std::invalid_argument(s);
        const int b = std::stoi(hi, &used);
        if (used != hi.size()) throw std::invalid_argument(s);
        return {a, b};
    } catch (const std::exception&) {
        throw io::InputError("invalid range \"" + s + "\" (expected a or a-b)");
    }
}

inline hitchin::PoissonSection parse_sigma0(const std::string& s, int n) {
    json arr = json::array();
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) arr.push_back(item);
    return io::sigma_from_json(arr, n);
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed of the k-th sample at grid point (r, n).
inline std::uint64_t point_seed(std::uint64_t seed, int r, int n, int k) {
    std::uint64_t x = splitmix64(seed);
    for (int v : {r, n, k}) x = splitmix64(x ^ static_cast<std::uint64_t>(v));
    return x;
}

struct Sample {
    hitchin::HitchinPair pair;
    hitchin::PoissonSection sigma;
    int tries = 0;
};

/// Rejection sampling until the spectral curve is certified smooth.
inline std::optional<Sample> generate(std::uint64_t seed, int r, int n, int bound, int max_tries) {
    hitchin::Rng rng(seed);
    for (int t = 1; t <= max_tries; ++t) {
        auto p = hitchin::random_pair(rng, static_cast<std::size_t>(r), n, bound);
        if (spectral::smoothness_certificate(hitchin::spectral_curve(p)) != spectral::Smoothness::Smooth) continue;
        return Sample{std::move(p), hitchin::random_sigma0(rng, n, bound), t};
    }
    return std::nullopt;
}

/// Every per-point acceptance property, computed exactly.
struct PointChecks {
    bool theorem = false;
    bool adjoint = false;
    bool dims = false;
    bool euler_characteristic = false;
    bool genus = false;
    bool duality = false;
    bool poisson = false;
    bool commutation = false;
    bool fitting = false;
    bool fault_detected = false;
    bool fault_applicable = false;  // B^H != 0, so a sign fault is visible
    bool stabilization = false;
    std::size_t h0 = 0, h1 = 0, h2 = 0;
    std::size_t poisson_rank = 0;
    int genus_value = 0;

    bool ok() const {
        return theorem && adjoint && dims && euler_characteristic && genus && duality && poisson && commutation &&
               fitting && (fault_detected || !fault_applicable) && stabilization;
    }
};

inline bool representative_independent(const poisson::HitchinSide& h, std::uint64_t seed, int trials) {
    hitchin::Rng rng(seed);
    const auto& tb = h.tangent.basis();
    const auto& cb = h.cotangent.basis();
    if (tb.empty() || cb.empty()) return true;
    for (int t = 0; t < trials; ++t) {
        const auto i = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(cb.size()) - 1));
        const auto j = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(tb.size()) - 1));
        const auto xi = cb[i].cochain + defm::random_coboundary(h.cotangent.complex(), h.cotangent.window(), rng);
        const auto v = tb[j].cochain + defm::random_coboundary(h.tangent.complex(), h.tangent.window(), rng);
        if (defm::serre_pairing(h.duality, xi, v) != h.pairing(i, j)) return false;
    }
    return true;
}

/// LES dimensions agree with the windowed total complex at window + 0, 1, 2, and the basis stays a basis.
inline bool window_stable(const defm::HyperCohomology& hc) {
    for (int extra = 0; extra <= 2; ++extra) {
        const defm::WindowedComplex w(hc.complex(), hc.window() + extra);
        if (w.h0() != hc.h0() || w.h1() != hc.h1() || w.h2() != hc.h2()) return false;
        if (!w.independent_mod_coboundaries(hc.basis())) return false;
    }
    return true;
}

inline PointChecks check_point(const hitchin::HitchinPair& p, const hitchin::PoissonSection& sigma, std::uint64_t seed,
                               int window_extra = 0) {
    PointChecks c;
    const std::size_t r = p.rank();
    const int n = p.n;

    poisson::Options opt;
    opt.window_extra = window_extra;
    const auto rep = poisson::verify_theorem(p, sigma, opt);
    c.theorem = rep.pass;
    c.adjoint = rep.adjoint_identity;

    const poisson::HitchinSide h(p, window_extra);
    c.h0 = h.tangent.h0();
    c.h1 = h.tangent.h1();
    c.h2 = h.tangent.h2();
    c.dims = c.h0 == 1 && c.h1 == r * r * static_cast<std::size_t>(n) + 1 && c.h2 == 0 &&
             static_cast<int>(c.h0) - static_cast<int>(c.h1) + static_cast<int>(c.h2) ==
                 defm::euler_characteristic(h.tangent.complex().source) -
                     defm::euler_characteristic(h.tangent.complex().target);

    const auto sheaf = spectral::phi(p);
    c.euler_characteristic = sheaf.euler_characteristic() == sheaf.degree() + sheaf.rank();

    const auto curve = hitchin::spectral_curve(p);
    c.genus_value = spectral::genus(curve);
    const int ri = static_cast<int>(r);
    c.genus = c.genus_value == 1 - ri + n * ri * (ri - 1) / 2 &&
              (spectral::smoothness_certificate(curve) != spectral::Smoothness::Smooth ||
               c.genus_value + spectral::normal_sections_dim(ri, n) == ri * ri * n + 1);

    c.duality = h.cotangent.h1() == h.tangent.h1() && exact::determinant(h.pairing) != 0 &&
                representative_independent(h, seed ^ 0x5eedULL, 20);

    const auto b = rep.poisson_hitchin;
    const auto skew = poisson::skew_check(h, b);
    c.poisson_rank = skew.rank;
    hitchin::Rng rng(seed ^ 0x11eaULL);
    const auto other = hitchin::random_sigma0(rng, n, 5);
    hitchin::PoissonSection sum = sigma;
    for (std::size_t k = 0; k < sum.coeffs.size(); ++k) sum.coeffs[k] += other.coeffs[k];
    bool linear = true;
    if (!sum.section().is_zero()) {
        const poisson::SheafSide s(p, sheaf, window_extra);
        const auto bh = [&](const hitchin::PoissonSection& x) { return poisson::poisson_hitchin(h, x).matrix; };
        const auto bs = [&](const hitchin::PoissonSection& x) { return poisson::poisson_sheaf(p, h, s, x).matrix; };
        linear = bh(sum) == bh(sigma) + bh(other) && bs(sum) == bs(sigma) + bs(other);
    }
    c.poisson = skew.ok() && linear;
    c.commutation = poisson::hamiltonian_commutation(p, h, b).max_abs == 0;

    auto fitting = sheaf.fitting_generator();
    c.fitting = fitting == curve.chart0();

    c.fault_applicable = !b.is_zero();
    if (c.fault_applicable) {
        poisson::Options bad = opt;
        bad.inject_sign_fault = true;
        const auto faulty = poisson::verify_theorem(p, sigma, bad);
        c.fault_detected = !faulty.pass && !faulty.difference.is_zero();
    }

    const poisson::SheafSide s(p, sheaf, window_extra);
    c.stabilization = window_stable(h.tangent) && window_stable(h.cotangent) && window_stable(s.ext_tangent) &&
                      window_stable(s.ext_cotangent);
    return c;
}

inline json to_json(const PointChecks& c) {
    return json{{"theorem", c.theorem},
                {"adjoint_identity", c.adjoint},
                {"dims", json::array({c.h0, c.h1, c.h2})},
                {"dims_ok", c.dims},
                {"euler_characteristic", c.euler_characteristic},
                {"genus", c.genus_value},
                {"genus_ok", c.genus},
                {"duality", c.duality},
                {"poisson", c.poisson},
                {"poisson_rank", c.poisson_rank},
                {"commutation", c.commutation},
                {"fitting", c.fitting},
                {"fault_applicable", c.fault_applicable},
                {"fault_detected", c.fault_detected},
                {"stabilization", c.stabilization},
                {"pass", c.ok()}};
}

inline Result cmd_gen(const RunConfig& cfg) {
    cfg.validate();
    if (cfg.r_lo != cfg.r_hi || cfg.n_lo != cfg.n_hi) throw io::InputError("gen takes a single r and n");
    const auto s = generate(cfg.seed, cfg.r_lo, cfg.n_lo, cfg.bound, cfg.max_tries);
    if (!s)
        return {json(), kVerificationFailure,
                "no pair with a smooth spectral curve after " + std::to_string(cfg.max_tries) + " tries"};
    auto sigma = s->sigma;
    if (cfg.sigma0) sigma = parse_sigma0(*cfg.sigma0, cfg.n_lo);
    return {io::to_json(s->pair, sigma), kOk, ""};
}

inline Result cmd_analyze(const json& input) {
    const auto p = io::pair_from_json(input);
    const std::size_t r = p.rank();
    const auto curve = hitchin::spectral_curve(p);
    const auto smooth = spectral::smoothness_certificate(curve);
    const auto stability = hitchin::is_stable(p);
    const auto rep = spectral::SpectralSheafRep{p.bundle, p.n, p.theta};
    const poisson::HitchinSide h(p);

    json out;
    out["r"] = r;
    out["n"] = p.n;
    out["delta"] = rep.degree();
    out["chi"] = rep.euler_characteristic();
    out["genus"] = spectral::genus(curve);
    out["spectral_curve"] = io::to_json(curve);
    out["smoothness"] = spectral::to_string(smooth);
    out["stability"] = hitchin::to_string(stability);
    out["hypercohomology"] = json::array({h.tangent.h0(), h.tangent.h1(), h.tangent.h2()});
    out["serre_pairing_nondegenerate"] = exact::determinant(h.pairing) != 0;
    out["hitchin_map"] = io::to_json(hitchin::hitchin_map(p));

    std::vector<std::string> violations;
    if (rep.euler_characteristic() != rep.degree() + static_cast<int>(r)) violations.push_back("chi != delta + r");
    if (!out["serre_pairing_nondegenerate"].get<bool>()) violations.push_back("Serre pairing is degenerate");
    if (stability != hitchin::StabilityCertificate::Unknown &&
        (h.tangent.h0() != 1 || h.tangent.h1() != r * r * static_cast<std::size_t>(p.n) + 1 || h.tangent.h2() != 0))
        violations.push_back("hypercohomology dimensions differ from (1, r^2 n + 1, 0)");
    out["violations"] = violations;
    return {out, violations.empty() ? kOk : kVerificationFailure, ""};
}

inline Result cmd_verify(const RunConfig& cfg) {
    cfg.validate();
    hitchin::HitchinPair p;
    std::optional<hitchin::PoissonSection> sigma;
    if (cfg.input) {
        const json in = io::read_file(*cfg.input);
        p = io::pair_from_json(in);
        if (in.contains("sigma0")) sigma = io::sigma_from_json(in["sigma0"], p.n);
    } else {
        const auto g = cmd_gen(cfg);
        if (g.exit_code != kOk) return g;
        p = io::pair_from_json(g.output);
        sigma = io::sigma_from_json(g.output["sigma0"], p.n);
    }
    if (cfg.sigma0) sigma = parse_sigma0(*cfg.sigma0, p.n);
    if (!sigma) throw io::InputError("no sigma0 given (use the sigma0 field or --sigma0)");
    if (!hitchin::certified_stable(p))
        throw io::InputError("pair is not certified stable: its spectral curve is not certified smooth");

    const auto t0 = std::chrono::steady_clock::now();
    poisson::Options opt;
    opt.window_extra = cfg.window_extra;
    opt.inject_sign_fault = cfg.inject_sign_fault;
    const auto rep = poisson::verify_theorem(p, *sigma, opt);
    const poisson::HitchinSide h(p, cfg.window_extra);
    const auto skew = poisson::skew_check(h, rep.poisson_hitchin);
    const auto comm = poisson::hamiltonian_commutation(p, h, rep.poisson_hitchin);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    json out = io::to_json(rep);
    out["skew"] = skew.skew;
    out["poisson_rank"] = skew.rank;
    out["commutation_max"] = io::to_json(comm.max_abs);
    out["inject_sign_fault"] = cfg.inject_sign_fault;
    out["timing"] = json{{"seconds", seconds}};
    const bool ok = rep.pass && skew.ok() && comm.max_abs == 0;
    return {out, ok ? kOk : kVerificationFailure, ok ? "" : "verification failed"};
}

inline Result cmd_suite(const RunConfig& cfg) {
    cfg.validate();
    json points = json::array();
    std::ostringstream table;
    table << "   r   n  seed                  dims        genus  rank  result\n";
    bool all = true;
    std::size_t count = 0;
    for (int r = cfg.r_lo; r <= cfg.r_hi; ++r)
        for (int n = cfg.n_lo; n <= cfg.n_hi; ++n)
            for (int k = 0; k < cfg.samples; ++k) {
                const std::uint64_t seed = point_seed(cfg.seed, r, n, k);
                json pt{{"r", r}, {"n", n}, {"seed", std::to_string(seed)}};
                const auto s = generate(seed, r, n, cfg.bound, cfg.max_tries);
                ++count;
                if (!s) {
                    pt["pass"] = false;
                    pt["error"] = "generation exhausted";
                    all = false;
                    points.push_back(pt);
                    continue;
                }
                const auto c = check_point(s->pair, s->sigma, seed, cfg.window_extra);
                pt["pair"] = io::to_json(s->pair, s->sigma);
                pt["checks"] = to_json(c);
                pt["pass"] = c.ok();
                all = all && c.ok();
                points.push_back(pt);
                const std::string dims =
                    "(" + std::to_string(c.h0) + "," + std::to_string(c.h1) + "," + std::to_string(c.h2) + ")";
                char line[160];
                std::snprintf(line, sizeof line, "%4d%4d  %-20llu  %-10s%7d%6zu  %s\n", r, n,
                              static_cast<unsigned long long>(seed), dims.c_str(), c.genus_value, c.poisson_rank,
                              c.ok() ? "PASS" : "FAIL");
                table << line;
            }
    json out{{"seed", cfg.seed},
             {"r", json::array({cfg.r_lo, cfg.r_hi})},
             {"n", json::array({cfg.n_lo, cfg.n_hi})},
             {"bound", cfg.bound},
             {"samples", cfg.samples},
             {"window_extra", cfg.window_extra},
             {"points", points},
             {"pass", all}};
    std::string msg = table.str();
    if (count == 0) msg = "warning: empty grid, nothing to check\n";
    return {out, all ? kOk : kVerificationFailure, msg};
}

}  // namespace sp::cli

#endif
