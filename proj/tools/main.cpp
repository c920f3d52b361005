#include "spectral_poisson/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

void add_common(CLI::App* app, sp::cli::RunConfig& cfg, std::string& r, std::string& n) {
    app->add_option("--seed", cfg.seed, "PRNG seed (mt19937_64)");
    app->add_option("--r", r, "rank, a or a-b");
    app->add_option("--n", n, "twist N = O(n), a or a-b");
    app->add_option("--bound", cfg.bound, "coefficient bound for random sections");
    app->add_option("--max-tries", cfg.max_tries, "rejection-sampling retry bound");
    app->add_option("--window-extra", cfg.window_extra, "extra Cech degree margin");
    app->add_option("--sigma0", cfg.sigma0, "comma-separated coefficients of sigma0 in 1, z, ..., z^(n+2)");
    app->add_option("--out", cfg.out, "output file (default: stdout)");
}

int emit(const sp::cli::Result& res, const sp::cli::RunConfig& cfg) {
    if (!res.message.empty()) std::cerr << res.message << (res.message.back() == '\n' ? "" : "\n");
    if (!res.output.is_null()) {
        if (cfg.out)
            sp::io::write_file(*cfg.out, res.output);
        else
            std::cout << res.output.dump(2) << '\n';
    }
    return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace sp::cli;
    CLI::App app{"Spectral correspondence and Poisson structures for Hitchin pairs on P^1"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string r = "2", n = "1";
    std::string input;

    auto* gen = app.add_subcommand("gen", "generate a stable pair with a smooth spectral curve");
    add_common(gen, cfg, r, n);

    auto* analyze = app.add_subcommand("analyze", "invariants of a pair");
    analyze->add_option("file", input, "pair JSON")->required();
    analyze->add_option("--out", cfg.out, "output file (default: stdout)");

    auto* verify = app.add_subcommand("verify", "verify Phi_* B^H = B at one point");
    add_common(verify, cfg, r, n);
    verify->add_option("file", input, "pair JSON (omit to generate from --seed/--r/--n)");
    verify->add_flag("--inject-sign-fault", cfg.inject_sign_fault, "negate sigma0 on the sheaf side");

    auto* suite = app.add_subcommand("suite", "run every check over a grid of samples");
    add_common(suite, cfg, r, n);
    suite->add_option("--samples", cfg.samples, "seeds per grid point");
    int jobs = 1;
    suite->add_option("--jobs", jobs, "accepted; points run serially");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kInputError;
    }

    try {
        if (suite->parsed()) {
            r = suite->count("--r") ? r : "1-2";
            n = suite->count("--n") ? n : "1-2";
            if (!suite->count("--samples")) cfg.samples = 5;
        }
        std::tie(cfg.r_lo, cfg.r_hi) = parse_range(r);
        std::tie(cfg.n_lo, cfg.n_hi) = parse_range(n);
        if (!input.empty()) cfg.input = input;

        if (gen->parsed()) return emit(cmd_gen(cfg), cfg);
        if (analyze->parsed()) return emit(cmd_analyze(sp::io::read_file(input)), cfg);
        if (verify->parsed()) return emit(cmd_verify(cfg), cfg);
        return emit(cmd_suite(cfg), cfg);
    } catch (const sp::io::InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kInputError;
    }
}
