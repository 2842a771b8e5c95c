#include "fbpme/harness.hpp"
#include "fbpme/lp.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

namespace {

// "beta,p,q" with p, q numeric or "inf".
std::array<double, 3> parse_triple(const std::string& text) {
    std::array<double, 3> out{0.0, 2.0, 1.0};
    std::istringstream ss(text);
    std::string cell;
    for (int i = 0; i < 3; ++i) {
        if (!std::getline(ss, cell, ','))
            throw CLI::ValidationError("--norm", "expected beta,p,q");
        if (i > 0 && cell == "inf") {
            out[static_cast<std::size_t>(i)] = fbpme::kInf;
            continue;
        }
        try {
            out[static_cast<std::size_t>(i)] = std::stod(cell);
        } catch (...) {
            throw CLI::ValidationError("--norm", "bad number \"" + cell + "\"");
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pseudo-spectral toolkit for the generalized porous medium equation "
                 "with fractional dissipation and abstract pressure"};
    app.require_subcommand(1);

    std::string run_config;
    auto* run = app.add_subcommand("run", "Execute a simulation config (marcher or Picard)");
    run->add_option("config", run_config, "JSON run configuration")->required();

    fbpme::VerifyOptions vopts;
    auto* verify = app.add_subcommand("verify", "Run the inequality verification suites");
    verify->add_option("suite", vopts.suite, "all|apriori|interpolation|bilinear")->capture_default_str();
    verify->add_option("--n", vopts.n, "dimension")->capture_default_str();
    verify->add_option("--N", vopts.N, "points per axis (doubled for stability check)")->capture_default_str();
    verify->add_option("--L", vopts.L, "half-period")->capture_default_str();
    verify->add_option("--count", vopts.count, "cases per batch")->capture_default_str();
    verify->add_option("--seed", vopts.seed, "batch seed")->capture_default_str();
    verify->add_option("--out", vopts.out_csv, "write the report CSV here as well");

    std::string sweep_config, sweep_out;
    auto* sweep = app.add_subcommand("sweep", "Parameter sweep with index/smallness columns");
    sweep->add_option("config", sweep_config, "JSON sweep configuration")->required();
    sweep->add_option("--out", sweep_out, "output CSV path");

    std::string traj_path, analyze_out;
    std::vector<double> betas;
    std::string p_str = "2", q_str = "1";
    std::vector<std::string> norm_triples;
    auto* analyze = app.add_subcommand("analyze", "Recompute FB/mixed norms from a trajectory CSV");
    analyze->add_option("trajectory", traj_path, "trajectory.csv from a run")->required();
    analyze->add_option("--beta", betas, "regularity indices to evaluate");
    analyze->add_option("--p", p_str, "Lebesgue exponent (number or inf)")->capture_default_str();
    analyze->add_option("--q", q_str, "summability exponent (number or inf)")->capture_default_str();
    analyze->add_option("--norm", norm_triples, "extra beta,p,q triples (repeatable)");
    analyze->add_option("--out", analyze_out, "output CSV path");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return fbpme::cmd_run(run_config);
    if (verify->parsed()) return fbpme::cmd_verify(vopts);
    if (sweep->parsed()) return fbpme::cmd_sweep(sweep_config, sweep_out);
    if (analyze->parsed()) {
        try {
            std::vector<std::array<double, 3>> triples;
            const double p = p_str == "inf" ? fbpme::kInf : std::stod(p_str);
            const double q = q_str == "inf" ? fbpme::kInf : std::stod(q_str);
            for (double b : betas) triples.push_back({b, p, q});
            for (const auto& t : norm_triples) triples.push_back(parse_triple(t));
            if (triples.empty()) {
                std::cerr << "fbpme analyze: no norms requested (use --beta or --norm)\n";
                return 2;
            }
            return fbpme::cmd_analyze(traj_path, triples, analyze_out);
        } catch (const std::exception& e) {
            std::cerr << "fbpme analyze: " << e.what() << "\n";
            return 2;
        }
    }
    return 0;
}
