#pragma once

#include "fbpme/config.hpp"

#include <array>
#include <string>
#include <vector>

namespace fbpme {

// Executes a run config: time marcher or Picard solver, trajectory CSV,
// FBPM snapshots, and an atomically written metadata document.
// Returns a process exit status.
int cmd_run(const std::string& config_path);

struct VerifyOptions {
    std::string suite = "all";  // all | apriori | interpolation | bilinear
    int n = 1;
    int N = 64;
    int count = 50;
    std::uint64_t seed = 2024;
    double L = 16.0;
    std::string out_csv;  // optional copy of the report
};

// Runs the inequality suites, prints a PASS/FAIL CSV table, nonzero exit on
// any FAIL. Boundedness is judged by grid-doubling stability (< x2) of the
// fitted constants; interpolation by ratio <= 1 + 1e-8.
int cmd_verify(const VerifyOptions& opts);

// Cartesian sweep over (alpha, s, p, q, amplitude); one short run per point.
// Rows: n,p,q,alpha,sigma,r,beta,admissible_thm31,admissible_sec4,
// smallness_pass,T_bound,final_status. Worker count capped by FBPME_THREADS.
int cmd_sweep(const std::string& config_path, const std::string& out_csv);

// Offline norm recomputation from a stored trajectory CSV.
// Each triple is (beta, p, q); p must be one of the stored block exponents.
int cmd_analyze(const std::string& traj_path, const std::vector<std::array<double, 3>>& triples,
                const std::string& out_csv);

}  // namespace fbpme
