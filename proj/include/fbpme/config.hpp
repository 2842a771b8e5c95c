#pragma once

#include "fbpme/grid.hpp"
#include "fbpme/solver.hpp"

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace fbpme {

// Raised with a dotted field path, e.g. "model.pressure.kind: unknown value".
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class RunMethod { March, Picard };

enum class InitialKind { Gaussian, BlockBump, File };

struct InitialData {
    InitialKind kind = InitialKind::Gaussian;
    double amplitude = 1.0;
    double width = 1.0;
    int block_j = 0;            // block_bump
    std::uint64_t seed = 0;     // block_bump phases
    std::string path;           // file
};

struct OutputSpec {
    std::string dir;
    std::vector<double> snapshots;
};

struct RunConfig {
    GridSpec grid;
    ModelParams model;
    SolverConfig solver;
    RunMethod method = RunMethod::March;
    InitialData initial;
    OutputSpec output;
};

// Strict parse: unknown keys are rejected with their full path, enumerations
// and types validated, derived indices recomputed at load.
RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::string& path);
nlohmann::json run_config_to_json(const RunConfig& cfg);

// Initial data realized on the grid (dealiased spectral form).
SpectralField make_initial_data(const InitialData& init, const GridSpec& grid, const DyadicPartition& P);

struct SweepConfig {
    RunConfig base;
    std::vector<double> alphas;
    std::vector<double> pressure_params;  // s for riesz, ignored otherwise (single entry 0)
    std::vector<double> ps;
    std::vector<double> qs;
    std::vector<double> amplitudes;
    double r = 2.0;
    double c_fit = 0.0;  // 0: fit per sweep from a seeded batch
    int fit_cases = 8;
};

SweepConfig parse_sweep_config(const nlohmann::json& doc);
SweepConfig load_sweep_config(const std::string& path);

}  // namespace fbpme
