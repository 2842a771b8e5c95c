#pragma once

#include "fbpme/grid.hpp"
#include "fbpme/lp.hpp"
#include "fbpme/pressure.hpp"

#include <functional>
#include <vector>

namespace fbpme {

// Model u_t + Lambda^alpha u = div(u grad(P u)) with unit viscosity.
struct ModelParams {
    double alpha = 2.0;
    PressureSpec pressure;
    double nu = 1.0;  // the model is posed with nu = 1
    int n = 1;
    double p = 2.0;
    double q = 1.0;
    bool nonlinear = true;

    // Critical index n(1 - 1/p) - alpha + sigma + 1; always recomputed.
    double critical_index() const;
    FBNormParams norm_params(double shift = 0.0) const;
    void validate() const;
};

struct SolverConfig {
    double T = 1.0;
    double dt = 0.0;          // 0: CFL-like default 0.25 (dxi N/3)^{-alpha}
    int record_every = 10;    // steps between trajectory records
    int picard_max_iter = 40;
    double picard_tol = 1e-10;
    int picard_nodes = 64;
    double blowup_ceiling = 1e8;  // relative FB-norm ceiling

    void validate() const;
    double effective_dt(const GridSpec& grid, double alpha) const;
};

// div(u grad(P v)) computed pseudo-spectrally with dealiasing.
// Cached multiplier tables; reusable across steps.
class NonlinearOp {
  public:
    NonlinearOp(const GridSpec& grid, const PressureSpec& pressure);
    SpectralField apply(const SpectralField& u, const SpectralField& v) const;  // div(u grad(P v))
    SpectralField operator()(const SpectralField& u) const { return apply(u, u); }

  private:
    GridSpec grid_;
    std::vector<double> symbol_;                 // m(xi)
    std::vector<std::vector<double>> deriv_;     // xi_d with Nyquist zeroed, per axis
};

// div(u grad(P u)); flags non-finite input.
SpectralField nonlinear_term(const SpectralField& U, const ModelParams& params);

// H(u, v)(t) = int_0^t S(t - tau) div(u(tau) grad(P v(tau))) dtau, trapezoid
// in tau with the semigroup applied exactly per node. t must lie on a node.
SpectralField duhamel(const std::vector<SpectralField>& u_traj, const std::vector<SpectralField>& v_traj,
                      const std::vector<double>& times, double t, const ModelParams& params);

struct MarchResult {
    TrajectoryRecord record;
    SpectralField final_field;
    RunStatus status = RunStatus::Completed;
    double end_time = 0.0;
    std::size_t steps = 0;
};

// ETD-RK2 marcher: the linear multiplier e^{-dt |xi|^alpha} is exact, the
// nonlinearity second-order explicit. on_record, if set, is invoked at each
// recorded time with the current field (snapshot sink).
using RecordObserver = std::function<void(double, const SpectralField&)>;
MarchResult time_march(const SpectralField& u0, const ModelParams& params, const SolverConfig& config,
                       const DyadicPartition& P, const RecordObserver& on_record = {});

struct PicardResult {
    TrajectoryRecord record;
    SpectralField final_field;
    RunStatus status = RunStatus::Completed;
    int iterations = 0;
    std::vector<double> increment_norms;     // X-norm of successive differences
    std::vector<double> contraction_ratios;  // increment ratios per iteration
    double solution_x_norm = 0.0;            // ||u||_X of the returned iterate
    double x_index = 0.0;                    // FB index of the working space X
};

// Picard iteration u <- S(t) u0 + H(u, u) on stored time nodes, with the
// working space X = L~^2([0,T]; FB^{beta + alpha/2}).
PicardResult picard_solve(const SpectralField& u0, const ModelParams& params, const SolverConfig& config,
                          const DyadicPartition& P);

}  // namespace fbpme
