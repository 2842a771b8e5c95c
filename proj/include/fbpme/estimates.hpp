#pragma once

#include "fbpme/grid.hpp"
#include "fbpme/lp.hpp"
#include "fbpme/pressure.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace fbpme {

// Mild solution of u_t + Lambda^alpha u = f on stored nodes: exact semigroup
// plus trapezoid Duhamel quadrature of the given forcing.
std::vector<SpectralField> linear_mild_solution(const SpectralField& u0,
                                                const std::vector<SpectralField>& f_traj,
                                                const std::vector<double>& times, double alpha);

// A priori estimate of the dissipative equation: returns
// LHS / RHS for ||u||_{L~^r(FB^{beta+alpha/r})} <= C (||u0||_{FB^beta} + ||f||_{L~^1(FB^beta)}).
double verify_apriori(const SpectralField& u0, const std::vector<SpectralField>& f_traj,
                      const std::vector<double>& times, double r, const FBNormParams& beta_params,
                      double alpha, const DyadicPartition& P);

// Interpolation between mixed norms, exponents 1/r = (1-theta)/r1 + theta/r2:
// returns LHS / RHS for
// ||u||_{L~^r(FB^{beta+theta alpha})} <= ||u||^{1-theta}_{L~^{r1}(FB^beta)} ||u||^theta_{L~^{r2}(FB^{beta+alpha})}.
double verify_interpolation(const TrajectoryRecord& rec, double theta, double r1, double r2,
                            const FBNormParams& beta_params, double alpha);

struct BilinearExponents {
    double gamma = 1.0, gamma1 = 2.0, gamma2 = 2.0;
    double beta = 0.5;
    double epsilon = 0.5;
};

// Paraproduct estimate for u d_i(P v) on constant-in-time trajectories:
// returns max over components i of LHS / RHS with
// RHS = ||u||_{FB^{n(1-1/p)-eps}} ||v||_{FB^{beta+sigma+eps}} + (u <-> v).
double verify_bilinear(const SpectralField& u, const SpectralField& v, const BilinearExponents& exps,
                       const PressureSpec& pressure, double p, double q, const DyadicPartition& P);

// C_fit = max ratio x 1.5 (safety margin); throws on an empty batch.
double fit_global_constant(const std::vector<double>& ratios);

struct VerifyBatchResult {
    std::vector<double> ratios;
    double max_ratio = 0.0;
};

// Seeded randomized batches over the module's test-field generator
// (annulus bumps, Gaussians, low cosine modes: all resolution-independent).
SpectralField random_test_field(const GridSpec& grid, const DyadicPartition& P, std::mt19937_64& rng);

VerifyBatchResult apriori_batch(const GridSpec& grid, const DyadicPartition& P, double alpha,
                                double p, double q, int count, std::uint64_t seed);
VerifyBatchResult bilinear_batch(const GridSpec& grid, const DyadicPartition& P,
                                 const PressureSpec& pressure, double p, double q, int count,
                                 std::uint64_t seed);
VerifyBatchResult interpolation_batch(const GridSpec& grid, const DyadicPartition& P, double alpha,
                                      double p, double q, double theta, double r1, double r2, int count,
                                      std::uint64_t seed);

// Combined fitted constant feeding the wellposedness criteria.
double fit_constant(const GridSpec& grid, const DyadicPartition& P, const PressureSpec& pressure,
                    double alpha, double p, double q, int count, std::uint64_t seed);

}  // namespace fbpme
