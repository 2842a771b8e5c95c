#pragma once

#include "fbpme/grid.hpp"
#include "fbpme/lp.hpp"

#include <string>
#include <utility>

namespace fbpme {

// Critical regularity index beta = n(1 - 1/p) - alpha + sigma + 1.
// p = inf is accepted (1/p -> 0).
double critical_index(int n, double p, double alpha, double sigma);

struct IndexReport {
    double beta = 0.0;
    bool admissible_thm = false;       // 2 max{1, sigma+1} < alpha < upper
    bool admissible_improved = false;  // r' max{1, sigma+1} < alpha < upper, r' = r/(r-1)
    double lower_thm = 0.0;
    double lower_improved = 0.0;
    double upper = 0.0;
    double r_used = 2.0;
    std::string rationale;  // which constraint binds
};

// Evaluates both admissibility ranges for alpha: the fixed-point range in
// L~^2 and the improved range obtained by working in L~^r with large r.
IndexReport admissible(int n, double p, double alpha, double sigma, double r = 2.0);

struct SmallnessReport {
    bool small_enough = false;
    double norm = 0.0;       // ||u0||_{FB^beta_{p,q}}
    double threshold = 0.0;  // 1 / (4 C_fit^2)
    double margin = 0.0;     // threshold / norm (inf for zero data)
};

// Global-existence smallness test ||u0|| <= 1/(4 C^2) under a fitted constant.
SmallnessReport smallness_check(const SpectralField& u0, const FBNormParams& params,
                                const DyadicPartition& P, double c_fit);

// Sharp indicator split at |xi| = lambda; low + high = u0 exactly.
std::pair<SpectralField, SpectralField> split_frequency(const SpectralField& u0, double lambda);

// Smallest lambda (by bisection over the lattice radii) for which the high
// part satisfies ||high||_{FB^beta} <= 1/(8 c_fit).
double choose_lambda(const SpectralField& u0, const FBNormParams& params, const DyadicPartition& P,
                     double c_fit);

struct LocalTimeBound {
    double T_r2 = 0.0;        // (1/(8 C^2 lambda^{alpha/2} ||u0||))^2
    double T_improved = 0.0;  // min of the two 16 C^2 forms at exponents r, r'
};

LocalTimeBound local_time_bound(double u0_norm, double lambda, double alpha, double c_fit, double r = 2.0);

enum class BlowupStatus { Bounded, Growing, Blown };
std::string to_string(BlowupStatus s);

struct BlowupReport {
    BlowupStatus status = BlowupStatus::Bounded;
    double integral = 0.0;     // L~1-style running integral of the FB^{beta+alpha} norm
    double last_slope = 0.0;   // integrand average over the last window
};

// Monitors the Theorem-style blowup quantity int_0^t ||u||_{FB^{beta+alpha}}.
// "growing": the integral's slope increased over the last three windows;
// "blown": the run itself was flagged.
BlowupReport blowup_monitor(const TrajectoryRecord& rec);

}  // namespace fbpme
