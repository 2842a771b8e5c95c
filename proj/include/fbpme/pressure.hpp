#pragma once

#include "fbpme/grid.hpp"
#include "fbpme/lp.hpp"

#include <string>
#include <vector>

namespace fbpme {

enum class PressureKind { Riesz, ExpKernel, Identity, Custom };

// Abstract pressure operator P acting as a real Fourier multiplier m(xi),
// together with its order sigma in the per-block bound
// ||Delta_k grad(Pu)|| <= C 2^{k sigma} ||Delta_k u||.
struct PressureSpec {
    PressureKind kind = PressureKind::Identity;
    double s = 0.5;       // Riesz exponent, P = Lambda^{-2s}, 0 < s <= 1
    double sigma = 1.0;
    std::vector<double> custom_symbol;  // lattice table, Custom only

    static PressureSpec riesz(double s);
    static PressureSpec identity();
    static PressureSpec exp_kernel();
    static PressureSpec custom(std::vector<double> symbol, double sigma);
    // CSV rows "flat_index,value"; unlisted modes are zero.
    static PressureSpec custom_from_csv(const std::string& path, double sigma, std::size_t lattice_size);

    std::string kind_name() const;
};

// The multiplier table m(xi) on the grid's frequency lattice.
//   riesz:      |xi|^{-2s}, with m(0) = 0 (mean mode projected out)
//   identity:   1
//   exp_kernel: c_n (1 + |xi|^2)^{-(n+1)/2}, the transform of e^{-|x|},
//               with c_n fixed by m(0) = ||e^{-|x|}||_{L^1(R^n)}
std::vector<double> pressure_symbol(const PressureSpec& spec, const GridSpec& grid);

// grad(P u): component i = i xi_i m(xi) u^(xi), Nyquist rows zeroed like
// the plain gradient.
std::vector<SpectralField> pressure_gradient(const SpectralField& U, const PressureSpec& spec);

// Magnitude field |xi| m(xi) |u^(xi)| (the componentwise l2 of grad Pu),
// convenient for block-norm ratios.
SpectralField pressure_gradient_magnitude(const SpectralField& U, const PressureSpec& spec);

enum class SigmaFitWindow { AllBlocks, HighHalf };

struct SigmaFit {
    double slope = 0.0;        // fitted sigma
    double intercept = 0.0;    // log2 of the fitted constant
    std::vector<int> blocks;   // blocks used in the fit
    std::vector<double> ratios;  // per-block ||Delta_k grad Pu||_p / ||Delta_k u||_p
};

// Empirical order of the pressure operator: unit-L^p block bumps are pushed
// through grad P and log2 of the block-norm ratio is fitted against k.
SigmaFit estimate_sigma_fit(const PressureSpec& spec, const GridSpec& grid, const DyadicPartition& P,
                            double p = 2.0, SigmaFitWindow window = SigmaFitWindow::AllBlocks);
double estimate_sigma(const PressureSpec& spec, const GridSpec& grid, const DyadicPartition& P,
                      double p = 2.0, SigmaFitWindow window = SigmaFitWindow::AllBlocks);

// Smallest C with ||Delta_k grad Pu||_p <= C 2^{k sigma} ||Delta_k u||_p over
// all resolved blocks of the given fields.
double fit_block_constant(const PressureSpec& spec, const DyadicPartition& P, double sigma, double p,
                          const std::vector<SpectralField>& fields);

}  // namespace fbpme
