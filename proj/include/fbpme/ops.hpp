#pragma once

#include "fbpme/grid.hpp"

#include <vector>

namespace fbpme {

// (Lambda^alpha u)^ = |xi|^alpha u^. Zero mode maps to 0. Requires alpha > 0.
SpectralField fractional_laplacian(const SpectralField& U, double alpha);

// Component i multiplied by i*xi_i. Nyquist rows are zeroed so derivatives of
// real fields stay real.
std::vector<SpectralField> gradient(const SpectralField& U);

// Sum_i i*xi_i V_i with the same Nyquist convention; zero mode is exactly 0.
SpectralField divergence(const std::vector<SpectralField>& V);

// 2/3-rule truncation: any axis index with |k_d| > N/3 is zeroed.
SpectralField dealias(const SpectralField& U);

bool mode_survives_dealias(const GridSpec& g, std::size_t flat);

// e^{-t Lambda^alpha}: coeffs scaled by e^{-t |xi|^alpha}. Requires t >= 0.
SpectralField semigroup_apply(const SpectralField& U, double t, double alpha);

// Pointwise physical-space product, returned in spectral form (no dealiasing).
SpectralField multiply_physical(const SpectralField& U, const SpectralField& V);

// Grid L^2 norm of the field represented by U, via Parseval:
// (2L)^{-n/2} * l2 norm of the coefficients.
double l2_norm(const SpectralField& U);
double l2_norm(const RealField& u);

// max_i |c_i - d_i| over coefficients.
double max_abs_diff(const SpectralField& U, const SpectralField& V);

bool all_finite(const SpectralField& U);

SpectralField axpy(Complex a, const SpectralField& X, const SpectralField& Y);  // a*X + Y
SpectralField scale(const SpectralField& U, Complex a);

}  // namespace fbpme
