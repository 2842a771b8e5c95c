#pragma once

#include "fbpme/grid.hpp"

namespace fbpme {

// Forward DFT of a real field, scaled so coefficients approximate the
// continuous Fourier transform (Riemann sum with cell volume (2L/N)^n and
// the phase shift for the grid origin at x = -L).
SpectralField forward_transform(const RealField& u);

// Inverse of forward_transform. Rejects inputs whose Hermitian symmetry
// defect exceeds 1e-10 relative to the largest coefficient.
RealField inverse_transform(const SpectralField& U);

// Inverse without the symmetry check; imaginary residue is discarded.
// Used on interior solver paths where fields are Hermitian by construction.
RealField inverse_transform_unchecked(const SpectralField& U);

// Max Hermitian-symmetry defect |c(-k) - conj(c(k))|, relative to max |c|.
double hermitian_defect(const SpectralField& U);

// Complex n-d DFT used by the transforms above; sign = -1 forward, +1 backward.
// No scaling applied. Thread-safe (plans cached per grid shape under a lock).
void raw_dft(const GridSpec& g, const Complex* in, Complex* out, int sign);

}  // namespace fbpme
