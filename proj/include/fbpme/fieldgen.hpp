#pragma once

#include "fbpme/grid.hpp"
#include "fbpme/lp.hpp"

#include <cstdint>
#include <random>

namespace fbpme {

// Uniform in [0, 1) from the top 53 bits; keeps generated fields independent
// of the standard library's distribution implementations.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double a, double b) { return a + (b - a) * uniform01(rng); }

// A exp(-|x|^2 / (2 w^2)) sampled on the grid.
RealField gaussian_field(const GridSpec& grid, double amplitude, double width);

// amplitude * cos(xi . x + phase) with xi = dxi * k.
RealField cosine_mode(const GridSpec& grid, const std::array<int, 3>& k, double amplitude, double phase = 0.0);

// White-noise real field with values uniform in [-amplitude, amplitude].
RealField random_real_field(const GridSpec& grid, std::mt19937_64& rng, double amplitude = 1.0);

// Dealiased, mean-free random spectral field, unit l2-normalized.
SpectralField random_dealiased_field(const GridSpec& grid, std::mt19937_64& rng);

// Random phases on the support of block j, unit L^p over the block.
SpectralField block_bump(const GridSpec& grid, const DyadicPartition& P, int j, std::mt19937_64& rng,
                         double p = 2.0);

// Resolution-independent radial annulus bump u^(xi) = amp exp(-(|xi|-mu)^2/(2w^2)),
// mean mode zeroed. Real and radial in xi, so the field is real and even.
SpectralField annulus_bump(const GridSpec& grid, double mu, double width, double amplitude = 1.0);

}  // namespace fbpme
