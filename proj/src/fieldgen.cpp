#include "fbpme/fieldgen.hpp"

#include "fbpme/ops.hpp"
#include "fbpme/transform.hpp"

#include <cmath>

namespace fbpme {

RealField gaussian_field(const GridSpec& grid, double amplitude, double width) {
    RealField u(grid);
    const double h = grid.dx();
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        const auto k = grid.unflatten(i);
        double r2 = 0.0;
        for (int d = 0; d < grid.n; ++d) {
            const double x = -grid.L + h * k[d];
            r2 += x * x;
        }
        u.values[i] = amplitude * std::exp(-r2 / (2.0 * width * width));
    }
    return u;
}

RealField cosine_mode(const GridSpec& grid, const std::array<int, 3>& k, double amplitude, double phase) {
    RealField u(grid);
    const double h = grid.dx();
    const double dxi = grid.dxi();
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        const auto m = grid.unflatten(i);
        double arg = phase;
        for (int d = 0; d < grid.n; ++d) arg += dxi * k[static_cast<std::size_t>(d)] * (-grid.L + h * m[d]);
        u.values[i] = amplitude * std::cos(arg);
    }
    return u;
}

RealField random_real_field(const GridSpec& grid, std::mt19937_64& rng, double amplitude) {
    RealField u(grid);
    for (auto& v : u.values) v = uniform(rng, -amplitude, amplitude);
    return u;
}

SpectralField random_dealiased_field(const GridSpec& grid, std::mt19937_64& rng) {
    SpectralField U = dealias(forward_transform(random_real_field(grid, rng)));
    U.coeffs[0] = Complex{0.0, 0.0};
    const double norm = l2_norm(U);
    if (norm > 0.0)
        for (auto& c : U.coeffs) c /= norm;
    return U;
}

SpectralField block_bump(const GridSpec& grid, const DyadicPartition& P, int j, std::mt19937_64& rng,
                         double p) {
    SpectralField U(grid);
    const auto& mask = P.mask(j);
    // Random phases assigned on a half lattice, mirrored for Hermitian symmetry.
    for (std::size_t i = 1; i < U.coeffs.size(); ++i) {
        if (mask[i] == 0.0) continue;
        const auto k = grid.unflatten(i);
        std::array<int, 3> neg{0, 0, 0};
        for (int d = 0; d < grid.n; ++d) neg[d] = grid.negated_index(k[d]);
        const std::size_t mi = grid.flatten(neg);
        if (mi < i) continue;  // handled from the mirror side
        const double theta = uniform(rng, 0.0, 2.0 * M_PI);
        if (mi == i) {  // self-conjugate mode must stay real
            U.coeffs[i] = Complex{mask[i] * (theta < M_PI ? 1.0 : -1.0), 0.0};
            continue;
        }
        U.coeffs[i] = mask[i] * Complex{std::cos(theta), std::sin(theta)};
        U.coeffs[mi] = std::conj(U.coeffs[i]);
    }
    const double norm = block_lp_norm(U, j, p, P);
    if (norm > 0.0)
        for (auto& c : U.coeffs) c /= norm;
    return U;
}

SpectralField annulus_bump(const GridSpec& grid, double mu, double width, double amplitude) {
    SpectralField U(grid);
    for (std::size_t i = 1; i < U.coeffs.size(); ++i) {
        const double r = std::sqrt(grid.xi_norm2(i));
        const double d = (r - mu) / width;
        U.coeffs[i] = Complex{amplitude * std::exp(-0.5 * d * d), 0.0};
    }
    return U;
}

}  // namespace fbpme
