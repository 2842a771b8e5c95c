#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace fbpme {

using Complex = std::complex<double>;

// Periodic computational domain [-L, L)^n with N points per axis.
// The frequency lattice is {dxi * k : k in [-N/2, N/2)^n}, dxi = pi / L.
// Flat storage is row-major over unshifted per-axis indices k in [0, N),
// where k >= N/2 represents the negative frequency k - N.
struct GridSpec {
    int n = 1;       // spatial dimension, 1..3
    int N = 8;       // points per axis, even, >= 8
    double L = 1.0;  // half-period

    GridSpec() = default;
    GridSpec(int n_, int N_, double L_) : n(n_), N(N_), L(L_) { validate(); }

    void validate() const {
        if (n < 1 || n > 3) throw std::invalid_argument("GridSpec: n must be 1, 2 or 3");
        if (N < 8 || N % 2 != 0) throw std::invalid_argument("GridSpec: N must be even and >= 8");
        if (!(L > 0.0)) throw std::invalid_argument("GridSpec: L must be positive");
    }

    double dxi() const { return 3.14159265358979323846 / L; }
    double dx() const { return 2.0 * L / N; }

    std::size_t size() const {
        std::size_t s = 1;
        for (int d = 0; d < n; ++d) s *= static_cast<std::size_t>(N);
        return s;
    }

    // Signed integer frequency index for an unshifted axis index k in [0, N).
    int signed_index(int k) const { return k < N / 2 ? k : k - N; }

    // Axis index of the mirrored frequency -k, as an unshifted index.
    int negated_index(int k) const { return k == 0 ? 0 : N - k; }

    // Decompose a flat index into per-axis unshifted indices.
    std::array<int, 3> unflatten(std::size_t flat) const {
        std::array<int, 3> k{0, 0, 0};
        for (int d = n - 1; d >= 0; --d) {
            k[d] = static_cast<int>(flat % static_cast<std::size_t>(N));
            flat /= static_cast<std::size_t>(N);
        }
        return k;
    }

    std::size_t flatten(const std::array<int, 3>& k) const {
        std::size_t flat = 0;
        for (int d = 0; d < n; ++d)
            flat = flat * static_cast<std::size_t>(N) + static_cast<std::size_t>(k[d]);
        return flat;
    }

    // |xi|^2 at a flat lattice index.
    double xi_norm2(std::size_t flat) const {
        const auto k = unflatten(flat);
        const double h = dxi();
        double r2 = 0.0;
        for (int d = 0; d < n; ++d) {
            const double x = h * signed_index(k[d]);
            r2 += x * x;
        }
        return r2;
    }

    // Largest |xi| on the lattice (corner mode).
    double xi_max() const {
        const double axis = dxi() * (N / 2);
        double r2 = 0.0;
        for (int d = 0; d < n; ++d) r2 += axis * axis;
        return std::sqrt(r2);
    }

    bool operator==(const GridSpec& o) const { return n == o.n && N == o.N && L == o.L; }
    bool operator!=(const GridSpec& o) const { return !(*this == o); }
};

// Real samples u(x) on the grid; x_m = -L + m * dx per axis, row-major.
struct RealField {
    GridSpec grid;
    std::vector<double> values;

    RealField() = default;
    explicit RealField(const GridSpec& g) : grid(g), values(g.size(), 0.0) {}
};

// Complex Fourier coefficients normalized as a Riemann-sum approximation of
// the continuous transform u^(xi) = \int u(x) e^{-i xi.x} dx.
struct SpectralField {
    GridSpec grid;
    std::vector<Complex> coeffs;

    SpectralField() = default;
    explicit SpectralField(const GridSpec& g) : grid(g), coeffs(g.size(), Complex{0.0, 0.0}) {}

    Complex mean_mode() const { return coeffs.empty() ? Complex{} : coeffs[0]; }
};

// Per-axis signed frequencies xi_d for every flat index, cached as n arrays
// of length N (small, recomputed freely).
inline std::vector<double> axis_frequencies(const GridSpec& g) {
    std::vector<double> xi(static_cast<std::size_t>(g.N));
    for (int k = 0; k < g.N; ++k) xi[static_cast<std::size_t>(k)] = g.dxi() * g.signed_index(k);
    return xi;
}

}  // namespace fbpme
