#pragma once

// Brute-force reference implementations kept independent of the library's
// spectral code paths. Everything here is O(N^2) or worse on purpose.

#include "fbpme/grid.hpp"

#include <cmath>
#include <functional>
#include <vector>

namespace oracles {

using fbpme::Complex;
using fbpme::GridSpec;
using fbpme::RealField;
using fbpme::SpectralField;

// Spectral coefficients of the pointwise product via direct circular
// convolution: w^(m) = (2L)^{-n} sum_k u^(k) v^(m-k mod N).
inline SpectralField convolution_product(const SpectralField& U, const SpectralField& V) {
    const GridSpec& g = U.grid;
    SpectralField W(g);
    const std::size_t sz = g.size();
    const double scale = std::pow(2.0 * g.L, -g.n);
    for (std::size_t m = 0; m < sz; ++m) {
        const auto km = g.unflatten(m);
        Complex acc{0.0, 0.0};
        for (std::size_t k = 0; k < sz; ++k) {
            const auto kk = g.unflatten(k);
            std::array<int, 3> diff{0, 0, 0};
            for (int d = 0; d < g.n; ++d) diff[d] = ((km[d] - kk[d]) % g.N + g.N) % g.N;
            acc += U.coeffs[k] * V.coeffs[g.flatten(diff)];
        }
        W.coeffs[m] = acc * scale;
    }
    return W;
}

// Second-order central-difference Laplacian on the periodic grid.
inline RealField fd_laplacian(const RealField& u) {
    const GridSpec& g = u.grid;
    RealField out(g);
    const double inv_h2 = 1.0 / (g.dx() * g.dx());
    const std::size_t sz = g.size();
    for (std::size_t i = 0; i < sz; ++i) {
        auto k = g.unflatten(i);
        double acc = 0.0;
        for (int d = 0; d < g.n; ++d) {
            auto kp = k, km = k;
            kp[d] = (k[d] + 1) % g.N;
            km[d] = (k[d] - 1 + g.N) % g.N;
            acc += u.values[g.flatten(kp)] - 2.0 * u.values[i] + u.values[g.flatten(km)];
        }
        out.values[i] = acc * inv_h2;
    }
    return out;
}

// Composite Simpson on [a, b] with an even number of panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
    if (panels % 2 != 0) ++panels;
    const double h = (b - a) / panels;
    double s = f(a) + f(b);
    for (int i = 1; i < panels; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

}  // namespace oracles
