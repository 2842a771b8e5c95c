#include "fbpme/ops.hpp"

#include "fbpme/transform.hpp"

#include <cmath>
#include <stdexcept>

namespace fbpme {

SpectralField fractional_laplacian(const SpectralField& U, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("fractional_laplacian: alpha must be > 0");
    SpectralField R(U.grid);
    for (std::size_t i = 0; i < U.coeffs.size(); ++i) {
        const double r2 = U.grid.xi_norm2(i);
        R.coeffs[i] = r2 == 0.0 ? Complex{0.0, 0.0} : U.coeffs[i] * std::pow(r2, 0.5 * alpha);
    }
    return R;
}

namespace {

// Derivative multiplier along axis d: i*xi_d, with the Nyquist row zeroed.
inline Complex deriv_factor(const GridSpec& g, int k_axis) {
    if (k_axis == g.N / 2) return Complex{0.0, 0.0};
    return Complex{0.0, g.dxi() * g.signed_index(k_axis)};
}

}  // namespace

std::vector<SpectralField> gradient(const SpectralField& U) {
    const GridSpec& g = U.grid;
    std::vector<SpectralField> G;
    G.reserve(static_cast<std::size_t>(g.n));
    for (int d = 0; d < g.n; ++d) G.emplace_back(g);

    for (std::size_t i = 0; i < U.coeffs.size(); ++i) {
        const auto k = g.unflatten(i);
        for (int d = 0; d < g.n; ++d) G[static_cast<std::size_t>(d)].coeffs[i] = deriv_factor(g, k[d]) * U.coeffs[i];
    }
    return G;
}

SpectralField divergence(const std::vector<SpectralField>& V) {
    if (V.empty()) throw std::invalid_argument("divergence: empty component list");
    const GridSpec& g = V[0].grid;
    if (static_cast<int>(V.size()) != g.n) throw std::invalid_argument("divergence: expected n components");
    for (const auto& c : V)
        if (c.grid != g) throw std::invalid_argument("divergence: grid mismatch");

    SpectralField R(g);
    for (std::size_t i = 0; i < R.coeffs.size(); ++i) {
        const auto k = g.unflatten(i);
        Complex acc{0.0, 0.0};
        for (int d = 0; d < g.n; ++d) acc += deriv_factor(g, k[d]) * V[static_cast<std::size_t>(d)].coeffs[i];
        R.coeffs[i] = acc;
    }
    R.coeffs[0] = Complex{0.0, 0.0};
    return R;
}

bool mode_survives_dealias(const GridSpec& g, std::size_t flat) {
    const auto k = g.unflatten(flat);
    for (int d = 0; d < g.n; ++d) {
        if (3 * std::abs(g.signed_index(k[d])) > g.N) return false;
    }
    return true;
}

SpectralField dealias(const SpectralField& U) {
    SpectralField R = U;
    for (std::size_t i = 0; i < R.coeffs.size(); ++i)
        if (!mode_survives_dealias(U.grid, i)) R.coeffs[i] = Complex{0.0, 0.0};
    return R;
}

SpectralField semigroup_apply(const SpectralField& U, double t, double alpha) {
    if (t < 0.0) throw std::invalid_argument("semigroup_apply: t must be >= 0");
    if (!(alpha > 0.0)) throw std::invalid_argument("semigroup_apply: alpha must be > 0");
    SpectralField R(U.grid);
    for (std::size_t i = 0; i < U.coeffs.size(); ++i) {
        const double r2 = U.grid.xi_norm2(i);
        R.coeffs[i] = U.coeffs[i] * std::exp(-t * std::pow(r2, 0.5 * alpha));
    }
    return R;
}

SpectralField multiply_physical(const SpectralField& U, const SpectralField& V) {
    if (U.grid != V.grid) throw std::invalid_argument("multiply_physical: grid mismatch");
    RealField u = inverse_transform_unchecked(U);
    RealField v = inverse_transform_unchecked(V);
    for (std::size_t i = 0; i < u.values.size(); ++i) u.values[i] *= v.values[i];
    return forward_transform(u);
}

double l2_norm(const SpectralField& U) {
    double s = 0.0;
    for (const auto& c : U.coeffs) s += std::norm(c);
    return std::sqrt(s * std::pow(2.0 * U.grid.L, -U.grid.n));
}

double l2_norm(const RealField& u) {
    double s = 0.0;
    for (double v : u.values) s += v * v;
    return std::sqrt(s * std::pow(u.grid.dx(), u.grid.n));
}

double max_abs_diff(const SpectralField& U, const SpectralField& V) {
    double m = 0.0;
    for (std::size_t i = 0; i < U.coeffs.size(); ++i) m = std::max(m, std::abs(U.coeffs[i] - V.coeffs[i]));
    return m;
}

bool all_finite(const SpectralField& U) {
    for (const auto& c : U.coeffs)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
}

SpectralField axpy(Complex a, const SpectralField& X, const SpectralField& Y) {
    if (X.grid != Y.grid) throw std::invalid_argument("axpy: grid mismatch");
    SpectralField R(X.grid);
    for (std::size_t i = 0; i < R.coeffs.size(); ++i) R.coeffs[i] = a * X.coeffs[i] + Y.coeffs[i];
    return R;
}

SpectralField scale(const SpectralField& U, Complex a) {
    SpectralField R(U.grid);
    for (std::size_t i = 0; i < R.coeffs.size(); ++i) R.coeffs[i] = a * U.coeffs[i];
    return R;
}

}  // namespace fbpme
