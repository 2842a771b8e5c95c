#include "fbpme/estimates.hpp"

#include "fbpme/fieldgen.hpp"
#include "fbpme/ops.hpp"
#include "fbpme/transform.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fbpme {

std::vector<SpectralField> linear_mild_solution(const SpectralField& u0,
                                                const std::vector<SpectralField>& f_traj,
                                                const std::vector<double>& times, double alpha) {
    if (f_traj.size() != times.size()) throw std::invalid_argument("linear_mild_solution: length mismatch");
    if (times.size() < 2) throw std::invalid_argument("linear_mild_solution: need >= 2 nodes");

    std::vector<SpectralField> u(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        u[i] = semigroup_apply(u0, times[i] - times[0], alpha);
        if (i == 0) continue;
        const std::vector<double> sub(times.begin(), times.begin() + static_cast<long>(i) + 1);
        const std::vector<double> w = trapezoid_weights(sub);
        for (std::size_t k = 0; k <= i; ++k) {
            const SpectralField s = semigroup_apply(f_traj[k], times[i] - times[k], alpha);
            for (std::size_t m = 0; m < u[i].coeffs.size(); ++m) u[i].coeffs[m] += w[k] * s.coeffs[m];
        }
    }
    return u;
}

namespace {

TrajectoryRecord record_of(const std::vector<SpectralField>& traj, const std::vector<double>& times,
                           const DyadicPartition& P, double alpha, double beta, double p, double q) {
    TrajectoryRecord rec;
    rec.grid = P.grid;
    rec.alpha = alpha;
    rec.beta = beta;
    rec.p = p;
    rec.q = q;
    for (std::size_t i = 0; i < traj.size(); ++i) rec.append_time(times[i], traj[i], P);
    return rec;
}

}  // namespace

double verify_apriori(const SpectralField& u0, const std::vector<SpectralField>& f_traj,
                      const std::vector<double>& times, double r, const FBNormParams& beta_params,
                      double alpha, const DyadicPartition& P) {
    const auto u = linear_mild_solution(u0, f_traj, times, alpha);
    const TrajectoryRecord rec = record_of(u, times, P, alpha, beta_params.beta, beta_params.p, beta_params.q);
    const TrajectoryRecord frec =
        record_of(f_traj, times, P, alpha, beta_params.beta, beta_params.p, beta_params.q);

    const double r_shift = r == kInf ? 0.0 : alpha / r;
    const double lhs = mixed_norm(rec, r, FBNormParams{beta_params.beta + r_shift, beta_params.p, beta_params.q});
    const double rhs = fb_norm(u0, beta_params, P) + mixed_norm(frec, 1.0, beta_params);
    if (rhs == 0.0) throw std::invalid_argument("verify_apriori: degenerate case with zero data");
    return lhs / rhs;
}

double verify_interpolation(const TrajectoryRecord& rec, double theta, double r1, double r2,
                            const FBNormParams& beta_params, double alpha) {
    if (theta < 0.0 || theta > 1.0) throw std::invalid_argument("verify_interpolation: theta in [0,1]");
    const double inv_r = (r1 == kInf ? 0.0 : (1.0 - theta) / r1) + (r2 == kInf ? 0.0 : theta / r2);
    const double r = inv_r == 0.0 ? kInf : 1.0 / inv_r;

    const double lhs =
        mixed_norm(rec, r, FBNormParams{beta_params.beta + theta * alpha, beta_params.p, beta_params.q});
    const double a = mixed_norm(rec, r1, beta_params);
    const double b = mixed_norm(rec, r2, FBNormParams{beta_params.beta + alpha, beta_params.p, beta_params.q});
    const double rhs = std::pow(a, 1.0 - theta) * std::pow(b, theta);
    if (rhs == 0.0) return lhs == 0.0 ? 1.0 : kInf;
    return lhs / rhs;
}

double verify_bilinear(const SpectralField& u, const SpectralField& v, const BilinearExponents& exps,
                       const PressureSpec& pressure, double p, double q, const DyadicPartition& P) {
    const double sigma = pressure.sigma;
    if (!(exps.epsilon > std::max(0.0, -sigma)))
        throw std::invalid_argument("verify_bilinear: need epsilon > max{0, -sigma}");
    if (!(exps.beta > 0.0)) throw std::invalid_argument("verify_bilinear: need beta > 0");
    const double inv_sum = 1.0 / exps.gamma1 + 1.0 / exps.gamma2;
    if (std::abs(1.0 / exps.gamma - inv_sum) > 1e-12)
        throw std::invalid_argument("verify_bilinear: need 1/gamma = 1/gamma1 + 1/gamma2");

    const GridSpec& g = u.grid;
    const int n = g.n;
    const double inv_p = p == kInf ? 0.0 : 1.0 / p;
    const FBNormParams low{n * (1.0 - inv_p) - exps.epsilon, p, q};
    const FBNormParams high{exps.beta + sigma + exps.epsilon, p, q};

    const double rhs = fb_norm(u, low, P) * fb_norm(v, high, P) + fb_norm(v, low, P) * fb_norm(u, high, P);
    if (rhs == 0.0) return 0.0;

    // Constant-in-time trajectories: the time factors T^{1/gamma} cancel
    // between the two sides, so spatial FB norms suffice.
    const std::vector<SpectralField> grad_pv = pressure_gradient(v, pressure);
    const FBNormParams target{exps.beta, p, q};
    double lhs = 0.0;
    for (int d = 0; d < n; ++d) {
        const SpectralField w = dealias(multiply_physical(u, grad_pv[static_cast<std::size_t>(d)]));
        lhs = std::max(lhs, fb_norm(w, target, P));
    }
    return lhs / rhs;
}

double fit_global_constant(const std::vector<double>& ratios) {
    if (ratios.empty()) throw std::invalid_argument("fit_global_constant: empty batch");
    double mx = 0.0;
    for (double r : ratios) {
        if (!std::isfinite(r) || r < 0.0) throw std::invalid_argument("fit_global_constant: bad ratio");
        mx = std::max(mx, r);
    }
    return 1.5 * mx;
}

SpectralField random_test_field(const GridSpec& grid, const DyadicPartition& P, std::mt19937_64& rng) {
    const double pick = uniform01(rng);
    if (pick < 0.45) {
        const double lo = P.resolved_xi_min() * 1.2, hi = P.resolved_xi_max() * 0.8;
        const double mu = lo * std::pow(hi / lo, uniform01(rng));
        const double width = mu * uniform(rng, 0.15, 0.45);
        return annulus_bump(grid, mu, width, uniform(rng, 0.5, 2.0));
    }
    if (pick < 0.8) {
        RealField gphys = gaussian_field(grid, uniform(rng, 0.5, 2.0), uniform(rng, grid.L / 16.0, grid.L / 4.0));
        SpectralField U = dealias(forward_transform(gphys));
        U.coeffs[0] = Complex{0.0, 0.0};  // FB spaces are mean-free
        return U;
    }
    std::array<int, 3> k{0, 0, 0};
    for (int d = 0; d < grid.n; ++d) k[d] = 1 + static_cast<int>(uniform01(rng) * 7.0);
    SpectralField U = forward_transform(cosine_mode(grid, k, uniform(rng, 0.5, 2.0), uniform(rng, 0.0, 6.28)));
    return dealias(U);
}

VerifyBatchResult apriori_batch(const GridSpec& grid, const DyadicPartition& P, double alpha,
                                double p, double q, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    VerifyBatchResult out;
    const std::size_t nodes = 33;
    for (int c = 0; c < count; ++c) {
        const SpectralField u0 = random_test_field(grid, P, rng);
        const SpectralField f0 = random_test_field(grid, P, rng);
        const double T = uniform(rng, 0.2, 2.0);
        const double omega = uniform(rng, 0.0, 4.0);
        const double offset = uniform(rng, 0.2, 1.0);

        std::vector<double> times(nodes);
        std::vector<SpectralField> f(nodes);
        for (std::size_t i = 0; i < nodes; ++i) {
            times[i] = T * static_cast<double>(i) / static_cast<double>(nodes - 1);
            f[i] = scale(f0, Complex{offset + std::cos(omega * times[i]), 0.0});
        }
        const double beta = uniform(rng, -1.0, 1.5);
        const double r = c % 3 == 0 ? 1.0 : (c % 3 == 1 ? 2.0 : kInf);
        out.ratios.push_back(verify_apriori(u0, f, times, r, FBNormParams{beta, p, q}, alpha, P));
    }
    out.max_ratio = *std::max_element(out.ratios.begin(), out.ratios.end());
    return out;
}

VerifyBatchResult bilinear_batch(const GridSpec& grid, const DyadicPartition& P,
                                 const PressureSpec& pressure, double p, double q, int count,
                                 std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    VerifyBatchResult out;
    for (int c = 0; c < count; ++c) {
        const SpectralField u = random_test_field(grid, P, rng);
        const SpectralField v = random_test_field(grid, P, rng);
        BilinearExponents e;
        e.gamma1 = 2.0;
        e.gamma2 = 2.0;
        e.gamma = 1.0;
        e.beta = uniform(rng, 0.25, 1.25);
        e.epsilon = std::max(0.0, -pressure.sigma) + uniform(rng, 0.25, 0.75);
        out.ratios.push_back(verify_bilinear(u, v, e, pressure, p, q, P));
    }
    out.max_ratio = *std::max_element(out.ratios.begin(), out.ratios.end());
    return out;
}

VerifyBatchResult interpolation_batch(const GridSpec& grid, const DyadicPartition& P, double alpha,
                                      double p, double q, double theta, double r1, double r2, int count,
                                      std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    VerifyBatchResult out;
    const std::size_t nodes = 17;
    for (int c = 0; c < count; ++c) {
        const SpectralField base = random_test_field(grid, P, rng);
        const double T = uniform(rng, 0.5, 1.5);
        std::vector<double> times(nodes);
        TrajectoryRecord rec;
        rec.grid = grid;
        rec.alpha = alpha;
        rec.beta = 0.0;
        rec.p = p;
        rec.q = q;
        const double rate = uniform(rng, 0.2, 3.0);
        const double wob = uniform(rng, 0.0, 5.0);
        for (std::size_t i = 0; i < nodes; ++i) {
            times[i] = T * static_cast<double>(i) / static_cast<double>(nodes - 1);
            const double env = std::exp(-rate * times[i]) * (1.1 + std::sin(wob * times[i]));
            rec.append_time(times[i], scale(base, Complex{env, 0.0}), P);
        }
        const double beta = uniform(rng, -0.5, 0.5);
        out.ratios.push_back(verify_interpolation(rec, theta, r1, r2, FBNormParams{beta, p, q}, alpha));
    }
    out.max_ratio = *std::max_element(out.ratios.begin(), out.ratios.end());
    return out;
}

double fit_constant(const GridSpec& grid, const DyadicPartition& P, const PressureSpec& pressure,
                    double alpha, double p, double q, int count, std::uint64_t seed) {
    const auto a = apriori_batch(grid, P, alpha, p, q, count, seed);
    const auto b = bilinear_batch(grid, P, pressure, p, q, count, seed + 1);
    std::vector<double> all = a.ratios;
    all.insert(all.end(), b.ratios.begin(), b.ratios.end());
    return fit_global_constant(all);
}

}  // namespace fbpme
