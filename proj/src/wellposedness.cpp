#include "fbpme/wellposedness.hpp"

#include "fbpme/ops.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace fbpme {

double critical_index(int n, double p, double alpha, double sigma) {
    if (!(p >= 1.0)) throw std::invalid_argument("critical_index: p must be >= 1");
    const double inv_p = p == kInf ? 0.0 : 1.0 / p;
    return n * (1.0 - inv_p) - alpha + sigma + 1.0;
}

IndexReport admissible(int n, double p, double alpha, double sigma, double r) {
    if (!(r > 1.0)) throw std::invalid_argument("admissible: r must be > 1");
    IndexReport rep;
    rep.beta = critical_index(n, p, alpha, sigma);
    rep.r_used = r;

    const double inv_p = p == kInf ? 0.0 : 1.0 / p;
    const double base = std::max(1.0, sigma + 1.0);
    const double r_conj = r == kInf ? 1.0 : r / (r - 1.0);
    rep.lower_thm = 2.0 * base;
    rep.lower_improved = r_conj * base;
    rep.upper = n * (1.0 - inv_p) + sigma + 2.0;

    rep.admissible_thm = rep.lower_thm < alpha && alpha < rep.upper;
    rep.admissible_improved = rep.lower_improved < alpha && alpha < rep.upper;

    if (rep.admissible_improved) {
        rep.rationale = rep.admissible_thm ? "inside both ranges" : "inside improved range only";
    } else if (alpha <= rep.lower_improved) {
        rep.rationale = "alpha at or below the dissipation floor r' max{1, sigma+1}";
    } else {
        rep.rationale = "alpha at or above the scaling ceiling n(1-1/p) + sigma + 2";
    }
    return rep;
}

SmallnessReport smallness_check(const SpectralField& u0, const FBNormParams& params,
                                const DyadicPartition& P, double c_fit) {
    if (!(c_fit > 0.0)) throw std::invalid_argument("smallness_check: c_fit must be > 0");
    SmallnessReport rep;
    rep.norm = fb_norm(u0, params, P);
    rep.threshold = 1.0 / (4.0 * c_fit * c_fit);
    rep.margin = rep.norm == 0.0 ? kInf : rep.threshold / rep.norm;
    rep.small_enough = rep.norm <= rep.threshold;
    return rep;
}

std::pair<SpectralField, SpectralField> split_frequency(const SpectralField& u0, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("split_frequency: lambda must be > 0");
    SpectralField low(u0.grid), high(u0.grid);
    for (std::size_t i = 0; i < u0.coeffs.size(); ++i) {
        if (std::sqrt(u0.grid.xi_norm2(i)) <= lambda)
            low.coeffs[i] = u0.coeffs[i];
        else
            high.coeffs[i] = u0.coeffs[i];
    }
    return {std::move(low), std::move(high)};
}

double choose_lambda(const SpectralField& u0, const FBNormParams& params, const DyadicPartition& P,
                     double c_fit) {
    if (!(c_fit > 0.0)) throw std::invalid_argument("choose_lambda: c_fit must be > 0");
    const double target = 1.0 / (8.0 * c_fit);

    // The high-part norm is a step function of lambda, jumping only at
    // lattice radii; bisect over the sorted distinct radii.
    std::set<double> radii_set;
    for (std::size_t i = 1; i < u0.coeffs.size(); ++i)
        radii_set.insert(std::sqrt(u0.grid.xi_norm2(i)));
    std::vector<double> radii(radii_set.begin(), radii_set.end());

    auto high_norm = [&](double lambda) {
        return fb_norm(split_frequency(u0, lambda).second, params, P);
    };

    if (high_norm(radii.front()) <= target) {
        // Even cutting only the lowest shell suffices.
        return radii.front();
    }
    std::size_t lo = 0, hi = radii.size() - 1;  // invariant: high_norm(radii[hi]) <= target
    if (high_norm(radii[hi]) > target)
        throw std::runtime_error("choose_lambda: no lattice cutoff meets the target (c_fit too large)");
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (high_norm(radii[mid]) <= target)
            hi = mid;
        else
            lo = mid;
    }
    return radii[hi];
}

LocalTimeBound local_time_bound(double u0_norm, double lambda, double alpha, double c_fit, double r) {
    if (!(u0_norm > 0.0)) throw std::invalid_argument("local_time_bound: u0 norm must be > 0");
    if (!(lambda > 0.0) || !(c_fit > 0.0)) throw std::invalid_argument("local_time_bound: bad lambda or c_fit");
    if (!(r > 1.0)) throw std::invalid_argument("local_time_bound: r must be > 1");

    LocalTimeBound b;
    const double c2 = c_fit * c_fit;
    b.T_r2 = std::pow(1.0 / (8.0 * c2 * std::pow(lambda, 0.5 * alpha) * u0_norm), 2.0);

    const double r_conj = r == kInf ? 1.0 : r / (r - 1.0);
    const double t1 = std::pow(1.0 / (16.0 * c2 * std::pow(lambda, alpha / r) * u0_norm), r);
    const double t2 = std::pow(1.0 / (16.0 * c2 * std::pow(lambda, alpha / r_conj) * u0_norm), r_conj);
    b.T_improved = std::min(t1, t2);
    return b;
}

std::string to_string(BlowupStatus s) {
    switch (s) {
        case BlowupStatus::Bounded: return "bounded";
        case BlowupStatus::Growing: return "growing";
        case BlowupStatus::Blown: return "blown";
    }
    return "unknown";
}

BlowupReport blowup_monitor(const TrajectoryRecord& rec) {
    BlowupReport rep;
    if (rec.blowup_integral.empty()) return rep;
    rep.integral = rec.blowup_integral.back();

    if (rec.status == RunStatus::Blown) {
        rep.status = BlowupStatus::Blown;
    } else if (rec.times.size() >= 4) {
        // Slope of the integral over the last three recorded windows.
        const std::size_t m = rec.times.size();
        double slopes[3];
        for (int w = 0; w < 3; ++w) {
            const double ta = rec.times[m - 4 + w], tb = rec.times[m - 3 + w];
            slopes[w] = (rec.blowup_integral[m - 3 + w] - rec.blowup_integral[m - 4 + w]) /
                        std::max(tb - ta, 1e-300);
        }
        if (slopes[0] < slopes[1] && slopes[1] < slopes[2]) rep.status = BlowupStatus::Growing;
        rep.last_slope = slopes[2];
    }
    return rep;
}

}  // namespace fbpme
