#include "fbpme/lp.hpp"

#include "fbpme/ops.hpp"
#include "fbpme/transform.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace fbpme {

namespace {

// C-infinity transition: 0 for t <= 0, 1 for t >= 1.
double smooth_step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / t);
    const double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

}  // namespace

double lowpass_profile(double r) {
    constexpr double lo = 0.75, hi = 4.0 / 3.0;
    return 1.0 - smooth_step((std::abs(r) - lo) / (hi - lo));
}

double bump_profile(double r) { return lowpass_profile(0.5 * r) - lowpass_profile(r); }

const std::vector<double>& DyadicPartition::mask(int j) const {
    if (!in_stored(j)) throw std::out_of_range("DyadicPartition::mask: block outside stored band");
    return masks[static_cast<std::size_t>(j - j_lo)];
}

const std::vector<double>& DyadicPartition::lowpass_mask(int j) const {
    if (j < j_lo - 1 || j > j_hi + 1)
        throw std::out_of_range("DyadicPartition::lowpass_mask: outside stored band");
    return lowpasses[static_cast<std::size_t>(j - (j_lo - 1))];
}

double DyadicPartition::resolved_xi_min() const { return (4.0 / 3.0) * std::ldexp(1.0, j_min); }
double DyadicPartition::resolved_xi_max() const { return 1.5 * std::ldexp(1.0, j_max); }

DyadicPartition build_partition(const GridSpec& grid) {
    grid.validate();
    DyadicPartition P;
    P.grid = grid;

    const double dxi = grid.dxi();
    const double nyq = dxi * (grid.N / 2);

    // Resolved band: annulus [3/4, 8/3] 2^j fully inside the lattice ball.
    P.j_min = static_cast<int>(std::ceil(std::log2((4.0 / 3.0) * dxi) - 1e-12));
    P.j_max = static_cast<int>(std::floor(std::log2(nyq * 3.0 / 8.0) + 1e-12));
    if (P.resolved_count() < 3)
        throw std::runtime_error("build_partition: grid too coarse to host >= 3 dyadic blocks");

    // Stored band: wide enough that the masks cover every nonzero lattice
    // mode, i.e. sum to 1 from the lowest shell |xi| = dxi out to the corner.
    P.j_lo = static_cast<int>(std::floor(std::log2(0.75 * dxi) + 1e-12));
    P.j_hi = static_cast<int>(std::ceil(std::log2(grid.xi_max() * 2.0 / 3.0) - 1e-12));

    const std::size_t sz = grid.size();
    std::vector<double> radius(sz);
    for (std::size_t i = 0; i < sz; ++i) radius[i] = std::sqrt(grid.xi_norm2(i));

    P.masks.assign(static_cast<std::size_t>(P.stored_count()), std::vector<double>(sz, 0.0));
    for (int j = P.j_lo; j <= P.j_hi; ++j) {
        const double inv = std::ldexp(1.0, -j);
        auto& m = P.masks[static_cast<std::size_t>(j - P.j_lo)];
        for (std::size_t i = 0; i < sz; ++i) m[i] = bump_profile(radius[i] * inv);
    }

    P.lowpasses.assign(static_cast<std::size_t>(P.stored_count() + 2), std::vector<double>(sz, 0.0));
    for (int j = P.j_lo - 1; j <= P.j_hi + 1; ++j) {
        const double inv = std::ldexp(1.0, -j);
        auto& m = P.lowpasses[static_cast<std::size_t>(j - (P.j_lo - 1))];
        for (std::size_t i = 0; i < sz; ++i) m[i] = lowpass_profile(radius[i] * inv);
    }

    // Partition of unity on the whole lattice minus the mean mode.
    for (std::size_t i = 1; i < sz; ++i) {
        double s = 0.0;
        for (const auto& m : P.masks) s += m[i];
        if (std::abs(s - 1.0) > 1e-12)
            throw std::logic_error("build_partition: partition of unity failed at a lattice mode");
    }
    return P;
}

SpectralField block(const SpectralField& U, int j, const DyadicPartition& P) {
    if (U.grid != P.grid) throw std::invalid_argument("block: grid mismatch");
    SpectralField R(U.grid);
    if (!P.in_stored(j)) {
        std::fprintf(stderr, "fbpme: block index %d outside stored band [%d, %d]; returning zero field\n",
                     j, P.j_lo, P.j_hi);
        return R;
    }
    const auto& m = P.mask(j);
    for (std::size_t i = 0; i < R.coeffs.size(); ++i) R.coeffs[i] = U.coeffs[i] * m[i];
    return R;
}

SpectralField lowpass(const SpectralField& U, int j, const DyadicPartition& P) {
    if (U.grid != P.grid) throw std::invalid_argument("lowpass: grid mismatch");
    SpectralField R(U.grid);
    if (j < P.j_lo - 1) {  // mean mode only
        R.coeffs[0] = U.coeffs[0];
        return R;
    }
    if (j > P.j_hi + 1) return U;
    const auto& m = P.lowpass_mask(j);
    for (std::size_t i = 0; i < R.coeffs.size(); ++i) R.coeffs[i] = U.coeffs[i] * m[i];
    return R;
}

void FBNormParams::validate() const {
    if (!(p >= 1.0)) throw std::invalid_argument("FBNormParams: p must be >= 1");
    if (!(q >= 1.0)) throw std::invalid_argument("FBNormParams: q must be >= 1");
}

double block_lp_norm(const SpectralField& U, int j, double p, const DyadicPartition& P) {
    if (U.grid != P.grid) throw std::invalid_argument("block_lp_norm: grid mismatch");
    if (!P.in_stored(j)) return 0.0;
    const auto& m = P.mask(j);
    if (p == kInf) {
        double mx = 0.0;
        for (std::size_t i = 0; i < U.coeffs.size(); ++i) mx = std::max(mx, m[i] * std::abs(U.coeffs[i]));
        return mx;
    }
    const double cell = std::pow(U.grid.dxi(), U.grid.n);
    double s = 0.0;
    for (std::size_t i = 0; i < U.coeffs.size(); ++i) {
        const double a = m[i] * std::abs(U.coeffs[i]);
        if (a != 0.0) s += std::pow(a, p);
    }
    return std::pow(s * cell, 1.0 / p);
}

namespace {

double lq_accumulate(const std::vector<double>& weighted, double q) {
    if (q == kInf) {
        double mx = 0.0;
        for (double v : weighted) mx = std::max(mx, v);
        return mx;
    }
    double s = 0.0;
    for (double v : weighted)
        if (v != 0.0) s += std::pow(v, q);
    return std::pow(s, 1.0 / q);
}

}  // namespace

FBNormDetail fb_norm_detail(const SpectralField& U, const FBNormParams& params, const DyadicPartition& P) {
    params.validate();
    FBNormDetail d;
    std::vector<double> weighted;
    weighted.reserve(static_cast<std::size_t>(P.resolved_count()));
    for (int j = P.j_min; j <= P.j_max; ++j) {
        const double b = block_lp_norm(U, j, params.p, P);
        d.block_values.push_back(b);
        weighted.push_back(std::pow(2.0, params.beta * j) * b);
    }
    d.value = lq_accumulate(weighted, params.q);

    // l2 coefficient mass not covered by resolved blocks (mean mode excluded).
    double total = 0.0, outside = 0.0;
    for (std::size_t i = 1; i < U.coeffs.size(); ++i) {
        double cov = 0.0;
        for (int j = P.j_min; j <= P.j_max; ++j) cov += P.mask(j)[i];
        cov = std::clamp(cov, 0.0, 1.0);
        const double e = std::norm(U.coeffs[i]);
        total += e;
        outside += e * (1.0 - cov);
    }
    d.tail_mass = total > 0.0 ? std::sqrt(outside / total) : 0.0;
    return d;
}

double fb_norm(const SpectralField& U, const FBNormParams& params, const DyadicPartition& P) {
    params.validate();
    std::vector<double> weighted;
    weighted.reserve(static_cast<std::size_t>(P.resolved_count()));
    for (int j = P.j_min; j <= P.j_max; ++j)
        weighted.push_back(std::pow(2.0, params.beta * j) * block_lp_norm(U, j, params.p, P));
    return lq_accumulate(weighted, params.q);
}

std::string to_string(RunStatus s) {
    switch (s) {
        case RunStatus::Completed: return "completed";
        case RunStatus::Blown: return "blown";
        case RunStatus::Diverged: return "diverged";
    }
    return "unknown";
}

std::size_t TrajectoryRecord::p_index(double pv) const {
    for (std::size_t k = 0; k < p_set.size(); ++k)
        if (p_set[k] == pv) return k;
    throw std::invalid_argument("TrajectoryRecord: block norms were not stored for requested p");
}

void TrajectoryRecord::append_time(double t, const SpectralField& U, const DyadicPartition& P) {
    if (!times.empty() && t <= times.back())
        throw std::invalid_argument("TrajectoryRecord: times must be strictly increasing");
    if (j_values.empty()) {
        for (int j = P.j_min; j <= P.j_max; ++j) j_values.push_back(j);
        if (p_set.empty()) {
            p_set = {1.0, 2.0, kInf};
            if (std::find(p_set.begin(), p_set.end(), p) == p_set.end()) p_set.push_back(p);
        }
        block_norms.assign(p_set.size(), {});
    }
    times.push_back(t);
    for (std::size_t k = 0; k < p_set.size(); ++k)
        for (int j = P.j_min; j <= P.j_max; ++j)
            block_norms[k].push_back(block_lp_norm(U, j, p_set[k], P));

    fb_beta.push_back(fb_norm(U, FBNormParams{beta, p, q}, P));
    fb_beta_alpha.push_back(fb_norm(U, FBNormParams{beta + alpha, p, q}, P));
    mean_mode.push_back(U.mean_mode());

    if (blowup_integral.empty()) {
        blowup_integral.push_back(0.0);
    } else {
        const std::size_t m = times.size() - 1;
        const double dt = times[m] - times[m - 1];
        blowup_integral.push_back(blowup_integral.back() +
                                  0.5 * dt * (fb_beta_alpha[m] + fb_beta_alpha[m - 1]));
    }
}

std::vector<double> trapezoid_weights(const std::vector<double>& t) {
    if (t.size() < 2) throw std::invalid_argument("trapezoid_weights: need at least 2 samples");
    std::vector<double> w(t.size(), 0.0);
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        const double h = t[i + 1] - t[i];
        if (!(h > 0.0)) throw std::invalid_argument("trapezoid_weights: times must increase");
        w[i] += 0.5 * h;
        w[i + 1] += 0.5 * h;
    }
    return w;
}

namespace {

double time_lr_norm(const std::vector<double>& samples, const std::vector<double>& w, double r) {
    if (r == kInf) {
        double mx = 0.0;
        for (double v : samples) mx = std::max(mx, v);
        return mx;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i)
        if (samples[i] != 0.0) s += w[i] * std::pow(samples[i], r);
    return std::pow(s, 1.0 / r);
}

}  // namespace

double mixed_norm(const TrajectoryRecord& rec, double r, const FBNormParams& params) {
    params.validate();
    if (rec.times.empty()) throw std::invalid_argument("mixed_norm: empty trajectory");
    if (r != kInf && rec.times.size() < 2)
        throw std::invalid_argument("mixed_norm: single time sample with finite r");
    const std::vector<double> w = r == kInf ? std::vector<double>{} : trapezoid_weights(rec.times);
    const std::size_t pk = rec.p_index(params.p);

    std::vector<double> weighted;
    weighted.reserve(rec.n_blocks());
    std::vector<double> series(rec.n_times());
    for (std::size_t jx = 0; jx < rec.n_blocks(); ++jx) {
        for (std::size_t tx = 0; tx < rec.n_times(); ++tx) series[tx] = rec.block_norm(pk, tx, jx);
        weighted.push_back(std::pow(2.0, params.beta * rec.j_values[jx]) * time_lr_norm(series, w, r));
    }
    return lq_accumulate(weighted, params.q);
}

double mixed_norm_plain(const TrajectoryRecord& rec, double r, const FBNormParams& params) {
    params.validate();
    if (rec.times.empty()) throw std::invalid_argument("mixed_norm_plain: empty trajectory");
    if (r != kInf && rec.times.size() < 2)
        throw std::invalid_argument("mixed_norm_plain: single time sample with finite r");
    const std::size_t pk = rec.p_index(params.p);

    std::vector<double> fb(rec.n_times());
    std::vector<double> weighted(rec.n_blocks());
    for (std::size_t tx = 0; tx < rec.n_times(); ++tx) {
        for (std::size_t jx = 0; jx < rec.n_blocks(); ++jx)
            weighted[jx] = std::pow(2.0, params.beta * rec.j_values[jx]) * rec.block_norm(pk, tx, jx);
        fb[tx] = lq_accumulate(weighted, params.q);
    }
    const std::vector<double> w = r == kInf ? std::vector<double>{} : trapezoid_weights(rec.times);
    return time_lr_norm(fb, w, r);
}

namespace {

RealField to_physical_masked(const SpectralField& U, const std::vector<double>& mask) {
    SpectralField M(U.grid);
    for (std::size_t i = 0; i < M.coeffs.size(); ++i) M.coeffs[i] = U.coeffs[i] * mask[i];
    return inverse_transform_unchecked(M);
}

}  // namespace

Paraproduct paraproduct(const SpectralField& u, const SpectralField& v, const DyadicPartition& P) {
    if (u.grid != v.grid || u.grid != P.grid) throw std::invalid_argument("paraproduct: grid mismatch");
    const GridSpec& g = u.grid;
    const int J = P.stored_count();

    // Physical-space blocks and low-passes, one array per stored j.
    std::vector<RealField> du, dv, su, sv;
    du.reserve(J);
    dv.reserve(J);
    su.reserve(J);
    sv.reserve(J);
    for (int j = P.j_lo; j <= P.j_hi; ++j) {
        du.push_back(to_physical_masked(u, P.mask(j)));
        dv.push_back(to_physical_masked(v, P.mask(j)));
        su.push_back(to_physical_masked(u, P.lowpass_mask(j - 1)));
        sv.push_back(to_physical_masked(v, P.lowpass_mask(j - 1)));
    }

    RealField acc_uv(g), acc_vu(g), acc_r(g);
    const std::size_t sz = g.size();
    for (int jx = 0; jx < J; ++jx) {
        // Delta~_j v = Delta_{j-1} v + Delta_j v + Delta_{j+1} v, clamped to
        // the stored band (blocks outside it vanish on the lattice).
        for (std::size_t i = 0; i < sz; ++i) {
            double tilde = dv[jx].values[i];
            if (jx > 0) tilde += dv[jx - 1].values[i];
            if (jx + 1 < J) tilde += dv[jx + 1].values[i];
            acc_uv.values[i] += su[jx].values[i] * dv[jx].values[i];
            acc_vu.values[i] += sv[jx].values[i] * du[jx].values[i];
            acc_r.values[i] += du[jx].values[i] * tilde;
        }
    }

    Paraproduct out;
    out.t_uv = dealias(forward_transform(acc_uv));
    out.t_vu = dealias(forward_transform(acc_vu));
    out.r_uv = dealias(forward_transform(acc_r));
    return out;
}

}  // namespace fbpme
