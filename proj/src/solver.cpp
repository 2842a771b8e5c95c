#include "fbpme/solver.hpp"

#include "fbpme/ops.hpp"
#include "fbpme/transform.hpp"
#include "fbpme/wellposedness.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace fbpme {

double ModelParams::critical_index() const { return fbpme::critical_index(n, p, alpha, pressure.sigma); }

FBNormParams ModelParams::norm_params(double shift) const { return FBNormParams{critical_index() + shift, p, q}; }

void ModelParams::validate() const {
    if (!(alpha > 0.0)) throw std::invalid_argument("ModelParams: alpha must be > 0");
    if (nu != 1.0) throw std::invalid_argument("ModelParams: the model is posed with nu = 1");
    if (!(p >= 1.0) || !(q >= 1.0)) throw std::invalid_argument("ModelParams: p, q must be >= 1");
    if (n < 1 || n > 3) throw std::invalid_argument("ModelParams: n must be 1, 2 or 3");
}

void SolverConfig::validate() const {
    if (!(T > 0.0)) throw std::invalid_argument("SolverConfig: T must be > 0");
    if (dt < 0.0) throw std::invalid_argument("SolverConfig: dt must be >= 0");
    if (record_every < 1) throw std::invalid_argument("SolverConfig: record_every must be >= 1");
    if (picard_max_iter < 1) throw std::invalid_argument("SolverConfig: picard_max_iter must be >= 1");
    if (!(picard_tol > 0.0)) throw std::invalid_argument("SolverConfig: picard_tol must be > 0");
    if (picard_nodes < 2) throw std::invalid_argument("SolverConfig: picard_nodes must be >= 2");
}

double SolverConfig::effective_dt(const GridSpec& grid, double alpha) const {
    if (dt > 0.0) return dt;
    // Linear decay rate at the edge of the dealiased band.
    const double k_edge = grid.dxi() * (grid.N / 3.0);
    return 0.25 * std::pow(k_edge, -alpha);
}

NonlinearOp::NonlinearOp(const GridSpec& grid, const PressureSpec& pressure)
    : grid_(grid), symbol_(pressure_symbol(pressure, grid)) {
    const double dxi = grid.dxi();
    deriv_.assign(static_cast<std::size_t>(grid.n), std::vector<double>(static_cast<std::size_t>(grid.N)));
    for (int d = 0; d < grid.n; ++d)
        for (int k = 0; k < grid.N; ++k)
            deriv_[static_cast<std::size_t>(d)][static_cast<std::size_t>(k)] =
                k == grid.N / 2 ? 0.0 : dxi * grid.signed_index(k);
}

SpectralField NonlinearOp::apply(const SpectralField& u, const SpectralField& v) const {
    if (u.grid != grid_ || v.grid != grid_) throw std::invalid_argument("NonlinearOp: grid mismatch");
    const std::size_t sz = grid_.size();

    const RealField u_phys = inverse_transform_unchecked(u);
    SpectralField out(grid_);
    SpectralField comp(grid_);
    for (int d = 0; d < grid_.n; ++d) {
        const auto& xi_d = deriv_[static_cast<std::size_t>(d)];
        for (std::size_t i = 0; i < sz; ++i) {
            const auto k = grid_.unflatten(i);
            comp.coeffs[i] = Complex{0.0, xi_d[static_cast<std::size_t>(k[d])]} * symbol_[i] * v.coeffs[i];
        }
        RealField g = inverse_transform_unchecked(comp);
        for (std::size_t i = 0; i < sz; ++i) g.values[i] *= u_phys.values[i];
        SpectralField W = forward_transform(g);
        for (std::size_t i = 0; i < sz; ++i) {
            const auto k = grid_.unflatten(i);
            out.coeffs[i] += Complex{0.0, xi_d[static_cast<std::size_t>(k[d])]} * W.coeffs[i];
        }
    }
    out.coeffs[0] = Complex{0.0, 0.0};
    return dealias(out);
}

SpectralField nonlinear_term(const SpectralField& U, const ModelParams& params) {
    if (!all_finite(U))
        throw std::runtime_error("nonlinear_term: non-finite input (numerical blowup)");
    return NonlinearOp(U.grid, params.pressure)(U);
}

namespace {

std::size_t node_index_at(const std::vector<double>& times, double t) {
    for (std::size_t i = 0; i < times.size(); ++i)
        if (std::abs(times[i] - t) <= 1e-12 * std::max(1.0, std::abs(t))) return i;
    throw std::invalid_argument("duhamel: t must coincide with a stored time node");
}

}  // namespace

SpectralField duhamel(const std::vector<SpectralField>& u_traj, const std::vector<SpectralField>& v_traj,
                      const std::vector<double>& times, double t, const ModelParams& params) {
    if (u_traj.size() != times.size() || v_traj.size() != times.size())
        throw std::invalid_argument("duhamel: trajectory/times length mismatch");
    if (times.size() < 2) throw std::invalid_argument("duhamel: insufficient nodes");
    const std::size_t end = node_index_at(times, t);
    if (end == 0) return SpectralField(u_traj[0].grid);

    NonlinearOp op(u_traj[0].grid, params.pressure);
    const std::vector<double> sub(times.begin(), times.begin() + static_cast<long>(end) + 1);
    const std::vector<double> w = trapezoid_weights(sub);

    SpectralField acc(u_traj[0].grid);
    for (std::size_t k = 0; k <= end; ++k) {
        const SpectralField g = op.apply(u_traj[k], v_traj[k]);
        const SpectralField s = semigroup_apply(g, t - times[k], params.alpha);
        for (std::size_t i = 0; i < acc.coeffs.size(); ++i) acc.coeffs[i] += w[k] * s.coeffs[i];
    }
    return acc;
}

namespace {

// phi1(z) = (e^z - 1)/z, phi2(z) = (e^z - 1 - z)/z^2, Taylor near 0.
inline double phi1(double z) {
    if (std::abs(z) < 1e-4) return 1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0));
    return std::expm1(z) / z;
}
inline double phi2(double z) {
    if (std::abs(z) < 1e-4) return 0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z / 120.0));
    return (std::expm1(z) - z) / (z * z);
}

struct EtdTables {
    std::vector<double> decay, f1, f2;  // e^z, dt phi1(z), dt phi2(z)

    EtdTables(const GridSpec& g, double alpha, double dt) {
        const std::size_t sz = g.size();
        decay.resize(sz);
        f1.resize(sz);
        f2.resize(sz);
        for (std::size_t i = 0; i < sz; ++i) {
            const double z = -dt * std::pow(g.xi_norm2(i), 0.5 * alpha);
            decay[i] = std::exp(z);
            f1[i] = dt * phi1(z);
            f2[i] = dt * phi2(z);
        }
    }
};

}  // namespace

MarchResult time_march(const SpectralField& u0, const ModelParams& params, const SolverConfig& config,
                       const DyadicPartition& P, const RecordObserver& on_record) {
    params.validate();
    config.validate();
    if (u0.grid != P.grid) throw std::invalid_argument("time_march: grid mismatch");

    const GridSpec& g = u0.grid;
    const double dt = config.effective_dt(g, params.alpha);
    const std::size_t steps = static_cast<std::size_t>(std::ceil(config.T / dt - 1e-12));

    MarchResult res;
    res.record.grid = g;
    res.record.alpha = params.alpha;
    res.record.beta = params.critical_index();
    res.record.p = params.p;
    res.record.q = params.q;

    SpectralField u = dealias(u0);
    res.record.append_time(0.0, u, P);
    if (on_record) on_record(0.0, u);
    const double fb0 = res.record.fb_beta.front();
    const double ceiling = config.blowup_ceiling * std::max(fb0, 1e-300);

    NonlinearOp op(g, params.pressure);
    EtdTables tab(g, params.alpha, dt);
    std::unique_ptr<EtdTables> last_tab;  // built once if the final step is partial

    double t = 0.0;
    for (std::size_t step = 1; step <= steps; ++step) {
        double h = dt;
        const EtdTables* tabp = &tab;
        if (step == steps) {
            h = config.T - t;
            if (h <= 0.0) break;
            if (std::abs(h - dt) > 1e-12 * dt) {
                last_tab = std::make_unique<EtdTables>(g, params.alpha, h);
                tabp = last_tab.get();
            }
        }

        if (params.nonlinear) {
            const SpectralField f1 = op(u);
            SpectralField a(g);
            for (std::size_t i = 0; i < a.coeffs.size(); ++i)
                a.coeffs[i] = tabp->decay[i] * u.coeffs[i] + tabp->f1[i] * f1.coeffs[i];
            const SpectralField f2 = op(a);
            for (std::size_t i = 0; i < u.coeffs.size(); ++i)
                u.coeffs[i] = a.coeffs[i] + tabp->f2[i] * (f2.coeffs[i] - f1.coeffs[i]);
        } else {
            for (std::size_t i = 0; i < u.coeffs.size(); ++i) u.coeffs[i] *= tabp->decay[i];
        }
        t += h;

        if (!all_finite(u)) {
            res.status = RunStatus::Blown;
            res.record.status = RunStatus::Blown;
            res.record.blow_time = t;
            break;
        }
        if (step % static_cast<std::size_t>(config.record_every) == 0 || step == steps) {
            res.record.append_time(t, u, P);
            if (on_record) on_record(t, u);
            if (res.record.fb_beta.back() > ceiling) {
                res.status = RunStatus::Blown;
                res.record.status = RunStatus::Blown;
                res.record.blow_time = t;
                break;
            }
        }
    }

    res.final_field = std::move(u);
    res.end_time = t;
    res.steps = steps;
    return res;
}

PicardResult picard_solve(const SpectralField& u0, const ModelParams& params, const SolverConfig& config,
                          const DyadicPartition& P) {
    params.validate();
    config.validate();
    if (u0.grid != P.grid) throw std::invalid_argument("picard_solve: grid mismatch");

    const GridSpec& g = u0.grid;
    const std::size_t M = static_cast<std::size_t>(config.picard_nodes);
    std::vector<double> times(M);
    for (std::size_t i = 0; i < M; ++i) times[i] = config.T * static_cast<double>(i) / static_cast<double>(M - 1);

    const double beta = params.critical_index();
    const double x_index = beta + 0.5 * params.alpha;
    const FBNormParams x_params{x_index, params.p, params.q};

    // Linear trajectory S(t) u0, the Picard seed and the fixed y of x = y + B(x,x).
    const SpectralField u0d = dealias(u0);
    std::vector<SpectralField> linear(M);
    for (std::size_t i = 0; i < M; ++i) linear[i] = semigroup_apply(u0d, times[i], params.alpha);

    auto x_norm_of = [&](const std::vector<SpectralField>& traj) {
        TrajectoryRecord rec;
        rec.grid = g;
        rec.alpha = params.alpha;
        rec.beta = beta;
        rec.p = params.p;
        rec.q = params.q;
        for (std::size_t i = 0; i < M; ++i) rec.append_time(times[i], traj[i], P);
        return mixed_norm(rec, 2.0, x_params);
    };

    NonlinearOp op(g, params.pressure);
    PicardResult res;
    res.x_index = x_index;

    std::vector<SpectralField> cur = linear;
    double prev_increment = -1.0;
    int rising = 0;

    for (int it = 1; it <= config.picard_max_iter; ++it) {
        // g_k = div(u(t_k) grad(P u(t_k))) once per node, then the Duhamel
        // integral accumulates causally over the shared nodes.
        std::vector<SpectralField> rhs(M);
        bool finite = true;
        std::vector<SpectralField> forcing(M);
        for (std::size_t k = 0; k < M; ++k) {
            if (!all_finite(cur[k])) {
                finite = false;
                break;
            }
            forcing[k] = params.nonlinear ? op(cur[k]) : SpectralField(g);
        }
        if (!finite) {
            res.status = RunStatus::Blown;
            break;
        }

        const std::vector<double> w_full = trapezoid_weights(times);
        for (std::size_t i = 0; i < M; ++i) {
            rhs[i] = linear[i];
            if (i == 0) continue;
            const std::vector<double> sub(times.begin(), times.begin() + static_cast<long>(i) + 1);
            const std::vector<double> w = trapezoid_weights(sub);
            for (std::size_t k = 0; k <= i; ++k) {
                const SpectralField s = semigroup_apply(forcing[k], times[i] - times[k], params.alpha);
                for (std::size_t m = 0; m < rhs[i].coeffs.size(); ++m) rhs[i].coeffs[m] += w[k] * s.coeffs[m];
            }
        }

        std::vector<SpectralField> diff(M);
        for (std::size_t i = 0; i < M; ++i) {
            diff[i] = SpectralField(g);
            for (std::size_t m = 0; m < diff[i].coeffs.size(); ++m)
                diff[i].coeffs[m] = rhs[i].coeffs[m] - cur[i].coeffs[m];
        }
        const double inc = x_norm_of(diff);
        res.increment_norms.push_back(inc);
        if (prev_increment > 0.0) {
            const double ratio = inc / prev_increment;
            res.contraction_ratios.push_back(ratio);
            rising = ratio >= 1.0 ? rising + 1 : 0;
            if (rising >= 3) {
                res.status = RunStatus::Diverged;
                cur = std::move(rhs);
                res.iterations = it;
                break;
            }
        }
        prev_increment = inc;
        cur = std::move(rhs);
        res.iterations = it;

        const double sol_norm = x_norm_of(cur);
        if (inc <= config.picard_tol * std::max(sol_norm, 1e-300)) break;
    }

    res.solution_x_norm = x_norm_of(cur);

    res.record.grid = g;
    res.record.alpha = params.alpha;
    res.record.beta = beta;
    res.record.p = params.p;
    res.record.q = params.q;
    res.record.status = res.status;
    for (std::size_t i = 0; i < M; ++i) {
        if (!all_finite(cur[i])) {  // record stays finite up to the blowup flag
            res.record.blow_time = times[i];
            break;
        }
        res.record.append_time(times[i], cur[i], P);
    }
    res.final_field = cur.back();
    return res;
}

}  // namespace fbpme
