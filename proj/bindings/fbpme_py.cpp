#include "fbpme/estimates.hpp"
#include "fbpme/fieldgen.hpp"
#include "fbpme/harness.hpp"
#include "fbpme/io.hpp"
#include "fbpme/lp.hpp"
#include "fbpme/ops.hpp"
#include "fbpme/pressure.hpp"
#include "fbpme/solver.hpp"
#include "fbpme/transform.hpp"
#include "fbpme/wellposedness.hpp"

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace fbpme;

namespace {

std::vector<py::ssize_t> grid_shape(const GridSpec& g) {
    return std::vector<py::ssize_t>(static_cast<std::size_t>(g.n), g.N);
}

SpectralField spectral_from_array(const GridSpec& g, const py::array_t<std::complex<double>>& arr) {
    auto buf = arr.request();
    if (static_cast<std::size_t>(buf.size) != g.size())
        throw py::value_error("coefficient array does not match the grid size");
    SpectralField U(g);
    const auto* src = static_cast<const std::complex<double>*>(buf.ptr);
    std::copy(src, src + g.size(), U.coeffs.begin());
    return U;
}

py::array_t<std::complex<double>> spectral_to_array(const SpectralField& U) {
    py::array_t<std::complex<double>> arr(grid_shape(U.grid));
    std::copy(U.coeffs.begin(), U.coeffs.end(), static_cast<std::complex<double>*>(arr.request().ptr));
    return arr;
}

RealField real_from_array(const GridSpec& g, const py::array_t<double>& arr) {
    auto buf = arr.request();
    if (static_cast<std::size_t>(buf.size) != g.size())
        throw py::value_error("sample array does not match the grid size");
    RealField u(g);
    const auto* src = static_cast<const double*>(buf.ptr);
    std::copy(src, src + g.size(), u.values.begin());
    return u;
}

py::array_t<double> real_to_array(const RealField& u) {
    py::array_t<double> arr(grid_shape(u.grid));
    std::copy(u.values.begin(), u.values.end(), static_cast<double*>(arr.request().ptr));
    return arr;
}

py::dict record_to_dict(const TrajectoryRecord& rec) {
    py::dict d;
    d["times"] = py::array_t<double>(static_cast<py::ssize_t>(rec.times.size()), rec.times.data());
    d["j_values"] = rec.j_values;
    d["fb_beta"] = py::array_t<double>(static_cast<py::ssize_t>(rec.fb_beta.size()), rec.fb_beta.data());
    d["fb_beta_alpha"] =
        py::array_t<double>(static_cast<py::ssize_t>(rec.fb_beta_alpha.size()), rec.fb_beta_alpha.data());
    d["blowup_integral"] =
        py::array_t<double>(static_cast<py::ssize_t>(rec.blowup_integral.size()), rec.blowup_integral.data());
    d["mean_mode"] = py::array_t<std::complex<double>>(static_cast<py::ssize_t>(rec.mean_mode.size()),
                                                       rec.mean_mode.data());
    py::dict bn;
    for (std::size_t k = 0; k < rec.p_set.size(); ++k) {
        py::array_t<double> m({static_cast<py::ssize_t>(rec.n_times()), static_cast<py::ssize_t>(rec.n_blocks())});
        std::copy(rec.block_norms[k].begin(), rec.block_norms[k].end(), static_cast<double*>(m.request().ptr));
        bn[py::cast(rec.p_set[k])] = m;
    }
    d["block_norms"] = bn;
    d["alpha"] = rec.alpha;
    d["beta"] = rec.beta;
    d["p"] = rec.p;
    d["q"] = rec.q;
    d["status"] = to_string(rec.status);
    return d;
}

PressureSpec pressure_from_args(const std::string& kind, double s, double sigma,
                                const std::vector<double>& symbol) {
    if (kind == "riesz") return PressureSpec::riesz(s);
    if (kind == "identity") return PressureSpec::identity();
    if (kind == "exp_kernel") return PressureSpec::exp_kernel();
    if (kind == "custom") return PressureSpec::custom(symbol, sigma);
    throw py::value_error("pressure kind must be riesz|identity|exp_kernel|custom");
}

}  // namespace

PYBIND11_MODULE(_fbpme, m) {
    m.doc() = "Pseudo-spectral toolkit for the generalized porous medium equation in Fourier-Besov spaces";

    py::class_<GridSpec>(m, "Grid")
        .def(py::init<int, int, double>(), py::arg("n"), py::arg("N"), py::arg("L"))
        .def_readonly("n", &GridSpec::n)
        .def_readonly("N", &GridSpec::N)
        .def_readonly("L", &GridSpec::L)
        .def_property_readonly("dxi", &GridSpec::dxi)
        .def_property_readonly("dx", &GridSpec::dx)
        .def("size", &GridSpec::size)
        .def("__repr__", [](const GridSpec& g) {
            return "Grid(n=" + std::to_string(g.n) + ", N=" + std::to_string(g.N) +
                   ", L=" + std::to_string(g.L) + ")";
        });

    py::class_<DyadicPartition>(m, "DyadicPartition")
        .def_property_readonly("j_min", [](const DyadicPartition& P) { return P.j_min; })
        .def_property_readonly("j_max", [](const DyadicPartition& P) { return P.j_max; })
        .def_property_readonly("j_lo", [](const DyadicPartition& P) { return P.j_lo; })
        .def_property_readonly("j_hi", [](const DyadicPartition& P) { return P.j_hi; })
        .def("mask", [](const DyadicPartition& P, int j) {
            py::array_t<double> arr(grid_shape(P.grid));
            const auto& mk = P.mask(j);
            std::copy(mk.begin(), mk.end(), static_cast<double*>(arr.request().ptr));
            return arr;
        });

    py::class_<PressureSpec>(m, "PressureSpec")
        .def(py::init([](const std::string& kind, double s, double sigma, const std::vector<double>& symbol) {
                 return pressure_from_args(kind, s, sigma, symbol);
             }),
             py::arg("kind"), py::arg("s") = 0.5, py::arg("sigma") = 0.0,
             py::arg("symbol") = std::vector<double>{})
        .def_readonly("sigma", &PressureSpec::sigma)
        .def_readonly("s", &PressureSpec::s)
        .def_property_readonly("kind", &PressureSpec::kind_name);

    m.def("build_partition", &build_partition, py::arg("grid"));

    m.def(
        "forward",
        [](const GridSpec& g, const py::array_t<double>& u) { return spectral_to_array(forward_transform(real_from_array(g, u))); },
        py::arg("grid"), py::arg("values"));
    m.def(
        "inverse",
        [](const GridSpec& g, const py::array_t<std::complex<double>>& U) {
            return real_to_array(inverse_transform(spectral_from_array(g, U)));
        },
        py::arg("grid"), py::arg("coeffs"));

    m.def(
        "fractional_laplacian",
        [](const GridSpec& g, const py::array_t<std::complex<double>>& U, double alpha) {
            return spectral_to_array(fractional_laplacian(spectral_from_array(g, U), alpha));
        },
        py::arg("grid"), py::arg("coeffs"), py::arg("alpha"));
    m.def(
        "gradient",
        [](const GridSpec& g, const py::array_t<std::complex<double>>& U) {
            py::list out;
            for (const auto& comp : gradient(spectral_from_array(g, U))) out.append(spectral_to_array(comp));
            return out;
        },
        py::arg("grid"), py::arg("coeffs"));
    m.def(
        "divergence",
        [](const GridSpec& g, const std::vector<py::array_t<std::complex<double>>>& comps) {
            std::vector<SpectralField> V;
            V.reserve(comps.size());
            for (const auto& c : comps) V.push_back(spectral_from_array(g, c));
            return spectral_to_array(divergence(V));
        },
        py::arg("grid"), py::arg("components"));
    m.def(
        "dealias",
        [](const GridSpec& g, const py::array_t<std::complex<double>>& U) {
            return spectral_to_array(dealias(spectral_from_array(g, U)));
        },
        py::arg("grid"), py::arg("coeffs"));
    m.def(
        "semigroup_apply",
        [](const GridSpec& g, const py::array_t<std::complex<double>>& U, double t, double alpha) {
            return spectral_to_array(semigroup_apply(spectral_from_array(g, U), t, alpha));
        },
        py::arg("grid"), py::arg("coeffs"), py::arg("t"), py::arg("alpha"));

    m.def(
        "block",
        [](const GridSpec& g, const py::array_t<std::complex<double>>& U, int j, const DyadicPartition& P) {
            return spectral_to_array(block(spectral_from_array(g, U), j, P));
        },
        py::arg("grid"), py::arg("coeffs"), py::arg("j"), py::arg("partition"));
    m.def(
        "fb_norm",
        [](const GridSpec& g, const py::array_t<std::complex<double>>& U, double beta, double p, double q,
           const DyadicPartition& P) {
            return fb_norm(spectral_from_array(g, U), FBNormParams{beta, p, q}, P);
        },
        py::arg("grid"), py::arg("coeffs"), py::arg("beta"), py::arg("p"), py::arg("q"), py::arg("partition"));
    m.def(
        "paraproduct",
        [](const GridSpec& g, const py::array_t<std::complex<double>>& U,
           const py::array_t<std::complex<double>>& V, const DyadicPartition& P) {
            const Paraproduct bits = paraproduct(spectral_from_array(g, U), spectral_from_array(g, V), P);
            return py::make_tuple(spectral_to_array(bits.t_uv), spectral_to_array(bits.t_vu),
                                  spectral_to_array(bits.r_uv));
        },
        py::arg("grid"), py::arg("u"), py::arg("v"), py::arg("partition"));

    m.def(
        "pressure_symbol",
        [](const PressureSpec& spec, const GridSpec& g) {
            py::array_t<double> arr(grid_shape(g));
            const auto mval = pressure_symbol(spec, g);
            std::copy(mval.begin(), mval.end(), static_cast<double*>(arr.request().ptr));
            return arr;
        },
        py::arg("pressure"), py::arg("grid"));
    m.def(
        "pressure_gradient",
        [](const GridSpec& g, const py::array_t<std::complex<double>>& U, const PressureSpec& spec) {
            py::list out;
            for (const auto& comp : pressure_gradient(spectral_from_array(g, U), spec))
                out.append(spectral_to_array(comp));
            return out;
        },
        py::arg("grid"), py::arg("coeffs"), py::arg("pressure"));
    m.def(
        "estimate_sigma",
        [](const PressureSpec& spec, const GridSpec& g, const DyadicPartition& P, double p, bool high_only) {
            return estimate_sigma(spec, g, P, p, high_only ? SigmaFitWindow::HighHalf : SigmaFitWindow::AllBlocks);
        },
        py::arg("pressure"), py::arg("grid"), py::arg("partition"), py::arg("p") = 2.0,
        py::arg("high_only") = false);

    m.def("critical_index", &critical_index, py::arg("n"), py::arg("p"), py::arg("alpha"), py::arg("sigma"));
    m.def(
        "admissible",
        [](int n, double p, double alpha, double sigma, double r) {
            const IndexReport rep = admissible(n, p, alpha, sigma, r);
            py::dict d;
            d["beta"] = rep.beta;
            d["admissible_thm31"] = rep.admissible_thm;
            d["admissible_improved"] = rep.admissible_improved;
            d["lower_thm31"] = rep.lower_thm;
            d["lower_improved"] = rep.lower_improved;
            d["upper"] = rep.upper;
            d["r"] = rep.r_used;
            d["rationale"] = rep.rationale;
            return d;
        },
        py::arg("n"), py::arg("p"), py::arg("alpha"), py::arg("sigma"), py::arg("r") = 2.0);
    m.def(
        "split_frequency",
        [](const GridSpec& g, const py::array_t<std::complex<double>>& U, double lambda) {
            auto [low, high] = split_frequency(spectral_from_array(g, U), lambda);
            return py::make_tuple(spectral_to_array(low), spectral_to_array(high));
        },
        py::arg("grid"), py::arg("coeffs"), py::arg("lambda_"));
    m.def(
        "local_time_bound",
        [](double u0_norm, double lambda, double alpha, double c_fit, double r) {
            const LocalTimeBound b = local_time_bound(u0_norm, lambda, alpha, c_fit, r);
            py::dict d;
            d["T_r2"] = b.T_r2;
            d["T_improved"] = b.T_improved;
            return d;
        },
        py::arg("u0_norm"), py::arg("lambda_"), py::arg("alpha"), py::arg("c_fit"), py::arg("r") = 2.0);

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init([](double alpha, const PressureSpec& pressure, int n, double p, double q, bool nonlinear) {
                 ModelParams mp;
                 mp.alpha = alpha;
                 mp.pressure = pressure;
                 mp.n = n;
                 mp.p = p;
                 mp.q = q;
                 mp.nonlinear = nonlinear;
                 mp.validate();
                 return mp;
             }),
             py::arg("alpha"), py::arg("pressure"), py::arg("n") = 1, py::arg("p") = 2.0, py::arg("q") = 1.0,
             py::arg("nonlinear") = true)
        .def_readonly("alpha", &ModelParams::alpha)
        .def_property_readonly("beta", &ModelParams::critical_index);

    py::class_<SolverConfig>(m, "SolverConfig")
        .def(py::init([](double T, double dt, int record_every, int picard_max_iter, double picard_tol,
                         int picard_nodes, double blowup_ceiling) {
                 SolverConfig c;
                 c.T = T;
                 c.dt = dt;
                 c.record_every = record_every;
                 c.picard_max_iter = picard_max_iter;
                 c.picard_tol = picard_tol;
                 c.picard_nodes = picard_nodes;
                 c.blowup_ceiling = blowup_ceiling;
                 c.validate();
                 return c;
             }),
             py::arg("T"), py::arg("dt") = 0.0, py::arg("record_every") = 10, py::arg("picard_max_iter") = 40,
             py::arg("picard_tol") = 1e-10, py::arg("picard_nodes") = 64, py::arg("blowup_ceiling") = 1e8);

    m.def(
        "nonlinear_term",
        [](const GridSpec& g, const py::array_t<std::complex<double>>& U, const ModelParams& params) {
            return spectral_to_array(nonlinear_term(spectral_from_array(g, U), params));
        },
        py::arg("grid"), py::arg("coeffs"), py::arg("params"));

    m.def(
        "time_march",
        [](const GridSpec& g, const py::array_t<std::complex<double>>& U0, const ModelParams& params,
           const SolverConfig& config, const DyadicPartition& P) {
            const MarchResult res = time_march(spectral_from_array(g, U0), params, config, P);
            py::dict d;
            d["record"] = record_to_dict(res.record);
            d["final"] = spectral_to_array(res.final_field);
            d["status"] = to_string(res.status);
            d["end_time"] = res.end_time;
            d["steps"] = res.steps;
            return d;
        },
        py::arg("grid"), py::arg("u0"), py::arg("params"), py::arg("config"), py::arg("partition"));
    m.def(
        "picard_solve",
        [](const GridSpec& g, const py::array_t<std::complex<double>>& U0, const ModelParams& params,
           const SolverConfig& config, const DyadicPartition& P) {
            const PicardResult res = picard_solve(spectral_from_array(g, U0), params, config, P);
            py::dict d;
            d["record"] = record_to_dict(res.record);
            d["final"] = spectral_to_array(res.final_field);
            d["status"] = to_string(res.status);
            d["iterations"] = res.iterations;
            d["contraction_ratios"] = res.contraction_ratios;
            d["solution_x_norm"] = res.solution_x_norm;
            d["x_index"] = res.x_index;
            return d;
        },
        py::arg("grid"), py::arg("u0"), py::arg("params"), py::arg("config"), py::arg("partition"));

    m.def(
        "fit_constant",
        [](const GridSpec& g, const DyadicPartition& P, const PressureSpec& pressure, double alpha, double p,
           double q, int count, std::uint64_t seed) {
            return fit_constant(g, P, pressure, alpha, p, q, count, seed);
        },
        py::arg("grid"), py::arg("partition"), py::arg("pressure"), py::arg("alpha"), py::arg("p") = 2.0,
        py::arg("q") = 1.0, py::arg("count") = 16, py::arg("seed") = 2024);

    m.def("write_snapshot",
          [](const std::string& path, const GridSpec& g, const py::array_t<std::complex<double>>& U) {
              write_field_snapshot(path, spectral_from_array(g, U));
          });
    m.def("read_snapshot", [](const std::string& path) {
        const SpectralField U = read_field_snapshot(path);
        return py::make_tuple(U.grid, spectral_to_array(U));
    });

    m.attr("inf") = kInf;
    m.attr("__version__") = "0.1.0";
}
