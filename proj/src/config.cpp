#include "fbpme/config.hpp"

#include "fbpme/fieldgen.hpp"
#include "fbpme/io.hpp"
#include "fbpme/ops.hpp"
#include "fbpme/transform.hpp"

#include <fstream>
#include <set>

namespace fbpme {

namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path + ": expected an object");
}

void check_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
    require_object(j, path);
    for (const auto& item : j.items()) {
        if (!allowed.count(item.key()))
            throw ConfigError(path.empty() ? item.key() + ": unknown key" : path + "." + item.key() + ": unknown key");
    }
}

const json& require(const json& j, const std::string& path, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError(path + "." + key + ": missing required key");
    return *it;
}

double number_at(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path + ": expected a number");
    return j.get<double>();
}

int int_at(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ConfigError(path + ": expected an integer");
    return j.get<int>();
}

bool bool_at(const json& j, const std::string& path) {
    if (!j.is_boolean()) throw ConfigError(path + ": expected a boolean");
    return j.get<bool>();
}

std::string string_at(const json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError(path + ": expected a string");
    return j.get<std::string>();
}

// Lebesgue exponents: a number >= 1 or the string "inf".
double exponent_at(const json& j, const std::string& path) {
    if (j.is_string()) {
        if (j.get<std::string>() == "inf") return kInf;
        throw ConfigError(path + ": expected a number or \"inf\"");
    }
    const double v = number_at(j, path);
    if (!(v >= 1.0)) throw ConfigError(path + ": exponent must be >= 1");
    return v;
}

PressureSpec parse_pressure(const json& j, const std::string& path, std::size_t lattice_size) {
    check_keys(j, path, {"kind", "s", "sigma", "path"});
    const std::string kind = string_at(require(j, path, "kind"), path + ".kind");
    if (kind == "riesz") {
        if (!j.contains("s")) throw ConfigError(path + ".s: riesz pressure requires s");
        return PressureSpec::riesz(number_at(j["s"], path + ".s"));
    }
    if (kind == "identity") return PressureSpec::identity();
    if (kind == "exp_kernel") return PressureSpec::exp_kernel();
    if (kind == "custom") {
        if (!j.contains("sigma")) throw ConfigError(path + ".sigma: custom pressure requires sigma");
        if (!j.contains("path")) throw ConfigError(path + ".path: custom pressure requires a symbol CSV");
        return PressureSpec::custom_from_csv(string_at(j["path"], path + ".path"),
                                             number_at(j["sigma"], path + ".sigma"), lattice_size);
    }
    throw ConfigError(path + ".kind: unknown value \"" + kind + "\" (riesz|identity|exp_kernel|custom)");
}

}  // namespace

RunConfig parse_run_config(const json& doc) {
    check_keys(doc, "", {"grid", "model", "solver", "initial_data", "output"});
    RunConfig cfg;

    {
        const json& g = require(doc, "config", "grid");
        check_keys(g, "grid", {"n", "N", "L"});
        const int n = int_at(require(g, "grid", "n"), "grid.n");
        const int N = int_at(require(g, "grid", "N"), "grid.N");
        const double L = number_at(require(g, "grid", "L"), "grid.L");
        try {
            cfg.grid = GridSpec(n, N, L);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("grid: ") + e.what());
        }
    }

    {
        const json& m = require(doc, "config", "model");
        check_keys(m, "model", {"alpha", "pressure", "norm", "nonlinear"});
        cfg.model.n = cfg.grid.n;
        cfg.model.alpha = number_at(require(m, "model", "alpha"), "model.alpha");
        if (!(cfg.model.alpha > 0.0)) throw ConfigError("model.alpha: must be > 0");
        try {
            cfg.model.pressure = parse_pressure(require(m, "model", "pressure"), "model.pressure", cfg.grid.size());
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("model.pressure: ") + e.what());
        }
        if (m.contains("norm")) {
            check_keys(m["norm"], "model.norm", {"p", "q"});
            if (m["norm"].contains("p")) cfg.model.p = exponent_at(m["norm"]["p"], "model.norm.p");
            if (m["norm"].contains("q")) cfg.model.q = exponent_at(m["norm"]["q"], "model.norm.q");
        }
        if (m.contains("nonlinear")) cfg.model.nonlinear = bool_at(m["nonlinear"], "model.nonlinear");
    }

    {
        const json& s = require(doc, "config", "solver");
        check_keys(s, "solver", {"T", "dt", "record_every", "method", "picard", "blowup_ceiling"});
        cfg.solver.T = number_at(require(s, "solver", "T"), "solver.T");
        if (s.contains("dt")) cfg.solver.dt = number_at(s["dt"], "solver.dt");
        if (s.contains("record_every")) cfg.solver.record_every = int_at(s["record_every"], "solver.record_every");
        if (s.contains("blowup_ceiling"))
            cfg.solver.blowup_ceiling = number_at(s["blowup_ceiling"], "solver.blowup_ceiling");
        if (s.contains("method")) {
            const std::string m = string_at(s["method"], "solver.method");
            if (m == "march")
                cfg.method = RunMethod::March;
            else if (m == "picard")
                cfg.method = RunMethod::Picard;
            else
                throw ConfigError("solver.method: unknown value \"" + m + "\" (march|picard)");
        }
        if (s.contains("picard")) {
            const json& pc = s["picard"];
            check_keys(pc, "solver.picard", {"max_iter", "tol", "nodes"});
            if (pc.contains("max_iter")) cfg.solver.picard_max_iter = int_at(pc["max_iter"], "solver.picard.max_iter");
            if (pc.contains("tol")) cfg.solver.picard_tol = number_at(pc["tol"], "solver.picard.tol");
            if (pc.contains("nodes")) cfg.solver.picard_nodes = int_at(pc["nodes"], "solver.picard.nodes");
        }
        try {
            cfg.solver.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("solver: ") + e.what());
        }
    }

    {
        const json& i = require(doc, "config", "initial_data");
        check_keys(i, "initial_data", {"kind", "amplitude", "width", "j", "seed", "path"});
        const std::string kind = string_at(require(i, "initial_data", "kind"), "initial_data.kind");
        if (kind == "gaussian")
            cfg.initial.kind = InitialKind::Gaussian;
        else if (kind == "block_bump")
            cfg.initial.kind = InitialKind::BlockBump;
        else if (kind == "file")
            cfg.initial.kind = InitialKind::File;
        else
            throw ConfigError("initial_data.kind: unknown value \"" + kind + "\" (gaussian|block_bump|file)");
        if (i.contains("amplitude")) cfg.initial.amplitude = number_at(i["amplitude"], "initial_data.amplitude");
        if (i.contains("width")) {
            cfg.initial.width = number_at(i["width"], "initial_data.width");
            if (!(cfg.initial.width > 0.0)) throw ConfigError("initial_data.width: must be > 0");
        }
        if (i.contains("j")) cfg.initial.block_j = int_at(i["j"], "initial_data.j");
        if (i.contains("seed")) cfg.initial.seed = static_cast<std::uint64_t>(i["seed"].get<std::int64_t>());
        if (i.contains("path")) cfg.initial.path = string_at(i["path"], "initial_data.path");
        if (cfg.initial.kind == InitialKind::File) {
            if (cfg.initial.path.empty()) throw ConfigError("initial_data.path: required for kind \"file\"");
            std::ifstream probe(cfg.initial.path);
            if (!probe) throw ConfigError("initial_data.path: file does not exist: " + cfg.initial.path);
        }
    }

    {
        const json& o = require(doc, "config", "output");
        check_keys(o, "output", {"dir", "snapshots"});
        cfg.output.dir = string_at(require(o, "output", "dir"), "output.dir");
        if (o.contains("snapshots")) {
            if (!o["snapshots"].is_array()) throw ConfigError("output.snapshots: expected an array of times");
            for (const auto& t : o["snapshots"]) cfg.output.snapshots.push_back(number_at(t, "output.snapshots[]"));
        }
    }

    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("config is not valid JSON: " + std::string(e.what()));
    }
    return parse_run_config(doc);
}

nlohmann::json run_config_to_json(const RunConfig& cfg) {
    json doc;
    doc["grid"] = {{"n", cfg.grid.n}, {"N", cfg.grid.N}, {"L", cfg.grid.L}};
    json pressure{{"kind", cfg.model.pressure.kind_name()}};
    if (cfg.model.pressure.kind == PressureKind::Riesz) pressure["s"] = cfg.model.pressure.s;
    if (cfg.model.pressure.kind == PressureKind::Custom) pressure["sigma"] = cfg.model.pressure.sigma;
    doc["model"] = {{"alpha", cfg.model.alpha},
                    {"pressure", pressure},
                    {"norm",
                     {{"p", cfg.model.p == kInf ? json("inf") : json(cfg.model.p)},
                      {"q", cfg.model.q == kInf ? json("inf") : json(cfg.model.q)}}},
                    {"nonlinear", cfg.model.nonlinear}};
    doc["model"]["sigma"] = cfg.model.pressure.sigma;
    doc["model"]["beta"] = cfg.model.critical_index();
    doc["solver"] = {{"T", cfg.solver.T},
                     {"dt", cfg.solver.dt},
                     {"record_every", cfg.solver.record_every},
                     {"method", cfg.method == RunMethod::March ? "march" : "picard"},
                     {"blowup_ceiling", cfg.solver.blowup_ceiling},
                     {"picard",
                      {{"max_iter", cfg.solver.picard_max_iter},
                       {"tol", cfg.solver.picard_tol},
                       {"nodes", cfg.solver.picard_nodes}}}};
    json init{{"amplitude", cfg.initial.amplitude}};
    switch (cfg.initial.kind) {
        case InitialKind::Gaussian:
            init["kind"] = "gaussian";
            init["width"] = cfg.initial.width;
            break;
        case InitialKind::BlockBump:
            init["kind"] = "block_bump";
            init["j"] = cfg.initial.block_j;
            init["seed"] = cfg.initial.seed;
            break;
        case InitialKind::File:
            init["kind"] = "file";
            init["path"] = cfg.initial.path;
            break;
    }
    doc["initial_data"] = init;
    doc["output"] = {{"dir", cfg.output.dir}, {"snapshots", cfg.output.snapshots}};
    return doc;
}

SpectralField make_initial_data(const InitialData& init, const GridSpec& grid, const DyadicPartition& P) {
    switch (init.kind) {
        case InitialKind::Gaussian: {
            SpectralField U = dealias(forward_transform(gaussian_field(grid, init.amplitude, init.width)));
            return U;
        }
        case InitialKind::BlockBump: {
            std::mt19937_64 rng(init.seed);
            SpectralField U = block_bump(grid, P, init.block_j, rng);
            for (auto& c : U.coeffs) c *= init.amplitude;
            return dealias(U);
        }
        case InitialKind::File: {
            SpectralField U = read_field_snapshot(init.path);
            if (U.grid != grid)
                throw ConfigError("initial_data.path: snapshot grid does not match config grid");
            for (auto& c : U.coeffs) c *= init.amplitude;
            return dealias(U);
        }
    }
    throw ConfigError("initial_data.kind: unreachable");
}

SweepConfig parse_sweep_config(const json& doc) {
    check_keys(doc, "", {"base", "sweep"});
    SweepConfig sc;
    sc.base = parse_run_config(require(doc, "sweep-config", "base"));

    const json& s = require(doc, "sweep-config", "sweep");
    check_keys(s, "sweep", {"alpha", "s", "p", "q", "amplitude", "r", "c_fit", "fit_cases"});

    auto list_of = [&](const char* key, std::vector<double>& dst, bool exponents) {
        if (!s.contains(key)) return;
        if (!s[key].is_array()) throw ConfigError(std::string("sweep.") + key + ": expected an array");
        for (const auto& v : s[key])
            dst.push_back(exponents ? exponent_at(v, std::string("sweep.") + key + "[]")
                                    : number_at(v, std::string("sweep.") + key + "[]"));
    };
    list_of("alpha", sc.alphas, false);
    list_of("s", sc.pressure_params, false);
    list_of("p", sc.ps, true);
    list_of("q", sc.qs, true);
    list_of("amplitude", sc.amplitudes, false);
    if (s.contains("r")) sc.r = exponent_at(s["r"], "sweep.r");
    if (s.contains("c_fit")) sc.c_fit = number_at(s["c_fit"], "sweep.c_fit");
    if (s.contains("fit_cases")) sc.fit_cases = int_at(s["fit_cases"], "sweep.fit_cases");

    if (sc.alphas.empty()) sc.alphas.push_back(sc.base.model.alpha);
    if (sc.pressure_params.empty())
        sc.pressure_params.push_back(sc.base.model.pressure.kind == PressureKind::Riesz ? sc.base.model.pressure.s : 0.0);
    if (sc.ps.empty()) sc.ps.push_back(sc.base.model.p);
    if (sc.qs.empty()) sc.qs.push_back(sc.base.model.q);
    if (sc.amplitudes.empty()) sc.amplitudes.push_back(sc.base.initial.amplitude);
    if (sc.base.model.pressure.kind != PressureKind::Riesz && sc.pressure_params.size() > 1)
        throw ConfigError("sweep.s: only riesz pressure accepts an s sweep");
    return sc;
}

SweepConfig load_sweep_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open sweep config file: " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("sweep config is not valid JSON: " + std::string(e.what()));
    }
    return parse_sweep_config(doc);
}

}  // namespace fbpme
