#include "fbpme/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fbpme {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw std::runtime_error("FBPM: truncated header");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

void put_f64(std::ostream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xFF);
    out.write(reinterpret_cast<const char*>(b), 8);
}

double get_f64(std::istream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    if (!in) throw std::runtime_error("FBPM: truncated payload");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

constexpr std::uint32_t kFbpmVersion = 1;

}  // namespace

void write_field_snapshot(const std::string& path, const SpectralField& U) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("FBPM: cannot open " + path + " for writing");
    out.write("FBPM", 4);
    put_u32(out, kFbpmVersion);
    put_u32(out, static_cast<std::uint32_t>(U.grid.n));
    put_u32(out, static_cast<std::uint32_t>(U.grid.N));
    put_f64(out, U.grid.L);
    for (const auto& c : U.coeffs) {
        put_f64(out, c.real());
        put_f64(out, c.imag());
    }
    if (!out) throw std::runtime_error("FBPM: write failed for " + path);
}

SpectralField read_field_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("FBPM: cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "FBPM", 4) != 0) throw std::runtime_error("FBPM: bad magic in " + path);
    const std::uint32_t version = get_u32(in);
    if (version != kFbpmVersion) throw std::runtime_error("FBPM: unsupported version in " + path);
    const std::uint32_t n = get_u32(in);
    const std::uint32_t N = get_u32(in);
    const double L = get_f64(in);

    SpectralField U(GridSpec(static_cast<int>(n), static_cast<int>(N), L));
    for (auto& c : U.coeffs) {
        const double re = get_f64(in);
        const double im = get_f64(in);
        c = Complex{re, im};
    }
    return U;
}

namespace {

nlohmann::json trajectory_meta(const TrajectoryRecord& rec) {
    nlohmann::json j;
    j["grid"] = {{"n", rec.grid.n}, {"N", rec.grid.N}, {"L", rec.grid.L}};
    j["alpha"] = rec.alpha;
    j["beta"] = rec.beta;
    j["p"] = rec.p == kInf ? nlohmann::json("inf") : nlohmann::json(rec.p);
    j["q"] = rec.q == kInf ? nlohmann::json("inf") : nlohmann::json(rec.q);
    j["j_values"] = rec.j_values;
    j["status"] = to_string(rec.status);
    if (rec.blow_time != kInf) j["blow_time"] = rec.blow_time;
    return j;
}

double exponent_from_json(const nlohmann::json& v, const char* what) {
    if (v.is_string()) {
        if (v.get<std::string>() == "inf") return kInf;
        throw std::runtime_error(std::string("trajectory: bad ") + what);
    }
    return v.get<double>();
}

RunStatus status_from_string(const std::string& s) {
    if (s == "completed") return RunStatus::Completed;
    if (s == "blown") return RunStatus::Blown;
    if (s == "diverged") return RunStatus::Diverged;
    throw std::runtime_error("trajectory: unknown status " + s);
}

}  // namespace

void write_trajectory_csv(const std::string& path, const TrajectoryRecord& rec) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("trajectory: cannot open " + path + " for writing");
    out << "# fbpme-trajectory v1 " << trajectory_meta(rec).dump() << "\n";
    out << "t,j,block_norm,block_norm_p1,block_norm_p2,block_norm_pinf,"
           "fb_beta,fb_beta_alpha,blowup_integral,mean_re,mean_im\n";

    const std::size_t run_p = rec.p_index(rec.p);
    const std::size_t p1 = rec.p_index(1.0), p2 = rec.p_index(2.0), pi = rec.p_index(kInf);
    for (std::size_t tx = 0; tx < rec.n_times(); ++tx) {
        for (std::size_t jx = 0; jx < rec.n_blocks(); ++jx) {
            out << fmt17(rec.times[tx]) << ',' << rec.j_values[jx] << ','
                << fmt17(rec.block_norm(run_p, tx, jx)) << ',' << fmt17(rec.block_norm(p1, tx, jx)) << ','
                << fmt17(rec.block_norm(p2, tx, jx)) << ',' << fmt17(rec.block_norm(pi, tx, jx)) << ','
                << fmt17(rec.fb_beta[tx]) << ',' << fmt17(rec.fb_beta_alpha[tx]) << ','
                << fmt17(rec.blowup_integral[tx]) << ',' << fmt17(rec.mean_mode[tx].real()) << ','
                << fmt17(rec.mean_mode[tx].imag()) << "\n";
        }
    }
    if (!out) throw std::runtime_error("trajectory: write failed for " + path);
}

TrajectoryRecord read_trajectory_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("trajectory: cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("trajectory: empty file " + path);
    const std::string prefix = "# fbpme-trajectory v1 ";
    if (line.rfind(prefix, 0) != 0) throw std::runtime_error("trajectory: missing metadata header in " + path);

    nlohmann::json meta;
    try {
        meta = nlohmann::json::parse(line.substr(prefix.size()));
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("trajectory: bad metadata header in " + path + ": " + e.what());
    }

    TrajectoryRecord rec;
    try {
        rec.grid = GridSpec(meta.at("grid").at("n").get<int>(), meta.at("grid").at("N").get<int>(),
                            meta.at("grid").at("L").get<double>());
        rec.alpha = meta.at("alpha").get<double>();
        rec.beta = meta.at("beta").get<double>();
        rec.p = exponent_from_json(meta.at("p"), "p");
        rec.q = exponent_from_json(meta.at("q"), "q");
        rec.j_values = meta.at("j_values").get<std::vector<int>>();
        rec.status = status_from_string(meta.at("status").get<std::string>());
        if (meta.contains("blow_time")) rec.blow_time = meta.at("blow_time").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("trajectory: incomplete metadata in " + path + ": " + e.what());
    }

    rec.p_set = {1.0, 2.0, kInf};
    bool run_p_extra = rec.p != 1.0 && rec.p != 2.0 && rec.p != kInf;
    if (run_p_extra) rec.p_set.push_back(rec.p);
    rec.block_norms.assign(rec.p_set.size(), {});

    if (!std::getline(in, line)) throw std::runtime_error("trajectory: missing column header in " + path);

    const std::size_t nb = rec.j_values.size();
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
        if (vals.size() != 11)
            throw std::runtime_error("trajectory: malformed row " + std::to_string(row + 3) + " in " + path);

        const std::size_t jx = row % nb;
        if (static_cast<int>(vals[1]) != rec.j_values[jx])
            throw std::runtime_error("trajectory: block order mismatch at row " + std::to_string(row + 3));
        if (jx == 0) {
            rec.times.push_back(vals[0]);
            rec.fb_beta.push_back(vals[6]);
            rec.fb_beta_alpha.push_back(vals[7]);
            rec.blowup_integral.push_back(vals[8]);
            rec.mean_mode.emplace_back(vals[9], vals[10]);
        }
        rec.block_norms[0].push_back(vals[3]);  // p = 1
        rec.block_norms[1].push_back(vals[4]);  // p = 2
        rec.block_norms[2].push_back(vals[5]);  // p = inf
        if (run_p_extra) rec.block_norms[3].push_back(vals[2]);
        ++row;
    }
    if (row == 0) throw std::runtime_error("trajectory: no data rows in " + path);
    if (row % nb != 0) throw std::runtime_error("trajectory: truncated file " + path);
    return rec;
}

void write_json_atomic(const std::string& path, const nlohmann::json& doc) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
        out << doc.dump(2) << "\n";
        if (!out) throw std::runtime_error("write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("atomic rename failed for " + path);
}

}  // namespace fbpme
