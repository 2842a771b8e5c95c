#include "fbpme/pressure.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fbpme {

PressureSpec PressureSpec::riesz(double s) {
    if (!(s > 0.0) || s > 1.0) throw std::invalid_argument("PressureSpec::riesz: s must be in (0, 1]");
    PressureSpec spec;
    spec.kind = PressureKind::Riesz;
    spec.s = s;
    spec.sigma = 1.0 - 2.0 * s;
    return spec;
}

PressureSpec PressureSpec::identity() {
    PressureSpec spec;
    spec.kind = PressureKind::Identity;
    spec.sigma = 1.0;
    return spec;
}

PressureSpec PressureSpec::exp_kernel() {
    PressureSpec spec;
    spec.kind = PressureKind::ExpKernel;
    spec.sigma = 0.0;
    return spec;
}

PressureSpec PressureSpec::custom(std::vector<double> symbol, double sigma) {
    PressureSpec spec;
    spec.kind = PressureKind::Custom;
    spec.sigma = sigma;
    spec.custom_symbol = std::move(symbol);
    for (double v : spec.custom_symbol)
        if (!std::isfinite(v)) throw std::invalid_argument("PressureSpec::custom: symbol must be finite");
    return spec;
}

PressureSpec PressureSpec::custom_from_csv(const std::string& path, double sigma, std::size_t lattice_size) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("custom_from_csv: cannot open " + path);
    std::vector<double> table(lattice_size, 0.0);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string a, b;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b)) {
            // allow a header row
            if (lineno == 1) continue;
            throw std::runtime_error("custom_from_csv: malformed row " + std::to_string(lineno));
        }
        char* end = nullptr;
        const unsigned long long idx = std::strtoull(a.c_str(), &end, 10);
        if (end == a.c_str()) {
            if (lineno == 1) continue;  // header
            throw std::runtime_error("custom_from_csv: bad index on row " + std::to_string(lineno));
        }
        if (idx >= lattice_size)
            throw std::runtime_error("custom_from_csv: index out of range on row " + std::to_string(lineno));
        table[idx] = std::stod(b);
    }
    return custom(std::move(table), sigma);
}

std::string PressureSpec::kind_name() const {
    switch (kind) {
        case PressureKind::Riesz: return "riesz";
        case PressureKind::ExpKernel: return "exp_kernel";
        case PressureKind::Identity: return "identity";
        case PressureKind::Custom: return "custom";
    }
    return "unknown";
}

std::vector<double> pressure_symbol(const PressureSpec& spec, const GridSpec& grid) {
    const std::size_t sz = grid.size();
    std::vector<double> m(sz, 0.0);
    switch (spec.kind) {
        case PressureKind::Riesz: {
            if (!(spec.s > 0.0) || spec.s > 1.0)
                throw std::invalid_argument("pressure_symbol: riesz s must be in (0, 1]");
            for (std::size_t i = 1; i < sz; ++i) m[i] = std::pow(grid.xi_norm2(i), -spec.s);
            m[0] = 0.0;  // Lambda^{-2s} is singular at xi = 0; work mean-free
            break;
        }
        case PressureKind::Identity: {
            for (std::size_t i = 0; i < sz; ++i) m[i] = 1.0;
            break;
        }
        case PressureKind::ExpKernel: {
            // c_n = 2^n pi^{(n-1)/2} Gamma((n+1)/2) equals the L^1 mass of e^{-|x|}.
            const double n = grid.n;
            const double c = std::pow(2.0, n) * std::pow(M_PI, 0.5 * (n - 1.0)) * std::tgamma(0.5 * (n + 1.0));
            for (std::size_t i = 0; i < sz; ++i)
                m[i] = c * std::pow(1.0 + grid.xi_norm2(i), -0.5 * (n + 1.0));
            break;
        }
        case PressureKind::Custom: {
            if (spec.custom_symbol.size() != sz)
                throw std::invalid_argument("pressure_symbol: custom table size does not match lattice");
            m = spec.custom_symbol;
            if (!std::isfinite(m[0])) m[0] = 0.0;
            break;
        }
    }
    return m;
}

std::vector<SpectralField> pressure_gradient(const SpectralField& U, const PressureSpec& spec) {
    const GridSpec& g = U.grid;
    const std::vector<double> m = pressure_symbol(spec, g);
    std::vector<SpectralField> G;
    G.reserve(static_cast<std::size_t>(g.n));
    for (int d = 0; d < g.n; ++d) G.emplace_back(g);

    const double dxi = g.dxi();
    for (std::size_t i = 0; i < U.coeffs.size(); ++i) {
        const auto k = g.unflatten(i);
        const Complex base = U.coeffs[i] * m[i];
        for (int d = 0; d < g.n; ++d) {
            const double xi = k[d] == g.N / 2 ? 0.0 : dxi * g.signed_index(k[d]);
            G[static_cast<std::size_t>(d)].coeffs[i] = Complex{0.0, xi} * base;
        }
    }
    return G;
}

SpectralField pressure_gradient_magnitude(const SpectralField& U, const PressureSpec& spec) {
    const GridSpec& g = U.grid;
    const std::vector<double> m = pressure_symbol(spec, g);
    SpectralField R(g);
    const double dxi = g.dxi();
    for (std::size_t i = 0; i < U.coeffs.size(); ++i) {
        const auto k = g.unflatten(i);
        double r2 = 0.0;
        for (int d = 0; d < g.n; ++d) {
            const double xi = k[d] == g.N / 2 ? 0.0 : dxi * g.signed_index(k[d]);
            r2 += xi * xi;
        }
        R.coeffs[i] = Complex{std::sqrt(r2) * m[i] * std::abs(U.coeffs[i]), 0.0};
    }
    return R;
}

SigmaFit estimate_sigma_fit(const PressureSpec& spec, const GridSpec& grid, const DyadicPartition& P,
                            double p, SigmaFitWindow window) {
    if (P.resolved_count() < 4)
        throw std::runtime_error("estimate_sigma: need at least 4 resolved blocks");

    int lo = P.j_min, hi = P.j_max;
    if (window == SigmaFitWindow::HighHalf) lo = P.j_min + (P.j_max - P.j_min + 1) / 2;

    SigmaFit fit;
    for (int j = lo; j <= hi; ++j) {
        // Unit-L^p probe localized in block j: the mask itself.
        SpectralField probe(grid);
        const auto& mask = P.mask(j);
        for (std::size_t i = 0; i < probe.coeffs.size(); ++i) probe.coeffs[i] = Complex{mask[i], 0.0};
        const double denom = block_lp_norm(probe, j, p, P);
        if (denom <= 0.0) continue;
        for (auto& c : probe.coeffs) c /= denom;

        const SpectralField grad_mag = pressure_gradient_magnitude(probe, spec);
        const double num = block_lp_norm(grad_mag, j, p, P);
        const double den = block_lp_norm(probe, j, p, P);
        if (num <= 0.0 || den <= 0.0) continue;
        fit.blocks.push_back(j);
        fit.ratios.push_back(num / den);
    }
    if (fit.blocks.size() < 2) throw std::runtime_error("estimate_sigma: degenerate fit (fewer than 2 usable blocks)");

    // Least squares of log2(ratio) against the block index.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(fit.blocks.size());
    for (std::size_t i = 0; i < fit.blocks.size(); ++i) {
        const double x = fit.blocks[i];
        const double y = std::log2(fit.ratios[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / n;
    return fit;
}

double estimate_sigma(const PressureSpec& spec, const GridSpec& grid, const DyadicPartition& P,
                      double p, SigmaFitWindow window) {
    return estimate_sigma_fit(spec, grid, P, p, window).slope;
}

double fit_block_constant(const PressureSpec& spec, const DyadicPartition& P, double sigma, double p,
                          const std::vector<SpectralField>& fields) {
    double c = 0.0;
    for (const auto& U : fields) {
        const SpectralField grad_mag = pressure_gradient_magnitude(U, spec);
        for (int j = P.j_min; j <= P.j_max; ++j) {
            const double den = block_lp_norm(U, j, p, P);
            if (den <= 0.0) continue;
            const double num = block_lp_norm(grad_mag, j, p, P);
            c = std::max(c, num / (std::pow(2.0, sigma * j) * den));
        }
    }
    return c;
}

}  // namespace fbpme
