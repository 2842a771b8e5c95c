#include "fbpme/transform.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace fbpme {

namespace {

// FFTW planner is not thread-safe; execution via the new-array interface is.
// Plans are created once per (n, N, sign) with FFTW_UNALIGNED so they can run
// on any heap buffer.
class PlanCache {
  public:
    fftw_plan get(const GridSpec& g, int sign) {
        const auto key = std::make_tuple(g.n, g.N, sign);
        std::lock_guard<std::mutex> lock(mu_);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;

        std::vector<Complex> a(g.size()), b(g.size());
        int dims[3] = {g.N, g.N, g.N};
        fftw_plan p = fftw_plan_dft(g.n, dims,
                                    reinterpret_cast<fftw_complex*>(a.data()),
                                    reinterpret_cast<fftw_complex*>(b.data()),
                                    sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, p);
        return p;
    }

  private:
    std::mutex mu_;
    std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
    static PlanCache cache;
    return cache;
}

// (-1)^(k_0 + ... + k_{n-1}) for the unshifted index: translates the DFT,
// which assumes the origin at sample 0, to a grid starting at x = -L.
inline double origin_phase(const GridSpec& g, std::size_t flat) {
    int parity = 0;
    auto k = g.unflatten(flat);
    for (int d = 0; d < g.n; ++d) parity += k[d];
    return (parity & 1) ? -1.0 : 1.0;
}

}  // namespace

void raw_dft(const GridSpec& g, const Complex* in, Complex* out, int sign) {
    fftw_plan p = plan_cache().get(g, sign);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

SpectralField forward_transform(const RealField& u) {
    const GridSpec& g = u.grid;
    if (u.values.size() != g.size()) throw std::invalid_argument("forward_transform: size mismatch");

    std::vector<Complex> buf(g.size());
    for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = Complex(u.values[i], 0.0);

    SpectralField U(g);
    raw_dft(g, buf.data(), U.coeffs.data(), -1);

    const double cell = std::pow(g.dx(), g.n);
    for (std::size_t i = 0; i < U.coeffs.size(); ++i) U.coeffs[i] *= cell * origin_phase(g, i);
    return U;
}

double hermitian_defect(const SpectralField& U) {
    const GridSpec& g = U.grid;
    double peak = 0.0;
    for (const auto& c : U.coeffs) peak = std::max(peak, std::abs(c));
    if (peak == 0.0) return 0.0;

    double worst = 0.0;
    for (std::size_t i = 0; i < U.coeffs.size(); ++i) {
        auto k = g.unflatten(i);
        std::array<int, 3> m{0, 0, 0};
        for (int d = 0; d < g.n; ++d) m[d] = g.negated_index(k[d]);
        const std::size_t j = g.flatten(m);
        if (j < i) continue;
        worst = std::max(worst, std::abs(U.coeffs[j] - std::conj(U.coeffs[i])));
    }
    return worst / peak;
}

RealField inverse_transform_unchecked(const SpectralField& U) {
    const GridSpec& g = U.grid;
    if (U.coeffs.size() != g.size()) throw std::invalid_argument("inverse_transform: size mismatch");

    std::vector<Complex> buf(g.size()), out(g.size());
    for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = U.coeffs[i] * origin_phase(g, i);
    raw_dft(g, buf.data(), out.data(), +1);

    RealField u(g);
    const double scale = std::pow(2.0 * g.L, -g.n);
    for (std::size_t i = 0; i < out.size(); ++i) u.values[i] = out[i].real() * scale;
    return u;
}

RealField inverse_transform(const SpectralField& U) {
    if (hermitian_defect(U) > 1e-10)
        throw std::invalid_argument("inverse_transform: Hermitian symmetry violated beyond 1e-10");
    return inverse_transform_unchecked(U);
}

}  // namespace fbpme
