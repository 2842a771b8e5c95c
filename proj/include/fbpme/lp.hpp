#pragma once

#include "fbpme/grid.hpp"

#include <limits>
#include <string>
#include <vector>

namespace fbpme {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Radial dyadic profile. chi is a C-infinity cutoff with chi = 1 on
// |r| <= 3/4 and chi = 0 on |r| >= 4/3; phi(r) = chi(r/2) - chi(r) is
// supported on [3/4, 8/3], equals 1 on [4/3, 3/2], and the dyadic sum
// sum_j phi(2^-j r) telescopes to 1 for r != 0.
double lowpass_profile(double r);
double bump_profile(double r);

// Precomputed Littlewood-Paley masks on the frequency lattice.
//
// [j_min, j_max] is the resolved band: blocks whose annulus sits fully inside
// the lattice (2^j_min >= 4/3 dxi, 2^j_max * 8/3 <= dxi*N/2). Norms sum over
// this band only. [j_lo, j_hi] is the wider stored band, chosen so that the
// masks cover every nonzero lattice mode; block sums and paraproducts use it
// so reconstruction is exact on the whole lattice.
struct DyadicPartition {
    GridSpec grid;
    int j_min = 0, j_max = -1;
    int j_lo = 0, j_hi = -1;
    std::vector<std::vector<double>> masks;      // phi_j, j in [j_lo, j_hi]
    std::vector<std::vector<double>> lowpasses;  // psi_j = chi(2^-j xi), j in [j_lo-1, j_hi+1]

    int stored_count() const { return j_hi - j_lo + 1; }
    int resolved_count() const { return j_max - j_min + 1; }
    bool in_stored(int j) const { return j >= j_lo && j <= j_hi; }
    bool in_resolved(int j) const { return j >= j_min && j <= j_max; }

    const std::vector<double>& mask(int j) const;      // phi_j, j in stored band
    const std::vector<double>& lowpass_mask(int j) const;  // psi_j, j in [j_lo-1, j_hi+1]

    // Annulus on which the resolved masks sum to 1: [4/3 2^j_min, 3/2 2^j_max].
    double resolved_xi_min() const;
    double resolved_xi_max() const;
};

// Builds the partition and verifies the partition of unity numerically.
// Throws if the grid hosts fewer than 3 resolved blocks.
DyadicPartition build_partition(const GridSpec& grid);

// Delta_j u. For j outside the stored band returns a zero field (and warns).
SpectralField block(const SpectralField& U, int j, const DyadicPartition& P);

// S_j u: low-pass below block j. psi_j includes the mean mode, so S_j of a
// constant is the constant.
SpectralField lowpass(const SpectralField& U, int j, const DyadicPartition& P);

struct FBNormParams {
    double beta = 0.0;
    double p = 2.0;  // Lebesgue exponent in [1, inf]
    double q = 1.0;  // summability exponent in [1, inf]

    void validate() const;
};

// ||phi_j u^||_{L^p(xi)} as a Riemann sum (dxi^n cell weight); max for p=inf.
double block_lp_norm(const SpectralField& U, int j, double p, const DyadicPartition& P);

struct FBNormDetail {
    double value = 0.0;
    double tail_mass = 0.0;              // coefficient l2 fraction outside the resolved band
    std::vector<double> block_values;    // ||phi_j u^||_p for resolved j, ascending
};

// Fourier-Besov norm (sum_j 2^{j beta q} ||phi_j u^||_p^q)^{1/q} over the
// resolved band; sup over j when q = inf.
double fb_norm(const SpectralField& U, const FBNormParams& params, const DyadicPartition& P);
FBNormDetail fb_norm_detail(const SpectralField& U, const FBNormParams& params, const DyadicPartition& P);

enum class RunStatus { Completed, Blown, Diverged };
std::string to_string(RunStatus s);

// Time series of per-block norms and derived quantities along a run.
// block_norms[k] is a row-major [time][block] matrix of ||phi_j u^(t)||_{L^p}
// for p = p_set[k]; p_set always contains {1, 2, inf} plus the run exponent,
// so norms can be re-derived offline.
struct TrajectoryRecord {
    GridSpec grid;
    double alpha = 0.0;
    double beta = 0.0;               // index used for the fb_beta column
    double p = 2.0, q = 1.0;         // run norm exponents
    std::vector<int> j_values;       // resolved band, ascending
    std::vector<double> times;
    std::vector<double> p_set;
    std::vector<std::vector<double>> block_norms;
    std::vector<double> fb_beta;
    std::vector<double> fb_beta_alpha;
    std::vector<double> blowup_integral;  // running trapezoid of fb_beta_alpha
    std::vector<Complex> mean_mode;
    RunStatus status = RunStatus::Completed;
    double blow_time = kInf;

    std::size_t n_times() const { return times.size(); }
    std::size_t n_blocks() const { return j_values.size(); }
    double block_norm(std::size_t p_idx, std::size_t t_idx, std::size_t j_idx) const {
        return block_norms[p_idx][t_idx * n_blocks() + j_idx];
    }
    std::size_t p_index(double p) const;  // throws if p is not stored

    void append_time(double t, const SpectralField& U, const DyadicPartition& P);
};

// Trapezoid quadrature weights for possibly nonuniform strictly increasing
// time stamps.
std::vector<double> trapezoid_weights(const std::vector<double>& t);

// Chemin-Lerner mixed norm: the time L^r is taken per block, inside the
// outer l^q sum. Throws if fewer than 2 samples with r < inf.
double mixed_norm(const TrajectoryRecord& rec, double r, const FBNormParams& params);

// Plain L^r(I; FB): the FB norm per time, then L^r in time.
double mixed_norm_plain(const TrajectoryRecord& rec, double r, const FBNormParams& params);

struct Paraproduct {
    SpectralField t_uv;  // low frequencies of u against blocks of v
    SpectralField t_vu;  // low frequencies of v against blocks of u
    SpectralField r_uv;  // comparable-frequency interactions
};

// Bony splitting of the (dealiased) product uv. For mean-free inputs the
// three terms sum to dealias(uv) exactly; in general the mean*mean part of
// the product is not represented.
Paraproduct paraproduct(const SpectralField& u, const SpectralField& v, const DyadicPartition& P);

}  // namespace fbpme
