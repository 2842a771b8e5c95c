#include "fbpme/fieldgen.hpp"
#include "fbpme/lp.hpp"
#include "fbpme/ops.hpp"
#include "fbpme/transform.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace fbpme;

namespace {

double rel_l2(const SpectralField& A, const SpectralField& B) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < A.coeffs.size(); ++i) {
        num += std::norm(A.coeffs[i] - B.coeffs[i]);
        den += std::norm(B.coeffs[i]);
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace

TEST_CASE("partition of unity holds on every nonzero lattice mode") {
    for (auto [n, N] : {std::pair<int, int>{1, 256}, {2, 64}}) {
        const GridSpec g(n, N, 16.0);
        const DyadicPartition P = build_partition(g);
        REQUIRE(P.resolved_count() >= 3);
        double worst = 0.0;
        for (std::size_t i = 1; i < g.size(); ++i) {
            double s = 0.0;
            for (int j = P.j_lo; j <= P.j_hi; ++j) s += P.mask(j)[i];
            worst = std::max(worst, std::abs(s - 1.0));
        }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("masks of blocks two apart are exactly disjoint") {
    const GridSpec g(1, 128, 16.0);
    const DyadicPartition P = build_partition(g);
    for (int j = P.j_lo; j <= P.j_hi; ++j)
        for (int k = j + 2; k <= P.j_hi; ++k) {
            double worst = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i) worst = std::max(worst, P.mask(j)[i] * P.mask(k)[i]);
            CHECK(worst == 0.0);
        }
}

TEST_CASE("the profile plateau [4/3, 3/2] 2^j carries mask value exactly 1") {
    const GridSpec g(1, 256, 24.0);  // dxi small enough that every plateau holds lattice points
    const DyadicPartition P = build_partition(g);
    int checked = 0;
    for (int j = P.j_min; j <= P.j_max; ++j) {
        const double lo = (4.0 / 3.0) * std::ldexp(1.0, j), hi = 1.5 * std::ldexp(1.0, j);
        for (std::size_t i = 1; i < g.size(); ++i) {
            const double r = std::sqrt(g.xi_norm2(i));
            if (r >= lo && r <= hi) {
                CHECK(P.mask(j)[i] == 1.0);
                // neighbours must vanish there (partition of unity)
                if (P.in_stored(j - 1)) CHECK(P.mask(j - 1)[i] == 0.0);
                if (P.in_stored(j + 1)) CHECK(P.mask(j + 1)[i] == 0.0);
                ++checked;
            }
        }
    }
    CHECK(checked > 0);
}

TEST_CASE("build_partition rejects grids that cannot host three blocks") {
    CHECK_THROWS_AS((void)build_partition(GridSpec(1, 8, 1.0)), std::runtime_error);
}

TEST_CASE("block operator: reconstruction and quasi-orthogonality") {
    std::mt19937_64 rng(3);
    const GridSpec g(1, 64, 8.0);
    const DyadicPartition P = build_partition(g);
    SpectralField U = random_dealiased_field(g, rng);
    U.coeffs[0] = Complex{2.5, 0.0};  // give it a mean to check DC exclusion

    SpectralField sum(g);
    for (int j = P.j_lo; j <= P.j_hi; ++j) {
        const SpectralField bj = block(U, j, P);
        for (std::size_t i = 0; i < sum.coeffs.size(); ++i) sum.coeffs[i] += bj.coeffs[i];
    }
    SpectralField no_dc = U;
    no_dc.coeffs[0] = Complex{0.0, 0.0};
    CHECK(rel_l2(sum, no_dc) < 1e-10);

    // Delta_j Delta_k = 0 for |j - k| >= 2, exactly.
    const SpectralField nested = block(block(U, P.j_min, P), P.j_min + 2, P);
    for (const auto& c : nested.coeffs) CHECK(std::abs(c) == 0.0);

    // Zero field stays zero; out-of-band j yields a zero field.
    const SpectralField zero_block = block(SpectralField(g), P.j_min, P);
    for (const auto& c : zero_block.coeffs) CHECK(std::abs(c) == 0.0);
    const SpectralField oob = block(U, P.j_hi + 5, P);
    for (const auto& c : oob.coeffs) CHECK(std::abs(c) == 0.0);
}

TEST_CASE("block keeps a field supported inside its own annulus") {
    std::mt19937_64 rng(9);
    const GridSpec g(1, 128, 16.0);
    const DyadicPartition P = build_partition(g);
    const int j = P.j_min + 1;
    // Support strictly inside the plateau, where only block j is active.
    const SpectralField U = annulus_bump(g, 1.4 * std::ldexp(1.0, j), 0.02 * std::ldexp(1.0, j));
    const SpectralField B = block(U, j, P);
    CHECK(rel_l2(B, U) < 1e-12);
}

TEST_CASE("lowpass: telescoping against block masks and mean handling") {
    const GridSpec g(1, 64, 8.0);
    const DyadicPartition P = build_partition(g);
    std::mt19937_64 rng(21);
    SpectralField U = random_dealiased_field(g, rng);
    U.coeffs[0] = Complex{1.0, 0.0};

    // S_{j_hi+1} passes everything; a very low S keeps only the mean.
    CHECK(rel_l2(lowpass(U, P.j_hi + 2, P), U) == 0.0);
    const SpectralField dc = lowpass(U, P.j_lo - 3, P);
    CHECK(dc.coeffs[0] == U.coeffs[0]);
    for (std::size_t i = 1; i < dc.coeffs.size(); ++i) CHECK(std::abs(dc.coeffs[i]) == 0.0);

    // psi_j + sum_{k >= j} phi_k = 1 pointwise away from the mean mode.
    const int j = (P.j_lo + P.j_hi) / 2;
    for (std::size_t i = 1; i < g.size(); ++i) {
        double s = P.lowpass_mask(j)[i];
        for (int k = j; k <= P.j_hi; ++k) s += P.mask(k)[i];
        CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }

    // S_j of a constant is the constant.
    SpectralField c(g);
    c.coeffs[0] = Complex{3.0, 0.0};
    CHECK(rel_l2(lowpass(c, j, P), c) == 0.0);
}

TEST_CASE("fb_norm: mask probe, zero field, single-block scaling") {
    const GridSpec g(1, 256, 24.0);
    const DyadicPartition P = build_partition(g);

    // u^ = phi_0 itself (block 0 resolved on this grid).
    REQUIRE(P.in_resolved(0));
    SpectralField U(g);
    for (std::size_t i = 0; i < g.size(); ++i) U.coeffs[i] = Complex{P.mask(0)[i], 0.0};

    const double sup_norm = fb_norm(U, FBNormParams{0.0, kInf, kInf}, P);
    CHECK(sup_norm == 1.0);  // plateau value, neighbours strictly below 1
    const double q1 = fb_norm(U, FBNormParams{0.0, kInf, 1.0}, P);
    CHECK(q1 >= 1.0);
    CHECK(q1 <= 3.0);  // overlap contributions from j = +-1 are each <= 1

    CHECK(fb_norm(SpectralField(g), FBNormParams{0.3, 2.0, 1.0}, P) == 0.0);

    // Single-block content: shifting beta by delta scales by 2^{j0 delta}.
    const int j0 = P.j_min + 1;
    const SpectralField bump = annulus_bump(g, 1.4 * std::ldexp(1.0, j0), 0.02 * std::ldexp(1.0, j0));
    const double base = fb_norm(bump, FBNormParams{0.5, 2.0, 1.0}, P);
    const double shifted = fb_norm(bump, FBNormParams{1.25, 2.0, 1.0}, P);
    CHECK(shifted == doctest::Approx(std::pow(2.0, 0.75 * j0) * base).epsilon(1e-12));
}

TEST_CASE("fb_norm: homogeneity and lq monotonicity") {
    std::mt19937_64 rng(31);
    const GridSpec g(1, 64, 8.0);
    const DyadicPartition P = build_partition(g);
    const SpectralField U = random_dealiased_field(g, rng);

    const FBNormParams np{0.4, 2.0, 1.5};
    const double base = fb_norm(U, np, P);
    const double scaled = fb_norm(scale(U, Complex{-2.5, 0.0}), np, P);
    CHECK(scaled == doctest::Approx(2.5 * base).epsilon(1e-12));

    double prev = kInf;
    for (double q : {1.0, 1.5, 2.0, 4.0, kInf}) {
        const double v = fb_norm(U, FBNormParams{0.4, 2.0, q}, P);
        CHECK(v <= prev * (1.0 + 1e-12));
        prev = v;
    }
}

TEST_CASE("fb_norm tail mass flags energy outside the resolved band") {
    const GridSpec g(1, 64, 8.0);
    const DyadicPartition P = build_partition(g);
    SpectralField inside(g);
    inside.coeffs[g.size() / 8] = Complex{1.0, 0.0};  // inside resolved annulus
    SpectralField outside(g);
    outside.coeffs[1] = Complex{1.0, 0.0};  // first shell, below the resolved band

    CHECK(fb_norm_detail(inside, FBNormParams{0.0, 2.0, 1.0}, P).tail_mass < 1e-12);
    CHECK(fb_norm_detail(outside, FBNormParams{0.0, 2.0, 1.0}, P).tail_mass > 0.9);
}

TEST_CASE("mixed norms: constants in time, sup in time, brute-force cross-check") {
    const GridSpec g(1, 64, 8.0);
    const DyadicPartition P = build_partition(g);
    std::mt19937_64 rng(41);
    const SpectralField U = random_dealiased_field(g, rng);

    const double T = 0.8;
    TrajectoryRecord rec;
    rec.grid = g;
    rec.alpha = 2.0;
    rec.beta = 0.3;
    rec.p = 2.0;
    rec.q = 1.0;
    const int M = 9;
    for (int i = 0; i < M; ++i) rec.append_time(T * i / (M - 1.0), U, P);

    const FBNormParams np{0.3, 2.0, 1.0};
    const double fb0 = fb_norm(U, np, P);
    CHECK(mixed_norm(rec, 1.0, np) == doctest::Approx(T * fb0).epsilon(1e-12));
    CHECK(mixed_norm(rec, kInf, np) == doctest::Approx(fb0).epsilon(1e-12));
    CHECK(mixed_norm_plain(rec, 1.0, np) == doctest::Approx(T * fb0).epsilon(1e-12));

    // Two-block synthetic trajectory vs a direct evaluation of the formula.
    TrajectoryRecord syn;
    syn.grid = g;
    syn.alpha = 1.0;
    syn.beta = 0.0;
    syn.p = 2.0;
    syn.q = 2.0;
    syn.j_values = {0, 1};
    syn.p_set = {1.0, 2.0, kInf};
    syn.block_norms.assign(3, {});
    syn.times = {0.0, 0.25, 0.7, 1.0};
    const std::vector<std::vector<double>> bn{{1.0, 2.0}, {0.5, 1.5}, {0.25, 1.0}, {0.125, 0.5}};
    for (const auto& row : bn)
        for (int k = 0; k < 3; ++k) {
            syn.block_norms[static_cast<std::size_t>(k)].push_back(row[0]);
            syn.block_norms[static_cast<std::size_t>(k)].push_back(row[1]);
        }
    syn.fb_beta.assign(4, 0.0);
    syn.fb_beta_alpha.assign(4, 0.0);
    syn.blowup_integral.assign(4, 0.0);
    syn.mean_mode.assign(4, Complex{});

    const double beta = 0.4, r = 2.0;
    // Direct summation with trapezoid weights.
    const std::vector<double> w{0.125, 0.35, 0.375, 0.15};
    double acc_q = 0.0;
    for (int jx = 0; jx < 2; ++jx) {
        double tim = 0.0;
        for (int tx = 0; tx < 4; ++tx) tim += w[static_cast<std::size_t>(tx)] * std::pow(bn[static_cast<std::size_t>(tx)][static_cast<std::size_t>(jx)], r);
        const double tl = std::pow(tim, 1.0 / r);
        acc_q += std::pow(std::pow(2.0, beta * syn.j_values[static_cast<std::size_t>(jx)]) * tl, 2.0);
    }
    const double expected = std::sqrt(acc_q);
    CHECK(mixed_norm(syn, r, FBNormParams{beta, 2.0, 2.0}) == doctest::Approx(expected).epsilon(1e-12));

    // Single sample with finite r is a quadrature error.
    TrajectoryRecord single;
    single.grid = g;
    single.alpha = 1.0;
    single.beta = 0.0;
    single.p = 2.0;
    single.q = 1.0;
    single.append_time(0.0, U, P);
    CHECK_THROWS_AS((void)mixed_norm(single, 1.0, np), std::invalid_argument);
    CHECK(mixed_norm(single, kInf, np) == doctest::Approx(fb0).epsilon(1e-12));
}

TEST_CASE("Chemin-Lerner embedding flips direction with r vs q") {
    const GridSpec g(1, 64, 8.0);
    const DyadicPartition P = build_partition(g);
    std::mt19937_64 rng(51);

    for (int trial = 0; trial < 8; ++trial) {
        TrajectoryRecord rec;
        rec.grid = g;
        rec.alpha = 1.0;
        rec.beta = 0.0;
        rec.p = 2.0;
        rec.q = 1.0;
        const int M = 7;
        for (int i = 0; i < M; ++i) {
            SpectralField U = random_dealiased_field(g, rng);
            rec.append_time(0.3 * i, U, P);
        }
        // r <= q: plain L^r dominates the tilde norm; r >= q: reversed.
        const FBNormParams low_q{0.2, 2.0, 3.0};
        CHECK(mixed_norm_plain(rec, 1.0, low_q) >= mixed_norm(rec, 1.0, low_q) * (1.0 - 1e-10));
        const FBNormParams high_q{0.2, 2.0, 1.0};
        CHECK(mixed_norm(rec, 2.0, high_q) >= mixed_norm_plain(rec, 2.0, high_q) * (1.0 - 1e-10));
    }
}

TEST_CASE("paraproduct: single mode squares into the double mode") {
    const GridSpec g(1, 64, 8.0);
    const DyadicPartition P = build_partition(g);
    const SpectralField U = forward_transform(cosine_mode(g, {3, 0, 0}, 1.0));

    const Paraproduct bits = paraproduct(U, U, P);
    SpectralField sum = bits.t_uv;
    for (std::size_t i = 0; i < sum.coeffs.size(); ++i)
        sum.coeffs[i] += bits.t_vu.coeffs[i] + bits.r_uv.coeffs[i];

    // cos^2 = 1/2 + cos(2 xi x)/2; the mean x mean part is absent by design
    // (mean-free calculus), so compare against dealias(u^2) minus DC-squared.
    SpectralField target = dealias(multiply_physical(U, U));
    // U has zero mean, so no correction needed.
    CHECK(rel_l2(sum, target) < 1e-10);
    const std::size_t idx2 = 6;
    CHECK(std::abs(sum.coeffs[idx2].real() - 0.25 * std::pow(2.0 * g.L, g.n)) < 1e-8);
}

TEST_CASE("paraproduct: constant times field lands in the low-high term") {
    const GridSpec g(1, 64, 8.0);
    const DyadicPartition P = build_partition(g);
    std::mt19937_64 rng(61);
    SpectralField V = random_dealiased_field(g, rng);  // mean-free
    SpectralField C(g);
    C.coeffs[0] = Complex{std::pow(2.0 * g.L, g.n) * 1.7, 0.0};  // constant 1.7

    const Paraproduct bits = paraproduct(C, V, P);
    // c * v is recovered entirely by T_{c}v; the other two terms vanish.
    SpectralField expected = scale(V, Complex{1.7, 0.0});
    CHECK(rel_l2(bits.t_uv, dealias(expected)) < 1e-10);
    CHECK(l2_norm(bits.t_vu) < 1e-10);
    CHECK(l2_norm(bits.r_uv) < 1e-10);
}

TEST_CASE("paraproduct reconstructs the dealiased product for mean-free fields") {
    const GridSpec g(1, 128, 16.0);
    const DyadicPartition P = build_partition(g);
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 5; ++trial) {
        const SpectralField U = random_dealiased_field(g, rng);
        const SpectralField V = random_dealiased_field(g, rng);
        const Paraproduct bits = paraproduct(U, V, P);
        SpectralField sum = bits.t_uv;
        for (std::size_t i = 0; i < sum.coeffs.size(); ++i)
            sum.coeffs[i] += bits.t_vu.coeffs[i] + bits.r_uv.coeffs[i];
        const SpectralField target = dealias(multiply_physical(U, V));
        CHECK(rel_l2(sum, target) < 1e-10);
    }

    const GridSpec other(1, 64, 16.0);
    CHECK_THROWS_AS((void)paraproduct(SpectralField(other), SpectralField(g), P), std::invalid_argument);
}
