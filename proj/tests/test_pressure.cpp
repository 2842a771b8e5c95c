#include "fbpme/fieldgen.hpp"
#include "fbpme/ops.hpp"
#include "fbpme/pressure.hpp"
#include "fbpme/transform.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>

using namespace fbpme;

TEST_CASE("riesz symbol: |xi|^{-2s} with the mean mode projected out") {
    const GridSpec g(1, 32, 4.0 * M_PI);  // dxi = 1/4, so |xi| = 2 at k = 8
    const auto m = pressure_symbol(PressureSpec::riesz(0.5), g);
    CHECK(m[0] == 0.0);
    CHECK(m[8] == doctest::Approx(0.5).epsilon(1e-13));

    CHECK_THROWS_AS(PressureSpec::riesz(0.0), std::invalid_argument);
    CHECK_THROWS_AS(PressureSpec::riesz(-0.2), std::invalid_argument);
    CHECK_THROWS_AS(PressureSpec::riesz(1.2), std::invalid_argument);
    CHECK(PressureSpec::riesz(0.25).sigma == doctest::Approx(0.5));
}

TEST_CASE("identity pressure gradient matches the plain gradient exactly") {
    std::mt19937_64 rng(3);
    const GridSpec g(2, 16, 3.0);
    const SpectralField U = random_dealiased_field(g, rng);
    const auto lhs = pressure_gradient(U, PressureSpec::identity());
    const auto rhs = gradient(U);
    for (int d = 0; d < g.n; ++d)
        CHECK(max_abs_diff(lhs[static_cast<std::size_t>(d)], rhs[static_cast<std::size_t>(d)]) == 0.0);
}

TEST_CASE("exp kernel symbol agrees with direct quadrature of the kernel transform") {
    const GridSpec g(1, 64, 8.0);
    const auto m = pressure_symbol(PressureSpec::exp_kernel(), g);
    // int e^{-|x|} e^{-i xi x} dx = 2 int_0^inf e^{-x} cos(xi x) dx
    for (std::size_t k : {std::size_t{0}, std::size_t{1}, std::size_t{5}, std::size_t{20}}) {
        const double xi = g.dxi() * g.signed_index(static_cast<int>(k));
        const double reference =
            2.0 * oracles::simpson([xi](double x) { return std::exp(-x) * std::cos(xi * x); }, 0.0, 50.0, 20000);
        CHECK(m[k] == doctest::Approx(reference).epsilon(1e-6));
        CHECK(m[k] == doctest::Approx(2.0 / (1.0 + xi * xi)).epsilon(1e-12));
    }
}

TEST_CASE("exp kernel zero-frequency value equals the kernel L1 mass in 1, 2, 3 dims") {
    const double expected[3] = {2.0, 2.0 * M_PI, 8.0 * M_PI};
    for (int n : {1, 2, 3}) {
        const GridSpec g(n, 8, 1.0);
        const auto m = pressure_symbol(PressureSpec::exp_kernel(), g);
        CHECK(m[0] == doctest::Approx(expected[n - 1]).epsilon(1e-12));
    }
}

TEST_CASE("pressure gradient: unit multiplier for riesz s=1/2, zero field, linearity") {
    const GridSpec g(1, 32, 4.0 * M_PI);
    SpectralField U(g);
    U.coeffs[8] = Complex{1.0, 0.0};  // |xi| = 2
    const auto G = pressure_gradient(U, PressureSpec::riesz(0.5));
    // |i xi| |xi|^{-1} = 1 at every nonzero mode.
    CHECK(std::abs(G[0].coeffs[8]) == doctest::Approx(1.0).epsilon(1e-13));

    const auto Z = pressure_gradient(SpectralField(g), PressureSpec::riesz(0.5));
    for (const auto& c : Z[0].coeffs) CHECK(std::abs(c) == 0.0);

    std::mt19937_64 rng(5);
    const SpectralField A = random_dealiased_field(g, rng);
    const SpectralField B = random_dealiased_field(g, rng);
    const SpectralField AB = axpy(Complex{2.0, 0.0}, A, scale(B, Complex{-0.5, 0.0}));
    const auto GA = pressure_gradient(A, PressureSpec::riesz(0.5));
    const auto GB = pressure_gradient(B, PressureSpec::riesz(0.5));
    const auto GAB = pressure_gradient(AB, PressureSpec::riesz(0.5));
    for (std::size_t i = 0; i < GA[0].coeffs.size(); ++i) {
        const Complex combo = 2.0 * GA[0].coeffs[i] - 0.5 * GB[0].coeffs[i];
        CHECK(std::abs(GAB[0].coeffs[i] - combo) < 1e-12);
    }
}

TEST_CASE("pressure gradient commutes with the block operators") {
    std::mt19937_64 rng(7);
    const GridSpec g(1, 64, 8.0);
    const DyadicPartition P = build_partition(g);
    const SpectralField U = random_dealiased_field(g, rng);
    const PressureSpec spec = PressureSpec::riesz(0.3);
    const int j = P.j_min + 1;
    const SpectralField a = block(pressure_gradient(U, spec)[0], j, P);
    const SpectralField b = pressure_gradient(block(U, j, P), spec)[0];
    CHECK(max_abs_diff(a, b) < 1e-15);  // same multipliers, different rounding order
}

TEST_CASE("estimate_sigma recovers the riesz and identity orders") {
    const GridSpec g(1, 256, 16.0);
    const DyadicPartition P = build_partition(g);

    for (double s : {0.25, 0.5, 0.75}) {
        const double slope = estimate_sigma(PressureSpec::riesz(s), g, P);
        CHECK(slope == doctest::Approx(1.0 - 2.0 * s).epsilon(0.0).scale(1.0).epsilon(0.05));
    }
    CHECK(estimate_sigma(PressureSpec::identity(), g, P) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("estimate_sigma on the exponential kernel tracks the decaying symbol, not the generic bound") {
    // |xi| m(xi) ~ |xi|^{-n} at high frequency for the transform of e^{-|x|},
    // so the fitted high-block slope sits near -n rather than at the
    // Young-inequality order 0.
    const GridSpec g(1, 256, 16.0);
    const DyadicPartition P = build_partition(g);
    const double slope = estimate_sigma(PressureSpec::exp_kernel(), g, P, 2.0, SigmaFitWindow::HighHalf);
    CHECK(slope < -0.75);
    CHECK(slope > -1.25);
}

TEST_CASE("estimate_sigma needs enough blocks") {
    const GridSpec g(1, 64, 8.0);  // hosts 3 blocks only
    const DyadicPartition P = build_partition(g);
    CHECK(P.resolved_count() < 4);
    CHECK_THROWS_AS((void)estimate_sigma(PressureSpec::identity(), g, P), std::runtime_error);
}

TEST_CASE("block bound constant is stable under grid doubling") {
    const PressureSpec spec = PressureSpec::riesz(0.5);
    double fitted[2];
    int ix = 0;
    for (int N : {64, 128}) {
        const GridSpec g(1, N, 8.0);
        const DyadicPartition P = build_partition(g);
        std::mt19937_64 rng(11);
        std::vector<SpectralField> fields;
        for (int c = 0; c < 6; ++c) fields.push_back(random_dealiased_field(g, rng));
        fields.push_back(dealias(forward_transform(gaussian_field(g, 1.0, 1.0))));
        fitted[ix++] = fit_block_constant(spec, P, spec.sigma, 2.0, fields);
    }
    CHECK(fitted[0] > 0.0);
    CHECK(fitted[1] / fitted[0] < 2.0);
    CHECK(fitted[0] / fitted[1] < 2.0);
}

TEST_CASE("custom symbols load from CSV and validate their size") {
    const GridSpec g(1, 16, 2.0);
    const std::string path = "custom_symbol_test.csv";
    {
        std::ofstream out(path);
        out << "index,value\n";
        for (std::size_t i = 0; i < g.size(); ++i) out << i << "," << (i == 0 ? 0.0 : 1.5) << "\n";
    }
    const PressureSpec spec = PressureSpec::custom_from_csv(path, 1.0, g.size());
    const auto m = pressure_symbol(spec, g);
    CHECK(m[3] == 1.5);
    CHECK(m[0] == 0.0);

    const PressureSpec bad = PressureSpec::custom(std::vector<double>(4, 1.0), 1.0);
    CHECK_THROWS_AS((void)pressure_symbol(bad, g), std::invalid_argument);
    std::remove(path.c_str());
}
