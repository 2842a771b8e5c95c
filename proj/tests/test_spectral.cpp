#include "fbpme/fieldgen.hpp"
#include "fbpme/ops.hpp"
#include "fbpme/transform.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace fbpme;

namespace {

double rel_diff(const SpectralField& A, const SpectralField& B) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < A.coeffs.size(); ++i) {
        num += std::norm(A.coeffs[i] - B.coeffs[i]);
        den += std::norm(B.coeffs[i]);
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace

TEST_CASE("forward transform: constant field maps to the zero mode") {
    for (int n : {1, 2}) {
        const GridSpec g(n, 16, 5.0);
        RealField u(g);
        const double c = 0.75;
        for (auto& v : u.values) v = c;
        const SpectralField U = forward_transform(u);
        const double expected = c * std::pow(2.0 * g.L, g.n);
        CHECK(U.coeffs[0].real() == doctest::Approx(expected).epsilon(1e-13));
        CHECK(std::abs(U.coeffs[0].imag()) < 1e-12 * expected);
        for (std::size_t i = 1; i < U.coeffs.size(); ++i) CHECK(std::abs(U.coeffs[i]) < 1e-10 * expected);
    }
}

TEST_CASE("forward transform: single cosine splits into two symmetric modes") {
    const GridSpec g(1, 32, 7.0);
    const double amp = 1.3;
    const SpectralField U = forward_transform(cosine_mode(g, {1, 0, 0}, amp));
    const double expected = amp * std::pow(2.0 * g.L, g.n) / 2.0;
    CHECK(U.coeffs[1].real() == doctest::Approx(expected).epsilon(1e-12));
    CHECK(U.coeffs[g.size() - 1].real() == doctest::Approx(expected).epsilon(1e-12));
    double off = 0.0;
    for (std::size_t i = 0; i < U.coeffs.size(); ++i)
        if (i != 1 && i != U.coeffs.size() - 1) off = std::max(off, std::abs(U.coeffs[i]));
    CHECK(off < 1e-10 * expected);
}

TEST_CASE("transform round trip is the identity to 1e-12") {
    std::mt19937_64 rng(11);
    for (int n : {1, 2, 3}) {
        const GridSpec g(n, n == 3 ? 8 : 24, 3.0);
        const RealField u = random_real_field(g, rng);
        const RealField back = inverse_transform(forward_transform(u));
        double worst = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < u.values.size(); ++i) {
            worst = std::max(worst, std::abs(u.values[i] - back.values[i]));
            scale = std::max(scale, std::abs(u.values[i]));
        }
        CHECK(worst < 1e-12 * scale);
    }
}

TEST_CASE("inverse transform rejects broken Hermitian symmetry") {
    const GridSpec g(1, 16, 2.0);
    SpectralField U(g);
    U.coeffs[3] = Complex{1.0, 0.5};  // no conjugate partner
    CHECK_THROWS_AS((void)inverse_transform(U), std::invalid_argument);
    CHECK(hermitian_defect(U) > 1e-10);
}

TEST_CASE("fractional laplacian multiplies by |xi|^alpha") {
    // |xi| = 1 lattice point: L = 4 pi so dxi = 1/4, k = 4.
    const GridSpec g1(1, 32, 4.0 * M_PI);
    SpectralField U(g1);
    U.coeffs[4] = Complex{2.0, -1.0};
    const SpectralField R = fractional_laplacian(U, 1.5);
    CHECK(std::abs(R.coeffs[4] - U.coeffs[4]) < 1e-14);

    // |xi| = 5 at k = (3, 4) when dxi = 1.
    const GridSpec g2(2, 16, M_PI);
    SpectralField V(g2);
    const std::size_t idx = g2.flatten({3, 4, 0});
    V.coeffs[idx] = Complex{1.0, 0.0};
    const SpectralField R2 = fractional_laplacian(V, 1.5);
    CHECK(R2.coeffs[idx].real() == doctest::Approx(std::pow(5.0, 1.5)).epsilon(1e-13));

    CHECK_THROWS_AS((void)fractional_laplacian(U, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)fractional_laplacian(U, -1.0), std::invalid_argument);
}

TEST_CASE("fractional laplacian at alpha = 2 matches the finite-difference oracle") {
    double err[2];
    int idx = 0;
    for (int N : {64, 128}) {
        const GridSpec g(1, N, 16.0);
        const RealField u = gaussian_field(g, 1.0, 1.0);
        const RealField lap = inverse_transform(fractional_laplacian(forward_transform(u), 2.0));
        const RealField fd = oracles::fd_laplacian(u);
        double worst = 0.0;
        for (std::size_t i = 0; i < u.values.size(); ++i)
            worst = std::max(worst, std::abs(lap.values[i] + fd.values[i]));  // Lambda^2 = -Laplace
        err[idx++] = worst;
    }
    CHECK(err[1] < err[0]);
    CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.25));  // O(h^2)
}

TEST_CASE("gradient of a cosine is minus xi sine, constants map to zero") {
    const GridSpec g(2, 24, 6.0);
    const double dxi = g.dxi();
    const RealField u = cosine_mode(g, {2, 1, 0}, 1.0);
    const auto G = gradient(forward_transform(u));
    // -xi_d sin(xi . x): check in physical space against the analytic gradient.
    for (int d = 0; d < 2; ++d) {
        const RealField gd = inverse_transform(G[static_cast<std::size_t>(d)]);
        const double xi_d = dxi * (d == 0 ? 2 : 1);
        const RealField expected = cosine_mode(g, {2, 1, 0}, xi_d, M_PI / 2.0);  // cos(arg+pi/2) = -sin
        for (std::size_t i = 0; i < gd.values.size(); ++i)
            CHECK(gd.values[i] == doctest::Approx(expected.values[i]).epsilon(1e-10).scale(1.0));
    }

    RealField c(g);
    for (auto& v : c.values) v = 4.2;
    for (const auto& comp : gradient(forward_transform(c)))
        for (const auto& cf : comp.coeffs) CHECK(std::abs(cf) < 1e-12);
}

TEST_CASE("divergence of gradient equals minus Lambda^2 on dealiased fields") {
    std::mt19937_64 rng(5);
    const GridSpec g(2, 16, 3.0);
    const SpectralField U = random_dealiased_field(g, rng);
    const SpectralField lhs = divergence(gradient(U));
    const SpectralField rhs = fractional_laplacian(U, 2.0);
    for (std::size_t i = 0; i < lhs.coeffs.size(); ++i)
        CHECK(std::abs(lhs.coeffs[i] + rhs.coeffs[i]) < 1e-12);
}

TEST_CASE("dealias zeroes the top third and keeps the resolved band") {
    const GridSpec g(1, 30, 2.0);  // N/3 = 10
    SpectralField U(g);
    U.coeffs[11] = Complex{1.0, 0.0};
    U.coeffs[1] = Complex{2.0, 0.0};
    const SpectralField D = dealias(U);
    CHECK(D.coeffs[11] == Complex{0.0, 0.0});
    CHECK(D.coeffs[1] == Complex{2.0, 0.0});

    // Idempotent projection.
    const SpectralField DD = dealias(D);
    CHECK(max_abs_diff(D, DD) == 0.0);
}

TEST_CASE("dealiased pseudo-spectral product equals the direct convolution") {
    std::mt19937_64 rng(7);
    const GridSpec g(1, 32, 4.0);
    const SpectralField U = random_dealiased_field(g, rng);
    const SpectralField V = random_dealiased_field(g, rng);
    const SpectralField fast = dealias(multiply_physical(U, V));
    const SpectralField slow = dealias(oracles::convolution_product(U, V));
    CHECK(rel_diff(fast, slow) < 1e-12);
}

TEST_CASE("Parseval: grid L2 equals scaled coefficient l2") {
    std::mt19937_64 rng(13);
    const GridSpec g(2, 16, 2.5);
    const RealField u = random_real_field(g, rng);
    const double phys = l2_norm(u);
    const double spec = l2_norm(forward_transform(u));
    CHECK(phys == doctest::Approx(spec).epsilon(1e-10));
}

TEST_CASE("multiplier composition: Lambda^a Lambda^b = Lambda^{a+b}") {
    std::mt19937_64 rng(17);
    const GridSpec g(1, 24, 3.0);
    const SpectralField U = random_dealiased_field(g, rng);
    const SpectralField two_step = fractional_laplacian(fractional_laplacian(U, 0.7), 1.1);
    const SpectralField one_step = fractional_laplacian(U, 1.8);
    for (std::size_t i = 0; i < U.coeffs.size(); ++i)
        CHECK(std::abs(two_step.coeffs[i] - one_step.coeffs[i]) <= 1e-12 * (1.0 + std::abs(one_step.coeffs[i])));
}

TEST_CASE("dealias is self-adjoint in l2") {
    std::mt19937_64 rng(23);
    const GridSpec g(1, 16, 1.5);
    SpectralField U(g), V(g);
    for (std::size_t i = 0; i < U.coeffs.size(); ++i) {
        U.coeffs[i] = Complex{uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)};
        V.coeffs[i] = Complex{uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)};
    }
    const SpectralField DU = dealias(U), DV = dealias(V);
    Complex lhs{0.0, 0.0}, rhs{0.0, 0.0};
    for (std::size_t i = 0; i < U.coeffs.size(); ++i) {
        lhs += DU.coeffs[i] * std::conj(V.coeffs[i]);
        rhs += U.coeffs[i] * std::conj(DV.coeffs[i]);
    }
    CHECK(std::abs(lhs - rhs) < 1e-12);
}
