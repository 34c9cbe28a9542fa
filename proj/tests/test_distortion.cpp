#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "wvres/distortion.hpp"
#include "wvres/errors.hpp"

using namespace wvres;

namespace {

// Defining nested-derivative expression of r_theta by centred differences,
// evaluated on g = Phi' only; independent of the closed form.
cplx r_theta_finite_difference(cplx theta, double xi, double h) {
    auto g = [&](double x) { return 1.0 + kPi * theta * std::cos(kPi * x); };
    auto inner = [&](double x) { return std::pow(g(x), -0.5); };
    auto d_inner = [&](double x) { return (inner(x + h) - inner(x - h)) / (2.0 * h); };
    auto flux = [&](double x) { return d_inner(x) / g(x); };
    const cplx d_flux = (flux(xi + h) - flux(xi - h)) / (2.0 * h);
    return -std::pow(g(xi), -0.5) * d_flux;
}

}  // namespace

TEST_CASE("phi and dphi at exact points") {
    const cplx th(0.0, 0.1);
    for (int k = -5; k <= 5; ++k) {
        CHECK(std::abs(phi(th, k) - cplx(k)) < 1e-14);
        CHECK(std::abs(phi(cplx(0.3, -0.05), k) - cplx(k)) < 1e-14);
    }
    CHECK(phi(0.0, 0.37) == cplx(0.37));
    CHECK(std::abs(phi(th, 0.5) - cplx(0.5, 0.1)) < 1e-15);

    CHECK(dphi(0.0, 1.23) == cplx(1.0));
    CHECK(std::abs(dphi(cplx(0.2, 0.1), 0.5) - 1.0) < 1e-15);
    CHECK(std::abs(dphi(th, 0.0) - cplx(1.0, 0.1 * kPi)) < 1e-15);
}

TEST_CASE("periodicity and finite-difference derivative") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    const cplx th(0.05, -0.2);
    for (int s = 0; s < 1000; ++s) {
        const double xi = u(rng);
        CHECK(std::abs((phi(th, xi + 2.0) - (xi + 2.0)) - (phi(th, xi) - xi)) < 1e-12);
        CHECK(std::abs(dphi(th, xi + 2.0) - dphi(th, xi)) < 1e-12);
        const double h = 1e-5;
        const cplx fd = (phi(th, xi + h) - phi(th, xi - h)) / (2.0 * h);
        CHECK(std::abs(fd - dphi(th, xi)) < 1e-8);
    }
}

TEST_CASE("imaginary distortion keeps differences inside a sector") {
    for (double delta : {0.05, 0.15, 0.3}) {
        const cplx th(0.0, delta);
        for (double xi = -6.0; xi <= 6.0; xi += 0.137) {
            for (double eta = -6.0; eta <= 6.0; eta += 0.113) {
                const cplx d = phi(th, xi) - phi(th, eta);
                CHECK(d.real() == doctest::Approx(xi - eta));
                CHECK(std::abs(d.imag()) <= kPi * delta * std::abs(d.real()) + 1e-12);
            }
        }
    }
}

TEST_CASE("Phi' stays in the right half-plane for admissible angles") {
    for (cplx th : {cplx(0.3, 0.0), cplx(0.0, 0.31), cplx(0.0, -0.2), cplx(0.1, 0.1)}) {
        REQUIRE(DistortionParams{th}.admissible());
        for (double xi = -3.0; xi <= 3.0; xi += 0.01) {
            CHECK(dphi(th, xi).real() > 0.0);
            if (th.real() == 0.0) CHECK(std::abs(dphi(th, xi)) >= 1.0 - 1e-15);
            if (th.imag() == 0.0) CHECK(std::abs(dphi(th, xi)) >= 1.0 - kPi * std::abs(th) - 1e-15);
        }
    }
}

TEST_CASE("admissibility bounds") {
    CHECK(DistortionParams{cplx(0.31, 0.0)}.admissible());
    CHECK_FALSE(DistortionParams{cplx(0.32, 0.0)}.admissible());
    CHECK_FALSE(DistortionParams{cplx(0.0, 0.35)}.admissible());
    CHECK_FALSE(DistortionParams{cplx(0.0, 0.2), 0.1}.admissible());  // K caps delta0
    CHECK_THROWS_AS(DistortionParams::for_band(1, 0.4), ParameterError);
    CHECK_THROWS_AS(DistortionParams::for_band(0, 0.1), ParameterError);
    CHECK(DistortionParams::for_band(1, 0.1).theta == cplx(0.0, -0.1));
    CHECK(DistortionParams::for_band(2, 0.1).theta == cplx(0.0, 0.1));
}

TEST_CASE("r_theta closed form") {
    for (double xi = -2.0; xi <= 2.0; xi += 0.25) CHECK(r_theta(0.0, xi) == cplx(0.0));

    const cplx th(0.0, 0.1);
    for (double xi = -1.7; xi <= 1.7; xi += 0.3) CHECK(std::abs(r_theta(th, xi + 2.0) - r_theta(th, xi)) < 1e-12);

    const cplx exact = r_theta(th, 0.3);
    const cplx fd = r_theta_finite_difference(th, 0.3, 1e-4);
    CHECK(std::abs(fd - exact) / std::abs(exact) <= 1e-6);

    // bounded in xi
    double sup = 0.0;
    for (double xi = -1.0; xi <= 1.0; xi += 1e-3) sup = std::max(sup, std::abs(r_theta(cplx(0.0, 0.3), xi)));
    CHECK(sup < 1e3);
}

TEST_CASE("apply_U") {
    const GridSpec grid(10.0, 801);
    std::vector<double> f(grid.size());
    for (int i = 0; i < grid.size(); ++i) f[i] = std::exp(-grid.node(i) * grid.node(i));

    SUBCASE("identity at theta = 0") {
        const auto g = apply_U(0.0, f, grid);
        for (int i = 0; i < grid.size(); ++i) CHECK(g[i] == doctest::Approx(f[i]).epsilon(1e-14));
    }
    SUBCASE("norm preserved for a Gaussian") {
        // change of variables: int |U f|^2 = int |f|^2; both by direct quadrature
        const auto g = apply_U(0.2, f, grid);
        double nf = 0.0, ng = 0.0;
        for (int i = 0; i < grid.size(); ++i) {
            nf += f[i] * f[i];
            ng += g[i] * g[i];
        }
        nf *= grid.spacing();
        ng *= grid.spacing();
        CHECK(std::abs(ng - nf) / nf < 1e-6);
    }
    SUBCASE("support mapped outside the grid") {
        const GridSpec odd(10.5, 421);
        std::vector<double> ones(odd.size(), 1.0);
        CHECK_THROWS_AS(apply_U(0.3, ones, odd), DomainError);
    }
    SUBCASE("inadmissible angle") { CHECK_THROWS_AS(apply_U(0.4, f, grid), ParameterError); }
}

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(GridSpec(12.0, 8), ParameterError);
    CHECK_THROWS_AS(GridSpec(1.0, 100), ParameterError);
    const GridSpec g(12.0, 1201);
    CHECK(g.spacing() == doctest::Approx(0.02));
    CHECK(g.node(600) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(g.refined().size() == 2401);
}
