#include <doctest.h>

#include <cmath>
#include <vector>

#include "wvres/distortion.hpp"
#include "wvres/errors.hpp"
#include "wvres/potential.hpp"

using namespace wvres;

namespace {

// (2 pi)^{-1/2} int_a^b V(x) e^{-ixz} dx by composite Simpson on a fine grid.
cplx direct_transform(const PotentialSpec& spec, cplx z, double a, double b, int panels) {
    const double h = (b - a) / panels;
    cplx sum = 0.0;
    for (int k = 0; k <= panels; ++k) {
        const double x = a + k * h;
        const double w = (k == 0 || k == panels) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
        sum += w * spec.value(x) * std::exp(cplx(0.0, -x) * z);
    }
    return sum * h / 3.0 / std::sqrt(2.0 * kPi);
}

// Trapezoid on the bump's support, doubled until successive values agree.
cplx self_converged_transform(const PotentialSpec& spec, cplx z) {
    const double b = spec.radius();
    auto trap = [&](int panels) {
        const double h = 2.0 * b / panels;
        cplx s = 0.0;
        for (int k = 1; k < panels; ++k) {
            const double x = -b + k * h;
            s += spec.value(x) * std::exp(cplx(0.0, -x) * z);
        }
        return s * h / std::sqrt(2.0 * kPi);
    };
    int panels = 16;
    cplx prev = trap(panels);
    for (int it = 0; it < 14; ++it) {
        panels *= 2;
        const cplx next = trap(panels);
        if (std::abs(next - prev) < 1e-13) return next;
        prev = next;
    }
    return prev;
}

std::vector<PotentialSpec> catalogue() {
    return {PotentialSpec::zero(), PotentialSpec::sinc(1.0), PotentialSpec::gaussian(2.0, {0.5, 1.0}, {0.3}),
            PotentialSpec::steps({-3.0, -2.5, 2.5, 3.0}, {1.5, 0.0, 1.5}), PotentialSpec::smooth_bump(2.0, -1.0)};
}

}  // namespace

TEST_CASE("zero potential has zero transform") {
    for (cplx z : {cplx(0.0), cplx(1.0, 0.3), cplx(-5.0, -2.0)}) CHECK(hat_V(PotentialSpec::zero(), z) == cplx(0.0));
}

TEST_CASE("gaussian envelope transform") {
    SUBCASE("closed form at the origin") {
        for (double sigma : {0.5, 1.0, 3.0}) {
            const auto spec = PotentialSpec::gaussian(sigma, {1.0});
            CHECK(std::abs(hat_V(spec, 0.0) - std::sqrt(sigma / 2.0)) < 1e-14);
            CHECK(std::abs(direct_transform(spec, 0.0, -40.0, 40.0, 8000) - std::sqrt(sigma / 2.0)) < 1e-10);
        }
    }
    SUBCASE("harmonics at complex arguments") {
        const auto spec = PotentialSpec::gaussian(1.5, {0.2, -0.7, 0.4}, {0.5, 0.1});
        for (cplx z : {cplx(0.4, 0.0), cplx(1.7, 0.2), cplx(-2.3, -0.3), cplx(4.1, 0.1)}) {
            CHECK(std::abs(hat_V(spec, z) - direct_transform(spec, z, -30.0, 30.0, 12000)) < 1e-9);
        }
    }
    SUBCASE("real potential") {
        const auto spec = PotentialSpec::gaussian(1.0, {0.1, 0.2}, {0.3, 0.4});
        for (int k = -2; k <= 2; ++k) CHECK(spec.periodic_coefficient(-k) == std::conj(spec.periodic_coefficient(k)));
    }
}

TEST_CASE("compact bump transforms") {
    SUBCASE("steps: closed form matches quadrature") {
        const auto spec = PotentialSpec::steps({-3.0, -2.5, 2.5, 3.0}, {1.5, 0.0, 1.5});
        for (cplx z : {cplx(0.0), cplx(1e-7, 0.0), cplx(1.0, 0.1), cplx(-3.2, 0.25), cplx(7.0, -0.3)}) {
            // integrand is smooth on each segment: integrate segment by segment
            cplx total = 0.0;
            for (std::size_t k = 0; k + 1 < spec.edges().size(); ++k) {
                const auto unit = PotentialSpec::steps({spec.edges()[k] - 1.0, spec.edges()[k + 1] + 1.0}, {1.0});
                total += spec.values()[k] * direct_transform(unit, z, spec.edges()[k], spec.edges()[k + 1], 2000);
            }
            CHECK(std::abs(hat_V(spec, z) - total) < 1e-10);
        }
    }
    SUBCASE("smooth bump: adaptive quadrature vs self-convergent refinement") {
        const auto spec = PotentialSpec::smooth_bump(2.0, -1.0);
        const cplx z(1.0, 0.1);
        CHECK(std::abs(hat_V(spec, z) - self_converged_transform(spec, z)) < 1e-8);
    }
    SUBCASE("smooth bump: bulk table agrees with the adaptive rule") {
        const auto spec = PotentialSpec::smooth_bump(1.5, 2.0);
        const KernelEvaluator ker(spec, cplx(0.0, -0.2), 30.0);
        for (cplx dz : {cplx(0.3, 0.01), cplx(5.0, -0.2), cplx(-17.0, 0.3), cplx(29.0, 0.1)}) {
            const cplx adaptive = hat_V(spec, dz) / std::sqrt(2.0 * kPi);
            CHECK(std::abs(ker.convolution(dz) - adaptive) < 1e-10);
        }
    }
}

TEST_CASE("sinc transform is an indicator on the real axis") {
    const auto spec = PotentialSpec::sinc(1.0);
    const double peak = kPi / std::sqrt(2.0 * kPi);
    CHECK(std::abs(hat_V(spec, 1.0) - peak) < 1e-15);
    CHECK(std::abs(hat_V(spec, 2.0) - 0.5 * peak) < 1e-15);
    CHECK(hat_V(spec, 2.5) == cplx(0.0));
    CHECK_THROWS_AS(hat_V(spec, cplx(1.0, 0.1)), DomainError);
}

TEST_CASE("sinc kernel values") {
    const auto spec = PotentialSpec::sinc(1.0);
    CHECK(kernel(spec, 0.0, 3.5, 0.5) == cplx(0.0));
    CHECK(std::abs(kernel(spec, 0.0, 1.5, 0.5) - 0.5) < 1e-15);
    CHECK(std::abs(kernel(spec, 0.0, 2.5, 0.5) - 0.25) < 1e-15);
    // distorted: weight product only
    const cplx th(0.0, -0.15);
    const cplx expected = 0.5 * sqrt_dphi(th, 0.3) * sqrt_dphi(th, -0.4);
    CHECK(std::abs(kernel(spec, th, 0.3, -0.4) - expected) < 1e-15);
}

TEST_CASE("undistorted kernels are Hermitian") {
    for (const auto& spec : catalogue()) {
        const KernelEvaluator ker(spec, 0.0, 20.0);
        for (double xi = -4.0; xi <= 4.0; xi += 0.7) {
            for (double eta = -4.0; eta <= 4.0; eta += 0.9) {
                CHECK(std::abs(ker(xi, eta) - std::conj(ker(eta, xi))) < 1e-12);
            }
        }
    }
}

TEST_CASE("kernel is analytic in theta (Cauchy-Riemann)") {
    const double h = 1e-4;
    for (const auto& spec : catalogue()) {
        if (spec.family() == PotentialFamily::Zero) continue;
        const cplx th(0.0, 0.15);
        for (auto [xi, eta] : {std::pair{0.3, -0.4}, std::pair{1.7, 0.2}, std::pair{-2.2, 1.1}}) {
            if (spec.family() == PotentialFamily::SincOscillatory && std::abs(std::abs(xi - eta) - 2.0) < 0.1) continue;
            const cplx dx = (kernel(spec, th + h, xi, eta) - kernel(spec, th - h, xi, eta)) / (2.0 * h);
            const cplx dy = (kernel(spec, th + cplx(0, h), xi, eta) - kernel(spec, th - cplx(0, h), xi, eta)) / (2.0 * h);
            CHECK(std::abs(0.5 * (dx + kI * dy)) < 1e-6);
        }
    }
}

TEST_CASE("kernel rows are uniformly summable") {
    const GridSpec grid(12.0, 601);
    for (const auto& spec : {PotentialSpec::sinc(1.0), PotentialSpec::gaussian(1.0, {1.0, 0.5}),
                             PotentialSpec::smooth_bump(2.0, -1.0)}) {
        const KernelEvaluator ker(spec, cplx(0.0, -0.2), 26.0);
        double worst = 0.0;
        for (int i = 0; i < grid.size(); i += 10) {
            double row = 0.0;
            for (int j = 0; j < grid.size(); ++j) row += std::abs(ker(grid.node(i), grid.node(j))) * grid.spacing();
            worst = std::max(worst, row);
        }
        CHECK(worst < 10.0);
        // far-off-diagonal part is small
        const double full = kernel_tail_bound(ker, grid, 0.0);
        const double near = kernel_tail_bound(ker, grid, 4.0);
        const double far = kernel_tail_bound(ker, grid, 12.0);
        CHECK(far <= near);
        CHECK(near <= full);
        CHECK(far < 5e-2 * full);
    }
}

TEST_CASE("potential parameter validation") {
    CHECK_THROWS_AS(PotentialSpec::gaussian(-1.0, {1.0}), ParameterError);
    CHECK_THROWS_AS(PotentialSpec::steps({0.0, 1.0}, {1.0, 2.0}), ParameterError);
    CHECK_THROWS_AS(PotentialSpec::steps({1.0, 0.0}, {1.0}), ParameterError);
    CHECK_THROWS_AS(PotentialSpec::smooth_bump(0.0, 1.0), ParameterError);
    CHECK_THROWS_AS(KernelEvaluator(PotentialSpec::sinc(1.0), cplx(0.0, 0.5)), ParameterError);
}
