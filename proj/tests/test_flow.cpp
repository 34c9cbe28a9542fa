#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "wvres/errors.hpp"
#include "wvres/flow.hpp"
#include "wvres/oracles/jost.hpp"

using namespace wvres;

namespace {

const std::vector<double> kWellEdges{-3.0, -2.5, 2.5, 3.0};
const std::vector<double> kWellValues{1.5, 0.0, 1.5};

PotentialSpec well() { return PotentialSpec::steps(kWellEdges, kWellValues); }

cplx nearest(const std::vector<cplx>& values, cplx z) {
    return *std::min_element(values.begin(), values.end(),
                             [&](cplx a, cplx b) { return std::abs(a - z) < std::abs(b - z); });
}

}  // namespace

TEST_CASE("free viscosity operator against the complex harmonic oscillator") {
    const double eps = 1e-2;
    const auto exact = oracles::complex_oscillator(eps, 10);
    const auto got = extrapolated_lowest(PotentialSpec::zero(), eps, 0.0, auto_cap_grid(eps), 10);
    REQUIRE(got.size() == 10);
    for (int k = 0; k < 10; ++k) {
        CHECK(std::abs(got[k].value - exact[k]) <= 1e-6 * std::abs(exact[k]));
        // the raw fine-grid value is only second-order accurate
        CHECK(std::abs(got[k].fine - exact[k]) > std::abs(got[k].value - exact[k]));
    }
}

TEST_CASE("free viscosity spectrum scales like sqrt(eps)") {
    const auto a = extrapolated_lowest(PotentialSpec::zero(), 1e-2, 0.0, auto_cap_grid(1e-2), 3);
    const auto b = extrapolated_lowest(PotentialSpec::zero(), 4e-2, 0.0, auto_cap_grid(4e-2), 3);
    for (int k = 0; k < 3; ++k) CHECK(std::abs(b[k].value / a[k].value - 2.0) < 1e-5);
}

TEST_CASE("no resonances without a potential") {
    CHECK(resonances(PotentialSpec::zero(), 1, 0.15, GridSpec(8.0, 401)).empty());
    CHECK(resonances(PotentialSpec::zero(), 2, 0.15, GridSpec(8.0, 401)).empty());
}

TEST_CASE("well resonance against the Jost function") {
    const auto jost = oracles::jost_resonances(kWellEdges, kWellValues, 1.0);
    REQUIRE_FALSE(jost.empty());
    const auto found = resonances(well(), 1, 0.15, GridSpec(12.0, 601));
    REQUIRE(found.size() == 1);
    CHECK(std::abs(found[0].z - jost.front()) < 1e-4);
    CHECK(found[0].multiplicity == 1);
    CHECK(found[0].residual < 1e-8);
    CHECK(found[0].band == 1);
    CHECK(Region(1, 0.15, RegionKind::Omega).contains(found[0].z));
}

TEST_CASE("resonance does not depend on the distortion strength") {
    const GridSpec grid(12.0, 601);
    const auto a = resonances(well(), 1, 0.15, grid);
    const auto b = resonances(well(), 1, 0.18, grid);
    REQUIRE(a.size() == 1);
    REQUIRE(b.size() == 1);
    CHECK(std::abs(a[0].z - b[0].z) < 1e-6);
}

TEST_CASE("distorted and undistorted viscosity operators share eigenvalues in the region") {
    // The two operators are unitarily equivalent in the continuum; on the grid
    // they differ by the O(dxi^2) discretisation error only.
    const double eps = 1e-3;
    const auto z = resonances(well(), 1, 0.15, GridSpec(12.0, 601)).front().z;
    auto gap = [&](const GridSpec& grid) {
        const cplx a = nearest(cap_spectrum(well(), eps, 0.0, grid).eigenvalues, z);
        const cplx b = nearest(cap_spectrum(well(), eps, cplx(0.0, -0.15), grid).eigenvalues, z);
        CHECK(std::abs(a - z) < 0.01);
        return std::abs(a - b);
    };
    const double coarse = gap(GridSpec(12.0, 601));
    const double fine = gap(GridSpec(12.0, 601).refined());
    CHECK(coarse < 1e-4);
    CHECK(coarse / fine > 3.0);
}

TEST_CASE("schedule validation") {
    CHECK_NOTHROW(validate_schedule(default_schedule()));
    CHECK(default_schedule().size() == 9);
    CHECK(default_schedule().front() == doctest::Approx(1e-1));
    CHECK(default_schedule().back() == doctest::Approx(1e-5));
    CHECK_THROWS_AS(validate_schedule({}), ParameterError);
    CHECK_THROWS_AS(validate_schedule({1e-2, 1e-1}), ParameterError);
    CHECK_THROWS_AS(validate_schedule({1e-1, 1e-1}), ParameterError);
    CHECK_THROWS_AS(validate_schedule({1e-1, -1e-2}), ParameterError);
}

TEST_CASE("viscosity flow converges to the well resonance") {
    const auto set = flow(well(), 1, 0.15, default_schedule(), GridSpec(12.0, 601));
    REQUIRE(set.resonances.size() == 1);
    REQUIRE(set.matches.size() == 1);
    const auto& m = set.matches.front();
    CHECK(m.monotone_tail);
    CHECK(m.final_distance < 1e-4);
    REQUIRE(set.discs.size() == 1);
    const auto& d = set.discs.front();
    CHECK(d.expected == 1);
    CHECK(d.counts.back() == 1);
    CHECK(d.counts[d.counts.size() - 2] == 1);
    CHECK(d.disc.radius > 0.0);
    CHECK(d.disc.radius < set.resonances.front().curve_distance);
    CHECK(set.tracks.at(m.trajectory).verified);
}

TEST_CASE("flow without resonances keeps the window empty") {
    const auto set = flow(PotentialSpec::zero(), 1, 0.15, {1e-2, 1e-3, 1e-4}, GridSpec(6.0, 301));
    CHECK(set.resonances.empty());
    for (int c : set.window_counts) CHECK(c == 0);
}
