#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "wvres/eigen_engine.hpp"
#include "wvres/errors.hpp"
#include "wvres/oracles/jost.hpp"

using namespace wvres;

namespace {

CMatrix random_matrix(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    CMatrix a(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) a(i, j) = cplx(g(rng), g(rng));
    return a;
}

// A radius between two consecutive eigenvalue distances from `center`.
double separating_radius(const std::vector<cplx>& ev, cplx center, int inside) {
    std::vector<double> d;
    for (cplx l : ev) d.push_back(std::abs(l - center));
    std::sort(d.begin(), d.end());
    return 0.5 * (d[inside - 1] + d[inside]);
}

}  // namespace

TEST_CASE("diagonal matrices") {
    CMatrix a = CMatrix::Zero(5, 5);
    const std::vector<cplx> diag{cplx(3, 1), cplx(-1, 0), cplx(2, -2), cplx(0, 0.5), cplx(-1, 1)};
    for (int i = 0; i < 5; ++i) a(i, i) = diag[i];
    const auto dec = eig(a, true);
    auto sorted = diag;
    std::sort(sorted.begin(), sorted.end(),
              [](cplx x, cplx y) { return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag(); });
    for (int i = 0; i < 5; ++i) CHECK(std::abs(dec.eigenvalues[i] - sorted[i]) < 1e-14);
    CHECK(dec.meta.max_residual < 1e-13);
    CHECK(dec.meta.solver == "zgeev");
}

TEST_CASE("Dirichlet Laplacian against its closed form") {
    const int n = 200;
    const double h = 0.05;
    CMatrix a = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        a(i, i) = 2.0 / (h * h);
        if (i > 0) a(i, i - 1) = -1.0 / (h * h);
        if (i + 1 < n) a(i, i + 1) = -1.0 / (h * h);
    }
    const auto dec = eig(a);
    const auto exact = oracles::dirichlet_laplacian(n, h);
    for (int k = 0; k < n; ++k) {
        CHECK(std::abs(dec.eigenvalues[k] - exact[k]) <= 1e-10 * exact.back());
    }
}

TEST_CASE("Jordan block has algebraic multiplicity two") {
    CMatrix a(2, 2);
    a << 1.0, 1.0, 0.0, 1.0;
    const auto r = projector_rank(a, 1.0, 0.5);
    CHECK(r.rank == 2);
    const CMatrix p = riesz_projector(a, 1.0, 0.5);
    CHECK((p - CMatrix::Identity(2, 2)).norm() < 1e-10);
    CHECK(projector_rank(a, 3.0, 0.5).rank == 0);
}

TEST_CASE("projector rank equals the eigenvalue count on random matrices") {
    std::mt19937_64 rng(20261015);
    std::uniform_int_distribution<int> pick(1, 15);
    int mismatches = 0;
    double worst_idempotency = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const CMatrix a = random_matrix(16, rng);
        const auto ev = eig(a).eigenvalues;
        const cplx center = ev[static_cast<std::size_t>(trial) % ev.size()] + cplx(0.1, -0.05);
        // widest gap in the sorted distances, so the circle stays clear of the spectrum
        std::vector<double> d;
        for (cplx l : ev) d.push_back(std::abs(l - center));
        std::sort(d.begin(), d.end());
        int inside = pick(rng);
        for (int k = 1; k < 16; ++k)
            if (d[k] / d[k - 1] > d[inside] / d[inside - 1]) inside = k;
        const double radius = separating_radius(ev, center, inside);
        const auto r = projector_rank(a, ev, center, radius);
        if (r.rank != inside) ++mismatches;
        const CMatrix p = riesz_projector(a, center, radius, r.points);
        worst_idempotency = std::max(worst_idempotency, (p * p - p).norm() / std::max(1.0, p.norm()));
    }
    CHECK(mismatches == 0);
    CHECK(worst_idempotency < 1e-6);
}

TEST_CASE("contour guard") {
    CMatrix a = CMatrix::Zero(3, 3);
    a(0, 0) = 1.0;
    a(1, 1) = 1.5 + 1e-9;
    a(2, 2) = 4.0;
    CHECK_THROWS_AS(projector_rank(a, 1.0, 0.5), ContourError);
    CHECK(contour_filter_error(1.0, 1.0, 0.5, 64) == 0.0);
    CHECK(contour_filter_error(2.0, 1.0, 0.5, 8) == doctest::Approx(std::pow(0.5, 8)));
}

TEST_CASE("rank is invariant under transposition") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 10; ++t) {
        const CMatrix a = random_matrix(12, rng);
        const auto ev = eig(a).eigenvalues;
        const double radius = separating_radius(ev, 0.0, 5);
        CHECK(projector_rank(a, 0.0, radius).rank == projector_rank(CMatrix(a.transpose()), 0.0, radius).rank);
    }
}

TEST_CASE("Hessenberg projector agrees with dense LU reference and probing") {
    std::mt19937_64 rng(11);
    const int n = 120;
    const CMatrix a = random_matrix(n, rng);
    const auto ev = eig(a).eigenvalues;
    const cplx center(0.5, 0.5);
    const double radius = separating_radius(ev, center, 7);
    const HessenbergResolvent res(a);
    const CMatrix y = random_matrix(n, rng).leftCols(4);
    const CMatrix fast = apply_projector(res, y, center, radius, 128);
    const CMatrix slow = reference::apply_projector(a, y, center, radius, 128);
    CHECK((fast - slow).norm() <= 1e-10 * slow.norm());
    CHECK(projector_rank(res, ev, center, radius).rank == 7);
}

TEST_CASE("resolvent solve") {
    std::mt19937_64 rng(3);
    const CMatrix a = random_matrix(30, rng);
    const CMatrix b = random_matrix(30, rng).leftCols(3);
    const HessenbergResolvent res(a);
    const cplx z(0.3, 7.0);
    const CMatrix x = res.solve(z, b);
    CHECK(((z * CMatrix::Identity(30, 30) - a) * x - b).norm() < 1e-10 * b.norm());
}
