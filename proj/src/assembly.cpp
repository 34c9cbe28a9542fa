#include "wvres/assembly.hpp"

#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "wvres/distortion.hpp"
#include "wvres/errors.hpp"

namespace wvres {

namespace {

void check_inputs(const PotentialSpec& spec, cplx theta, double epsilon) {
    DistortionParams{theta, spec.K}.validate();
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        throw ParameterError(fmt::format("viscosity epsilon={} must be finite and non-negative", epsilon));
    }
}

// -i eps (D_+^T diag(m) D_+ + diag(r)), m = Phi'^{-2} at the cell midpoints,
// including the two ghost edges at -L - dxi/2 and L + dxi/2.
void add_viscosity(CMatrix& a, cplx theta, double epsilon, const GridSpec& grid) {
    if (epsilon == 0.0) return;
    const int n = grid.size();
    const double h = grid.spacing();
    const cplx scale = cplx(0.0, -epsilon) / (h * h);
    std::vector<cplx> m(n + 1);
    for (int e = 0; e <= n; ++e) {
        const cplx g = dphi(theta, grid.node(0) + (e - 0.5) * h);
        m[e] = 1.0 / (g * g);
    }
    for (int i = 0; i < n; ++i) {
        a(i, i) += scale * (m[i] + m[i + 1]) + cplx(0.0, -epsilon) * r_theta(theta, grid.node(i));
        if (i + 1 < n) {
            a(i, i + 1) -= scale * m[i + 1];
            a(i + 1, i) -= scale * m[i + 1];
        }
    }
}

}  // namespace

OperatorMatrix assemble(const PotentialSpec& spec, cplx theta, double epsilon, const GridSpec& grid) {
    check_inputs(spec, theta, epsilon);
    const int n = grid.size();
    const double h = grid.spacing();
    CMatrix a = CMatrix::Zero(n, n);

    std::vector<cplx> mapped(n), root(n);
    for (int i = 0; i < n; ++i) {
        mapped[i] = phi(theta, grid.node(i));
        root[i] = sqrt_dphi(theta, grid.node(i));
    }

    if (spec.family() == PotentialFamily::SincOscillatory) {
        const double half_a = 0.5 * spec.amplitude();
        // column-major: parallel over columns keeps writes contiguous
#pragma omp parallel for schedule(static)
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                const double w = KernelEvaluator::indicator_weight(grid.node(i) - grid.node(j));
                if (w != 0.0) a(i, j) = half_a * w * root[i] * root[j] * h;
            }
        }
    } else if (spec.family() != PotentialFamily::Zero) {
        const KernelEvaluator kernel(spec, theta, 2.0 * grid.half_width() + 2.0);
#pragma omp parallel for schedule(dynamic, 8)
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                a(i, j) = root[i] * kernel.convolution(mapped[i] - mapped[j]) * root[j] * h;
            }
        }
    }

    for (int i = 0; i < n; ++i) a(i, i) += mapped[i] * mapped[i];
    add_viscosity(a, theta, epsilon, grid);
    return OperatorMatrix{std::move(a), grid, theta, epsilon, spec};
}

OperatorMatrix assemble_free(cplx theta, double epsilon, const GridSpec& grid) {
    return assemble(PotentialSpec::zero(), theta, epsilon, grid);
}

namespace reference {

OperatorMatrix assemble(const PotentialSpec& spec, cplx theta, double epsilon, const GridSpec& grid) {
    check_inputs(spec, theta, epsilon);
    const int n = grid.size();
    const double h = grid.spacing();
    const KernelEvaluator kernel(spec, theta, 2.0 * grid.half_width() + 2.0);
    CMatrix a(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double xi = grid.node(i);
            cplx value = kernel(xi, grid.node(j)) * h;
            if (i == j) value += phi(theta, xi) * phi(theta, xi);
            if (epsilon > 0.0) {
                // D_+^T m D_+ written out entrywise
                auto m = [&](double x) { return std::pow(dphi(theta, x), -2.0); };
                if (i == j) {
                    value += cplx(0.0, -epsilon) * ((m(xi - 0.5 * h) + m(xi + 0.5 * h)) / (h * h) + r_theta(theta, xi));
                } else if (std::abs(i - j) == 1) {
                    const double mid = 0.5 * (xi + grid.node(j));
                    value += cplx(0.0, epsilon) * m(mid) / (h * h);
                }
            }
            a(i, j) = value;
        }
    }
    return OperatorMatrix{std::move(a), grid, theta, epsilon, spec};
}

}  // namespace reference

}  // namespace wvres
