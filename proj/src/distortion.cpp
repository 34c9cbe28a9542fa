#include "wvres/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "wvres/errors.hpp"

namespace wvres {

GridSpec::GridSpec(double half_width, int points) : L_(half_width), N_(points), dxi_(0.0) {
    if (!(half_width >= 2.0) || !std::isfinite(half_width)) {
        throw ParameterError(fmt::format("grid half-width L={} must be finite and >= 2", half_width));
    }
    if (points < kMinPoints) {
        throw ParameterError(fmt::format("grid needs N >= {} points, got {}", kMinPoints, points));
    }
    dxi_ = 2.0 * L_ / (N_ - 1);
}

std::vector<double> GridSpec::nodes() const {
    std::vector<double> xs(N_);
    for (int i = 0; i < N_; ++i) xs[i] = node(i);
    return xs;
}

double DistortionParams::delta0() const { return std::min(1.0 / kPi, K); }

bool DistortionParams::admissible() const {
    if (!std::isfinite(theta.real()) || !std::isfinite(theta.imag())) return false;
    if (theta.imag() == 0.0) return std::abs(theta.real()) < 1.0 / kPi;
    if (theta.real() == 0.0) return std::abs(theta.imag()) < delta0();
    return std::abs(theta) < delta0();
}

void DistortionParams::validate() const {
    if (!admissible()) {
        throw ParameterError(fmt::format("inadmissible distortion angle theta=({}, {}); need |theta| < {}",
                                         theta.real(), theta.imag(), delta0()));
    }
}

DistortionParams DistortionParams::for_band(int n, double delta, double K) {
    if (n < 1) throw ParameterError(fmt::format("band index n={} must be >= 1", n));
    if (!(delta > 0.0)) throw ParameterError(fmt::format("delta={} must be positive", delta));
    DistortionParams p{cplx(0.0, (n % 2 == 0 ? 1.0 : -1.0) * delta), K};
    p.validate();
    return p;
}

cplx phi(cplx theta, double xi) { return xi + theta * std::sin(kPi * xi); }

cplx dphi(cplx theta, double xi) { return 1.0 + kPi * theta * std::cos(kPi * xi); }

cplx sqrt_dphi(cplx theta, double xi) { return std::sqrt(dphi(theta, xi)); }

cplx r_theta(cplx theta, double xi) {
    const double s = std::sin(kPi * xi);
    const double c = std::cos(kPi * xi);
    const cplx g = 1.0 + kPi * theta * c;
    const cplx g1 = -kPi * kPi * theta * s;
    const cplx g2 = -kPi * kPi * kPi * theta * c;
    const cplx g2inv = 1.0 / (g * g);
    return 0.5 * g2 * g2inv / g - 1.25 * g1 * g1 * g2inv * g2inv;
}

namespace {

// Cubic Lagrange interpolation through the four nodes around x.
double interpolate_cubic(std::span<const double> f, const GridSpec& grid, double x) {
    const int n = grid.size();
    const double t = (x + grid.half_width()) / grid.spacing();
    int i0 = static_cast<int>(std::floor(t)) - 1;
    i0 = std::clamp(i0, 0, n - 4);
    const double u = t - i0;  // position relative to node i0, in [0, 3] away from the edges
    const double w0 = -(u - 1) * (u - 2) * (u - 3) / 6.0;
    const double w1 = u * (u - 2) * (u - 3) / 2.0;
    const double w2 = -u * (u - 1) * (u - 3) / 2.0;
    const double w3 = u * (u - 1) * (u - 2) / 6.0;
    return w0 * f[i0] + w1 * f[i0 + 1] + w2 * f[i0 + 2] + w3 * f[i0 + 3];
}

}  // namespace

std::vector<double> apply_U(double theta, std::span<const double> samples, const GridSpec& grid) {
    DistortionParams{cplx(theta, 0.0)}.validate();
    const int n = grid.size();
    if (static_cast<int>(samples.size()) != n) {
        throw ParameterError(fmt::format("apply_U: {} samples for a grid of {} nodes", samples.size(), n));
    }
    const double L = grid.half_width();
    const double slack = 1e-12 * L;
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) {
        const double xi = grid.node(i);
        const double mapped = xi + theta * std::sin(kPi * xi);
        const double jac = std::sqrt(1.0 + kPi * theta * std::cos(kPi * xi));
        if (mapped < -L - slack || mapped > L + slack) {
            // Zero extension is only valid for functions vanishing at that edge.
            const double edge = mapped < 0 ? samples.front() : samples.back();
            if (edge != 0.0) {
                throw DomainError(fmt::format(
                    "apply_U: Phi maps node {} to {} outside [-{}, {}] where the function is supported", xi,
                    mapped, L, L));
            }
            out[i] = 0.0;
            continue;
        }
        out[i] = jac * interpolate_cubic(samples, grid, std::clamp(mapped, -L, L));
    }
    return out;
}

}  // namespace wvres
