#include "wvres/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "wvres/distortion.hpp"
#include "wvres/errors.hpp"

namespace wvres {

namespace {

void check_delta(double delta) {
    if (!(delta > 0.0) || !(delta < 1.0 / kPi)) {
        throw ParameterError(fmt::format("delta={} must lie in (0, 1/pi)", delta));
    }
}

double real_square(double delta, double xi) {
    const double s = std::sin(kPi * xi);
    return xi * xi - delta * delta * s * s;
}

}  // namespace

std::vector<cplx> essential_curve(cplx theta, double xi_min, double xi_max, int samples) {
    if (samples < 2) throw ParameterError("essential_curve needs at least two samples");
    std::vector<cplx> out(samples);
    const double step = (xi_max - xi_min) / (samples - 1);
    for (int k = 0; k < samples; ++k) {
        const cplx p = phi(theta, xi_min + k * step);
        out[k] = p * p;
    }
    return out;
}

double kappa_preimage(int n, double delta, double x) {
    check_delta(delta);
    if (n < 1) throw ParameterError(fmt::format("band index n={} must be >= 1", n));
    const double lo_x = static_cast<double>((n - 1) * (n - 1));
    const double hi_x = static_cast<double>(n * n);
    if (!(x >= lo_x && x <= hi_x)) {
        throw RangeError(fmt::format("kappa: x={} outside the band [{}, {}]", x, lo_x, hi_x));
    }
    double lo = n - 1.0, hi = n;
    // Re phi^2 is strictly increasing on [n-1, n] for delta < 1/pi
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (real_square(delta, mid) < x) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

double kappa(int n, double delta, double x) {
    const double xi = kappa_preimage(n, delta, x);
    const double sign = n % 2 == 0 ? 1.0 : -1.0;
    // Im (xi + sign i delta sin(pi xi))^2
    return 2.0 * sign * delta * xi * std::sin(kPi * xi);
}

double curve_distance(cplx theta, cplx z, double xi_min, double xi_max) {
    auto dist = [&](double xi) {
        const cplx p = phi(theta, xi);
        return std::abs(p * p - z);
    };
    const int samples = std::max(64, static_cast<int>(std::ceil((xi_max - xi_min) / 2e-3)));
    const double step = (xi_max - xi_min) / samples;
    double best = std::numeric_limits<double>::infinity();
    double best_xi = xi_min;
    for (int k = 0; k <= samples; ++k) {
        const double xi = xi_min + k * step;
        const double d = dist(xi);
        if (d < best) {
            best = d;
            best_xi = xi;
        }
    }
    // golden-section refinement inside the bracketing cells
    double a = std::max(xi_min, best_xi - step), b = std::min(xi_max, best_xi + step);
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = dist(c), fd = dist(d);
    for (int it = 0; it < 80 && b - a > 1e-14; ++it) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - g * (b - a); fc = dist(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + g * (b - a); fd = dist(d);
        }
    }
    return std::min({best, fc, fd});
}

Region::Region(int n, double delta, RegionKind kind, int curve_samples) : n_(n), delta_(delta), kind_(kind) {
    check_delta(delta);
    if (n < 1) throw ParameterError(fmt::format("band index n={} must be >= 1", n));
    if (curve_samples < 3) throw ParameterError("region needs at least three curve samples");
    const double sign = n % 2 == 0 ? 1.0 : -1.0;
    samples_.reserve(curve_samples);
    for (int k = 0; k < curve_samples; ++k) {
        const double xi = (n - 1) + static_cast<double>(k) / (curve_samples - 1);
        samples_.emplace_back(real_square(delta, xi), 2.0 * sign * delta * xi * std::sin(kPi * xi));
    }
    samples_.front() = {static_cast<double>((n - 1) * (n - 1)), 0.0};
    samples_.back() = {static_cast<double>(n * n), 0.0};

    // Fritsch-Carlson tangents
    const std::size_t m = samples_.size();
    std::vector<double> secant(m - 1);
    for (std::size_t k = 0; k + 1 < m; ++k) {
        secant[k] = (samples_[k + 1].second - samples_[k].second) / (samples_[k + 1].first - samples_[k].first);
    }
    tangents_.assign(m, 0.0);
    tangents_.front() = secant.front();
    tangents_.back() = secant.back();
    for (std::size_t k = 1; k + 1 < m; ++k) {
        tangents_[k] = secant[k - 1] * secant[k] <= 0.0 ? 0.0 : 0.5 * (secant[k - 1] + secant[k]);
    }
    for (std::size_t k = 0; k + 1 < m; ++k) {
        if (secant[k] == 0.0) {
            tangents_[k] = tangents_[k + 1] = 0.0;
            continue;
        }
        const double a = tangents_[k] / secant[k], b = tangents_[k + 1] / secant[k];
        const double r = a * a + b * b;
        if (r > 9.0) {
            const double t = 3.0 / std::sqrt(r);
            tangents_[k] = t * a * secant[k];
            tangents_[k + 1] = t * b * secant[k];
        }
    }
}

cplx Region::theta() const { return cplx(0.0, (n_ % 2 == 0 ? 1.0 : -1.0) * delta_); }

double Region::slope() const { return 0.5 * (1.0 / (kPi * delta_) - kPi * delta_); }

double Region::kappa_tabulated(double x) const {
    if (x < samples_.front().first || x > samples_.back().first) {
        throw RangeError(fmt::format("kappa_tabulated: x={} outside the band", x));
    }
    auto it = std::upper_bound(samples_.begin(), samples_.end(), x,
                               [](double v, const auto& s) { return v < s.first; });
    std::size_t k = it == samples_.begin() ? 0 : static_cast<std::size_t>(it - samples_.begin()) - 1;
    k = std::min(k, samples_.size() - 2);
    const double x0 = samples_[k].first, x1 = samples_[k + 1].first;
    const double h = x1 - x0, t = (x - x0) / h;
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
    return h00 * samples_[k].second + h10 * h * tangents_[k] + h01 * samples_[k + 1].second +
           h11 * h * tangents_[k + 1];
}

Membership Region::classify(cplx z) const {
    const double x = z.real(), y = z.imag();
    const double lo = static_cast<double>((n_ - 1) * (n_ - 1)), hi = static_cast<double>(n_ * n_);
    if (std::abs(x - lo) < kThresholdMargin || std::abs(x - hi) < kThresholdMargin) return Membership::NearThreshold;
    if (!(x > lo && x < hi)) return Membership::Outside;
    // The region is open: points within kBoundaryMargin of the curve or the
    // slope lines (e.g. the curve itself, evaluated in floating point) are outside.
    if (!(y > kappa(n_, delta_, x) + kBoundaryMargin)) return Membership::Outside;
    if (kind_ == RegionKind::OmegaPrime) {
        const double s = slope();
        const double tol = kBoundaryMargin * std::sqrt(1.0 + s * s);
        if (!(y > s * (lo - x) + tol) || !(y > s * (x - hi) + tol)) return Membership::Outside;
    }
    return Membership::Inside;
}

double Region::distance_to_straight_boundary(cplx z) const {
    const double x = z.real(), y = z.imag();
    const double lo = static_cast<double>((n_ - 1) * (n_ - 1)), hi = static_cast<double>(n_ * n_);
    double d = std::min(std::abs(x - lo), std::abs(x - hi));
    if (kind_ == RegionKind::OmegaPrime) {
        const double s = slope();
        const double norm = std::sqrt(1.0 + s * s);
        d = std::min(d, std::abs(y - s * (lo - x)) / norm);
        d = std::min(d, std::abs(y - s * (x - hi)) / norm);
    }
    return d;
}

bool in_region(cplx z, const Region& region) { return region.contains(z); }

std::vector<cplx> symbol_numerical_range(cplx theta, const std::vector<double>& xi_samples,
                                         const std::vector<double>& x_samples) {
    std::vector<cplx> out;
    out.reserve(xi_samples.size() * x_samples.size());
    for (double xi : xi_samples) {
        const cplx p = phi(theta, xi);
        const cplx g = dphi(theta, xi);
        const cplx weight = cplx(0.0, -1.0) / (g * g);
        for (double x : x_samples) out.push_back(p * p + weight * x * x);
    }
    return out;
}

}  // namespace wvres
