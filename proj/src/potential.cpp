#include "wvres/potential.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include "wvres/distortion.hpp"
#include "wvres/errors.hpp"

namespace wvres {

namespace {

const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * kPi);

// sin(w)/w for complex w, with a series near the origin.
cplx sinc(cplx w) {
    if (std::abs(w) < 1e-4) {
        const cplx w2 = w * w;
        return 1.0 - w2 / 6.0 + w2 * w2 / 120.0;
    }
    return std::sin(w) / w;
}

double bump_profile(double x, double radius) {
    const double u = x / radius;
    if (std::abs(u) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - u * u));
}

cplx smooth_bump_transform_adaptive(const PotentialSpec& spec, cplx z) {
    const double b = spec.radius();
    auto integrand = [&](double x) { return bump_profile(x, b) * std::exp(cplx(0.0, -x) * z); };
    double err = 0.0;
    // Split at the origin so each half-panel sees a monotone envelope.
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    const cplx left = GK::integrate(integrand, -b, 0.0, 30, 1e-10, &err);
    const cplx right = GK::integrate(integrand, 0.0, b, 30, 1e-10, &err);
    return spec.depth() * kInvSqrt2Pi * (left + right);
}

}  // namespace

std::string to_string(PotentialFamily family) {
    switch (family) {
        case PotentialFamily::Zero: return "zero";
        case PotentialFamily::SincOscillatory: return "sinc";
        case PotentialFamily::GaussianEnvelope: return "gaussian";
        case PotentialFamily::CompactBump: return "bump";
    }
    return "unknown";
}

PotentialSpec PotentialSpec::zero() { return PotentialSpec{}; }

PotentialSpec PotentialSpec::sinc(double amplitude) {
    if (!std::isfinite(amplitude)) throw ParameterError("sinc amplitude must be finite");
    PotentialSpec p;
    p.family_ = PotentialFamily::SincOscillatory;
    p.amplitude_ = amplitude;
    p.mu = 1.0;
    return p;
}

PotentialSpec PotentialSpec::gaussian(double sigma, std::vector<double> cos_coeffs,
                                      std::vector<double> sin_coeffs) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw ParameterError(fmt::format("gaussian width sigma={} must be positive", sigma));
    }
    if (cos_coeffs.empty()) cos_coeffs.push_back(0.0);
    for (double c : cos_coeffs)
        if (!std::isfinite(c)) throw ParameterError("gaussian cos coefficients must be finite");
    for (double s : sin_coeffs)
        if (!std::isfinite(s)) throw ParameterError("gaussian sin coefficients must be finite");
    PotentialSpec p;
    p.family_ = PotentialFamily::GaussianEnvelope;
    p.sigma_ = sigma;
    p.cos_ = std::move(cos_coeffs);
    // sin_[k-1] multiplies sin(2kx)
    p.sin_ = std::move(sin_coeffs);
    return p;
}

PotentialSpec PotentialSpec::steps(std::vector<double> edges, std::vector<double> values) {
    if (edges.size() < 2 || values.size() + 1 != edges.size()) {
        throw ParameterError(fmt::format("step profile needs edges.size() == values.size() + 1 >= 2 (got {} and {})",
                                         edges.size(), values.size()));
    }
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        if (!(edges[k] < edges[k + 1])) throw ParameterError("step profile edges must be strictly increasing");
    }
    for (double v : values)
        if (!std::isfinite(v)) throw ParameterError("step profile values must be finite");
    PotentialSpec p;
    p.family_ = PotentialFamily::CompactBump;
    p.shape_ = BumpShape::Steps;
    p.edges_ = std::move(edges);
    p.values_ = std::move(values);
    p.radius_ = std::max(std::abs(p.edges_.front()), std::abs(p.edges_.back()));
    return p;
}

PotentialSpec PotentialSpec::smooth_bump(double radius, double depth) {
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw ParameterError(fmt::format("bump radius b={} must be positive", radius));
    }
    if (!std::isfinite(depth)) throw ParameterError("bump depth must be finite");
    PotentialSpec p;
    p.family_ = PotentialFamily::CompactBump;
    p.shape_ = BumpShape::Smooth;
    p.radius_ = radius;
    p.depth_ = depth;
    return p;
}

double PotentialSpec::support_radius() const {
    if (family_ != PotentialFamily::CompactBump) return std::numeric_limits<double>::infinity();
    return radius_;
}

int PotentialSpec::max_harmonic() const {
    return static_cast<int>(std::max(cos_.size() - 1, sin_.size()));
}

cplx PotentialSpec::periodic_coefficient(int k) const {
    const int m = std::abs(k);
    if (m == 0) return cos_.empty() ? 0.0 : cos_[0];
    const double c = m < static_cast<int>(cos_.size()) ? cos_[m] : 0.0;
    const double d = m <= static_cast<int>(sin_.size()) ? sin_[m - 1] : 0.0;
    // c cos(2mx) + d sin(2mx) = a_m e^{2imx} + a_{-m} e^{-2imx}
    return k > 0 ? cplx(0.5 * c, -0.5 * d) : cplx(0.5 * c, 0.5 * d);
}

double PotentialSpec::value(double x) const {
    switch (family_) {
        case PotentialFamily::Zero: return 0.0;
        case PotentialFamily::SincOscillatory:
            return x == 0.0 ? 2.0 * amplitude_ : amplitude_ * std::sin(2.0 * x) / x;
        case PotentialFamily::GaussianEnvelope: {
            double s = cos_.empty() ? 0.0 : cos_[0];
            for (std::size_t k = 1; k < cos_.size(); ++k) s += cos_[k] * std::cos(2.0 * k * x);
            for (std::size_t k = 0; k < sin_.size(); ++k) s += sin_[k] * std::sin(2.0 * (k + 1) * x);
            return s * std::exp(-x * x / sigma_);
        }
        case PotentialFamily::CompactBump:
            if (shape_ == BumpShape::Smooth) return depth_ * bump_profile(x, radius_);
            if (x < edges_.front() || x >= edges_.back()) return 0.0;
            for (std::size_t k = 0; k < values_.size(); ++k)
                if (x < edges_[k + 1]) return values_[k];
            return 0.0;
    }
    return 0.0;
}

cplx hat_V(const PotentialSpec& spec, cplx z) {
    switch (spec.family()) {
        case PotentialFamily::Zero: return 0.0;
        case PotentialFamily::SincOscillatory: {
            if (z.imag() != 0.0) {
                throw DomainError(
                    "hat_V: the sinc transform is an indicator function and has no continuation off the real axis");
            }
            // (2 pi)^{-1/2} a pi chi_{[-2,2]}
            return spec.amplitude() * kPi * kInvSqrt2Pi * KernelEvaluator::indicator_weight(z.real());
        }
        case PotentialFamily::GaussianEnvelope: {
            // Vhat = sum_k a_k What(z - 2k), What(w) = sqrt(sigma/2) exp(-sigma w^2 / 4)
            const double scale = std::sqrt(0.5 * spec.sigma());
            const int kmax = spec.max_harmonic();
            cplx sum = 0.0;
            for (int k = -kmax; k <= kmax; ++k) {
                const cplx a = spec.periodic_coefficient(k);
                if (a == 0.0) continue;
                const cplx w = z - 2.0 * k;
                sum += a * std::exp(-0.25 * spec.sigma() * w * w);
            }
            return scale * sum;
        }
        case PotentialFamily::CompactBump: {
            if (spec.bump_shape() == PotentialSpec::BumpShape::Smooth) return smooth_bump_transform_adaptive(spec, z);
            const auto& e = spec.edges();
            const auto& v = spec.values();
            cplx sum = 0.0;
            for (std::size_t k = 0; k < v.size(); ++k) {
                const double width = e[k + 1] - e[k];
                const double mid = 0.5 * (e[k] + e[k + 1]);
                sum += v[k] * width * std::exp(cplx(0.0, -mid) * z) * sinc(0.5 * width * z);
            }
            return kInvSqrt2Pi * sum;
        }
    }
    return 0.0;
}

double KernelEvaluator::indicator_weight(double d) {
    const double a = std::abs(d);
    constexpr double tol = 1e-9;
    if (a < 2.0 - tol) return 1.0;
    if (a <= 2.0 + tol) return 0.5;
    return 0.0;
}

KernelEvaluator::KernelEvaluator(PotentialSpec spec, cplx theta, double max_separation)
    : spec_(std::move(spec)), theta_(theta) {
    DistortionParams{theta_, spec_.K}.validate();
    if (spec_.family() == PotentialFamily::CompactBump && spec_.bump_shape() == PotentialSpec::BumpShape::Smooth) {
        // Trapezoid rule on a uniform grid: the profile and all its
        // derivatives vanish at +-b, so the rule converges faster than any
        // power of h; the aliasing error is set by the bump's transform at
        // 2 pi / h - |z|. About 32 nodes per oscillation of e^{-ixz} at the
        // largest separation (including the distortion's imaginary part).
        const double b = spec_.radius();
        const double zmax = std::abs(max_separation) + 2.0 * std::abs(theta_) + 1.0;
        const int half = std::max(64, static_cast<int>(std::ceil(16.0 * zmax * b / kPi)));
        step_ = b / half;
        // the profile is even: store x_k = k h, k = 0..half-1, and sum cosines
        for (int k = 0; k < half; ++k) {
            weights_.push_back((k == 0 ? 1.0 : 2.0) * step_ * spec_.depth() * bump_profile(k * step_, b));
        }
    }
}

cplx KernelEvaluator::convolution(cplx dz) const {
    if (!weights_.empty()) {
        cplx sum = 0.0;
        // cos(k h dz) = (E^k + E^-k) / 2 with E = e^{-i h dz}, by recurrence
        const cplx e = std::exp(cplx(0.0, -step_) * dz);
        const cplx e_inv = 1.0 / e;
        cplx up = 1.0, down = 1.0;
        for (std::size_t k = 0; k < weights_.size(); ++k) {
            sum += weights_[k] * 0.5 * (up + down);
            up *= e;
            down *= e_inv;
        }
        return kInvSqrt2Pi * kInvSqrt2Pi * sum;
    }
    return kInvSqrt2Pi * hat_V(spec_, dz);
}

cplx KernelEvaluator::operator()(double xi, double eta) const {
    switch (spec_.family()) {
        case PotentialFamily::Zero: return 0.0;
        case PotentialFamily::SincOscillatory: {
            const double w = indicator_weight(xi - eta);
            if (w == 0.0) return 0.0;
            return 0.5 * spec_.amplitude() * w * sqrt_dphi(theta_, xi) * sqrt_dphi(theta_, eta);
        }
        default:
            return sqrt_dphi(theta_, xi) * convolution(phi(theta_, xi) - phi(theta_, eta)) * sqrt_dphi(theta_, eta);
    }
}

cplx kernel(const PotentialSpec& spec, cplx theta, double xi, double eta) {
    return KernelEvaluator(spec, theta, std::abs(xi - eta) + 4.0)(xi, eta);
}

double kernel_tail_bound(const KernelEvaluator& kernel, const GridSpec& grid, double separation) {
    const int n = grid.size();
    const double h = grid.spacing();
    std::vector<double> rows(n, 0.0), cols(n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double xi = grid.node(i), eta = grid.node(j);
            if (std::abs(xi - eta) <= separation) continue;
            const double a = std::abs(kernel(xi, eta)) * h;
            rows[i] += a;
            cols[j] += a;
        }
    }
    return std::sqrt(*std::max_element(rows.begin(), rows.end()) * *std::max_element(cols.begin(), cols.end()));
}

}  // namespace wvres
