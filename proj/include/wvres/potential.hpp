#pragma once

#include <limits>
#include <string>
#include <vector>

#include "wvres/grid.hpp"
#include "wvres/types.hpp"

namespace wvres {

enum class PotentialFamily { Zero, SincOscillatory, GaussianEnvelope, CompactBump };

std::string to_string(PotentialFamily family);

/// A real potential of the form periodic factor x analytic envelope, or a
/// compactly supported profile.
///
///  - SincOscillatory:  V(x) = a sin(2x) / x
///  - GaussianEnvelope: V(x) = s(x) exp(-x^2/sigma),
///                      s(x) = c_0 + sum_k c_k cos(2kx) + d_k sin(2kx)
///  - CompactBump, steps:  piecewise constant on [edges[k], edges[k+1]]
///  - CompactBump, smooth: depth * exp(1 - 1/(1 - (x/b)^2)) on |x| < b
class PotentialSpec {
public:
    enum class BumpShape { Steps, Smooth };

    static PotentialSpec zero();
    static PotentialSpec sinc(double amplitude);
    static PotentialSpec gaussian(double sigma, std::vector<double> cos_coeffs,
                                  std::vector<double> sin_coeffs = {});
    static PotentialSpec steps(std::vector<double> edges, std::vector<double> values);
    static PotentialSpec smooth_bump(double radius, double depth);

    PotentialFamily family() const { return family_; }
    BumpShape bump_shape() const { return shape_; }

    double amplitude() const { return amplitude_; }
    double sigma() const { return sigma_; }
    const std::vector<double>& cos_coeffs() const { return cos_; }
    const std::vector<double>& sin_coeffs() const { return sin_; }
    const std::vector<double>& edges() const { return edges_; }
    const std::vector<double>& values() const { return values_; }
    double radius() const { return radius_; }
    double depth() const { return depth_; }

    /// Half-width of the support (CompactBump only).
    double support_radius() const;

    /// Complex Fourier coefficient a_k of the periodic factor (frequency 2k).
    cplx periodic_coefficient(int k) const;
    int max_harmonic() const;

    /// V(x) on the real line.
    double value(double x) const;

    // Assumption metadata: decay exponent, sector constant, inner radius.
    double mu = std::numeric_limits<double>::infinity();
    double K = std::numeric_limits<double>::infinity();
    double R0 = 0.0;

private:
    PotentialSpec() = default;

    PotentialFamily family_ = PotentialFamily::Zero;
    BumpShape shape_ = BumpShape::Steps;
    double amplitude_ = 0.0;
    double sigma_ = 1.0;
    std::vector<double> cos_, sin_;
    std::vector<double> edges_, values_;
    double radius_ = 0.0;
    double depth_ = 0.0;
};

/// Vhat(z) = (2 pi)^{-1/2} int V(x) e^{-i x z} dx, continued to complex z.
///
/// GaussianEnvelope and step profiles are evaluated in closed form, the
/// smooth bump by adaptive Gauss-Kronrod quadrature (tolerance 1e-10).
/// SincOscillatory is only defined on the real axis (its transform is an
/// indicator); complex z raises DomainError.
cplx hat_V(const PotentialSpec& spec, cplx z);

/// Integral kernel of the distorted potential,
///   (2 pi)^{-1/2} Phi'(xi)^{1/2} Vhat(Phi(xi) - Phi(eta)) Phi'(eta)^{1/2}.
///
/// For SincOscillatory the transform is an indicator of [-2, 2] and the
/// kernel is (a/2) Phi'(xi)^{1/2} Phi'(eta)^{1/2} for |xi - eta| < 2, half
/// of that on |xi - eta| = 2 and zero beyond.
class KernelEvaluator {
public:
    /// `max_separation` bounds |Re(Phi(xi) - Phi(eta))| for the bulk path
    /// (smooth bumps precompute a trapezoid table sized for it).
    KernelEvaluator(PotentialSpec spec, cplx theta, double max_separation = 64.0);

    const PotentialSpec& spec() const { return spec_; }
    cplx theta() const { return theta_; }

    cplx operator()(double xi, double eta) const;

    /// (2 pi)^{-1/2} Vhat(dz), the undressed convolution kernel at a distorted
    /// difference dz = Phi(xi) - Phi(eta). Not valid for SincOscillatory.
    cplx convolution(cplx dz) const;

    /// Value of the sinc indicator at separation d = xi - eta: 1, 1/2 or 0.
    static double indicator_weight(double d);

private:
    PotentialSpec spec_;
    cplx theta_;
    // Uniform trapezoid table for smooth bumps: weights at x_k = k * step_.
    double step_ = 0.0;
    std::vector<double> weights_;
};

cplx kernel(const PotentialSpec& spec, cplx theta, double xi, double eta);

/// Schur-test bound sqrt(max row sum * max column sum) of |kernel| dxi over
/// the grid, restricted to pairs with |xi - eta| > separation. With
/// separation = 0 it bounds the full discretised potential.
double kernel_tail_bound(const KernelEvaluator& kernel, const GridSpec& grid, double separation);

}  // namespace wvres
