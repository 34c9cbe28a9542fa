#pragma once

#include <utility>
#include <vector>

#include "wvres/types.hpp"

namespace wvres {

/// phi(theta, xi)^2 at `samples` equally spaced xi in [xi_min, xi_max].
std::vector<cplx> essential_curve(cplx theta, double xi_min, double xi_max, int samples);

/// Imaginary part of the essential-spectrum curve of band n above the real
/// point x: solves Re phi(theta, xi)^2 = x for xi in [n-1, n] by bisection
/// (tolerance 1e-12) with theta = (-1)^n i delta. Throws RangeError when x is
/// outside [(n-1)^2, n^2] and ParameterError for delta outside (0, 1/pi).
double kappa(int n, double delta, double x);

/// The xi in [n-1, n] with Re phi^2 = x (same branch as kappa).
double kappa_preimage(int n, double delta, double x);

/// Distance from z to the curve {phi(theta, xi)^2 : xi in [xi_min, xi_max]}.
double curve_distance(cplx theta, cplx z, double xi_min, double xi_max);

enum class RegionKind { Omega, OmegaPrime };

enum class Membership { Inside, Outside, NearThreshold };

/// Resonance region of band n:
///   Omega  = {(n-1)^2 < x < n^2, y > kappa(x)}
///   Omega' = Omega cut by y > s((n-1)^2 - x) and y > s(x - n^2),
///            s = (1/(pi delta) - pi delta) / 2.
class Region {
public:
    static constexpr double kThresholdMargin = 1e-9;
    static constexpr double kBoundaryMargin = 1e-9;

    Region(int n, double delta, RegionKind kind, int curve_samples = 513);

    int band() const { return n_; }
    double delta() const { return delta_; }
    RegionKind kind() const { return kind_; }
    cplx theta() const;
    double slope() const;

    /// Tabulated (x, kappa(x)) over [(n-1)^2, n^2].
    const std::vector<std::pair<double, double>>& curve_samples() const { return samples_; }

    /// Monotone cubic (Fritsch-Carlson) interpolation of the tabulated curve;
    /// for bulk queries where repeated bisection is wasteful.
    double kappa_tabulated(double x) const;

    Membership classify(cplx z) const;
    bool contains(cplx z) const { return classify(z) == Membership::Inside; }

    /// Distance from z to the boundary pieces of the region that do not
    /// depend on the discretisation: threshold verticals and, for Omega',
    /// the two slope lines. (Distance to the curve is separate.)
    double distance_to_straight_boundary(cplx z) const;

private:
    int n_;
    double delta_;
    RegionKind kind_;
    std::vector<std::pair<double, double>> samples_;
    std::vector<double> tangents_;
};

bool in_region(cplx z, const Region& region);

/// {phi(theta, xi)^2 - i phi'(theta, xi)^{-2} x^2} over all sample pairs.
std::vector<cplx> symbol_numerical_range(cplx theta, const std::vector<double>& xi_samples,
                                         const std::vector<double>& x_samples);

}  // namespace wvres
