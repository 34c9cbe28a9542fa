#pragma once

#include <span>
#include <vector>

#include "wvres/grid.hpp"
#include "wvres/types.hpp"

namespace wvres {

/// Distortion angle together with its admissibility bounds.
///
/// Real angles must satisfy |theta| < 1/pi so that xi -> xi + theta sin(pi xi)
/// is a diffeomorphism. Purely imaginary angles +-i delta need
/// 0 < delta < delta0 = min(1/pi, K). General complex angles are accepted
/// when |theta| < delta0, which keeps Re Phi'(xi) > 0 on the real axis.
struct DistortionParams {
    cplx theta{0.0, 0.0};
    double K = 1.0e300;  // sector constant of the potential; entire envelopes use "infinity"

    double delta0() const;
    bool admissible() const;
    /// Throws ParameterError when the angle is not admissible.
    void validate() const;

    /// theta = (-1)^n i delta, the angle used for the energy band ((n-1)^2, n^2).
    static DistortionParams for_band(int n, double delta, double K = 1.0e300);
};

/// Phi_theta(xi) = xi + theta sin(pi xi).
cplx phi(cplx theta, double xi);

/// Phi'_theta(xi) = 1 + pi theta cos(pi xi).
cplx dphi(cplx theta, double xi);

/// Principal square root of Phi'_theta(xi).
cplx sqrt_dphi(cplx theta, double xi);

/// Zeroth-order remainder produced by conjugating the viscosity term:
///   r = -g^{-1/2} d/dxi( g^{-1} d/dxi g^{-1/2} ),  g = Phi'_theta,
/// which reduces to g''/(2 g^3) - 5 g'^2 / (4 g^4).
cplx r_theta(cplx theta, double xi);

/// U_theta f(xi) = Phi'(xi)^{1/2} f(Phi(xi)) for real theta, with f given by
/// samples on `grid` and evaluated between nodes by cubic Lagrange
/// interpolation. Throws DomainError when Phi maps a node outside the grid.
std::vector<double> apply_U(double theta, std::span<const double> samples, const GridSpec& grid);

}  // namespace wvres
