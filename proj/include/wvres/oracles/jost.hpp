#pragma once

// Reference values computed independently of the distortion pipeline.

#include <complex>
#include <vector>

namespace wvres::oracles {

using cplx = std::complex<double>;

/// Outgoing-matching determinant of a piecewise-constant potential
/// (value[k] on [edges[k], edges[k+1]], zero outside): start from e^{-ikx}
/// left of the support, transfer (psi, psi') through each layer and return
/// psi' - i k psi at the right edge. Resonances are its zeros with
/// Re k > 0, Im k < 0.
cplx jost_mismatch(const std::vector<double>& edges, const std::vector<double>& values, cplx k);

/// Complex Newton iteration on jost_mismatch from `k_guess`; returns k.
/// Throws std::runtime_error when it fails to converge.
cplx jost_root(const std::vector<double>& edges, const std::vector<double>& values, cplx k_guess);

/// Distinct resonance energies z = k^2 with 0 < Re z < re_max, Im z < 0,
/// found by seeding Newton on a grid of k values.
std::vector<cplx> jost_resonances(const std::vector<double>& edges, const std::vector<double>& values,
                                  double re_max);

/// Exact spectrum of xi^2 + i eps d^2/dxi^2 (equivalently -d^2/dx^2 - i eps x^2):
/// e^{-i pi/4} sqrt(eps) (2n + 1), n = 0 .. count-1.
std::vector<cplx> complex_oscillator(double eps, int count);

/// Eigenvalues 2 (1 - cos(k pi / (n + 1))) / h^2, k = 1..n, of the Dirichlet
/// three-point Laplacian, ascending.
std::vector<double> dirichlet_laplacian(int n, double h);

}  // namespace wvres::oracles
