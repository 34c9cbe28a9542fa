#pragma once

#include "wvres/grid.hpp"
#include "wvres/potential.hpp"
#include "wvres/types.hpp"

namespace wvres {

/// Dense discretisation of the distorted viscosity operator
///
///   (xi + theta sin(pi xi))^2 + V_theta - i eps D (1 + pi theta cos(pi xi))^{-2} D - i eps r_theta(xi)
///
/// on a GridSpec. The convolution term uses trapezoid weights; D m D is the
/// conservative three-point form D_+^T diag(m(xi_{i+1/2})) D_+.
struct OperatorMatrix {
    CMatrix entries;
    GridSpec grid;
    cplx theta;
    double epsilon;
    PotentialSpec spec;

    int size() const { return static_cast<int>(entries.rows()); }
};

OperatorMatrix assemble(const PotentialSpec& spec, cplx theta, double epsilon, const GridSpec& grid);

/// Free part: assemble(PotentialSpec::zero(), ...).
OperatorMatrix assemble_free(cplx theta, double epsilon, const GridSpec& grid);

namespace reference {

/// Entry-by-entry serial assembly straight from the defining formulas. Kept
/// as the oracle for the parallel kernel in tests and benchmarks.
OperatorMatrix assemble(const PotentialSpec& spec, cplx theta, double epsilon, const GridSpec& grid);

}  // namespace reference

}  // namespace wvres
