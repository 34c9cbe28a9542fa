#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wvres/assembly.hpp"
#include "wvres/types.hpp"

namespace wvres {

struct EigenDecomposition {
    /// Sorted by real part, then imaginary part.
    std::vector<cplx> eigenvalues;
    /// Unit right eigenvectors (columns), only when requested.
    CMatrix vectors;
    /// ||A v - lambda v|| / ||v|| per eigenvalue, only when vectors were requested.
    std::vector<double> residuals;

    struct Meta {
        std::string solver;
        int info = 0;
        double max_residual = 0.0;
        double seconds = 0.0;
    } meta;

    bool has_vectors() const { return vectors.size() > 0; }
};

/// All eigenvalues of a dense complex matrix (Hessenberg reduction and
/// shifted QR, LAPACK zgeev). Throws SolverError on non-convergence.
EigenDecomposition eig(const CMatrix& a, bool want_vectors = false);
EigenDecomposition eig(const OperatorMatrix& a, bool want_vectors = false);

struct ProjectorOptions {
    int points = 64;         // initial trapezoid nodes on the circle
    int max_points = 4096;   // doubling cap for circles close to the spectrum
    double tol = 1e-6;       // rank threshold relative to max(||Pi||, 1)
    int probe_columns = 32;  // random probe block for large matrices
    int exact_below = 64;    // matrices up to this size use the full projector
    std::uint64_t seed = 0x5eedULL;
};

/// Numerical rank of the Riesz projector (1/2 pi i) oint (zeta - A)^{-1} dzeta
/// over the circle |zeta - center| = radius, i.e. the algebraic multiplicity
/// of the enclosed eigenvalues.
struct ProjectorRank {
    cplx center;
    double radius = 0.0;
    int rank = 0;
    std::vector<double> singular_values;
    double norm = 0.0;  // largest singular value of the (probed) projector
    int points = 0;
};

/// The rule is doubled from `points` until every eigenvalue is filtered to
/// 0.1 * tol. Throws ContourError when even `max_points` cannot achieve
/// that, and SingularSystemError
/// when a contour node hits the spectrum exactly.
ProjectorRank projector_rank(const CMatrix& a, cplx center, double radius, const ProjectorOptions& options = {});
ProjectorRank projector_rank(const CMatrix& a, std::span<const cplx> eigenvalues, cplx center, double radius,
                             const ProjectorOptions& options = {});

class HessenbergResolvent;

/// Same, reusing a prebuilt Hessenberg factorisation of A.
ProjectorRank projector_rank(const HessenbergResolvent& resolvent, std::span<const cplx> eigenvalues, cplx center,
                             double radius, const ProjectorOptions& options = {});

/// Full M-point approximation of the Riesz projector.
CMatrix riesz_projector(const CMatrix& a, cplx center, double radius, int points = 64);

/// Quadrature error bound rho^M of the trapezoid filter for an eigenvalue at
/// `lambda`; rho is |lambda - c| / r inside the circle and r / |lambda - c| outside.
double contour_filter_error(cplx lambda, cplx center, double radius, int points);

/// Resolvent solves through one Hessenberg reduction A = Q H Q^*, followed
/// by an O(N^2) LU with partial pivoting of (zeta - H) per shift.
class HessenbergResolvent {
public:
    explicit HessenbergResolvent(const CMatrix& a);

    int size() const { return static_cast<int>(h_.rows()); }
    /// (zeta - A)^{-1} B.
    CMatrix solve(cplx zeta, const CMatrix& b) const;
    /// (zeta - H)^{-1} C in Hessenberg coordinates.
    CMatrix solve_hessenberg(cplx zeta, const CMatrix& c) const;

    const CMatrix& q() const { return q_; }
    const CMatrix& h() const { return h_; }

private:
    CMatrix q_, h_;
};

/// Pi Y for a block Y, contour nodes summed in parallel.
CMatrix apply_projector(const HessenbergResolvent& resolvent, const CMatrix& y, cplx center, double radius,
                        int points);

namespace reference {

/// Pi Y with a fresh dense LU of (zeta - A) at every node, serial.
CMatrix apply_projector(const CMatrix& a, const CMatrix& y, cplx center, double radius, int points);

}  // namespace reference

}  // namespace wvres
