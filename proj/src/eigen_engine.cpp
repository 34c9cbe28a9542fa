#include "wvres/eigen_engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include <lapacke.h>
#include <fmt/format.h>

#include "wvres/errors.hpp"

namespace wvres {

namespace {

lapack_complex_double* lp(cplx* p) { return reinterpret_cast<lapack_complex_double*>(p); }

bool eigen_order(cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

}  // namespace

EigenDecomposition eig(const CMatrix& a, bool want_vectors) {
    const int n = static_cast<int>(a.rows());
    if (a.cols() != n) throw ParameterError("eig: matrix must be square");
    if (!a.allFinite()) throw ParameterError("eig: matrix has non-finite entries");

    const auto start = std::chrono::steady_clock::now();
    CMatrix work = a;
    CVector w(n);
    CMatrix vr;
    if (want_vectors) vr.resize(n, n);
    const int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', n, lp(work.data()), n,
                                   lp(w.data()), nullptr, 1, want_vectors ? lp(vr.data()) : nullptr, n);
    if (info > 0) {
        throw SolverError(fmt::format("eig: QR iteration failed to converge ({} eigenvalues unresolved, N={})",
                                      info, n));
    }
    if (info < 0) throw SolverError(fmt::format("eig: zgeev rejected argument {}", -info));

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return eigen_order(w[i], w[j]); });

    EigenDecomposition out;
    out.eigenvalues.resize(n);
    for (int k = 0; k < n; ++k) out.eigenvalues[k] = w[order[k]];
    if (want_vectors) {
        out.vectors.resize(n, n);
        out.residuals.resize(n);
        for (int k = 0; k < n; ++k) out.vectors.col(k) = vr.col(order[k]);
        for (int k = 0; k < n; ++k) {
            const CVector v = out.vectors.col(k);
            out.residuals[k] = (a * v - out.eigenvalues[k] * v).norm() / v.norm();
        }
        out.meta.max_residual = *std::max_element(out.residuals.begin(), out.residuals.end());
    }
    out.meta.solver = "zgeev";
    out.meta.info = info;
    out.meta.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

EigenDecomposition eig(const OperatorMatrix& a, bool want_vectors) { return eig(a.entries, want_vectors); }

double contour_filter_error(cplx lambda, cplx center, double radius, int points) {
    const double d = std::abs(lambda - center);
    const double rho = d < radius ? d / radius : radius / d;
    return std::pow(rho, points);
}

HessenbergResolvent::HessenbergResolvent(const CMatrix& a) {
    const int n = static_cast<int>(a.rows());
    if (a.cols() != n) throw ParameterError("HessenbergResolvent: matrix must be square");
    h_ = a;
    CVector tau(std::max(n - 1, 1));
    int info = LAPACKE_zgehrd(LAPACK_COL_MAJOR, n, 1, n, lp(h_.data()), n, lp(tau.data()));
    if (info != 0) throw SolverError(fmt::format("zgehrd failed (info={})", info));
    q_ = h_;
    info = LAPACKE_zunghr(LAPACK_COL_MAJOR, n, 1, n, lp(q_.data()), n, lp(tau.data()));
    if (info != 0) throw SolverError(fmt::format("zunghr failed (info={})", info));
    for (int j = 0; j < n; ++j)
        for (int i = j + 2; i < n; ++i) h_(i, j) = 0.0;
}

CMatrix HessenbergResolvent::solve_hessenberg(cplx zeta, const CMatrix& c) const {
    const int n = size();
    CMatrix t = -h_;
    t.diagonal().array() += zeta;
    CMatrix x = c;
    // Gaussian elimination; only the subdiagonal needs clearing, so each
    // step pivots between rows k and k+1.
    for (int k = 0; k + 1 < n; ++k) {
        if (std::abs(t(k + 1, k)) > std::abs(t(k, k))) {
            t.row(k).segment(k, n - k).swap(t.row(k + 1).segment(k, n - k));
            x.row(k).swap(x.row(k + 1));
        }
        if (t(k, k) == 0.0) {
            throw SingularSystemError(fmt::format("resolvent singular at zeta=({}, {})", zeta.real(), zeta.imag()));
        }
        const cplx l = t(k + 1, k) / t(k, k);
        if (l != 0.0) {
            t.row(k + 1).segment(k + 1, n - k - 1) -= l * t.row(k).segment(k + 1, n - k - 1);
            x.row(k + 1) -= l * x.row(k);
        }
        t(k + 1, k) = 0.0;
    }
    if (t(n - 1, n - 1) == 0.0) {
        throw SingularSystemError(fmt::format("resolvent singular at zeta=({}, {})", zeta.real(), zeta.imag()));
    }
    t.triangularView<Eigen::Upper>().solveInPlace(x);
    return x;
}

CMatrix HessenbergResolvent::solve(cplx zeta, const CMatrix& b) const {
    return q_ * solve_hessenberg(zeta, q_.adjoint() * b);
}

CMatrix apply_projector(const HessenbergResolvent& resolvent, const CMatrix& y, cplx center, double radius,
                        int points) {
    if (points < 4) throw ParameterError("projector quadrature needs at least 4 points");
    const CMatrix c = resolvent.q().adjoint() * y;
    std::vector<CMatrix> terms(points);
    bool singular = false;
    std::string message;
#pragma omp parallel for schedule(static)
    for (int m = 0; m < points; ++m) {
        const cplx unit = std::polar(1.0, 2.0 * kPi * (m + 0.5) / points);
        try {
            // (1/2 pi i) * (2 pi / M) * i r e^{i phi} = (r / M) e^{i phi}
            terms[m] = (radius / points) * unit * resolvent.solve_hessenberg(center + radius * unit, c);
        } catch (const SingularSystemError& e) {
#pragma omp critical
            {
                singular = true;
                message = e.what();
            }
        }
    }
    if (singular) throw SingularSystemError(message);
    // fixed-order reduction keeps results independent of the thread count
    CMatrix sum = CMatrix::Zero(c.rows(), c.cols());
    for (const auto& t : terms) sum += t;
    return resolvent.q() * sum;
}

namespace reference {

CMatrix apply_projector(const CMatrix& a, const CMatrix& y, cplx center, double radius, int points) {
    const int n = static_cast<int>(a.rows());
    CMatrix sum = CMatrix::Zero(n, y.cols());
    for (int m = 0; m < points; ++m) {
        const cplx unit = std::polar(1.0, 2.0 * kPi * (m + 0.5) / points);
        CMatrix shifted = -a;
        shifted.diagonal().array() += center + radius * unit;
        Eigen::PartialPivLU<CMatrix> lu(shifted);
        sum += (radius / points) * unit * lu.solve(y);
    }
    return sum;
}

}  // namespace reference

CMatrix riesz_projector(const CMatrix& a, cplx center, double radius, int points) {
    const HessenbergResolvent resolvent(a);
    return apply_projector(resolvent, CMatrix::Identity(a.rows(), a.cols()), center, radius, points);
}

ProjectorRank projector_rank(const CMatrix& a, cplx center, double radius, const ProjectorOptions& options) {
    const EigenDecomposition d = eig(a, false);
    return projector_rank(a, d.eigenvalues, center, radius, options);
}

ProjectorRank projector_rank(const CMatrix& a, std::span<const cplx> eigenvalues, cplx center, double radius,
                             const ProjectorOptions& options) {
    return projector_rank(HessenbergResolvent(a), eigenvalues, center, radius, options);
}

ProjectorRank projector_rank(const HessenbergResolvent& resolvent, std::span<const cplx> eigenvalues, cplx center,
                             double radius, const ProjectorOptions& options) {
    if (!(radius > 0.0)) throw ParameterError(fmt::format("projector radius {} must be positive", radius));
    if (!(options.tol > 0.0)) throw ParameterError("projector tolerance must be positive");
    // Double the rule until every eigenvalue is filtered below a tenth of the
    // rank tolerance; only circles that nearly touch the spectrum fail.
    int points = std::max(options.points, 4);
    auto worst_filter = [&](int m, cplx& culprit) {
        double worst = 0.0;
        for (cplx lambda : eigenvalues) {
            const double e = contour_filter_error(lambda, center, radius, m);
            if (e > worst) {
                worst = e;
                culprit = lambda;
            }
        }
        return worst;
    };
    cplx culprit = 0.0;
    while (worst_filter(points, culprit) > 0.1 * options.tol) {
        if (2 * points > std::max(options.max_points, options.points)) {
            throw ContourError(fmt::format(
                "eigenvalue ({:.6g}, {:.6g}) lies {:.3g} from the contour |z - ({:.6g}, {:.6g})| = {:.6g}; "
                "change the radius (quadrature capped at {} points)",
                culprit.real(), culprit.imag(), std::abs(std::abs(culprit - center) - radius), center.real(),
                center.imag(), radius, points));
        }
        points *= 2;
    }

    const int n = resolvent.size();
    CMatrix probe;
    if (n <= options.exact_below || n <= options.probe_columns) {
        probe = CMatrix::Identity(n, n);
    } else {
        std::mt19937_64 rng(options.seed);
        std::normal_distribution<double> normal;
        CMatrix g(n, options.probe_columns);
        for (int j = 0; j < g.cols(); ++j)
            for (int i = 0; i < n; ++i) g(i, j) = cplx(normal(rng), normal(rng));
        probe = Eigen::HouseholderQR<CMatrix>(g).householderQ() * CMatrix::Identity(n, options.probe_columns);
    }

    const CMatrix projected = apply_projector(resolvent, probe, center, radius, points);
    Eigen::JacobiSVD<CMatrix> svd(projected);
    const auto& s = svd.singularValues();

    ProjectorRank out;
    out.center = center;
    out.radius = radius;
    out.points = points;
    out.singular_values.assign(s.data(), s.data() + s.size());
    out.norm = s.size() > 0 ? s[0] : 0.0;
    const double threshold = options.tol * std::max(out.norm, 1.0);
    out.rank = static_cast<int>(std::count_if(s.data(), s.data() + s.size(), [&](double v) { return v > threshold; }));
    return out;
}

}  // namespace wvres
