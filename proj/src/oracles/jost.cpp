#include "wvres/oracles/jost.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wvres::oracles {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

cplx jost_mismatch(const std::vector<double>& edges, const std::vector<double>& values, cplx k) {
    const cplx i(0.0, 1.0);
    cplx psi = 1.0, dpsi = -i * k;
    for (std::size_t j = 0; j < values.size(); ++j) {
        const double d = edges[j + 1] - edges[j];
        const cplx q = std::sqrt(k * k - values[j]);
        const cplx c = std::cos(q * d);
        // sin(qd)/q, even in q
        const cplx s = std::abs(q * d) < 1e-8 ? cplx(d) : std::sin(q * d) / q;
        const cplx next_psi = c * psi + s * dpsi;
        const cplx next_dpsi = -q * q * s * psi + c * dpsi;
        psi = next_psi;
        dpsi = next_dpsi;
    }
    return dpsi - i * k * psi;
}

cplx jost_root(const std::vector<double>& edges, const std::vector<double>& values, cplx k_guess) {
    cplx k = k_guess;
    for (int it = 0; it < 200; ++it) {
        const double h = 1e-6 * std::max(1.0, std::abs(k));
        const cplx f = jost_mismatch(edges, values, k);
        const cplx df = (jost_mismatch(edges, values, k + h) - jost_mismatch(edges, values, k - h)) / (2.0 * h);
        const cplx step = f / df;
        k -= step;
        if (!std::isfinite(k.real()) || !std::isfinite(k.imag())) break;
        if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(k))) return k;
    }
    throw std::runtime_error("jost_root: Newton iteration did not converge");
}

std::vector<cplx> jost_resonances(const std::vector<double>& edges, const std::vector<double>& values,
                                  double re_max) {
    std::vector<cplx> found;
    const double kmax = std::sqrt(re_max) + 0.5;
    for (int a = 1; a <= 60; ++a) {
        for (double im : {-0.01, -0.05, -0.15, -0.3}) {
            cplx k;
            try {
                k = jost_root(edges, values, cplx(kmax * a / 60.0, im));
            } catch (const std::runtime_error&) {
                continue;
            }
            if (!(k.real() > 0.0 && k.imag() < 0.0)) continue;
            if (std::abs(jost_mismatch(edges, values, k)) > 1e-9) continue;
            const cplx z = k * k;
            if (!(z.real() > 0.0 && z.real() < re_max)) continue;
            const bool seen = std::any_of(found.begin(), found.end(), [&](cplx w) { return std::abs(w - z) < 1e-9; });
            if (!seen) found.push_back(z);
        }
    }
    std::sort(found.begin(), found.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
    return found;
}

std::vector<cplx> complex_oscillator(double eps, int count) {
    std::vector<cplx> out;
    const cplx phase = std::polar(1.0, -kPi / 4.0);
    for (int n = 0; n < count; ++n) out.push_back(phase * std::sqrt(eps) * (2.0 * n + 1.0));
    return out;
}

std::vector<double> dirichlet_laplacian(int n, double h) {
    std::vector<double> out;
    for (int k = 1; k <= n; ++k) out.push_back(2.0 * (1.0 - std::cos(k * kPi / (n + 1))) / (h * h));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace wvres::oracles
