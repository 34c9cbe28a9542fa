#include "wvres/cli/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "wvres/assembly.hpp"
#include "wvres/cli/commands.hpp"
#include "wvres/distortion.hpp"
#include "wvres/errors.hpp"
#include "wvres/eigen_engine.hpp"
#include "wvres/flow.hpp"
#include "wvres/geometry.hpp"
#include "wvres/oracles/jost.hpp"

namespace wvres::cli {

namespace {

// Double-barrier well: V = 1.5 on 2.5 < |x| < 3.
const std::vector<double> kWellEdges{-3.0, -2.5, 2.5, 3.0};
const std::vector<double> kWellValues{1.5, 0.0, 1.5};
constexpr double kDelta = 0.15;

PotentialSpec well() { return PotentialSpec::steps(kWellEdges, kWellValues); }

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

CheckResult make(int id, std::string name) {
    CheckResult r;
    r.id = id;
    r.name = std::move(name);
    return r;
}

cplx lowest_resonance(const std::vector<ResonanceRecord>& rs) {
    if (rs.empty()) throw Error("no resonance found in the band");
    return std::min_element(rs.begin(), rs.end(), [](const auto& a, const auto& b) { return a.z.real() < b.z.real(); })
        ->z;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

CheckResult check_free_cap(const ValidationTolerances& tol) {
    auto r = make(1, "free viscosity oracle");
    Stopwatch total;
    bool ok = true;
    for (double eps : {1e-2, 1e-3}) {
        Stopwatch watch;
        const GridSpec grid = auto_cap_grid(eps);
        const auto exact = oracles::complex_oscillator(eps, 10);
        const auto got = extrapolated_lowest(PotentialSpec::zero(), eps, 0.0, grid, 10);
        double worst = 0.0;
        for (int k = 0; k < 10; ++k) worst = std::max(worst, std::abs(got.at(k).value - exact[k]) / std::abs(exact[k]));
        const double secs = watch.seconds();
        const int finest = grid.refined().size();
        ok = ok && worst <= tol.free_cap && secs <= tol.free_cap_seconds && finest <= 2000;
        r.value = std::max(r.value, worst);
        r.detail += fmt::format("{}eps={:g}: N={}/{}, max rel err {:.2e}", r.detail.empty() ? "" : "; ", eps,
                                grid.size(), finest, worst);
    }
    r.threshold = tol.free_cap;
    r.passed = ok;
    r.seconds = total.seconds();
    return r;
}

CheckResult check_hermitian_limit(const ValidationTolerances& tol) {
    auto r = make(2, "Hermitian limit");
    Stopwatch watch;
    const GridSpec grid(12.0, 601);
    const auto dec = eig(assemble(PotentialSpec::sinc(1.0), 0.0, 0.0, grid));
    double radius = 0.0, worst = 0.0;
    for (cplx l : dec.eigenvalues) {
        radius = std::max(radius, std::abs(l));
        worst = std::max(worst, std::abs(l.imag()));
    }
    r.value = worst / radius;
    r.threshold = tol.hermitian;
    r.passed = r.value <= r.threshold;
    r.detail = fmt::format("sinc a=1, N={}: max|Im| = {:.2e}, spectral radius {:.4f}", grid.size(), worst, radius);
    r.seconds = watch.seconds();
    return r;
}

CheckResult check_essential_curve(const ValidationTolerances& tol) {
    auto r = make(3, "essential curve fidelity");
    Stopwatch watch;
    const GridSpec grid(4.0, 161);  // spacing 1/20: the integers are nodes
    double cloud = 0.0, thresholds = 0.0;
    for (double sign : {1.0, -1.0}) {
        const cplx th(0.0, sign * kDelta);
        const auto dec = eig(assemble_free(th, 0.0, grid));
        for (int i = 0; i < grid.size(); ++i) {
            const cplx p = phi(th, grid.node(i));
            const cplx target = p * p;
            double best = 1e300;
            for (cplx l : dec.eigenvalues) best = std::min(best, std::abs(l - target));
            cloud = std::max(cloud, best / (1.0 + std::abs(target)));
        }
        for (int n = 1; n <= 3; ++n) {
            const int i = (n + 4) * 20;
            const cplx p = phi(th, grid.node(i));
            thresholds = std::max(thresholds, std::abs(p * p - static_cast<double>(n * n)) / (n * n));
        }
    }
    r.value = std::max(cloud, thresholds);
    r.threshold = tol.curve;
    r.passed = r.value <= r.threshold;
    r.detail = fmt::format("theta=+-{}i: cloud-to-curve {:.2e}, |phi(n)^2 - n^2|/n^2 {:.2e} for n=1,2,3", kDelta, cloud,
                           thresholds);
    r.seconds = watch.seconds();
    return r;
}

CheckResult check_region_identity(const ValidationTolerances&) {
    auto r = make(4, "region identity (small delta)");
    Stopwatch watch;
    const double delta = 0.05;
    std::mt19937_64 rng(4);
    int disagreements = 0;
    for (int n = 1; n <= 3; ++n) {
        const Region omega(n, delta, RegionKind::Omega);
        const Region prime(n, delta, RegionKind::OmegaPrime);
        const double lo = (n - 1) * (n - 1), hi = n * n;
        double deepest = 0.0;
        for (const auto& [x, k] : omega.curve_samples()) deepest = std::min(deepest, k);
        std::uniform_real_distribution<double> ux(lo, hi), uy(2.0 * deepest, -deepest + 0.5);
        for (int s = 0; s < 10000; ++s) {
            const cplx z(ux(rng), uy(rng));
            if (omega.contains(z) != prime.contains(z)) ++disagreements;
        }
    }
    r.value = disagreements;
    r.threshold = 0.0;
    r.passed = disagreements == 0;
    r.detail = fmt::format("delta={}, n=1..3, 10000 points each: {} disagreements", delta, disagreements);
    r.seconds = watch.seconds();
    return r;
}

CheckResult check_symbol_disjoint(const ValidationTolerances&) {
    auto r = make(5, "symbol disjointness");
    Stopwatch watch;
    int hits = 0;
    for (double delta : {0.05, 0.1}) {
        for (int n : {1, 2}) {
            const Region prime(n, delta, RegionKind::OmegaPrime);
            std::vector<double> xi, x;
            for (int k = 0; k < 200; ++k) {
                xi.push_back(-(n + 3.0) + 2.0 * (n + 3.0) * k / 199.0);
                x.push_back(4.0 * n * k / 199.0);
            }
            for (cplx z : symbol_numerical_range(prime.theta(), xi, x))
                if (prime.contains(z)) ++hits;
        }
    }
    r.value = hits;
    r.threshold = 0.0;
    r.passed = hits == 0;
    r.detail = fmt::format("200x200 samples, delta in {{0.05, 0.1}}, n in {{1, 2}}: {} samples inside Omega'", hits);
    r.seconds = watch.seconds();
    return r;
}

CheckResult check_jost_agreement(const ValidationTolerances& tol) {
    auto r = make(6, "Jost oracle agreement");
    Stopwatch watch;
    const auto roots = oracles::jost_resonances(kWellEdges, kWellValues, 1.0);
    if (roots.empty()) throw Error("Jost oracle found no resonance");
    const cplx jost = roots.front();
    const cplx coarse = lowest_resonance(resonances(well(), 1, kDelta, GridSpec(12.0, 601)));
    const cplx fine = lowest_resonance(resonances(well(), 1, kDelta, GridSpec(24.0, 1201)));
    r.value = std::abs(fine - jost);
    r.threshold = tol.jost;
    r.seconds = watch.seconds();
    r.passed = r.value <= r.threshold && r.seconds <= tol.jost_seconds;
    r.detail = fmt::format("Jost {:.10f}{:+.10f}i; L=12,N=601: err {:.2e}; L=24,N=1201: err {:.2e}", jost.real(),
                           jost.imag(), std::abs(coarse - jost), r.value);
    return r;
}

CheckResult check_viscosity_limit(const ValidationTolerances&) {
    auto r = make(7, "viscosity limit");
    Stopwatch watch;
    const GridSpec grid(12.0, 601);
    int failures = 0;
    std::string detail;
    for (const auto& [label, spec] : {std::pair{std::string("well"), well()},
                                      std::pair{std::string("sinc a=1"), PotentialSpec::sinc(1.0)}}) {
        const TrajectorySet set = flow(spec, 1, kDelta, default_schedule(), grid);
        int matched = 0, monotone = 0, settled = 0;
        for (const auto& m : set.matches) {
            ++matched;
            if (m.monotone_tail) ++monotone;
        }
        for (const auto& d : set.discs) {
            const auto k = d.counts.size();
            if (k >= 2 && d.counts[k - 1] == d.expected && d.counts[k - 2] == d.expected) ++settled;
        }
        const auto& w = set.window_counts;
        int expected_total = 0;
        for (const auto& res : set.resonances) expected_total += res.multiplicity;
        const bool window_ok = w.size() >= 2 && w[w.size() - 1] == expected_total && w[w.size() - 2] == expected_total;
        const int fails = (matched != static_cast<int>(set.resonances.size())) + (monotone != matched) +
                          (settled != static_cast<int>(set.discs.size())) + (!window_ok);
        failures += fails;
        detail += fmt::format("{}{}: {} resonances, {} monotone tails, {}/{} discs settled, final window counts {}",
                              detail.empty() ? "" : "; ", label, set.resonances.size(), monotone, settled,
                              set.discs.size(), w.empty() ? -1 : w.back());
    }
    r.value = failures;
    r.threshold = 0.0;
    r.passed = failures == 0;
    r.detail = detail;
    r.seconds = watch.seconds();
    return r;
}

CheckResult check_theta_robustness(const ValidationTolerances& tol) {
    auto r = make(8, "theta robustness");
    Stopwatch watch;
    const GridSpec grid(12.0, 601);
    const cplx a = lowest_resonance(resonances(well(), 1, kDelta, grid));
    const cplx b = lowest_resonance(resonances(well(), 1, 1.2 * kDelta, grid));
    const cplx fine = lowest_resonance(resonances(well(), 1, kDelta, grid.refined()));
    const double discretisation = 2.0 * std::abs(a - fine);
    r.value = std::abs(a - b);
    r.threshold = tol.theta + discretisation;
    r.passed = r.value <= r.threshold;
    r.detail = fmt::format("delta={} vs {}: |dz| = {:.2e}; discretisation allowance {:.2e}", kDelta, 1.2 * kDelta,
                           r.value, discretisation);
    r.seconds = watch.seconds();
    return r;
}

CheckResult check_projector_rank(const ValidationTolerances& tol) {
    auto r = make(9, "projector rank");
    Stopwatch watch;
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g;
    std::uniform_int_distribution<int> pick(1, 15);
    int mismatches = 0;
    double idempotency = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        CMatrix a(16, 16);
        for (int j = 0; j < 16; ++j)
            for (int i = 0; i < 16; ++i) a(i, j) = cplx(g(rng), g(rng));
        const auto ev = eig(a).eigenvalues;
        const cplx center = ev[static_cast<std::size_t>(pick(rng))] + cplx(0.1, -0.05);
        std::vector<double> d;
        for (cplx l : ev) d.push_back(std::abs(l - center));
        std::sort(d.begin(), d.end());
        // circle through the widest gap of the sorted distances
        int inside = 1;
        for (int k = 1; k < 16; ++k)
            if (d[k] / d[k - 1] > d[inside] / d[inside - 1]) inside = k;
        const double radius = 0.5 * (d[inside - 1] + d[inside]);
        int direct = 0;
        for (cplx l : ev)
            if (std::abs(l - center) < radius) ++direct;
        const auto rank = projector_rank(a, ev, center, radius);
        if (rank.rank != direct) ++mismatches;
        const CMatrix p = riesz_projector(a, center, radius, rank.points);
        idempotency = std::max(idempotency, (p * p - p).norm() / std::max(1.0, p.norm()));
    }
    r.value = idempotency;
    r.threshold = tol.idempotency;
    r.passed = mismatches == 0 && idempotency <= tol.idempotency;
    r.detail = fmt::format("50 random 16x16: {} rank mismatches, max ||P^2 - P||/max(||P||,1) = {:.2e}", mismatches,
                           idempotency);
    r.seconds = watch.seconds();
    return r;
}

CheckResult check_determinism(const ValidationTolerances&) {
    namespace fs = std::filesystem;
    auto r = make(10, "determinism");
    Stopwatch watch;
    std::string pattern = (fs::temp_directory_path() / "wvres-determinism-XXXXXX").string();
    if (!mkdtemp(pattern.data())) throw Error("cannot create a temporary directory");
    const fs::path root(pattern);
    RunConfig config;
    config.half_width = 8.0;
    config.points = 401;
    int differing = 0;
    std::size_t compared = 0;
    try {
        // identical config (output directory included): the second run overwrites the first
        config.out_dir = (root / "run").string();
        std::ostringstream sink;
        std::vector<std::string> first;
        const auto files = cmd_resonances(config, sink).files;
        for (const auto& f : files) first.push_back(read_file(f));
        const auto again = cmd_resonances(config, sink).files;
        if (again != files) ++differing;
        for (std::size_t k = 0; k < files.size(); ++k) {
            ++compared;
            if (read_file(files[k]) != first[k]) ++differing;
        }
    } catch (...) {
        fs::remove_all(root);
        throw;
    }
    fs::remove_all(root);
    r.value = differing;
    r.threshold = 0.0;
    r.passed = differing == 0 && compared == 3;
    r.detail = fmt::format("two resonances runs (well, L=8, N=401): {} of {} files differ", differing, compared);
    r.seconds = watch.seconds();
    return r;
}

std::vector<CheckResult> run_acceptance(const ValidationTolerances& tol,
                                        const std::function<void(const CheckResult&)>& on_result) {
    using Check = CheckResult (*)(const ValidationTolerances&);
    const std::pair<const char*, Check> checks[] = {
        {"free viscosity oracle", check_free_cap},
        {"Hermitian limit", check_hermitian_limit},
        {"essential curve fidelity", check_essential_curve},
        {"region identity (small delta)", check_region_identity},
        {"symbol disjointness", check_symbol_disjoint},
        {"Jost oracle agreement", check_jost_agreement},
        {"viscosity limit", check_viscosity_limit},
        {"theta robustness", check_theta_robustness},
        {"projector rank", check_projector_rank},
        {"determinism", check_determinism},
    };
    std::vector<CheckResult> out;
    int id = 1;
    for (const auto& [name, check] : checks) {
        CheckResult r;
        try {
            r = check(tol);
        } catch (const std::exception& e) {
            r = make(id, name);
            r.detail = fmt::format("raised: {}", e.what());
        }
        ++id;
        if (on_result) on_result(r);
        out.push_back(std::move(r));
    }
    return out;
}

std::string format_check(const CheckResult& r) {
    return fmt::format("[{}] {:2d} {}: {} ({:.1f} s)", r.passed ? "PASS" : "FAIL", r.id, r.name, r.detail, r.seconds);
}

}  // namespace wvres::cli
