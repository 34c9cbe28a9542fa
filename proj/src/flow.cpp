#include "wvres/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "wvres/assembly.hpp"
#include "wvres/distortion.hpp"
#include "wvres/errors.hpp"

namespace wvres {

namespace {

double band_curve_distance(cplx theta, int n, cplx z) { return curve_distance(theta, z, -(n + 1.0), n + 1.0); }

int odd_at_least(double v) {
    int n = static_cast<int>(std::ceil(v));
    return n % 2 == 0 ? n + 1 : n;
}

// Disjoint-set clustering of points closer than tol.
std::vector<std::vector<int>> cluster(const std::vector<cplx>& pts, double tol) {
    const int m = static_cast<int>(pts.size());
    std::vector<int> parent(m);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (std::abs(pts[i] - pts[j]) <= tol) parent[find(i)] = find(j);
    std::vector<std::vector<int>> groups;
    std::vector<int> slot(m, -1);
    for (int i = 0; i < m; ++i) {
        const int r = find(i);
        if (slot[r] < 0) {
            slot[r] = static_cast<int>(groups.size());
            groups.emplace_back();
        }
        groups[slot[r]].push_back(i);
    }
    return groups;
}

}  // namespace

double ResonanceOptions::margin_for(int band, const GridSpec& grid) const {
    return curve_margin >= 0.0 ? curve_margin : band * grid.spacing();
}

ResonanceRun resonance_run(const PotentialSpec& spec, int n, double delta, const GridSpec& grid,
                           const ResonanceOptions& options) {
    const DistortionParams params = DistortionParams::for_band(n, delta, spec.K);
    const OperatorMatrix a = assemble(spec, params.theta, 0.0, grid);

    ResonanceRun run;
    run.theta = params.theta;
    run.spectrum = eig(a, true);

    const Region region(n, delta, options.region);
    const double margin = options.margin_for(n, grid);
    std::vector<int> candidates;
    std::vector<cplx> points;
    std::vector<double> distances;
    for (int k = 0; k < static_cast<int>(run.spectrum.eigenvalues.size()); ++k) {
        const cplx z = run.spectrum.eigenvalues[k];
        if (!region.contains(z)) continue;
        const double d = band_curve_distance(params.theta, n, z);
        if (d <= margin) continue;
        candidates.push_back(k);
        points.push_back(z);
        distances.push_back(d);
    }
    if (candidates.empty()) return run;

    const HessenbergResolvent resolvent(a.entries);
    for (const auto& group : cluster(points, options.cluster_tol)) {
        cplx center = 0.0;
        double residual = 0.0, dist = std::numeric_limits<double>::infinity();
        for (int g : group) {
            center += points[g];
            residual = std::max(residual, run.spectrum.residuals[candidates[g]]);
            dist = std::min(dist, distances[g]);
        }
        center /= static_cast<double>(group.size());

        // half the gap to the nearest eigenvalue outside the cluster
        double gap = std::numeric_limits<double>::infinity();
        double spread = 0.0;
        for (int k = 0; k < static_cast<int>(run.spectrum.eigenvalues.size()); ++k) {
            const bool member = std::any_of(group.begin(), group.end(), [&](int g) { return candidates[g] == k; });
            const double d = std::abs(run.spectrum.eigenvalues[k] - center);
            if (member) spread = std::max(spread, d);
            else gap = std::min(gap, d);
        }
        const double radius = std::max(0.5 * gap, 2.0 * spread);
        const ProjectorRank rank = projector_rank(resolvent, run.spectrum.eigenvalues, center, radius, options.projector);

        ResonanceRecord rec;
        rec.z = center;
        rec.multiplicity = rank.rank;
        rec.band = n;
        rec.delta = delta;
        rec.residual = residual;
        rec.curve_distance = dist;
        rec.projector_radius = radius;
        run.records.push_back(rec);
    }
    std::sort(run.records.begin(), run.records.end(), [](const auto& a, const auto& b) {
        return a.z.real() != b.z.real() ? a.z.real() < b.z.real() : a.z.imag() < b.z.imag();
    });
    return run;
}

std::vector<ResonanceRecord> resonances(const PotentialSpec& spec, int n, double delta, const GridSpec& grid,
                                        const ResonanceOptions& options) {
    return resonance_run(spec, n, delta, grid, options).records;
}

EigenDecomposition cap_spectrum(const PotentialSpec& spec, double epsilon, cplx theta, const GridSpec& grid) {
    if (!(epsilon > 0.0)) throw ParameterError(fmt::format("cap_spectrum needs epsilon > 0, got {}", epsilon));
    return eig(assemble(spec, theta, epsilon, grid), false);
}

GridSpec auto_cap_grid(double epsilon) {
    if (!(epsilon > 0.0)) throw ParameterError("auto_cap_grid needs epsilon > 0");
    const double scale = std::pow(epsilon, 0.25);
    const double L = std::max(2.0, 10.0 * scale);
    return GridSpec(L, odd_at_least(500.0 * L / (10.0 * scale)));
}

std::vector<ExtrapolatedEigenvalue> extrapolated_lowest(const PotentialSpec& spec, double epsilon, cplx theta,
                                                        const GridSpec& grid, int count) {
    const auto coarse = eig(assemble(spec, theta, epsilon, grid), false).eigenvalues;
    auto fine = eig(assemble(spec, theta, epsilon, grid.refined()), false).eigenvalues;
    std::stable_sort(fine.begin(), fine.end(), [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
    count = std::min<int>(count, static_cast<int>(fine.size()));
    std::vector<ExtrapolatedEigenvalue> out;
    for (int k = 0; k < count; ++k) {
        const cplx f = fine[k];
        const cplx c = *std::min_element(coarse.begin(), coarse.end(),
                                         [&](cplx a, cplx b) { return std::abs(a - f) < std::abs(b - f); });
        out.push_back({(4.0 * f - c) / 3.0, f, c});
    }
    return out;
}

std::vector<double> default_schedule() {
    std::vector<double> eps;
    for (int k = 0; k <= 8; ++k) eps.push_back(std::pow(10.0, -1.0 - 0.5 * k));
    return eps;
}

void validate_schedule(const std::vector<double>& epsilons) {
    if (epsilons.empty()) throw ParameterError("epsilon schedule is empty");
    for (std::size_t k = 0; k < epsilons.size(); ++k) {
        if (!(epsilons[k] > 0.0) || !std::isfinite(epsilons[k])) {
            throw ParameterError(fmt::format("epsilon schedule entry {} = {} must be positive", k, epsilons[k]));
        }
        if (k > 0 && !(epsilons[k] < epsilons[k - 1])) {
            throw ParameterError("epsilon schedule must be strictly decreasing");
        }
    }
}

double auto_disc_radius(cplx z, const std::vector<ResonanceRecord>& all, const Region& region) {
    double d = band_curve_distance(region.theta(), region.band(), z);
    for (const auto& r : all) {
        const double s = std::abs(r.z - z);
        if (s > 0.0) d = std::min(d, s);
    }
    const Region prime(region.band(), region.delta(), RegionKind::OmegaPrime);
    d = std::min(d, prime.distance_to_straight_boundary(z));
    return 0.5 * d;
}

TrajectorySet flow(const PotentialSpec& spec, int n, double delta, const std::vector<double>& schedule,
                   const GridSpec& grid, const FlowOptions& options) {
    validate_schedule(schedule);
    const DistortionParams params = DistortionParams::for_band(n, delta, spec.K);
    const cplx theta = params.theta;
    const Region omega(n, delta, RegionKind::Omega);
    const Region omega_prime(n, delta, RegionKind::OmegaPrime);

    TrajectorySet out;
    out.band = n;
    out.delta = delta;
    out.epsilons = schedule;

    std::vector<GridSpec> grids;
    for (double eps : schedule) {
        if (!options.autoscale_points) {
            grids.push_back(grid);
            continue;
        }
        const double factor = std::pow(schedule.front() / eps, 0.25);
        grids.emplace_back(grid.half_width(), std::min(options.max_points, odd_at_least(grid.size() * factor)));
    }
    for (const auto& g : grids) out.grid_points.push_back(g.size());
    const GridSpec& final_grid = grids.back();
    out.gate_floor = options.gate_floor_factor * final_grid.spacing() * final_grid.spacing();

    // eps -> 0 limit on the finest grid
    out.resonances = resonances(spec, n, delta, final_grid, options.resonance);

    // Per-eps spectra; each solve is independent.
    std::vector<std::vector<cplx>> spectra(schedule.size());
    for (std::size_t k = 0; k < schedule.size(); ++k) {
        spectra[k] = cap_spectrum(spec, schedule[k], theta, grids[k]).eigenvalues;
    }

    // Tracking window: Omega away from the discretised continuum.
    std::vector<std::vector<cplx>> window(schedule.size());
    for (std::size_t k = 0; k < schedule.size(); ++k) {
        const double margin = options.resonance.margin_for(n, grids[k]);
        int in_prime = 0;
        for (cplx z : spectra[k]) {
            if (!omega.contains(z) || band_curve_distance(theta, n, z) <= margin) continue;
            window[k].push_back(z);
            if (omega_prime.contains(z)) ++in_prime;
        }
        out.window_counts.push_back(in_prime);
    }

    // Nearest-neighbour linking with per-track gates, greedy by distance.
    std::vector<int> alive;
    for (std::size_t k = 0; k < schedule.size(); ++k) {
        const auto& cur = window[k];
        std::vector<bool> taken(cur.size(), false);
        struct Pair {
            double d;
            int track;
            int cand;
        };
        std::vector<Pair> pairs;
        for (int t : alive) {
            const auto& pts = out.tracks[t].points;
            const cplx last = pts.back().lambda;
            double gate = options.initial_gate;
            if (pts.size() >= 2) gate = options.gate_factor * std::abs(last - pts[pts.size() - 2].lambda);
            gate = std::max(gate, out.gate_floor);
            int within = 0;
            for (int c = 0; c < static_cast<int>(cur.size()); ++c) {
                const double d = std::abs(cur[c] - last);
                if (d <= gate) {
                    pairs.push_back({d, t, c});
                    ++within;
                }
            }
            if (within > 1) {
                out.warnings.push_back(fmt::format("fork: track {} has {} candidates within gate {:.3g} at eps={:.3g}",
                                                   out.tracks[t].id, within, gate, schedule[k]));
            }
        }
        std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.d < b.d; });
        std::vector<int> next;
        std::vector<bool> extended(out.tracks.size(), false);
        for (const auto& p : pairs) {
            if (extended[p.track] || taken[p.cand]) continue;
            extended[p.track] = true;
            taken[p.cand] = true;
            out.tracks[p.track].points.push_back({static_cast<int>(k), schedule[k], cur[p.cand]});
            next.push_back(p.track);
        }
        for (int c = 0; c < static_cast<int>(cur.size()); ++c) {
            if (taken[c]) continue;
            Trajectory tr;
            tr.id = static_cast<int>(out.tracks.size());
            tr.points.push_back({static_cast<int>(k), schedule[k], cur[c]});
            out.tracks.push_back(tr);
            next.push_back(tr.id);
        }
        std::sort(next.begin(), next.end());
        alive = std::move(next);
    }
    const int last_step = static_cast<int>(schedule.size()) - 1;
    for (auto& tr : out.tracks) tr.verified = tr.points.back().step == last_step && omega_prime.contains(tr.points.back().lambda);

    // Match every resonance with the track ending nearest to it.
    for (int r = 0; r < static_cast<int>(out.resonances.size()); ++r) {
        const cplx z = out.resonances[r].z;
        ResonanceMatch m;
        m.resonance = r;
        double best = std::numeric_limits<double>::infinity();
        for (const auto& tr : out.tracks) {
            if (tr.points.back().step != last_step) continue;
            const double d = std::abs(tr.points.back().lambda - z);
            if (d < best) {
                best = d;
                m.trajectory = tr.id;
            }
        }
        if (m.trajectory < 0) {
            out.warnings.push_back(fmt::format("resonance {} ({:.6g}, {:.6g}) has no trajectory at the final eps", r,
                                               z.real(), z.imag()));
            out.matches.push_back(m);
            continue;
        }
        const auto& tr = out.tracks[m.trajectory];
        m.final_distance = best;
        for (const auto& p : tr.points) m.distances.push_back(std::abs(p.lambda - z));
        m.tail_length = std::min<int>(options.tail_length, static_cast<int>(schedule.size()));
        if (static_cast<int>(tr.points.size()) >= m.tail_length) {
            m.monotone_tail = true;
            for (std::size_t i = m.distances.size() - m.tail_length + 1; i < m.distances.size(); ++i) {
                if (!(m.distances[i] < m.distances[i - 1])) m.monotone_tail = false;
            }
        }
        if (!m.monotone_tail) {
            out.warnings.push_back(fmt::format("resonance {}: distance along track {} is not strictly decreasing over "
                                               "the last {} steps",
                                               r, tr.id, m.tail_length));
        }
        out.matches.push_back(m);
    }

    // Counting discs: one automatic disc per resonance plus user discs.
    std::vector<DiscCount> discs;
    for (int r = 0; r < static_cast<int>(out.resonances.size()); ++r) {
        DiscCount dc;
        dc.disc = {out.resonances[r].z, auto_disc_radius(out.resonances[r].z, out.resonances, omega)};
        dc.resonance = r;
        dc.expected = out.resonances[r].multiplicity;
        discs.push_back(dc);
    }
    for (const auto& d : options.discs) {
        DiscCount dc;
        dc.disc = d;
        for (const auto& r : out.resonances)
            if (std::abs(r.z - d.center) <= d.radius) dc.expected += r.multiplicity;
        discs.push_back(dc);
    }
    for (auto& dc : discs) {
        for (const auto& spectrum : spectra) {
            dc.counts.push_back(static_cast<int>(std::count_if(spectrum.begin(), spectrum.end(), [&](cplx z) {
                return std::abs(z - dc.disc.center) <= dc.disc.radius;
            })));
        }
    }
    out.discs = std::move(discs);

    // A resonance whose final track starts at the last step, while the
    // previous step already had an eigenvalue in its disc, means the
    // schedule was too coarse for the gates.
    if (schedule.size() >= 2) {
        for (const auto& m : out.matches) {
            if (m.trajectory < 0) continue;
            const auto& dc = out.discs[m.resonance];
            if (out.tracks[m.trajectory].points.size() < 2 && dc.counts[dc.counts.size() - 2] > 0) {
                throw GatingError(fmt::format(
                    "could not link the final step for resonance ({:.6g}, {:.6g}); refine the epsilon schedule "
                    "near eps={:.3g} or raise the gate factor",
                    dc.disc.center.real(), dc.disc.center.imag(), schedule.back()));
            }
        }
    }
    return out;
}

}  // namespace wvres
