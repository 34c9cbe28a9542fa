#include "wvres/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "output.hpp"
#include "wvres/cli/validation.hpp"
#include "wvres/distortion.hpp"
#include "wvres/errors.hpp"
#include "wvres/flow.hpp"
#include "wvres/geometry.hpp"

namespace wvres::cli {

namespace {

struct View {
    double x0, x1, y0, y1;
};

// Plot window around band n: the band with some margin, down past the
// deepest point of the essential curve.
View band_view(const Region& region) {
    const int n = region.band();
    const double lo = (n - 1) * (n - 1), hi = n * n, w = hi - lo;
    double deepest = 0.0;
    for (const auto& [x, k] : region.curve_samples()) deepest = std::min(deepest, k);
    return {lo - 0.12 * w, hi + 0.12 * w, 1.6 * deepest - 0.05 * w, 0.3 * w};
}

// Essential curve, band boundary and (dashed) slope cut.
void draw_region(SvgPlot& plot, const Region& region, const View& view) {
    const int n = region.band();
    const double lo = (n - 1) * (n - 1), hi = n * n;
    const cplx theta = region.theta();
    const double xi_lo = std::sqrt(std::max(view.x0, 0.0)) - 0.2, xi_hi = std::sqrt(view.x1) + 0.2;
    plot.polyline(essential_curve(theta, xi_lo, xi_hi, 600), "#555", 1.5);
    plot.polyline({cplx(lo, 0.0), cplx(lo, view.y1)}, "#2a7", 1.2);
    plot.polyline({cplx(hi, 0.0), cplx(hi, view.y1)}, "#2a7", 1.2);
    const double s = region.slope();
    plot.polyline({cplx(lo, 0.0), cplx(hi, s * (lo - hi))}, "#2a7", 1.0, "6 4");
    plot.polyline({cplx(lo, s * (lo - hi)), cplx(hi, 0.0)}, "#2a7", 1.0, "6 4");
    plot.legend("essential spectrum", "#555");
    plot.legend(fmt::format("Omega_{} boundary / slope cut", n), "#2a7");
}

Json record_json(const ResonanceRecord& r) {
    Json j;
    j["z"] = complex_json(r.z);
    j["multiplicity"] = r.multiplicity;
    j["band"] = r.band;
    j["delta"] = r.delta;
    j["residual"] = r.residual;
    j["curve_distance"] = r.curve_distance;
    j["projector_radius"] = r.projector_radius;
    return j;
}

Json grid_json(const GridSpec& g) {
    return Json{{"half_width", g.half_width()}, {"points", g.size()}, {"spacing", g.spacing()}};
}

std::string region_label(const RunConfig& c) { return c.region == "omega_prime" ? "Omega'" : "Omega"; }

}  // namespace

CommandOutcome cmd_resonances(const RunConfig& config, std::ostream& log) {
    const auto entries = config.entries();
    const auto spec = config.potential_spec();
    const auto grid = config.grid();
    const ResonanceRun run = resonance_run(spec, config.band, config.delta, grid, config.resonance_options());
    const Region region(config.band, config.delta, RegionKind::Omega);

    OutputBundle bundle;
    if (config.wants("csv")) {
        CsvTable table({"re_z", "im_z", "multiplicity", "band", "delta", "residual", "curve_distance",
                        "projector_radius"});
        for (const auto& r : run.records) {
            table.add({sci(r.z.real()), sci(r.z.imag()), std::to_string(r.multiplicity), std::to_string(r.band),
                       sci(r.delta), sci(r.residual), sci(r.curve_distance), sci(r.projector_radius)});
        }
        bundle.add("resonances.csv", table.render("resonances", entries));
    }
    if (config.wants("json")) {
        Json payload;
        payload["theta"] = complex_json(run.theta);
        payload["grid"] = grid_json(grid);
        payload["region"] = config.region;
        payload["solver"] = run.spectrum.meta.solver;
        payload["eigenvalue_count"] = run.spectrum.eigenvalues.size();
        payload["max_residual"] = run.spectrum.meta.max_residual;
        Json list = Json::array();
        for (const auto& r : run.records) list.push_back(record_json(r));
        payload["resonances"] = list;
        bundle.add("resonances.json", render_json("resonances", entries, payload));
    }
    if (config.wants("svg")) {
        const View v = band_view(region);
        SvgPlot plot(v.x0, v.x1, v.y0, v.y1);
        plot.title(fmt::format("Distorted spectrum, band {}, delta = {}", config.band, config.delta));
        draw_region(plot, region, v);
        plot.markers(run.spectrum.eigenvalues, "#3465a4", 1.8);
        std::vector<cplx> zs;
        for (const auto& r : run.records) zs.push_back(r.z);
        plot.markers(zs, "#cc0000", 6.0, false);
        for (const auto& r : run.records) plot.label(r.z, fmt::format("m={}", r.multiplicity), "#cc0000");
        plot.legend("eigenvalues", "#3465a4");
        plot.legend("resonances", "#cc0000");
        bundle.add("spectrum.svg", plot.render("resonances", entries));
    }

    CommandOutcome out;
    out.files = bundle.commit(config.out_dir);
    fmt::print(log, "resonances: {} in {}_{} (delta = {}, L = {}, N = {})\n", run.records.size(),
               region_label(config), config.band, config.delta, grid.half_width(), grid.size());
    for (const auto& r : run.records) {
        fmt::print(log, "  z = {:.12f} {:+.12f}i  multiplicity {}  residual {:.2e}\n", r.z.real(), r.z.imag(),
                   r.multiplicity, r.residual);
    }
    return out;
}

CommandOutcome cmd_flow(const RunConfig& config, std::ostream& log) {
    const auto entries = config.entries();
    const auto spec = config.potential_spec();
    const TrajectorySet set = flow(spec, config.band, config.delta, config.schedule, config.grid(), config.flow_options());

    OutputBundle bundle;
    if (config.wants("csv")) {
        CsvTable table({"epsilon", "re_lambda", "im_lambda", "trajectory", "step", "verified"});
        for (const auto& t : set.tracks) {
            for (const auto& p : t.points) {
                table.add({sci(p.epsilon), sci(p.lambda.real()), sci(p.lambda.imag()), std::to_string(t.id),
                           std::to_string(p.step), t.verified ? "true" : "false"});
            }
        }
        bundle.add("trajectories.csv", table.render("flow", entries));
    }
    if (config.wants("json")) {
        Json payload;
        payload["band"] = set.band;
        payload["delta"] = set.delta;
        payload["epsilons"] = set.epsilons;
        payload["grid_points"] = set.grid_points;
        payload["gate_floor"] = set.gate_floor;
        payload["window_counts"] = set.window_counts;
        payload["warnings"] = set.warnings;
        Json tracks = Json::array();
        for (const auto& t : set.tracks) {
            Json pts = Json::array();
            for (const auto& p : t.points) {
                pts.push_back(Json{{"step", p.step}, {"epsilon", p.epsilon}, {"lambda", complex_json(p.lambda)}});
            }
            tracks.push_back(Json{{"id", t.id}, {"verified", t.verified}, {"points", pts}});
        }
        payload["trajectories"] = tracks;
        bundle.add("trajectories.json", render_json("flow", entries, payload));

        Json report;
        Json res = Json::array();
        for (const auto& r : set.resonances) res.push_back(record_json(r));
        report["resonances"] = res;
        Json matches = Json::array();
        for (const auto& m : set.matches) {
            matches.push_back(Json{{"resonance", m.resonance},
                                   {"trajectory", m.trajectory},
                                   {"final_distance", m.final_distance},
                                   {"distances", m.distances},
                                   {"tail_length", m.tail_length},
                                   {"monotone_tail", m.monotone_tail}});
        }
        report["matches"] = matches;
        Json discs = Json::array();
        for (const auto& d : set.discs) {
            const int k = static_cast<int>(d.counts.size());
            const bool settled = k >= 2 && d.counts[k - 1] == d.expected && d.counts[k - 2] == d.expected;
            discs.push_back(Json{{"center", complex_json(d.disc.center)},
                                 {"radius", d.disc.radius},
                                 {"resonance", d.resonance},
                                 {"expected", d.expected},
                                 {"counts", d.counts},
                                 {"final_counts_match", settled}});
        }
        report["discs"] = discs;
        report["window_counts"] = set.window_counts;
        bundle.add("matches.json", render_json("flow", entries, report));
    }
    if (config.wants("svg")) {
        const Region region(config.band, config.delta, RegionKind::Omega);
        const View v = band_view(region);
        SvgPlot plot(v.x0, v.x1, v.y0, v.y1);
        plot.title(fmt::format("Viscosity flow, band {}, delta = {}", config.band, config.delta));
        draw_region(plot, region, v);
        const double steps = std::max<double>(1.0, static_cast<double>(set.epsilons.size()) - 1.0);
        for (const auto& t : set.tracks) {
            std::vector<cplx> line;
            for (const auto& p : t.points) line.push_back(p.lambda);
            plot.polyline(line, "#999", 0.8);
            for (const auto& p : t.points) plot.markers({p.lambda}, ramp_color(p.step / steps), 3.0);
        }
        std::vector<cplx> zs;
        for (const auto& r : set.resonances) zs.push_back(r.z);
        plot.markers(zs, "#000", 7.0, false);
        for (const auto& d : set.discs) {
            std::vector<cplx> circle;
            for (int k = 0; k <= 96; ++k) circle.push_back(d.disc.center + std::polar(d.disc.radius, 2.0 * kPi * k / 96));
            plot.polyline(circle, "#000", 0.8, "3 3");
        }
        plot.legend(fmt::format("eps = {:.3g}", set.epsilons.front()), ramp_color(0.0));
        plot.legend(fmt::format("eps = {:.3g}", set.epsilons.back()), ramp_color(1.0));
        plot.legend("resonances (eps = 0)", "#000");
        bundle.add("flow.svg", plot.render("flow", entries));
    }

    CommandOutcome out;
    out.files = bundle.commit(config.out_dir);
    fmt::print(log, "flow: {} steps, {} trajectories, {} resonances\n", set.epsilons.size(), set.tracks.size(),
               set.resonances.size());
    for (const auto& m : set.matches) {
        fmt::print(log, "  resonance {} <- trajectory {}: final distance {:.3e}, tail {}\n", m.resonance,
                   m.trajectory, m.final_distance, m.monotone_tail ? "strictly decreasing" : "NOT monotone");
    }
    for (const auto& d : set.discs) {
        fmt::print(log, "  disc |z - ({:.6f}, {:.6f})| < {:.3e}: expected {}, final counts {}\n",
                   d.disc.center.real(), d.disc.center.imag(), d.disc.radius, d.expected,
                   d.counts.empty() ? -1 : d.counts.back());
    }
    for (const auto& w : set.warnings) fmt::print(log, "  warning: {}\n", w);
    return out;
}

CommandOutcome cmd_region(const RunConfig& config, std::ostream& log) {
    const auto entries = config.entries();
    const Region omega(config.band, config.delta, RegionKind::Omega, config.region_samples);
    const double s = omega.slope();
    const int n = config.band;
    const double lo = (n - 1) * (n - 1), hi = n * n;

    OutputBundle bundle;
    if (config.wants("csv")) {
        CsvTable table({"x", "kappa", "xi", "slope_left", "slope_right"});
        for (const auto& [x, k] : omega.curve_samples()) {
            table.add({sci(x), sci(k), sci(kappa_preimage(n, config.delta, x)), sci(s * (lo - x)), sci(s * (x - hi))});
        }
        bundle.add("region.csv", table.render("region", entries));
    }
    if (config.wants("json")) {
        Json payload;
        payload["band"] = n;
        payload["delta"] = config.delta;
        payload["theta"] = complex_json(omega.theta());
        payload["thresholds"] = Json::array({lo, hi});
        payload["slope"] = s;
        payload["slope_cut_inactive"] = config.delta < 1.0 / (std::sqrt(3.0) * kPi);
        Json curve = Json::array();
        for (const auto& [x, k] : omega.curve_samples()) curve.push_back(Json::array({x, k}));
        payload["curve"] = curve;
        bundle.add("region.json", render_json("region", entries, payload));
    }
    if (config.wants("svg")) {
        const View v = band_view(omega);
        SvgPlot plot(v.x0, v.x1, v.y0, v.y1);
        plot.title(fmt::format("Omega_{} and Omega'_{}, delta = {}", n, n, config.delta));
        draw_region(plot, omega, v);
        bundle.add("region.svg", plot.render("region", entries));
    }

    CommandOutcome out;
    out.files = bundle.commit(config.out_dir);
    fmt::print(log, "region: band {}, delta = {}, slope {:.6f}, {} curve samples\n", n, config.delta, s,
               omega.curve_samples().size());
    return out;
}

CommandOutcome cmd_validate(const RunConfig& config, std::ostream& log) {
    const auto entries = config.entries();
    const auto results = run_acceptance(config.validation, [&](const CheckResult& r) {
        fmt::print(log, "{}\n", format_check(r));
        log.flush();
    });
    const bool all = std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; });

    OutputBundle bundle;
    if (config.wants("csv")) {
        CsvTable table({"id", "name", "passed", "value", "threshold", "detail"});
        for (const auto& r : results) {
            table.add({std::to_string(r.id), r.name, r.passed ? "true" : "false", sci(r.value), sci(r.threshold),
                       r.detail});
        }
        bundle.add("validation.csv", table.render("validate", entries));
    }
    if (config.wants("json")) {
        Json payload;
        payload["passed"] = all;
        Json checks = Json::array();
        for (const auto& r : results) {
            checks.push_back(Json{{"id", r.id},
                                  {"name", r.name},
                                  {"passed", r.passed},
                                  {"value", r.value},
                                  {"threshold", r.threshold},
                                  {"detail", r.detail}});
        }
        payload["checks"] = checks;
        bundle.add("validation.json", render_json("validate", entries, payload));
    }

    CommandOutcome out;
    out.files = bundle.commit(config.out_dir);
    const auto passed = std::count_if(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; });
    fmt::print(log, "validate: {}/{} checks passed\n", passed, results.size());
    out.exit_code = all ? kExitOk : kExitValidationFailure;
    return out;
}

int run_command(const std::string& name, const RunConfig& config, std::ostream& log, std::ostream& err) {
    try {
        CommandOutcome outcome;
        if (name == "resonances") {
            outcome = cmd_resonances(config, log);
        } else if (name == "flow") {
            outcome = cmd_flow(config, log);
        } else if (name == "region") {
            outcome = cmd_region(config, log);
        } else if (name == "validate") {
            outcome = cmd_validate(config, log);
        } else {
            fmt::print(err, "error: unknown command '{}'\n", name);
            return kExitConfigError;
        }
        for (const auto& f : outcome.files) fmt::print(log, "wrote {}\n", f.string());
        return outcome.exit_code;
    } catch (const ConfigError& e) {
        fmt::print(err, "config error: {}\n", e.what());
        return kExitConfigError;
    } catch (const ParameterError& e) {
        fmt::print(err, "config error: {}\n", e.what());
        return kExitConfigError;
    } catch (const GatingError& e) {
        fmt::print(err, "numerical failure (trajectory linking): {}\n", e.what());
        return kExitNumericalFailure;
    } catch (const Error& e) {
        fmt::print(err, "numerical failure: {}\n", e.what());
        return kExitNumericalFailure;
    } catch (const std::filesystem::filesystem_error& e) {
        fmt::print(err, "config error (output): {}\n", e.what());
        return kExitConfigError;
    }
}

}  // namespace wvres::cli
