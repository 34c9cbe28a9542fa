#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wvres/flow.hpp"
#include "wvres/grid.hpp"
#include "wvres/potential.hpp"

namespace wvres::cli {

/// Tolerances of the acceptance checks run by `wvres validate`.
struct ValidationTolerances {
    double free_cap = 1e-6;           // relative error of the oscillator levels
    double free_cap_seconds = 60.0;   // runtime budget per epsilon
    double hermitian = 1e-10;         // max |Im lambda| / spectral radius
    double curve = 1e-12;             // cloud-to-curve distance, relative
    double jost = 1e-4;               // distortion vs Jost, absolute
    double jost_seconds = 300.0;
    double theta = 1e-6;              // delta vs 1.2 delta, plus discretisation
    double idempotency = 1e-6;        // ||Pi^2 - Pi|| / max(||Pi||, 1)
};

/// Fully resolved run configuration. Every field has a default; a config
/// file and `--set` overrides replace them key by key.
struct RunConfig {
    // potential
    std::string potential = "steps";  // zero | sinc | gaussian | steps | smooth
    double amplitude = 1.0;
    double sigma = 1.0;
    std::vector<double> cos_coeffs{1.0};
    std::vector<double> sin_coeffs;
    std::vector<double> edges{-3.0, -2.5, 2.5, 3.0};
    std::vector<double> values{1.5, 0.0, 1.5};
    double radius = 2.0;
    double depth = -1.0;

    // band, distortion and grid
    int band = 1;
    double delta = 0.15;
    double half_width = 12.0;
    int points = 601;

    // resonance extraction
    double curve_margin = -1.0;
    double cluster_tol = 1e-6;
    std::string region = "omega";  // omega | omega_prime
    int projector_points = 64;
    double projector_tol = 1e-6;
    std::uint64_t seed = 0x5eed;

    // viscosity flow
    std::vector<double> schedule = default_schedule();
    double gate_factor = 3.0;
    double gate_floor_factor = 10.0;
    double initial_gate = 0.1;
    int tail_length = 5;
    bool autoscale = false;
    int max_points = 2001;
    std::vector<Disc> discs;

    // region curves
    int region_samples = 513;

    // output
    std::string out_dir = "wvres-out";
    std::vector<std::string> formats{"csv", "json", "svg"};

    ValidationTolerances validation;

    bool wants(const std::string& format) const;

    /// Canonical (key, value) listing of every field, in a fixed order.
    std::vector<std::pair<std::string, std::string>> entries() const;

    PotentialSpec potential_spec() const;
    GridSpec grid() const;
    ResonanceOptions resonance_options() const;
    FlowOptions flow_options() const;
};

/// Apply one `key = value` assignment. Throws ConfigError for unknown keys
/// and unparsable values.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Read a flat config file: one `key = value` per line, `#` starts a comment.
void apply_file(RunConfig& config, const std::string& path);

/// Check ranges and cross-field consistency; throws ConfigError.
void validate(const RunConfig& config);

/// Defaults, then the file (if any), then overrides of the form key=value;
/// validated.
RunConfig load_config(const std::optional<std::string>& path, const std::vector<std::string>& overrides);

}  // namespace wvres::cli
