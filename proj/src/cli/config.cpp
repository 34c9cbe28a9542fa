#include "wvres/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "wvres/errors.hpp"

namespace wvres::cli {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string::size_type start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos == std::string::npos ? std::string::npos : pos - start)));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return parts;
}

double parse_double(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty() || !std::isfinite(v)) {
        throw ConfigError(fmt::format("{}: '{}' is not a finite number", key, text));
    }
    return v;
}

long long parse_integer(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        throw ConfigError(fmt::format("{}: '{}' is not an integer", key, text));
    }
    return v;
}

int parse_int(const std::string& key, const std::string& text) {
    const long long v = parse_integer(key, text);
    if (v < -2147483647LL || v > 2147483647LL) throw ConfigError(fmt::format("{}: {} out of range", key, v));
    return static_cast<int>(v);
}

bool parse_bool(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    throw ConfigError(fmt::format("{}: '{}' is not a boolean", key, text));
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    if (trim(text).empty()) return out;
    for (const auto& part : split(text, ',')) out.push_back(parse_double(key, part));
    return out;
}

std::vector<Disc> parse_discs(const std::string& key, const std::string& text) {
    std::vector<Disc> out;
    if (trim(text).empty()) return out;
    for (const auto& item : split(text, ';')) {
        const auto v = parse_list(key, item);
        if (v.size() != 3) throw ConfigError(fmt::format("{}: disc '{}' must be 're, im, radius'", key, item));
        out.push_back(Disc{cplx(v[0], v[1]), v[2]});
    }
    return out;
}

std::string format_double(double v) { return fmt::format("{}", v); }

std::string format_list(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_double(v[i]);
    return s;
}

std::string format_discs(const std::vector<Disc>& discs) {
    std::string s;
    for (std::size_t i = 0; i < discs.size(); ++i) {
        s += fmt::format("{}{}, {}, {}", i ? "; " : "", format_double(discs[i].center.real()),
                         format_double(discs[i].center.imag()), format_double(discs[i].radius));
    }
    return s;
}

// One entry per key: how to read it and how to print it back.
struct Field {
    const char* key;
    std::function<void(RunConfig&, const std::string&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

template <class T>
Field dbl(const char* key, T RunConfig::*member) {
    return {key, [member](RunConfig& c, const std::string& k, const std::string& v) { c.*member = parse_double(k, v); },
            [member](const RunConfig& c) { return format_double(c.*member); }};
}

Field integer(const char* key, int RunConfig::*member) {
    return {key, [member](RunConfig& c, const std::string& k, const std::string& v) { c.*member = parse_int(k, v); },
            [member](const RunConfig& c) { return std::to_string(c.*member); }};
}

Field list(const char* key, std::vector<double> RunConfig::*member) {
    return {key, [member](RunConfig& c, const std::string& k, const std::string& v) { c.*member = parse_list(k, v); },
            [member](const RunConfig& c) { return format_list(c.*member); }};
}

Field word(const char* key, std::string RunConfig::*member) {
    return {key, [member](RunConfig& c, const std::string&, const std::string& v) { c.*member = trim(v); },
            [member](const RunConfig& c) { return c.*member; }};
}

Field tol(const char* key, double ValidationTolerances::*member) {
    return {key,
            [member](RunConfig& c, const std::string& k, const std::string& v) {
                c.validation.*member = parse_double(k, v);
            },
            [member](const RunConfig& c) { return format_double(c.validation.*member); }};
}

const std::vector<Field>& fields() {
    static const std::vector<Field> table = {
        word("potential", &RunConfig::potential),
        dbl("potential.amplitude", &RunConfig::amplitude),
        dbl("potential.sigma", &RunConfig::sigma),
        list("potential.cos", &RunConfig::cos_coeffs),
        list("potential.sin", &RunConfig::sin_coeffs),
        list("potential.edges", &RunConfig::edges),
        list("potential.values", &RunConfig::values),
        dbl("potential.radius", &RunConfig::radius),
        dbl("potential.depth", &RunConfig::depth),
        integer("band", &RunConfig::band),
        dbl("delta", &RunConfig::delta),
        dbl("grid.L", &RunConfig::half_width),
        integer("grid.N", &RunConfig::points),
        dbl("resonance.curve_margin", &RunConfig::curve_margin),
        dbl("resonance.cluster_tol", &RunConfig::cluster_tol),
        word("resonance.region", &RunConfig::region),
        integer("projector.points", &RunConfig::projector_points),
        dbl("projector.tol", &RunConfig::projector_tol),
        {"projector.seed",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             const long long s = parse_integer(k, v);
             if (s < 0) throw ConfigError(fmt::format("{}: seed must be non-negative", k));
             c.seed = static_cast<std::uint64_t>(s);
         },
         [](const RunConfig& c) { return std::to_string(c.seed); }},
        list("flow.schedule", &RunConfig::schedule),
        dbl("flow.gate_factor", &RunConfig::gate_factor),
        dbl("flow.gate_floor_factor", &RunConfig::gate_floor_factor),
        dbl("flow.initial_gate", &RunConfig::initial_gate),
        integer("flow.tail_length", &RunConfig::tail_length),
        {"flow.autoscale",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.autoscale = parse_bool(k, v); },
         [](const RunConfig& c) { return std::string(c.autoscale ? "true" : "false"); }},
        integer("flow.max_points", &RunConfig::max_points),
        {"flow.discs", [](RunConfig& c, const std::string& k, const std::string& v) { c.discs = parse_discs(k, v); },
         [](const RunConfig& c) { return format_discs(c.discs); }},
        integer("region.samples", &RunConfig::region_samples),
        word("output.dir", &RunConfig::out_dir),
        {"output.formats",
         [](RunConfig& c, const std::string&, const std::string& v) {
             c.formats.clear();
             for (const auto& f : split(v, ','))
                 if (!f.empty()) c.formats.push_back(f);
         },
         [](const RunConfig& c) { return fmt::format("{}", fmt::join(c.formats, ",")); }},
        tol("validate.free_cap_tol", &ValidationTolerances::free_cap),
        tol("validate.free_cap_seconds", &ValidationTolerances::free_cap_seconds),
        tol("validate.hermitian_tol", &ValidationTolerances::hermitian),
        tol("validate.curve_tol", &ValidationTolerances::curve),
        tol("validate.jost_tol", &ValidationTolerances::jost),
        tol("validate.jost_seconds", &ValidationTolerances::jost_seconds),
        tol("validate.theta_tol", &ValidationTolerances::theta),
        tol("validate.idempotency_tol", &ValidationTolerances::idempotency),
    };
    return table;
}

}  // namespace

bool RunConfig::wants(const std::string& format) const {
    return std::find(formats.begin(), formats.end(), format) != formats.end();
}

std::vector<std::pair<std::string, std::string>> RunConfig::entries() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& f : fields()) out.emplace_back(f.key, f.get(*this));
    return out;
}

PotentialSpec RunConfig::potential_spec() const {
    try {
        if (potential == "zero") return PotentialSpec::zero();
        if (potential == "sinc") return PotentialSpec::sinc(amplitude);
        if (potential == "gaussian") return PotentialSpec::gaussian(sigma, cos_coeffs, sin_coeffs);
        if (potential == "steps") return PotentialSpec::steps(edges, values);
        if (potential == "smooth") return PotentialSpec::smooth_bump(radius, depth);
    } catch (const ParameterError& e) {
        throw ConfigError(fmt::format("potential: {}", e.what()));
    }
    throw ConfigError(fmt::format("potential: unknown family '{}' (zero, sinc, gaussian, steps, smooth)", potential));
}

GridSpec RunConfig::grid() const {
    try {
        return GridSpec(half_width, points);
    } catch (const ParameterError& e) {
        throw ConfigError(fmt::format("grid: {}", e.what()));
    }
}

ResonanceOptions RunConfig::resonance_options() const {
    ResonanceOptions o;
    o.curve_margin = curve_margin;
    o.cluster_tol = cluster_tol;
    o.region = region == "omega_prime" ? RegionKind::OmegaPrime : RegionKind::Omega;
    o.projector.points = projector_points;
    o.projector.tol = projector_tol;
    o.projector.seed = seed;
    return o;
}

FlowOptions RunConfig::flow_options() const {
    FlowOptions o;
    o.resonance = resonance_options();
    o.gate_factor = gate_factor;
    o.gate_floor_factor = gate_floor_factor;
    o.initial_gate = initial_gate;
    o.tail_length = tail_length;
    o.discs = discs;
    o.autoscale_points = autoscale;
    o.max_points = max_points;
    return o;
}

void apply_setting(RunConfig& config, const std::string& key, const std::string& value) {
    const std::string k = trim(key);
    for (const auto& f : fields()) {
        if (k == f.key) {
            f.set(config, k, value);
            return;
        }
    }
    throw ConfigError(fmt::format("unknown config key '{}'", k));
}

void apply_file(RunConfig& config, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path));
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(fmt::format("{}:{}: expected 'key = value'", path, lineno));
        try {
            apply_setting(config, line.substr(0, eq), line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(fmt::format("{}:{}: {}", path, lineno, e.what()));
        }
    }
}

void validate(const RunConfig& c) {
    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw ConfigError(what);
    };
    (void)c.potential_spec();
    (void)c.grid();
    require(c.band >= 1, fmt::format("band: {} must be >= 1", c.band));
    require(c.delta > 0.0 && c.delta < 1.0 / kPi, fmt::format("delta: {} must lie in (0, 1/pi)", c.delta));
    require(c.cluster_tol > 0.0, "resonance.cluster_tol must be positive");
    require(c.region == "omega" || c.region == "omega_prime",
            fmt::format("resonance.region: '{}' is not omega or omega_prime", c.region));
    require(c.projector_points >= 4, "projector.points must be >= 4");
    require(c.projector_tol > 0.0, "projector.tol must be positive");
    try {
        validate_schedule(c.schedule);
    } catch (const ParameterError& e) {
        throw ConfigError(fmt::format("flow.schedule: {}", e.what()));
    }
    require(c.gate_factor > 0.0 && c.gate_floor_factor > 0.0 && c.initial_gate > 0.0,
            "flow gate parameters must be positive");
    require(c.tail_length >= 2, "flow.tail_length must be >= 2");
    require(c.max_points >= c.points, "flow.max_points must be >= grid.N");
    for (const auto& d : c.discs) require(d.radius > 0.0, "flow.discs: radii must be positive");
    require(c.region_samples >= 3, "region.samples must be >= 3");
    require(!c.out_dir.empty(), "output.dir must not be empty");
    require(!c.formats.empty(), "output.formats must name at least one of csv, json, svg");
    for (const auto& f : c.formats) {
        require(f == "csv" || f == "json" || f == "svg", fmt::format("output.formats: unknown format '{}'", f));
    }
    const auto& t = c.validation;
    for (double v : {t.free_cap, t.free_cap_seconds, t.hermitian, t.curve, t.jost, t.jost_seconds, t.theta,
                     t.idempotency}) {
        require(v > 0.0, "validate.* tolerances must be positive");
    }
}

RunConfig load_config(const std::optional<std::string>& path, const std::vector<std::string>& overrides) {
    RunConfig config;
    if (path) apply_file(config, *path);
    for (const auto& item : overrides) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigError(fmt::format("--set '{}': expected key=value", item));
        apply_setting(config, item.substr(0, eq), item.substr(eq + 1));
    }
    validate(config);
    return config;
}

}  // namespace wvres::cli
