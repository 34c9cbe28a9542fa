#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wvres/types.hpp"

namespace wvres::cli {

using ConfigEntries = std::vector<std::pair<std::string, std::string>>;
using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// 17 significant digits, scientific notation.
std::string sci(double v);

/// CSV document: provenance block of `# key = value` lines, header row, rows.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
    void add(std::vector<std::string> row);
    std::string render(const std::string& command, const ConfigEntries& config) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// {"schema_version": 1, "command": ..., "config": {...}} followed by `payload`'s members.
std::string render_json(const std::string& command, const ConfigEntries& config, const Json& payload);

Json complex_json(cplx z);

/// Minimal static SVG plot in data coordinates.
class SvgPlot {
public:
    SvgPlot(double x_min, double x_max, double y_min, double y_max, int width = 800, int height = 600);

    void polyline(const std::vector<cplx>& points, const std::string& color, double stroke = 1.5,
                  const std::string& dash = "");
    void markers(const std::vector<cplx>& points, const std::string& color, double radius, bool filled = true);
    void label(cplx at, const std::string& text, const std::string& color = "#222");
    void title(const std::string& text);
    void legend(const std::string& text, const std::string& color);

    std::string render(const std::string& command, const ConfigEntries& config) const;

private:
    double px(double x) const;
    double py(double y) const;
    bool visible(cplx z) const;

    double x0_, x1_, y0_, y1_;
    int w_, h_;
    std::string title_;
    std::vector<std::string> body_;
    std::vector<std::pair<std::string, std::string>> legend_;
};

/// Colour for position t in [0, 1] on a blue-to-red ramp.
std::string ramp_color(double t);

/// Files are staged in memory and written together; a failure while writing
/// removes everything this bundle created.
class OutputBundle {
public:
    void add(std::string name, std::string content);
    std::vector<std::filesystem::path> commit(const std::filesystem::path& dir) const;

private:
    std::vector<std::pair<std::string, std::string>> files_;
};

}  // namespace wvres::cli
