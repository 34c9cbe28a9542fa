#include "output.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "wvres/errors.hpp"

namespace wvres::cli {

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// "--" may not appear inside an XML comment.
std::string comment_safe(std::string s) {
    for (std::string::size_type pos; (pos = s.find("--")) != std::string::npos;) s.replace(pos, 2, "- -");
    return s;
}

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

// Tick positions 1, 2 or 5 times a power of ten, about `target` of them.
std::vector<double> ticks(double lo, double hi, int target) {
    const double raw = (hi - lo) / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        step = m * mag;
        if (step >= raw) break;
    }
    std::vector<double> out;
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-12 * step; t += step) {
        out.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
    }
    return out;
}

}  // namespace

std::string sci(double v) { return fmt::format("{:.16e}", v); }

void CsvTable::add(std::vector<std::string> row) {
    if (row.size() != header_.size()) throw Error("CSV row width does not match its header");
    rows_.push_back(std::move(row));
}

std::string CsvTable::render(const std::string& command, const ConfigEntries& config) const {
    std::string out = fmt::format("# wvres {} (schema_version {})\n", command, kSchemaVersion);
    for (const auto& [k, v] : config) out += fmt::format("# {} = {}\n", k, v);
    for (std::size_t i = 0; i < header_.size(); ++i) out += (i ? "," : "") + csv_cell(header_[i]);
    out += '\n';
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_cell(row[i]);
        out += '\n';
    }
    return out;
}

std::string render_json(const std::string& command, const ConfigEntries& config, const Json& payload) {
    Json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = command;
    Json cfg = Json::object();
    for (const auto& [k, v] : config) cfg[k] = v;
    doc["config"] = cfg;
    for (const auto& [k, v] : payload.items()) doc[k] = v;
    return doc.dump(2) + "\n";
}

Json complex_json(cplx z) { return Json::array({z.real(), z.imag()}); }

SvgPlot::SvgPlot(double x_min, double x_max, double y_min, double y_max, int width, int height)
    : x0_(x_min), x1_(x_max), y0_(y_min), y1_(y_max), w_(width), h_(height) {
    if (!(x1_ > x0_) || !(y1_ > y0_)) throw Error("empty plot window");
}

double SvgPlot::px(double x) const { return 70.0 + (x - x0_) / (x1_ - x0_) * (w_ - 90.0); }
double SvgPlot::py(double y) const { return h_ - 50.0 - (y - y0_) / (y1_ - y0_) * (h_ - 90.0); }

bool SvgPlot::visible(cplx z) const {
    return z.real() >= x0_ && z.real() <= x1_ && z.imag() >= y0_ && z.imag() <= y1_;
}

void SvgPlot::polyline(const std::vector<cplx>& points, const std::string& color, double stroke,
                       const std::string& dash) {
    // split into runs inside the window (coordinates clamped one step past the edge)
    std::string run;
    auto flush = [&] {
        if (!run.empty()) {
            body_.push_back(fmt::format(
                "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"{}\"{} points=\"{}\"/>", color, stroke,
                dash.empty() ? "" : fmt::format(" stroke-dasharray=\"{}\"", dash), run));
            run.clear();
        }
    };
    for (std::size_t i = 0; i < points.size(); ++i) {
        const bool in = visible(points[i]) || (i > 0 && visible(points[i - 1])) ||
                        (i + 1 < points.size() && visible(points[i + 1]));
        if (!in) {
            flush();
            continue;
        }
        const double x = std::clamp(points[i].real(), x0_ - 0.05 * (x1_ - x0_), x1_ + 0.05 * (x1_ - x0_));
        const double y = std::clamp(points[i].imag(), y0_ - 0.05 * (y1_ - y0_), y1_ + 0.05 * (y1_ - y0_));
        run += fmt::format("{}{:.2f},{:.2f}", run.empty() ? "" : " ", px(x), py(y));
    }
    flush();
}

void SvgPlot::markers(const std::vector<cplx>& points, const std::string& color, double radius, bool filled) {
    for (cplx z : points) {
        if (!visible(z)) continue;
        body_.push_back(fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"{}\" {}/>", px(z.real()), py(z.imag()),
                                    radius,
                                    filled ? fmt::format("fill=\"{}\"", color)
                                           : fmt::format("fill=\"none\" stroke=\"{}\" stroke-width=\"1.2\"", color)));
    }
}

void SvgPlot::label(cplx at, const std::string& text, const std::string& color) {
    if (!visible(at)) return;
    body_.push_back(fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"12\" fill=\"{}\">{}</text>",
                                px(at.real()) + 6.0, py(at.imag()) - 6.0, color, xml_escape(text)));
}

void SvgPlot::title(const std::string& text) { title_ = text; }

void SvgPlot::legend(const std::string& text, const std::string& color) { legend_.emplace_back(text, color); }

std::string SvgPlot::render(const std::string& command, const ConfigEntries& config) const {
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
                       w_, h_, w_, h_);
    out += fmt::format("<!--\nwvres {} (schema_version {})\n", command, kSchemaVersion);
    for (const auto& [k, v] : config) out += comment_safe(fmt::format("{} = {}", k, v)) + "\n";
    out += "-->\n";
    out += fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", w_, h_);
    // frame, grid and tick labels
    out += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"none\" stroke=\"#444\"/>\n",
                       px(x0_), py(y1_), px(x1_) - px(x0_), py(y0_) - py(y1_));
    for (double t : ticks(x0_, x1_, 8)) {
        out += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"#eee\"/>\n", px(t),
                           py(y0_), py(y1_));
        out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"11\" text-anchor=\"middle\">{:g}</text>\n",
                           px(t), py(y0_) + 16.0, t);
    }
    for (double t : ticks(y0_, y1_, 6)) {
        out += fmt::format("<line x1=\"{0:.2f}\" y1=\"{2:.2f}\" x2=\"{1:.2f}\" y2=\"{2:.2f}\" stroke=\"#eee\"/>\n",
                           px(x0_), px(x1_), py(t));
        out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"11\" text-anchor=\"end\">{:g}</text>\n",
                           px(x0_) - 6.0, py(t) + 4.0, t);
    }
    out += fmt::format("<text x=\"{:.2f}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">Re z</text>\n",
                       0.5 * (px(x0_) + px(x1_)), h_ - 12);
    out += fmt::format("<text x=\"16\" y=\"{:.2f}\" font-size=\"12\" transform=\"rotate(-90 16 {:.2f})\" "
                       "text-anchor=\"middle\">Im z</text>\n",
                       0.5 * (py(y0_) + py(y1_)), 0.5 * (py(y0_) + py(y1_)));
    if (!title_.empty()) {
        out += fmt::format("<text x=\"{}\" y=\"24\" font-size=\"15\" text-anchor=\"middle\">{}</text>\n", w_ / 2,
                           xml_escape(title_));
    }
    for (const auto& line : body_) out += line + "\n";
    for (std::size_t i = 0; i < legend_.size(); ++i) {
        const double y = py(y1_) + 18.0 + 16.0 * static_cast<double>(i);
        out += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"10\" height=\"10\" fill=\"{}\"/>\n",
                           px(x1_) - 225.0, y - 9.0, legend_[i].second);
        out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"11\">{}</text>\n", px(x1_) - 209.0, y,
                           xml_escape(legend_[i].first));
    }
    out += "</svg>\n";
    return out;
}

std::string ramp_color(double t) {
    t = std::clamp(t, 0.0, 1.0);
    const int r = static_cast<int>(std::lround(40 + 200 * t));
    const int g = static_cast<int>(std::lround(90 - 40 * std::abs(2 * t - 1)));
    const int b = static_cast<int>(std::lround(220 - 190 * t));
    return fmt::format("#{:02x}{:02x}{:02x}", r, g, b);
}

void OutputBundle::add(std::string name, std::string content) { files_.emplace_back(std::move(name), std::move(content)); }

std::vector<std::filesystem::path> OutputBundle::commit(const std::filesystem::path& dir) const {
    namespace fs = std::filesystem;
    std::vector<fs::path> written;
    try {
        fs::create_directories(dir);
        for (const auto& [name, content] : files_) {
            const fs::path path = dir / name;
            std::ofstream out(path, std::ios::binary | std::ios::trunc);
            if (!out) throw ConfigError(fmt::format("cannot write '{}'", path.string()));
            written.push_back(path);
            out << content;
            out.close();
            if (!out) throw Error(fmt::format("failed writing '{}'", path.string()));
        }
    } catch (...) {
        std::error_code ec;
        for (const auto& p : written) fs::remove(p, ec);
        throw;
    }
    return written;
}

}  // namespace wvres::cli
