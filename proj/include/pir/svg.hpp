#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "pir/geometry.hpp"

namespace pir {

struct SvgOptions {
    int width = 900;
    int height = 480;
    int margin = 32;
};

namespace detail {

// Fixed-precision, locale-independent number rendering for SVG attributes.
inline std::string svg_num(double v, int precision = 12) {
    char buf[512];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed,
                                   precision);
    return std::string(buf, ptr);
}

constexpr std::array<const char*, 8> kLevelPalette = {
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
};

} // namespace detail

/// Renders the stack as layered polylines, one <g> per level, sampling each
/// interval at 32 equally spaced points evaluated from the exact rationals.
/// Output is deterministic for fixed inputs and options.
inline std::string render_svg(const PatternStack& stack, const SvgOptions& options = {}) {
    constexpr int kSamples = 32;
    const GridSpec& grid = stack.grid;

    // Sample every level up front, in function coordinates.
    std::vector<std::vector<std::vector<std::pair<double, double>>>> layers;
    double ymin = 0.0, ymax = 0.0;
    for (std::size_t l = 0; l < stack.psi.size(); ++l) {
        const PiecewisePoly& f = stack.psi[l];
        std::vector<std::vector<std::pair<double, double>>> lines;
        for (std::size_t i = 0; i < grid.length; ++i) {
            std::vector<std::pair<double, double>> pts;
            pts.reserve(kSamples);
            const Rational ta = grid.breakpoint(i);
            const Rational w = grid.breakpoint(i + 1) - ta;
            for (int k = 0; k < kSamples; ++k) {
                const Rational t = ta + w * BigInt(k) / BigInt(kSamples - 1);
                const Rational y = f.eval_on_piece(i, t); // one-sided at shared breakpoints
                const double yd = to_double(y);
                ymin = std::min(ymin, yd);
                ymax = std::max(ymax, yd);
                pts.emplace_back(to_double(t), yd);
            }
            lines.push_back(std::move(pts));
        }
        layers.push_back(std::move(lines));
    }

    const double xmin = 0.0;
    const double xmax = to_double(grid.breakpoint(grid.length));
    if (ymax - ymin <= 0.0) ymax = ymin + 1.0;
    const double inner_w = options.width - 2.0 * options.margin;
    const double inner_h = options.height - 2.0 * options.margin;
    const double sx = inner_w / (xmax - xmin);
    const double sy = inner_h / (ymax - ymin);
    const double tx = options.margin - sx * xmin;
    const double ty = options.margin + sy * ymax;
    const double stroke = 1.4 / std::max(sx, sy);

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           std::to_string(options.width) + "\" height=\"" + std::to_string(options.height) +
           "\" viewBox=\"0 0 " + std::to_string(options.width) + " " +
           std::to_string(options.height) + "\">\n";
    out += "  <title>pattern stack, levels 0-" + std::to_string(stack.structural_level) +
           "</title>\n";

    const std::string matrix = detail::svg_num(sx, 8) + " 0 0 " + detail::svg_num(-sy, 8) +
                               " " + detail::svg_num(tx, 8) + " " + detail::svg_num(ty, 8);
    // axis at y = 0
    out += "  <g transform=\"matrix(" + matrix + ")\">\n";
    out += "    <line x1=\"" + detail::svg_num(xmin, 6) + "\" y1=\"0\" x2=\"" +
           detail::svg_num(xmax, 6) + "\" y2=\"0\" stroke=\"#999999\" stroke-width=\"" +
           detail::svg_num(0.5 * stroke, 10) + "\"/>\n";
    out += "  </g>\n";

    for (std::size_t l = 0; l < layers.size(); ++l) {
        const char* color = detail::kLevelPalette[l % detail::kLevelPalette.size()];
        out += "  <g id=\"level-" + std::to_string(l) + "\" fill=\"none\" stroke=\"" + color +
               "\" stroke-width=\"" + detail::svg_num(stroke, 10) + "\" transform=\"matrix(" +
               matrix + ")\">\n";
        for (const auto& line : layers[l]) {
            out += "    <polyline points=\"";
            for (std::size_t k = 0; k < line.size(); ++k) {
                if (k) out += ' ';
                out += detail::svg_num(line[k].first) + ',' + detail::svg_num(line[k].second);
            }
            out += "\"/>\n";
        }
        out += "  </g>\n";
    }
    out += "</svg>\n";
    return out;
}

} // namespace pir
