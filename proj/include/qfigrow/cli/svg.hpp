// svg.hpp - standalone polyline plots over curve data. Figures are static
// artifacts rendered from the same numbers as the CSV tables.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace qfigrow {

struct SvgSeries {
    std::string label;
    std::string color = "#000000";
    bool dashed = false;
    std::vector<std::pair<double, double>> points;
};

struct SvgOptions {
    std::string title;
    std::string x_label = "t";
    std::string y_label;
    bool log_y = false;
    double width = 640.0;
    double height = 420.0;
};

namespace detail {

inline std::string svg_num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

inline std::string xml_escape(const std::string& s) {
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

inline std::vector<double> nice_ticks(double lo, double hi, int target = 6) {
    std::vector<double> ticks;
    if (!(hi > lo)) return ticks;
    const double raw = (hi - lo) / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
        if (mag * m >= raw) {
            step = mag * m;
            break;
        }
    }
    for (double v = std::ceil(lo / step) * step; v <= hi + 0.5 * step; v += step)
        ticks.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
    return ticks;
}

}  // namespace detail

inline std::string render_svg(const std::vector<SvgSeries>& series, const SvgOptions& opt) {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series) {
        for (const auto& [x, y] : s.points) {
            if (opt.log_y && !(y > 0.0)) continue;
            const double yv = opt.log_y ? std::log10(y) : y;
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, yv);
            ymax = std::max(ymax, yv);
        }
    }
    if (!(xmax > xmin)) throw std::invalid_argument("render_svg: no drawable points");
    if (!(ymax > ymin)) {
        ymin -= 1.0;
        ymax += 1.0;
    }
    if (!opt.log_y && ymin > 0.0) ymin = 0.0;
    const double pad = 0.04 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;

    const double ml = 62.0, mr = 16.0, mt = opt.title.empty() ? 16.0 : 34.0, mb = 46.0;
    const double pw = opt.width - ml - mr, ph = opt.height - mt - mb;
    auto sx = [&](double x) { return ml + pw * (x - xmin) / (xmax - xmin); };
    auto sy = [&](double y) {
        const double yv = opt.log_y ? std::log10(y) : y;
        return mt + ph * (1.0 - (yv - ymin) / (ymax - ymin));
    };

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::svg_num(opt.width) +
           "\" height=\"" + detail::svg_num(opt.height) + "\" viewBox=\"0 0 " +
           detail::svg_num(opt.width) + " " + detail::svg_num(opt.height) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<g font-family=\"sans-serif\" font-size=\"12\">\n";
    if (!opt.title.empty())
        out += "<text x=\"" + detail::svg_num(opt.width / 2) +
               "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" +
               detail::xml_escape(opt.title) + "</text>\n";

    // Axes and ticks.
    out += "<rect x=\"" + detail::svg_num(ml) + "\" y=\"" + detail::svg_num(mt) + "\" width=\"" +
           detail::svg_num(pw) + "\" height=\"" + detail::svg_num(ph) +
           "\" fill=\"none\" stroke=\"#333\"/>\n";
    for (double tx : detail::nice_ticks(xmin, xmax)) {
        const double px = sx(tx);
        out += "<line x1=\"" + detail::svg_num(px) + "\" y1=\"" + detail::svg_num(mt + ph) +
               "\" x2=\"" + detail::svg_num(px) + "\" y2=\"" + detail::svg_num(mt + ph + 4) +
               "\" stroke=\"#333\"/>\n";
        out += "<text x=\"" + detail::svg_num(px) + "\" y=\"" + detail::svg_num(mt + ph + 17) +
               "\" text-anchor=\"middle\">" + detail::svg_num(tx) + "</text>\n";
    }
    for (double ty : detail::nice_ticks(ymin, ymax)) {
        const double py = mt + ph * (1.0 - (ty - ymin) / (ymax - ymin));
        const std::string label = opt.log_y ? "1e" + detail::svg_num(ty) : detail::svg_num(ty);
        out += "<line x1=\"" + detail::svg_num(ml - 4) + "\" y1=\"" + detail::svg_num(py) +
               "\" x2=\"" + detail::svg_num(ml) + "\" y2=\"" + detail::svg_num(py) +
               "\" stroke=\"#333\"/>\n";
        out += "<text x=\"" + detail::svg_num(ml - 8) + "\" y=\"" + detail::svg_num(py + 4) +
               "\" text-anchor=\"end\">" + label + "</text>\n";
    }
    out += "<text x=\"" + detail::svg_num(ml + pw / 2) + "\" y=\"" +
           detail::svg_num(opt.height - 10) + "\" text-anchor=\"middle\">" +
           detail::xml_escape(opt.x_label) + "</text>\n";
    if (!opt.y_label.empty())
        out += "<text x=\"14\" y=\"" + detail::svg_num(mt + ph / 2) +
               "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " +
               detail::svg_num(mt + ph / 2) + ")\">" + detail::xml_escape(opt.y_label) +
               "</text>\n";

    // Data polylines, clipped to finite drawable points.
    double ly = mt + 14.0;
    for (const auto& s : series) {
        std::string pts;
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            if (opt.log_y && !(y > 0.0)) continue;
            pts += detail::svg_num(sx(x)) + "," + detail::svg_num(sy(y)) + " ";
        }
        if (pts.empty()) continue;
        out += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.6\"";
        if (s.dashed) out += " stroke-dasharray=\"6 4\"";
        out += " points=\"" + pts + "\"/>\n";
        if (!s.label.empty()) {
            out += "<line x1=\"" + detail::svg_num(ml + pw - 130) + "\" y1=\"" +
                   detail::svg_num(ly - 4) + "\" x2=\"" + detail::svg_num(ml + pw - 108) +
                   "\" y2=\"" + detail::svg_num(ly - 4) + "\" stroke=\"" + s.color +
                   "\" stroke-width=\"1.6\"" + (s.dashed ? " stroke-dasharray=\"6 4\"" : "") +
                   "/>\n";
            out += "<text x=\"" + detail::svg_num(ml + pw - 102) + "\" y=\"" +
                   detail::svg_num(ly) + "\">" + detail::xml_escape(s.label) + "</text>\n";
            ly += 16.0;
        }
    }
    out += "</g>\n</svg>\n";
    return out;
}

inline void write_svg(const std::vector<SvgSeries>& series, const SvgOptions& opt,
                      const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << render_svg(series, opt);
}

}  // namespace qfigrow
