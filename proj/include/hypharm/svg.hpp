#pragma once

// Minimal SVG output: field heatmaps with marching-squares isolines, polylines
// (foliation leaves), and function graphs.  Plots are a convenience; all numbers
// that matter are also written as CSV.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hypharm/grid.hpp"

namespace hypharm::svg {

struct Frame {
    double x0, x1, y0, y1;  // data window
    int width = 640, height = 480, margin = 40;

    double px(double x) const { return margin + (x - x0) / (x1 - x0) * (width - 2 * margin); }
    double py(double y) const { return height - margin - (y - y0) / (y1 - y0) * (height - 2 * margin); }
};

namespace detail {

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

// Blue -> white -> red ramp on t in [0, 1].
inline std::string color(double t) {
    t = std::clamp(t, 0.0, 1.0);
    int r, g, b;
    if (t < 0.5) {
        const double s = t / 0.5;
        r = int(59 + s * (245 - 59));
        g = int(76 + s * (245 - 76));
        b = int(192 + s * (245 - 192));
    } else {
        const double s = (t - 0.5) / 0.5;
        r = int(245 - s * (245 - 180));
        g = int(245 - s * (245 - 4));
        b = int(245 - s * (245 - 38));
    }
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

inline std::string header(const Frame& f, const std::string& title) {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.width << "\" height=\"" << f.height
       << "\" viewBox=\"0 0 " << f.width << ' ' << f.height << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << f.width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       << "font-size=\"14\">" << title << "</text>\n";
    return os.str();
}

inline std::string axes(const Frame& f) {
    std::ostringstream os;
    os << "<rect x=\"" << f.margin << "\" y=\"" << f.margin << "\" width=\"" << f.width - 2 * f.margin
       << "\" height=\"" << f.height - 2 * f.margin << "\" fill=\"none\" stroke=\"black\"/>\n";
    auto label = [&](double x, double y, const std::string& anchor, double v) {
        os << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" text-anchor=\"" << anchor
           << "\" font-family=\"sans-serif\" font-size=\"10\">" << num(v) << "</text>\n";
    };
    label(f.margin, f.height - f.margin + 14, "middle", f.x0);
    label(f.width - f.margin, f.height - f.margin + 14, "middle", f.x1);
    label(f.margin - 4, f.height - f.margin, "end", f.y0);
    label(f.margin - 4, f.margin + 4, "end", f.y1);
    return os.str();
}

}  // namespace detail

/// Heatmap of a real field with `levels` isolines.  Non-finite nodes are drawn grey.
inline std::string heatmap(const RealField& field, const std::string& title, int levels = 10) {
    const Grid& g = field.grid();
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double v : field.values())
        if (std::isfinite(v)) lo = std::min(lo, v), hi = std::max(hi, v);
    if (!(lo <= hi)) lo = 0.0, hi = 1.0;
    const double span = hi > lo ? hi - lo : 1.0;

    Frame f{g.x_range().lo, g.x_range().hi, g.y_range().lo, g.y_range().hi};
    std::ostringstream os;
    os << detail::header(f, title + " [" + detail::num(lo) + ", " + detail::num(hi) + "]");
    const double cw = (f.width - 2.0 * f.margin) / g.nx(), ch = (f.height - 2.0 * f.margin) / g.ny();
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
            const double v = field(i, j);
            const std::string c = std::isfinite(v) ? detail::color((v - lo) / span) : "#999999";
            os << "<rect x=\"" << detail::num(f.margin + i * cw) << "\" y=\""
               << detail::num(f.height - f.margin - (j + 1) * ch) << "\" width=\"" << detail::num(cw + 0.5)
               << "\" height=\"" << detail::num(ch + 0.5) << "\" fill=\"" << c << "\"/>\n";
        }

    // Marching squares, one segment per crossed cell edge pair.
    os << "<g stroke=\"black\" stroke-width=\"0.6\" fill=\"none\">\n";
    for (int l = 1; l <= levels && hi > lo; ++l) {
        const double c = lo + span * l / (levels + 1);
        for (int j = 0; j + 1 < g.ny(); ++j)
            for (int i = 0; i + 1 < g.nx(); ++i) {
                const double v[4] = {field(i, j), field(i + 1, j), field(i + 1, j + 1), field(i, j + 1)};
                const Complex p[4] = {g.z(i, j), g.z(i + 1, j), g.z(i + 1, j + 1), g.z(i, j + 1)};
                if (!std::all_of(v, v + 4, [](double x) { return std::isfinite(x); })) continue;
                std::vector<Complex> cut;
                for (int e = 0; e < 4; ++e) {
                    const double a = v[e] - c, b = v[(e + 1) % 4] - c;
                    if ((a < 0.0) != (b < 0.0)) cut.push_back(p[e] + (a / (a - b)) * (p[(e + 1) % 4] - p[e]));
                }
                for (std::size_t k = 0; k + 1 < cut.size(); k += 2)
                    os << "<line x1=\"" << detail::num(f.px(cut[k].real())) << "\" y1=\""
                       << detail::num(f.py(cut[k].imag())) << "\" x2=\"" << detail::num(f.px(cut[k + 1].real()))
                       << "\" y2=\"" << detail::num(f.py(cut[k + 1].imag())) << "\"/>\n";
            }
    }
    os << "</g>\n" << detail::axes(f) << "</svg>\n";
    return os.str();
}

/// Polylines in the data window of their bounding box.
inline std::string polylines(const std::vector<std::vector<Complex>>& lines, const std::string& title) {
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& line : lines)
        for (Complex z : line)
            x0 = std::min(x0, z.real()), x1 = std::max(x1, z.real()), y0 = std::min(y0, z.imag()),
            y1 = std::max(y1, z.imag());
    if (!(x0 < x1)) x0 -= 1.0, x1 += 1.0;
    if (!(y0 < y1)) y0 -= 1.0, y1 += 1.0;
    Frame f{x0, x1, y0, y1};
    std::ostringstream os;
    os << detail::header(f, title) << "<g stroke=\"#1f4e9c\" stroke-width=\"1\" fill=\"none\">\n";
    for (const auto& line : lines) {
        if (line.size() < 2) continue;
        os << "<polyline points=\"";
        for (Complex z : line) os << detail::num(f.px(z.real())) << ',' << detail::num(f.py(z.imag())) << ' ';
        os << "\"/>\n";
    }
    os << "</g>\n" << detail::axes(f) << "</svg>\n";
    return os.str();
}

/// Graph of y against x.
inline std::string graph(const std::vector<double>& xs, const std::vector<double>& ys, const std::string& title) {
    std::vector<Complex> line;
    for (std::size_t k = 0; k < std::min(xs.size(), ys.size()); ++k)
        if (std::isfinite(xs[k]) && std::isfinite(ys[k])) line.emplace_back(xs[k], ys[k]);
    return polylines({line}, title);
}

}  // namespace hypharm::svg
