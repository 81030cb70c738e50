/// @file plot.cpp
#include "vtg/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "vtg/errors.hpp"

namespace vtg {

namespace {

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", x);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

PlotSeries chart_series(const Trace& trace, std::string label) {
    PlotSeries s{std::move(label), {}, {}};
    for (const auto& st : trace.states) {
        s.t.push_back(st.t);
        s.points.push_back(st.position);
    }
    return s;
}

PlotSeries projected_series(const std::vector<std::array<double, 3>>& points,
                            const std::vector<double>& t, std::string label, double azimuth,
                            double elevation) {
    if (points.size() != t.size()) throw ArgumentError("points and times differ in length");
    PlotSeries s{std::move(label), t, {}};
    const double ca = std::cos(azimuth), sa = std::sin(azimuth);
    const double ce = std::cos(elevation), se = std::sin(elevation);
    for (const auto& p : points) {
        const double depth = ca * p[0] + sa * p[1];
        s.points.push_back({-sa * p[0] + ca * p[1], ce * p[2] - se * depth});
    }
    return s;
}

std::string plot_svg(const std::vector<PlotSeries>& series, const PlotStyle& style) {
    if (series.empty()) throw ArgumentError("nothing to plot");
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : series) {
        if (s.points.empty()) throw ArgumentError("series '" + s.label + "' is empty");
        if (s.t.size() != s.points.size())
            throw ArgumentError("series '" + s.label + "' has mismatched times");
        for (const auto& p : s.points) {
            x0 = std::min(x0, p.u);
            x1 = std::max(x1, p.u);
            y0 = std::min(y0, p.v);
            y1 = std::max(y1, p.v);
        }
    }
    double w = std::max(x1 - x0, 1e-12);
    double h = std::max(y1 - y0, 1e-12);
    if (style.equal_aspect) {
        const double side = std::max(w, h);
        x0 -= (side - w) / 2;
        y0 -= (side - h) / 2;
        w = h = side;
    }
    x0 -= 0.05 * w;
    y0 -= 0.05 * h;
    w *= 1.1;
    h *= 1.1;

    const double W = style.width, H = style.height;
    auto sx = [&](double x) { return (x - x0) / w * W; };
    auto sy = [&](double y) { return H - (y - y0) / h * H; };

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(style.width) +
           "\" height=\"" + std::to_string(style.height) + "\" viewBox=\"0 0 " +
           std::to_string(style.width) + " " + std::to_string(style.height) + "\">\n";
    out += "<style>polyline{fill:none;stroke-width:1.5}.dashed{stroke-dasharray:6 4}</style>\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!style.title.empty())
        out += "<title>" + escape(style.title) + "</title>\n";

    auto polyline = [&](const PlotSeries& s, std::size_t a, std::size_t b, const char* cls,
                        const char* colour) {
        if (b <= a) return;
        out += "<polyline class=\"";
        out += cls;
        out += "\" stroke=\"";
        out += colour;
        out += "\" points=\"";
        for (std::size_t i = a; i <= b; ++i) {
            if (i > a) out += ' ';
            out += fmt(sx(s.points[i].u)) + "," + fmt(sy(s.points[i].v));
        }
        out += "\"/>\n";
    };

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* colour = kPalette[k % std::size(kPalette)];
        out += "<g id=\"" + escape(s.label) + "\">\n";
        const std::size_t n = s.points.size();
        // Split index: first sample with t >= 0, shared by both polylines.
        std::size_t split = 0;
        while (split < n && s.t[split] < 0.0) ++split;
        if (split == n) {
            polyline(s, 0, n - 1, "dashed", colour);
        } else {
            if (split > 0) polyline(s, 0, split, "dashed", colour);
            polyline(s, split, n - 1, "solid", colour);
        }
        if (n == 1)
            out += "<circle cx=\"" + fmt(sx(s.points[0].u)) + "\" cy=\"" + fmt(sy(s.points[0].v)) +
                   "\" r=\"2\" fill=\"" + colour + "\"/>\n";
        out += "</g>\n";
    }
    out += "</svg>\n";
    return out;
}

}  // namespace vtg
