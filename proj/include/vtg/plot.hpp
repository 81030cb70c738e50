/// @file plot.hpp
/// @brief Deterministic SVG export of chart curves and projected surface curves.
///
/// Samples with t < 0 are drawn dashed and samples with t >= 0 solid; the two
/// polylines share the sample nearest t = 0.
#pragma once

#include <array>
#include <string>
#include <vector>

#include "vtg/integrator.hpp"

namespace vtg {

struct PlotSeries {
    std::string label;
    std::vector<double> t;
    std::vector<Vec2> points;
};

struct PlotStyle {
    std::string title;
    int width{640};
    int height{640};
    bool equal_aspect{true};
};

/// Chart coordinates (u, v) of a trace.
PlotSeries chart_series(const Trace& trace, std::string label);

/// Orthographic view of 3D points: rotate by `azimuth` about z, then tilt
/// the view direction by `elevation` above the xy plane.
PlotSeries projected_series(const std::vector<std::array<double, 3>>& points,
                            const std::vector<double>& t, std::string label, double azimuth = 0.6,
                            double elevation = 0.5);

/// SVG document with a viewport fitted to the data bounding box plus a 5%
/// margin. Throws ArgumentError if there is no series or a series is empty.
std::string plot_svg(const std::vector<PlotSeries>& series, const PlotStyle& style = {});

}  // namespace vtg
