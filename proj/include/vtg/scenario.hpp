/// @file scenario.hpp
/// @brief JSON scenario files: chart, field, launch, integrator, reports and outputs.
///
/// A scenario file looks like
///
///     {
///       "version": 1,
///       "id": "sphere-loxodrome-45",
///       "chart": {"surface": "sphere"},
///       "field": "catalog",
///       "initial": {"position": [1.5707963, 0], "angle_to_meridian": 0.7853982},
///       "E": 1,
///       "integrator": {"method": "rk4", "step": 0.001},
///       "t_span": [-2, 2],
///       "reports": ["speed", "loxodrome", "mercator"],
///       "outputs": {"csv": "sphere.csv", "report": "sphere.json", "svg": "sphere.svg"}
///     }
///
/// Chart selectors: {"catalog": "plane" | "half-plane"}, {"surface": name},
/// {"metric": {"g11", "g12", "g22", "variables", "domain"}} or
/// {"profile": {"r", "h", "s_range", "anchor"}} with formulas as strings.
/// Field selectors: "catalog" (the surface's own field, or V = 0),
/// {"catalog": "zero" | "winding" | "shear" | "half-plane-sigma"},
/// {"f": ..., "g": ...} chart components, {"sigma": ...} for V = -grad σ, or
/// {"p": ...} for the flat plane field f = ∂_y p, g = -∂_x p.
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vtg/core_geometry.hpp"
#include "vtg/integrator.hpp"
#include "vtg/plane.hpp"
#include "vtg/surfaces.hpp"

namespace vtg {

inline constexpr int kScenarioVersion = 1;

/// Report names understood by execute().
const std::vector<std::string>& known_reports();

struct ScenarioOutputs {
    std::optional<std::string> csv;
    std::optional<std::string> report;
    std::optional<std::string> svg;
};

/// A validated, resolved scenario.
struct Scenario {
    std::string id;
    ChartGeometry chart;
    VectorFieldSpec field;
    std::optional<CatalogSurface> surface;
    std::optional<PlaneField> plane_field;
    GeodesicState launch;  ///< launch velocity already scaled to metric length E
    double energy{1.0};
    IntegratorSettings settings;
    double t_min{0.0};
    double t_max{1.0};
    std::vector<std::string> reports;
    std::optional<Vec2> conformal_killing;  ///< X for the conformal-constant report
    std::optional<double> rotation;         ///< isometry for the symmetry report
    std::optional<Vec2> translation;
    ScenarioOutputs outputs;
};

/// Resolves a scenario file. Throws ArgumentError for anything invalid:
/// unknown selectors or reports, a zero velocity, velocity and angle both
/// given, a launch outside the chart, a wrong version.
Scenario load_scenario(const nlohmann::json& config);
Scenario load_scenario_file(const std::filesystem::path& path);

struct RunOutcome {
    Trace trace;
    nlohmann::json report;  ///< {"scenario", "samples", "stop", "reports": [...], "verdict"}
    bool pass{true};
};

/// Integrates the scenario over its time span and evaluates every requested report.
RunOutcome execute(const Scenario& scenario);

/// execute() plus artifacts: the CSV trace and the JSON report always (named
/// after the id unless given), the SVG when requested. Relative output paths
/// are resolved against `out_dir`.
RunOutcome run(const Scenario& scenario, const std::filesystem::path& out_dir);

/// SVG of a scenario trace: chart curve, or the orthographic view of the
/// embedded curve for surfaces.
std::string scenario_svg(const Scenario& scenario, const Trace& trace);

}  // namespace vtg
