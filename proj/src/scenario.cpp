/// @file scenario.cpp
#include "vtg/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "vtg/conformal.hpp"
#include "vtg/errors.hpp"
#include "vtg/expression.hpp"
#include "vtg/invariants.hpp"
#include "vtg/io.hpp"
#include "vtg/plot.hpp"

namespace vtg {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void bad(const std::string& what) { throw ArgumentError("scenario: " + what); }

double number(const json& j, const std::string& key) {
    if (!j.is_number()) bad("'" + key + "' must be a number");
    return j.get<double>();
}

/// Numbers, with the strings "inf" and "-inf" allowed for domain bounds.
double bound(const json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return kInf;
        if (s == "-inf") return -kInf;
        bad("domain bound '" + s + "' is not a number");
    }
    if (j.is_null()) return kInf;
    return number(j, "domain");
}

Vec2 pair(const json& j, const std::string& key) {
    if (!j.is_array() || j.size() != 2) bad("'" + key + "' must be a two-element array");
    return {number(j[0], key), number(j[1], key)};
}

std::string text(const json& j, const std::string& key) {
    if (!j.is_string()) bad("'" + key + "' must be a formula string");
    return j.get<std::string>();
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return it.key() == a; }))
            bad("unknown key '" + it.key() + "' in " + where);
    }
}

ChartGeometry inline_metric(const json& m) {
    check_keys(m, {"g11", "g12", "g22", "variables", "domain", "id"}, "metric");
    std::vector<std::string> vars{"u", "v"};
    if (m.contains("variables")) {
        if (!m["variables"].is_array() || m["variables"].size() != 2) bad("'variables' must name two coordinates");
        vars = {m["variables"][0].get<std::string>(), m["variables"][1].get<std::string>()};
    }
    const Expression g11 = Expression::compile(text(m.at("g11"), "g11"), vars);
    const Expression g12 = Expression::compile(m.contains("g12") ? text(m["g12"], "g12") : "0", vars);
    const Expression g22 = Expression::compile(text(m.at("g22"), "g22"), vars);
    DomainBox box;
    if (m.contains("domain")) {
        const json& d = m["domain"];
        if (!d.is_array() || d.size() != 4) bad("'domain' must be [u_min, u_max, v_min, v_max]");
        box = {bound(d[0]), bound(d[1]), bound(d[2]), bound(d[3])};
        if (d[0].is_null()) box.u_min = -kInf;
        if (d[2].is_null()) box.v_min = -kInf;
    }
    return ChartGeometry(m.value("id", std::string("custom")), {vars[0], vars[1]}, box,
                         [g11, g12, g22](Vec2 p) {
                             Mat2 g;
                             g(0, 0) = g11(p.u, p.v);
                             g(0, 1) = g(1, 0) = g12(p.u, p.v);
                             g(1, 1) = g22(p.u, p.v);
                             return g;
                         });
}

CatalogSurface inline_profile(const json& pr) {
    check_keys(pr, {"r", "h", "s_range", "anchor", "name"}, "profile");
    const Expression r = Expression::compile(text(pr.at("r"), "r"), {"s"});
    const Expression h = Expression::compile(text(pr.at("h"), "h"), {"s"});
    const Vec2 range = pair(pr.at("s_range"), "s_range");
    if (!(range.u < range.v)) bad("'s_range' must be increasing");
    RevolutionProfile profile;
    profile.natural = true;
    profile.s_min = range.u;
    profile.s_max = range.v;
    profile.jet = [r, h](double s) {
        auto f = [](const Expression& e, double x) { return e(std::vector<double>{x}); };
        const double h1 = fd_step(s);
        const double h2 = 1e-4 * std::max(1.0, std::abs(s));
        ProfileJet j;
        j.r = f(r, s);
        j.dr = (f(r, s + h1) - f(r, s - h1)) / (2 * h1);
        j.ddr = (f(r, s + h2) - 2 * j.r + f(r, s - h2)) / (h2 * h2);
        j.h = f(h, s);
        j.dh = (f(h, s + h1) - f(h, s - h1)) / (2 * h1);
        return j;
    };
    const double anchor = pr.contains("anchor") ? number(pr["anchor"], "anchor") : 0.5 * (range.u + range.v);
    return make_surface_of_revolution(pr.value("name", std::string("custom")), std::move(profile), anchor);
}

PlaneField potential_field(const Expression& p) {
    PlaneField f;
    f.id = "p:" + p.text();
    auto dx = [p](double x, double y) {
        const double h = fd_step(x);
        return (p(x + h, y) - p(x - h, y)) / (2 * h);
    };
    auto dy = [p](double x, double y) {
        const double h = fd_step(y);
        return (p(x, y + h) - p(x, y - h)) / (2 * h);
    };
    f.f = dy;
    f.g = [dx](double x, double y) { return -dx(x, y); };
    f.potential = ScalarField{[p](Vec2 q) { return p(q.u, q.v); },
                              [dx, dy](Vec2 q) { return Vec2{dx(q.u, q.v), dy(q.u, q.v)}; }};
    return f;
}

void resolve_field(Scenario& sc, const json& f) {
    const bool plane = sc.chart.id() == "plane" || sc.chart.id() == "half-plane";
    if (f.is_string() && f.get<std::string>() == "catalog") {
        if (sc.surface) {
            sc.field = sc.surface->field;
        } else {
            sc.field = zero_field();
            if (plane) sc.plane_field = zero_plane_field();
        }
        return;
    }
    if (!f.is_object()) bad("'field' must be \"catalog\" or an object");
    check_keys(f, {"catalog", "f", "g", "sigma", "p", "killing"}, "field");
    const auto& names = sc.chart.coordinate_names();
    const std::vector<std::string> vars{names[0], names[1]};

    if (f.contains("catalog")) {
        const std::string name = f["catalog"].get<std::string>();
        if (name == "zero") {
            sc.field = zero_field();
            if (plane) sc.plane_field = zero_plane_field();
        } else if (name == "winding" || name == "shear") {
            if (!plane) bad("field '" + name + "' lives on the plane chart");
            sc.plane_field = name == "winding" ? winding_field() : shear_field();
            sc.field = sc.plane_field->to_vector_field();
        } else if (name == "half-plane-sigma") {
            if (sc.chart.id() != "half-plane") bad("field 'half-plane-sigma' needs the half-plane chart");
            sc.field = half_plane_sigma_field();
        } else {
            bad("unknown catalog field '" + name + "'");
        }
        return;
    }
    if (f.contains("p")) {
        if (!plane) bad("a potential p needs the plane chart");
        sc.plane_field = potential_field(Expression::compile(text(f["p"], "p"), vars));
        sc.plane_field->killing = f.value("killing", false);
        sc.field = sc.plane_field->to_vector_field();
        return;
    }
    if (f.contains("sigma")) {
        const Expression s = Expression::compile(text(f["sigma"], "sigma"), vars);
        const ScalarField sigma{[s](Vec2 p) { return s(p.u, p.v); }};
        sc.field.id = "sigma:" + s.text();
        sc.field.sigma = sigma;
        sc.field.killing = f.value("killing", false);
        sc.field.components = [chart = sc.chart, sigma](Vec2 p) { return -1.0 * chart.grad(sigma, p); };
        return;
    }
    if (f.contains("f") || f.contains("g")) {
        const Expression fe = Expression::compile(f.contains("f") ? text(f["f"], "f") : "0", vars);
        const Expression ge = Expression::compile(f.contains("g") ? text(f["g"], "g") : "0", vars);
        sc.field.id = "inline:(" + fe.text() + "," + ge.text() + ")";
        sc.field.components = [fe, ge](Vec2 p) { return Vec2{fe(p.u, p.v), ge(p.u, p.v)}; };
        sc.field.killing = f.value("killing", false);
        if (plane) {
            PlaneField pf;
            pf.id = sc.field.id;
            pf.f = [fe](double x, double y) { return fe(x, y); };
            pf.g = [ge](double x, double y) { return ge(x, y); };
            pf.killing = sc.field.killing;
            sc.plane_field = pf;
        }
        return;
    }
    bad("empty field selector");
}

}  // namespace

const std::vector<std::string>& known_reports() {
    static const std::vector<std::string> names{
        "speed",  "loxodrome", "mercator", "conformal-constant", "gauss",     "flat",
        "arcsin", "strip",     "killing",  "curvature",          "symmetry", "conformal-equivalence"};
    return names;
}

Scenario load_scenario(const json& config) {
    if (!config.is_object()) bad("top level must be an object");
    check_keys(config, {"version", "id", "chart", "field", "initial", "E", "integrator", "t_span",
                        "reports", "outputs", "isometry", "conformal_killing", "description"},
               "scenario");
    if (!config.contains("version") || config["version"] != kScenarioVersion)
        bad("'version' must be " + std::to_string(kScenarioVersion));
    Scenario sc;
    if (!config.contains("id") || !config["id"].is_string() || config["id"].get<std::string>().empty())
        bad("missing 'id'");
    sc.id = config["id"].get<std::string>();

    const json& chart = config.at("chart");
    if (!chart.is_object() || chart.size() != 1) bad("'chart' must hold exactly one selector");
    if (chart.contains("catalog")) {
        const std::string name = chart["catalog"].get<std::string>();
        if (name == "plane") sc.chart = euclidean_plane();
        else if (name == "half-plane") sc.chart = upper_half_plane();
        else bad("unknown catalog chart '" + name + "'");
    } else if (chart.contains("surface")) {
        sc.surface = surface_by_name(chart["surface"].get<std::string>());
        sc.chart = sc.surface->chart;
    } else if (chart.contains("metric")) {
        sc.chart = inline_metric(chart["metric"]);
    } else if (chart.contains("profile")) {
        sc.surface = inline_profile(chart["profile"]);
        sc.chart = sc.surface->chart;
    } else {
        bad("unknown chart selector");
    }

    resolve_field(sc, config.contains("field") ? config["field"] : json("catalog"));

    sc.energy = config.contains("E") ? number(config["E"], "E") : 1.0;
    if (!(sc.energy > 0.0) || !std::isfinite(sc.energy)) bad("'E' must be positive");

    const json& init = config.at("initial");
    check_keys(init, {"position", "velocity", "angle_to_meridian"}, "initial");
    const Vec2 pos = pair(init.at("position"), "position");
    if (!sc.chart.inside(pos)) bad("initial position lies outside the chart domain");
    const bool has_v = init.contains("velocity");
    const bool has_angle = init.contains("angle_to_meridian");
    if (has_v == has_angle) bad("give exactly one of 'velocity' and 'angle_to_meridian'");
    if (has_angle) {
        if (!sc.surface) bad("'angle_to_meridian' needs a surface chart");
        sc.launch = loxodrome_launch(*sc.surface, pos.u, pos.v, number(init["angle_to_meridian"], "angle_to_meridian"),
                                     sc.energy);
    } else {
        const Vec2 v = pair(init["velocity"], "velocity");
        const double n = sc.chart.norm(pos, v);
        if (!(n > 0.0)) bad("initial velocity must be nonzero");
        sc.launch = {0.0, pos, (sc.energy / n) * v};
    }

    if (config.contains("integrator")) {
        const json& in = config["integrator"];
        check_keys(in, {"method", "step", "rtol", "atol", "max_steps"}, "integrator");
        if (in.contains("method")) {
            const auto m = in["method"].get<std::string>();
            if (m == "rk4") sc.settings.method = Method::rk4;
            else if (m == "rk45") sc.settings.method = Method::rk45;
            else bad("unknown method '" + m + "'");
        }
        if (in.contains("step")) sc.settings.step = number(in["step"], "step");
        if (in.contains("rtol")) sc.settings.rtol = number(in["rtol"], "rtol");
        if (in.contains("atol")) sc.settings.atol = number(in["atol"], "atol");
        if (in.contains("max_steps")) sc.settings.max_steps = in["max_steps"].get<std::size_t>();
    }
    sc.settings.validate();

    const Vec2 span = config.contains("t_span") ? pair(config["t_span"], "t_span") : Vec2{0.0, 1.0};
    if (!(span.u <= 0.0 && span.v >= 0.0 && span.u < span.v)) bad("'t_span' must contain the launch time 0");
    sc.t_min = span.u;
    sc.t_max = span.v;
    sc.settings.t0 = 0.0;

    if (config.contains("reports")) {
        for (const auto& r : config["reports"]) {
            const std::string name = r.get<std::string>();
            const auto& k = known_reports();
            if (std::find(k.begin(), k.end(), name) == k.end()) bad("unknown report '" + name + "'");
            sc.reports.push_back(name);
        }
    }
    if (config.contains("isometry")) {
        const json& iso = config["isometry"];
        check_keys(iso, {"rotation", "translation"}, "isometry");
        if (iso.contains("rotation")) sc.rotation = number(iso["rotation"], "rotation");
        if (iso.contains("translation")) sc.translation = pair(iso["translation"], "translation");
    }
    if (config.contains("conformal_killing")) sc.conformal_killing = pair(config["conformal_killing"], "conformal_killing");
    if (config.contains("outputs")) {
        const json& o = config["outputs"];
        check_keys(o, {"csv", "report", "svg"}, "outputs");
        if (o.contains("csv")) sc.outputs.csv = o["csv"].get<std::string>();
        if (o.contains("report")) sc.outputs.report = o["report"].get<std::string>();
        if (o.contains("svg")) sc.outputs.svg = o["svg"].get<std::string>();
    }
    return sc;
}

Scenario load_scenario_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) bad("cannot read " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        bad(path.string() + ": " + e.what());
    }
    try {
        return load_scenario(j);
    } catch (const json::exception& e) {
        bad(path.string() + ": " + e.what());
    }
}

namespace {

json max_report(const std::string& name, const std::vector<double>& dev, double tol) {
    double mx = 0.0;
    for (double d : dev) mx = std::max(mx, std::abs(d));
    const InvariantReport r = make_report(name, dev, Gate::max_deviation, tol, 0.0);
    json j = report_to_json(r);
    j["max_dev"] = mx;
    j["verdict"] = mx < tol ? "PASS" : "FAIL";
    return j;
}

const PlaneField& need_plane(const Scenario& sc, const std::string& report) {
    if (!sc.plane_field) bad("report '" + report + "' needs a plane field");
    return *sc.plane_field;
}

const CatalogSurface& need_surface(const Scenario& sc, const std::string& report) {
    if (!sc.surface) bad("report '" + report + "' needs a surface chart");
    return *sc.surface;
}

json evaluate(const Scenario& sc, const Trace& tr, const std::string& name) {
    if (name == "speed") return report_to_json(speed_report(tr, 1e-6));
    if (name == "loxodrome") return report_to_json(loxodrome_check(tr, need_surface(sc, name)));
    if (name == "mercator") {
        const LineFit fit = mercator_line_fit(tr, need_surface(sc, name));
        json j = verdict_json("mercator_line", fit.max_residual, 0.0, fit.max_residual < 1e-5);
        j["slope"] = fit.slope;
        j["intercept"] = fit.intercept;
        return j;
    }
    if (name == "conformal-constant") {
        if (!sc.field.sigma) bad("report 'conformal-constant' needs a gradient field");
        const Vec2 x = sc.conformal_killing.value_or(sc.surface ? Vec2{0.0, 1.0} : Vec2{1.0, 0.0});
        return report_to_json(conformal_constant(tr, sc.chart, *sc.field.sigma, [x](Vec2) { return x; }));
    }
    if (name == "gauss") return report_to_json(gauss_image_angle(tr, need_surface(sc, name)));
    if (name == "flat") {
        const FlatInvariantReport r = flat_invariant(tr, need_plane(sc, name));
        json j = verdict_json("flat_invariant", r.max_deviation, 0.0, r.pass);
        j["modulus_error"] = r.max_modulus_error;
        j["z0"] = {r.z0.real(), r.z0.imag()};
        return j;
    }
    if (name == "arcsin") {
        if (sc.field.id != "shear") bad("report 'arcsin' needs the shear field");
        const ArcsinReport r = arcsin_invariant(tr);
        double spread = 0.0;
        json segs = json::array();
        for (const auto& s : r.segments) {
            segs.push_back({{"sign", s.sign}, {"mean", s.mean}, {"std", s.stddev}});
            for (std::size_t i = s.begin; i < s.end; ++i) spread = std::max(spread, std::abs(r.values[i] - s.mean));
        }
        json j = verdict_json("arcsin_invariant", spread, r.max_segment_stddev, r.pass);
        j["segments"] = segs;
        j["switch_times"] = r.switch_times;
        return j;
    }
    if (name == "strip") {
        if (sc.field.id != "shear") bad("report 'strip' needs the shear field");
        const auto& l = sc.launch;
        const StripBounds b = strip_bounds(l.position.v, l.velocity.v, l.velocity.u);
        double excess = 0.0;
        for (const auto& s : tr.states)
            excess = std::max({excess, s.position.v - b.upper, b.lower - s.position.v});
        json j = verdict_json("strip_confinement", excess, 0.0, excess < 1e-3);
        j["c"] = b.c;
        j["branch"] = b.branch;
        j["lower"] = b.lower;
        j["upper"] = b.upper;
        j["degenerate"] = b.degenerate;
        return j;
    }
    if (name == "killing") {
        const KillingCheck k = killing_curvature_check(tr, sc.chart, sc.field);
        json j = verdict_json("killing_curvature", k.max_residual, 0.0, k.pass);
        j["max_increase"] = k.max_increase;
        j["monotone"] = k.monotone;
        return j;
    }
    if (name == "curvature") {
        const auto general = curvature_general(tr, sc.chart, sc.field);
        const auto kinematic = kinematic_curvature(tr, sc.chart);
        std::vector<double> dev(tr.size());
        for (std::size_t i = 0; i < tr.size(); ++i) dev[i] = kinematic[i] - general[i];
        if (sc.plane_field) {
            const auto signed_k = signed_kinematic_curvature(tr);
            for (std::size_t i = 0; i < tr.size(); ++i) {
                const double d = signed_k[i] - plane_curvature(*sc.plane_field, tr.states[i]) / sc.energy;
                if (std::abs(d) > std::abs(dev[i])) dev[i] = d;
            }
        }
        return max_report("curvature_formulas", dev, 1e-5);
    }
    if (name == "symmetry") {
        Isometry iso;
        if (sc.rotation) iso = rotation_about_origin(*sc.rotation);
        else if (sc.translation) iso = translation(*sc.translation);
        else bad("report 'symmetry' needs an 'isometry' entry");
        const double d = killing_flow_symmetry(tr, sc.chart, sc.field, iso);
        return verdict_json("isometry_symmetry", d, 0.0, d < 1e-6);
    }
    if (name == "conformal-equivalence") {
        IntegratorSettings st = sc.settings;
        st.t0 = 0.0;
        st.t1 = sc.t_max > 0.0 ? sc.t_max : sc.t_min;
        const EquivalenceResult eq = conformal_equivalence(sc.chart, sc.field, sc.launch, st);
        const EquivalenceResult ctl = conformal_equivalence(sc.chart, sc.field, sc.launch, st, 0.1);
        json j = verdict_json("conformal_equivalence", eq.distance, 0.0, eq.distance < 1e-4 && ctl.distance > 1e-2);
        j["control_distance"] = ctl.distance;
        j["tilde_length"] = eq.tilde_length;
        return j;
    }
    bad("unknown report '" + name + "'");
}

}  // namespace

RunOutcome execute(const Scenario& sc) {
    RunOutcome out;
    out.trace = integrate_both_ways(sc.chart, sc.field, sc.launch, sc.settings, sc.t_min, sc.t_max);
    json reports = json::array();
    for (const auto& name : sc.reports) {
        json r = evaluate(sc, out.trace, name);
        r["report"] = name;
        if (r["verdict"] != "PASS") out.pass = false;
        reports.push_back(std::move(r));
    }
    out.report = {{"scenario", sc.id},
                  {"chart", sc.chart.id()},
                  {"field", sc.field.id},
                  {"E", sc.energy},
                  {"samples", out.trace.size()},
                  {"t_span", {out.trace.front().t, out.trace.back().t}},
                  {"stop", to_string(out.trace.meta.stop)},
                  {"reports", reports},
                  {"verdict", out.pass ? "PASS" : "FAIL"}};
    return out;
}

std::string scenario_svg(const Scenario& sc, const Trace& tr) {
    PlotStyle style;
    style.title = sc.id;
    if (sc.surface) {
        std::vector<double> t;
        for (const auto& s : tr.states) t.push_back(s.t);
        return plot_svg({projected_series(embed(*sc.surface, tr), t, sc.id)}, style);
    }
    return plot_svg({chart_series(tr, sc.id)}, style);
}

RunOutcome run(const Scenario& sc, const std::filesystem::path& out_dir) {
    RunOutcome out = execute(sc);
    auto resolve = [&](const std::optional<std::string>& p, const std::string& ext) {
        std::filesystem::path path = p.value_or(sc.id + ext);
        return path.is_absolute() ? path : out_dir / path;
    };
    write_text_file(resolve(sc.outputs.csv, ".csv"), trace_to_csv(out.trace));
    write_text_file(resolve(sc.outputs.report, ".json"), out.report.dump(2) + "\n");
    if (sc.outputs.svg) write_text_file(resolve(sc.outputs.svg, ".svg"), scenario_svg(sc, out.trace));
    return out;
}

}  // namespace vtg
