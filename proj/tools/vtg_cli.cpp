// vtg: integrate geodesics of connections with vectorial torsion and audit them.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vtg/conformal.hpp"
#include "vtg/connection_algebra.hpp"
#include "vtg/errors.hpp"
#include "vtg/io.hpp"
#include "vtg/plane.hpp"
#include "vtg/plot.hpp"
#include "vtg/scenario.hpp"
#include "vtg/suite.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Options {
    std::string config;
    std::string out_dir;
    std::string format;
    std::uint64_t seed{1};
};

void emit(const Options& opt, const std::string& default_name, const std::string& text) {
    if (opt.out_dir.empty()) {
        std::cout << text;
    } else {
        vtg::write_text_file(fs::path(opt.out_dir) / default_name, text);
    }
}

int cmd_integrate(const Options& opt) {
    const vtg::Scenario sc = vtg::load_scenario_file(opt.config);
    const vtg::RunOutcome o = opt.out_dir.empty() ? vtg::execute(sc) : vtg::run(sc, opt.out_dir);
    if (opt.format == "csv") std::cout << vtg::trace_to_csv(o.trace);
    else if (opt.format == "svg") std::cout << vtg::scenario_svg(sc, o.trace);
    else std::cout << o.report.dump(2) << '\n';
    return o.pass ? kExitPass : kExitFail;
}

int cmd_compare_conformal(const Options& opt, double angle_offset) {
    const vtg::Scenario sc = vtg::load_scenario_file(opt.config);
    vtg::IntegratorSettings st = sc.settings;
    st.t1 = sc.t_max;
    const auto eq = vtg::conformal_equivalence(sc.chart, sc.field, sc.launch, st, angle_offset);
    const bool pass = eq.distance < 1e-4;
    json j = vtg::verdict_json("conformal_equivalence", eq.distance, 0.0, pass);
    j["scenario"] = sc.id;
    j["angle_offset"] = angle_offset;
    j["tilde_length"] = eq.tilde_length;
    j["samples"] = {eq.nabla.size(), eq.tilde.size()};
    if (opt.format == "svg") {
        vtg::PlotStyle style;
        style.title = sc.id + " conformal comparison";
        emit(opt, sc.id + "-conformal.svg",
             vtg::plot_svg({vtg::chart_series(eq.nabla, "nabla"), vtg::chart_series(eq.tilde, "tilde")}, style));
    } else if (opt.format == "csv") {
        emit(opt, sc.id + "-nabla.csv", vtg::trace_to_csv(eq.nabla));
    } else {
        emit(opt, sc.id + "-conformal.json", j.dump(2) + "\n");
    }
    return pass ? kExitPass : kExitFail;
}

int cmd_mercator(const Options& opt) {
    const vtg::Scenario sc = vtg::load_scenario_file(opt.config);
    if (!sc.surface) throw vtg::ArgumentError("mercator needs a surface scenario");
    const vtg::RunOutcome o = vtg::execute(sc);
    const auto image = vtg::mercator_image(o.trace, *sc.surface);
    const vtg::LineFit fit = vtg::mercator_line_fit(o.trace, *sc.surface);
    const bool pass = fit.max_residual < 1e-5;
    if (opt.format == "csv") {
        std::string text = "t,x,y\n";
        char buf[96];
        for (std::size_t i = 0; i < image.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", o.trace.states[i].t, image[i].u, image[i].v);
            text += buf;
        }
        emit(opt, sc.id + "-mercator.csv", text);
    } else if (opt.format == "svg") {
        vtg::PlotSeries s{sc.id, {}, image};
        for (const auto& st : o.trace.states) s.t.push_back(st.t);
        emit(opt, sc.id + "-mercator.svg", vtg::plot_svg({s}, {sc.id + " Mercator image", 640, 640, false}));
    } else {
        json j = vtg::verdict_json("mercator_line", fit.max_residual, 0.0, pass);
        j["slope"] = fit.slope;
        j["intercept"] = fit.intercept;
        j["anchor"] = sc.surface->mercator_anchor;
        emit(opt, sc.id + "-mercator.json", j.dump(2) + "\n");
    }
    return pass ? kExitPass : kExitFail;
}

vtg::DifferenceTensor read_tensor(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw vtg::ArgumentError("cannot read " + path);
    const json j = json::parse(in);
    if (!j.contains("n") || !j.contains("components"))
        throw vtg::ArgumentError("tensor file needs 'n' and 'components' (n³ numbers, index (i*n+j)*n+k)");
    const auto n = j["n"].get<std::size_t>();
    std::vector<double> c;
    const json& comp = j["components"];
    if (comp.is_array() && !comp.empty() && comp[0].is_array()) {
        for (const auto& a : comp)
            for (const auto& b : a)
                for (const auto& x : b) c.push_back(x.get<double>());
    } else {
        c = comp.get<std::vector<double>>();
    }
    if (c.size() != n * n * n) throw vtg::ArgumentError("expected n³ components");
    return vtg::DifferenceTensor::from_components(n, std::move(c), j.value("tolerance", 1e-12));
}

int cmd_decompose(const Options& opt, const std::string& tensor_path) {
    const std::string path = tensor_path.empty() ? opt.config : tensor_path;
    if (path.empty()) throw vtg::ArgumentError("decompose needs a tensor file");
    const vtg::DifferenceTensor a = read_tensor(path);
    const vtg::Decomposition d = vtg::decompose(a);
    const vtg::Tensor3 tv = d.vectorial_tensor();
    const vtg::Tensor3 ts = d.skew_tensor();
    auto flat = [](const vtg::Tensor3& t) { return std::vector<double>(t.components().begin(), t.components().end()); };
    const json j = {{"n", a.dimension()},
                    {"vectorial", {{"V", d.vectorial}, {"components", flat(tv)}, {"norm", tv.frobenius_norm()}}},
                    {"skew", {{"form", d.skew}, {"components", flat(ts)}, {"norm", ts.frobenius_norm()}}},
                    {"remainder", {{"components", flat(d.remainder)}, {"norm", d.remainder.frobenius_norm()}}},
                    {"norm", a.tensor().frobenius_norm()}};
    emit(opt, "decomposition.json", j.dump(2) + "\n");
    return kExitPass;
}

int cmd_strip_bounds(const Options& opt, std::optional<double> y0, std::optional<double> ydot,
                     std::optional<double> xdot, double horizon) {
    vtg::GeodesicState launch;
    if (!opt.config.empty()) {
        const vtg::Scenario sc = vtg::load_scenario_file(opt.config);
        if (sc.field.id != "shear") throw vtg::ArgumentError("strip-bounds needs a shear-field scenario");
        if (sc.energy != 1.0) throw vtg::ArgumentError("strip-bounds needs E = 1");
        launch = sc.launch;
    } else {
        if (!y0 || !ydot || !xdot) throw vtg::ArgumentError("give --config or all of --y0 --ydot --xdot");
        const double n = std::hypot(*xdot, *ydot);
        if (n == 0.0) throw vtg::ArgumentError("velocity must be nonzero");
        launch = {0.0, {0.0, *y0}, {*xdot / n, *ydot / n}};
    }
    const vtg::StripBounds b = vtg::strip_bounds(launch.position.v, launch.velocity.v, launch.velocity.u);
    const vtg::Trace tr = vtg::integrate_both_ways(vtg::euclidean_plane(), vtg::shear_field().to_vector_field(),
                                                   launch, {}, -horizon, horizon);
    double excess = 0.0;
    for (const auto& s : tr.states) excess = std::max({excess, s.position.v - b.upper, b.lower - s.position.v});
    const bool pass = excess < 1e-3;
    json j = vtg::verdict_json("strip_confinement", excess, 0.0, pass);
    j["c"] = b.c;
    j["branch"] = b.branch;
    j["lower"] = b.lower;
    j["upper"] = b.upper;
    j["degenerate"] = b.degenerate;
    j["horizon"] = horizon;
    if (opt.format == "json") {
        emit(opt, "strip-bounds.json", j.dump(2) + "\n");
    } else {
        char buf[256];
        std::snprintf(buf, sizeof buf, "c = %.12g\nbranch = %+d\nstrip = (%.12g, %.12g)%s\nconfinement over |t| <= %g: %s (excess %.3g)\n",
                      b.c, b.branch, b.lower, b.upper, b.degenerate ? " degenerate" : "", horizon,
                      pass ? "PASS" : "FAIL", excess);
        std::cout << buf;
    }
    return pass ? kExitPass : kExitFail;
}

int cmd_plot(const Options& opt, const std::vector<std::string>& csv_files) {
    std::vector<vtg::PlotSeries> series;
    std::string name = "plot";
    if (!opt.config.empty()) {
        const vtg::Scenario sc = vtg::load_scenario_file(opt.config);
        const vtg::RunOutcome o = vtg::execute(sc);
        emit(opt, sc.id + ".svg", vtg::scenario_svg(sc, o.trace));
        return kExitPass;
    }
    for (const auto& f : csv_files) {
        std::ifstream in(f);
        if (!in) throw vtg::ArgumentError("cannot read " + f);
        series.push_back(vtg::chart_series(vtg::read_trace_csv(in), fs::path(f).stem().string()));
        name = fs::path(f).stem().string();
    }
    if (series.empty()) throw vtg::ArgumentError("plot needs --config or CSV trace files");
    emit(opt, name + ".svg", vtg::plot_svg(series, {name, 640, 640, true}));
    return kExitPass;
}

int cmd_suite(const Options& opt) {
    std::optional<fs::path> dir;
    if (!opt.out_dir.empty()) dir = fs::path(opt.out_dir);
    vtg::SuiteContext ctx(opt.seed, dir);
    const auto results = vtg::run_acceptance(ctx, [](const vtg::CriterionResult& r) {
        std::cout << vtg::format_result(r) << std::endl;
    });
    bool pass = true;
    json summary = json::array();
    for (const auto& r : results) {
        pass = pass && r.pass;
        summary.push_back({{"criterion", r.number}, {"name", r.name}, {"verdict", r.pass ? "PASS" : "FAIL"},
                           {"detail", r.detail}, {"seconds", r.seconds}});
    }
    if (dir) {
        vtg::write_text_file(*dir / "acceptance.json", summary.dump(2) + "\n");
        for (const auto& j : vtg::catalog_scenarios())
            vtg::write_text_file(*dir / "scenarios" / (j["id"].get<std::string>() + ".json"), j.dump(2) + "\n");
    }
    return pass ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Geodesics of metric connections with vectorial torsion on surfaces"};
    app.require_subcommand(1);
    Options opt;
    auto common = [&](CLI::App* sub, bool config_required) {
        auto* c = sub->add_option("--config", opt.config, "scenario JSON file");
        if (config_required) c->required()->check(CLI::ExistingFile);
        else c->check(CLI::ExistingFile);
        sub->add_option("--out-dir", opt.out_dir, "directory for artifacts");
        sub->add_option("--format", opt.format, "output format")->check(CLI::IsMember({"csv", "json", "svg"}));
        sub->add_option("--seed", opt.seed, "seed for randomized checks");
    };

    auto* integrate = app.add_subcommand("integrate", "integrate a scenario and evaluate its reports");
    common(integrate, true);

    double angle_offset = 0.0;
    auto* compare = app.add_subcommand("compare-conformal", "compare with the Levi-Civita geodesic of e^{2σ}g");
    common(compare, true);
    compare->add_option("--angle-offset", angle_offset, "rotate the comparison launch (radians)");

    auto* mercator = app.add_subcommand("mercator", "Mercator image of a surface scenario");
    common(mercator, true);

    std::string tensor_path;
    auto* decompose = app.add_subcommand("decompose", "split a difference tensor into its three parts");
    common(decompose, false);
    decompose->add_option("tensor", tensor_path, "tensor JSON file")->check(CLI::ExistingFile);

    std::optional<double> y0, ydot, xdot;
    double horizon = 50.0;
    auto* strips = app.add_subcommand("strip-bounds", "strip of a shear-field geodesic");
    common(strips, false);
    strips->add_option("--y0", y0, "launch height");
    strips->add_option("--ydot", ydot, "launch dy/dt");
    strips->add_option("--xdot", xdot, "launch dx/dt");
    strips->add_option("--horizon", horizon, "confinement check over |t| <= horizon")->check(CLI::PositiveNumber);

    std::vector<std::string> csv_files;
    auto* plot = app.add_subcommand("plot", "SVG of a scenario or of CSV traces");
    common(plot, false);
    plot->add_option("traces", csv_files, "trace CSV files")->check(CLI::ExistingFile);

    auto* suite = app.add_subcommand("suite", "run the built-in scenarios and acceptance checks");
    common(suite, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (*integrate) return cmd_integrate(opt);
        if (*compare) return cmd_compare_conformal(opt, angle_offset);
        if (*mercator) return cmd_mercator(opt);
        if (*decompose) return cmd_decompose(opt, tensor_path);
        if (*strips) return cmd_strip_bounds(opt, y0, ydot, xdot, horizon);
        if (*plot) return cmd_plot(opt, csv_files);
        if (*suite) return cmd_suite(opt);
    } catch (const vtg::ArgumentError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFail;
    }
    return kExitUsage;
}
