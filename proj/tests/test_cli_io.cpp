#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "vtg/errors.hpp"
#include "vtg/expression.hpp"
#include "vtg/io.hpp"
#include "vtg/plane.hpp"
#include "vtg/plot.hpp"
#include "vtg/scenario.hpp"
#include "vtg/suite.hpp"

using namespace vtg;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

IntegratorSettings rk4(double step, double t1) {
    IntegratorSettings s;
    s.step = step;
    s.t1 = t1;
    return s;
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "vtg-tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

json base_scenario() {
    return json::parse(R"({
        "version": 1, "id": "t", "chart": {"catalog": "plane"}, "field": {"catalog": "shear"},
        "initial": {"position": [1, 1], "velocity": [1, 1]}, "t_span": [-1, 1],
        "integrator": {"step": 0.01}, "reports": ["speed", "flat", "arcsin"]
    })");
}

int run_cli(const std::string& args, const fs::path& log) {
    const std::string cmd = std::string(VTG_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("CSV round trip is bit exact") {
    const Trace tr = integrate(euclidean_plane(), shear_field().to_vector_field(), {0.0, {1, 1}, {0.6, 0.8}}, rk4(1e-2, 1.0));
    const std::string text = trace_to_csv(tr);
    CHECK(text.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
    std::istringstream in(text);
    const Trace back = read_trace_csv(in);
    REQUIRE(back.size() == tr.size());
    for (std::size_t i = 0; i < tr.size(); ++i) {
        CHECK(back.states[i].t == tr.states[i].t);
        CHECK(back.states[i].position == tr.states[i].position);
        CHECK(back.states[i].velocity == tr.states[i].velocity);
        CHECK(back.diagnostics[i].kappa == tr.diagnostics[i].kappa);
        CHECK(back.diagnostics[i].g_v == tr.diagnostics[i].g_v);
    }
    CHECK(back.meta.launch_index == 0);
    CHECK(trace_to_csv(integrate(euclidean_plane(), shear_field().to_vector_field(), {0.0, {1, 1}, {0.6, 0.8}}, rk4(1e-2, 1.0))) == text);
}

TEST_CASE("malformed CSV") {
    std::istringstream no_header("1,2,3\n");
    CHECK_THROWS_AS(read_trace_csv(no_header), ArgumentError);
    std::istringstream short_row(std::string(kCsvHeader) + "\n0,1,2\n");
    CHECK_THROWS_AS(read_trace_csv(short_row), ArgumentError);
    std::istringstream junk(std::string(kCsvHeader) + "\n0,1,2,3,4,5,x,7\n");
    CHECK_THROWS_AS(read_trace_csv(junk), ArgumentError);
}

TEST_CASE("report JSON shape") {
    const InvariantReport r = make_report("speed", {1.0, 1.0, 1.0}, Gate::max_deviation, 1e-6);
    const json j = report_to_json(r);
    CHECK(j["name"] == "speed");
    CHECK(j["max_dev"] == 0.0);
    CHECK(j["std"] == 0.0);
    CHECK(j["verdict"] == "PASS");
    CHECK(verdict_json("x", 2.0, 0.0, false)["verdict"] == "FAIL");
}

TEST_CASE("expression compiler") {
    const Expression e = Expression::compile("sin(u)^2 + 2*v - -1", {"u", "v"});
    CHECK(e(M_PI / 2, 3.0) == doctest::Approx(8.0));
    CHECK(Expression::compile("2^3^2", {})(std::vector<double>{}) == 512.0);
    CHECK(Expression::compile("-2^2", {})(std::vector<double>{}) == -4.0);
    CHECK(Expression::compile("atan2(1, 1) * 4", {})(std::vector<double>{}) == doctest::Approx(M_PI));
    CHECK(Expression::compile("pow(e, log(3))", {})(std::vector<double>{}) == doctest::Approx(3.0));
    CHECK(Expression::compile("1e-3 * 2.5E2", {})(std::vector<double>{}) == doctest::Approx(0.25));
    CHECK(Expression::compile("cosh(s) - sqrt(1 + sinh(s)^2)", {"s"})(std::vector<double>{1.7}) == doctest::Approx(0.0).scale(1.0));
    CHECK_THROWS_AS(Expression::compile("sin(", {"u"}), ArgumentError);
    CHECK_THROWS_AS(Expression::compile("w + 1", {"u", "v"}), ArgumentError);
    CHECK_THROWS_AS(Expression::compile("1 2", {}), ArgumentError);
    CHECK_THROWS_AS(Expression::compile("foo(1)", {}), ArgumentError);
}

TEST_CASE("scenario validation") {
    CHECK_NOTHROW(load_scenario(base_scenario()));
    const Scenario sc = load_scenario(base_scenario());
    CHECK(sc.energy == 1.0);
    CHECK(euclid(sc.launch.velocity) == doctest::Approx(1.0));
    CHECK(sc.t_min == -1.0);

    auto rejects = [](const std::function<void(json&)>& edit) {
        json j = base_scenario();
        edit(j);
        CHECK_THROWS_AS(load_scenario(j), ArgumentError);
    };
    rejects([](json& j) { j["version"] = 2; });
    rejects([](json& j) { j.erase("id"); });
    rejects([](json& j) { j["initial"]["velocity"] = {0, 0}; });
    rejects([](json& j) { j["initial"]["angle_to_meridian"] = 0.3; });
    rejects([](json& j) { j["reports"] = {"speed", "nonsense"}; });
    rejects([](json& j) { j["t_span"] = {0.5, 1.0}; });
    rejects([](json& j) { j["colour"] = "red"; });
    rejects([](json& j) { j["chart"] = {{"surface", "torus"}}; });
    rejects([](json& j) { j["field"] = {{"catalog", "vortex"}}; });
    rejects([](json& j) { j["integrator"]["step"] = -0.1; });
    rejects([](json& j) { j["chart"] = {{"catalog", "half-plane"}}, j["initial"]["position"] = {0, -1}; });
    rejects([](json& j) { j["field"] = {{"f", "y +"}}; });
    rejects([](json& j) { j["E"] = 0; });
}

TEST_CASE("inline charts and fields") {
    json j = base_scenario();
    j["chart"] = {{"metric", {{"g11", "1"}, {"g22", "sin(u)^2"}, {"domain", {0.001, 3.14, "-inf", "inf"}}}}};
    j["field"] = {{"sigma", "-log(sin(u))"}};
    j["initial"] = {{"position", {1.2, 0}}, {"velocity", {1, 2}}};
    j["reports"] = {"speed", "conformal-constant"};
    j["conformal_killing"] = {0, 1};
    RunOutcome o = execute(load_scenario(j));
    CHECK(o.pass);

    j = base_scenario();
    j["chart"] = {{"profile", {{"r", "sin(s)"}, {"h", "cos(s)"}, {"s_range", {0.001, 3.14}}, {"anchor", 1.5707963267948966}}}};
    j["field"] = "catalog";
    j["initial"] = {{"position", {1.0, 0}}, {"angle_to_meridian", 0.5}};
    j["reports"] = {"speed", "loxodrome", "mercator"};
    o = execute(load_scenario(j));
    CHECK(o.pass);
    CHECK(o.report["reports"].size() == 3);

    j = base_scenario();
    j["field"] = {{"p", "y^2/2"}};
    j["reports"] = {"speed", "flat", "curvature"};
    o = execute(load_scenario(j));
    CHECK(o.pass);

    j = base_scenario();
    j["field"] = {{"f", "y"}, {"g", "0"}};
    j["reports"] = {"speed", "curvature"};
    o = execute(load_scenario(j));
    CHECK(o.pass);

    j = base_scenario();
    j["E"] = 2.0;
    const Scenario sc = load_scenario(j);
    CHECK(euclid(sc.launch.velocity) == doctest::Approx(2.0));
}

TEST_CASE("catalog scenarios load and run") {
    const auto configs = catalog_scenarios();
    CHECK(configs.size() >= 10);
    for (const auto& c : configs) CHECK_NOTHROW(load_scenario(c));
    json j = configs.front();
    const fs::path dir = scratch("run");
    const RunOutcome o = run(load_scenario(j), dir);
    const std::string id = j["id"];
    CHECK(fs::exists(dir / (id + ".csv")));
    CHECK(fs::exists(dir / (id + ".json")));
    CHECK(json::parse(slurp(dir / (id + ".json")))["verdict"] == (o.pass ? "PASS" : "FAIL"));
}

TEST_CASE("SVG export") {
    const Trace tr = integrate_both_ways(euclidean_plane(), shear_field().to_vector_field(), {0.0, {1, 1}, {0.6, 0.8}},
                                         rk4(1e-2, 0.0), -2.0, 2.0);
    const std::string a = plot_svg({chart_series(tr, "shear")}, {"shear"});
    const std::string b = plot_svg({chart_series(tr, "shear")}, {"shear"});
    CHECK(a == b);
    CHECK(a.find("<svg") != std::string::npos);
    CHECK(a.find("class=\"dashed\"") != std::string::npos);
    CHECK(a.find("class=\"solid\"") != std::string::npos);
    CHECK(a.find("</svg>") != std::string::npos);
    const Trace fwd = integrate(euclidean_plane(), shear_field().to_vector_field(), {0.0, {1, 1}, {0.6, 0.8}}, rk4(1e-2, 2.0));
    CHECK(plot_svg({chart_series(fwd, "f")}).find("class=\"dashed\"") == std::string::npos);
    CHECK_THROWS_AS(plot_svg({}), ArgumentError);
    CHECK_THROWS_AS(plot_svg({PlotSeries{"empty", {}, {}}}), ArgumentError);
    const PlotSeries p = projected_series({{1, 0, 0}, {0, 1, 0}}, {0, 1}, "p");
    CHECK(p.points.size() == 2);
}

TEST_CASE("command line exit codes") {
    const fs::path dir = scratch("cli");
    const fs::path good = dir / "good.json", failing = dir / "failing.json", broken = dir / "broken.json";
    write_text_file(good, base_scenario().dump());
    json f = base_scenario();
    f["integrator"]["step"] = 0.5;
    f["reports"] = {"speed"};
    write_text_file(failing, f.dump());
    write_text_file(broken, "{\"version\": 1,");
    const fs::path log = dir / "log.txt";

    CHECK(run_cli("integrate --config " + good.string(), log) == 0);
    CHECK(json::parse(slurp(log))["verdict"] == "PASS");
    CHECK(run_cli("integrate --config " + failing.string(), log) == 1);
    CHECK(run_cli("integrate --config " + broken.string(), log) == 2);
    CHECK(run_cli("integrate", log) == 2);
    CHECK(run_cli("bogus", log) == 2);
    CHECK(run_cli("integrate --config " + good.string() + " --format csv", log) == 0);
    CHECK(slurp(log).rfind(kCsvHeader, 0) == 0);
    CHECK(run_cli("integrate --config " + good.string() + " --out-dir " + (dir / "out").string(), log) == 0);
    CHECK(fs::exists(dir / "out" / "t.csv"));

    CHECK(run_cli("strip-bounds --y0 1 --ydot 1 --xdot 1 --horizon 10 --format json", log) == 0);
    const json sb = json::parse(slurp(log));
    CHECK(sb["upper"].get<double>() == doctest::Approx(std::sqrt(2 * (0.5 + 3 * M_PI / 4))));
    CHECK(run_cli("strip-bounds --y0 1", log) == 2);

    json t = {{"n", 3}, {"components", std::vector<double>(27, 0.0)}};
    t["components"][0 * 9 + 0 * 3 + 1] = 1.0;  // A(0,0,1)
    t["components"][0 * 9 + 1 * 3 + 0] = -1.0;
    write_text_file(dir / "tensor.json", t.dump());
    CHECK(run_cli("decompose " + (dir / "tensor.json").string(), log) == 0);
    const json d = json::parse(slurp(log));
    CHECK(d["vectorial"]["V"][1].get<double>() == doctest::Approx(0.5));
    t["components"][0 * 9 + 1 * 3 + 0] = 0.0;
    write_text_file(dir / "tensor.json", t.dump());
    CHECK(run_cli("decompose " + (dir / "tensor.json").string(), log) == 2);

    CHECK(run_cli("integrate --config " + good.string() + " --out-dir " + (dir / "p").string(), log) == 0);
    CHECK(run_cli("plot " + (dir / "p" / "t.csv").string() + " --out-dir " + (dir / "p").string(), log) == 0);
    CHECK(slurp(dir / "p" / "t.svg").find("<svg") != std::string::npos);
}
