/// @file io.cpp
#include "vtg/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "vtg/errors.hpp"

namespace vtg {

namespace {

void put(std::string& line, double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    if (!line.empty()) line += ',';
    line += buf;
}

}  // namespace

void write_trace_csv(const Trace& trace, std::ostream& out) {
    out << kCsvHeader << '\n';
    std::string line;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const auto& s = trace.states[i];
        const StepDiagnostics d = i < trace.diagnostics.size() ? trace.diagnostics[i] : StepDiagnostics{};
        line.clear();
        for (double x : {s.t, s.position.u, s.position.v, s.velocity.u, s.velocity.v, d.speed,
                         d.kappa, d.g_v})
            put(line, x);
        out << line << '\n';
    }
}

std::string trace_to_csv(const Trace& trace) {
    std::ostringstream os;
    write_trace_csv(trace, os);
    return os.str();
}

Trace read_trace_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader)
        throw ArgumentError("trace CSV must start with the header '" + std::string(kCsvHeader) + "'");
    Trace trace;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        double v[8];
        const char* p = line.c_str();
        for (int k = 0; k < 8; ++k) {
            char* end = nullptr;
            v[k] = std::strtod(p, &end);
            if (end == p) throw ArgumentError("CSV row " + std::to_string(row) + ": bad number");
            p = end;
            if (k < 7) {
                if (*p != ',') throw ArgumentError("CSV row " + std::to_string(row) + ": expected 8 columns");
                ++p;
            }
        }
        if (*p != '\0') throw ArgumentError("CSV row " + std::to_string(row) + ": trailing data");
        trace.states.push_back({v[0], {v[1], v[2]}, {v[3], v[4]}});
        trace.diagnostics.push_back({v[5], v[6], v[7]});
    }
    for (std::size_t i = 0; i < trace.size(); ++i)
        if (std::abs(trace.states[i].t) < std::abs(trace.states[trace.meta.launch_index].t))
            trace.meta.launch_index = i;
    return trace;
}

nlohmann::json report_to_json(const InvariantReport& report) {
    nlohmann::json j = verdict_json(report.name, report.max_deviation, report.stddev, report.pass);
    j["tolerance"] = report.tolerance;
    j["gate"] = report.gate == Gate::stddev ? "std" : "max_dev";
    if (report.monotone) j["monotone"] = *report.monotone;
    return j;
}

nlohmann::json verdict_json(const std::string& name, double max_dev, double std_dev, bool pass) {
    return {{"name", name}, {"max_dev", max_dev}, {"std", std_dev}, {"verdict", pass ? "PASS" : "FAIL"}};
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace vtg
