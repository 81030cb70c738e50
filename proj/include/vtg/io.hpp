/// @file io.hpp
/// @brief Trace CSV files and invariant report JSON.
///
/// CSV columns: t,u,v,du,dv,speed,kappa,gV with a header row and every value
/// printed with 17 significant digits, so reading a file back reproduces the
/// doubles exactly.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "vtg/integrator.hpp"
#include "vtg/invariants.hpp"

namespace vtg {

inline constexpr const char* kCsvHeader = "t,u,v,du,dv,speed,kappa,gV";

void write_trace_csv(const Trace& trace, std::ostream& out);
std::string trace_to_csv(const Trace& trace);

/// Parses a CSV produced by write_trace_csv; meta is left default except the
/// launch index, which is set to the sample closest to t = 0. Throws
/// ArgumentError on a malformed header or row.
Trace read_trace_csv(std::istream& in);

/// {"name", "max_dev", "std", "verdict"} plus "tolerance" and "gate".
nlohmann::json report_to_json(const InvariantReport& report);

/// A pass/fail summary line in the same JSON shape for checks that are not
/// value series.
nlohmann::json verdict_json(const std::string& name, double max_dev, double std_dev, bool pass);

/// Writes text to a file, creating parent directories. Throws std::runtime_error on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace vtg
