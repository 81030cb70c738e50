/// @file suite.hpp
/// @brief The built-in scenario catalog and the acceptance checks run over it.
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vtg/scenario.hpp"

namespace vtg {

/// Twelve scenario files covering the plane, the shear and winding fields,
/// the sphere, pseudosphere, catenoid and the half plane.
std::vector<nlohmann::json> catalog_scenarios();

struct CriterionResult {
    int number{0};
    std::string name;
    bool pass{false};
    std::string detail;
    double seconds{0.0};
};

/// Executes catalog scenarios on demand and keeps the outcomes.
class SuiteContext {
public:
    explicit SuiteContext(std::uint64_t seed = 1, std::optional<std::filesystem::path> out_dir = {});

    std::uint64_t seed() const { return seed_; }
    const std::vector<Scenario>& scenarios() const { return scenarios_; }
    const Scenario& scenario(const std::string& id) const;
    /// Runs (once) and returns the outcome of a catalog scenario.
    const RunOutcome& outcome(const std::string& id);

private:
    std::uint64_t seed_;
    std::optional<std::filesystem::path> out_dir_;
    std::vector<Scenario> scenarios_;
    std::map<std::string, RunOutcome> outcomes_;
};

struct Criterion {
    int number;
    std::string name;
    std::function<CriterionResult(SuiteContext&)> check;
};

const std::vector<Criterion>& acceptance_criteria();

/// Runs every criterion; each result is handed to `on_result` as soon as it is known.
std::vector<CriterionResult> run_acceptance(
    SuiteContext& context, const std::function<void(const CriterionResult&)>& on_result = {});

/// "PASS  3 loxodrome-mercator (0.41 s): detail"
std::string format_result(const CriterionResult& result);

}  // namespace vtg
