#pragma once

#include "folpsi/foliation.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace folpsi {

/// Validated scenario file. Stages keep their raw parameters; each stage's
/// parameters are checked when the stage runs.
struct ScenarioConfig {
    std::string id;
    Domain domain;
    std::vector<std::string> names;
    std::vector<PolyVectorField> generators;
    int structure_cap = 2;
    int fiber_cap = 2;
    struct Stage {
        std::string name;
        std::string check;
        nlohmann::json params;
    };
    std::vector<Stage> pipeline;
    std::string report_file = "report";
    std::string csv_file = "plot.csv";

    FoliationModule module() const;
};

/// Parses scenario JSON. Errors are ParseError (syntax: field "line N") or
/// ConfigError naming the offending field.
ScenarioConfig parse_scenario(const std::string& text);
ScenarioConfig load_scenario(const std::string& path);

/// Check kinds understood by the runner and the subcommand that selects them.
const std::vector<std::pair<std::string, std::string>>& check_catalog();

struct CheckResult {
    std::string stage;
    std::string check;
    bool pass = false;
    nlohmann::ordered_json data;
};

struct PlotRow {
    double abscissa = 0.0;
    double value = 0.0;
    std::string series;
};

struct Report {
    std::string scenario;
    std::vector<CheckResult> checks;
    std::vector<PlotRow> plot;

    bool ok() const;
    std::string text() const;
    std::string json() const;
    std::string csv() const;
};

struct RunOptions {
    /// Subcommand filter: "report" runs every stage.
    std::string subcommand = "report";
    std::uint64_t seed = 20240601;
    std::optional<int> grid_override;
};

/// Runs the selected stages in file order. A stage that throws is re-thrown
/// as Error("stage '<name>': ...").
Report run(const ScenarioConfig& config, const RunOptions& opts = {});

}  // namespace folpsi
