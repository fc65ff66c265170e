#pragma once

#include "nrcav/experiments.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nrcav {

enum class OutputFormat { Csv, Json };

std::optional<OutputFormat> parse_format(std::string_view text);

struct SolverConfig {
    double rtol = 1e-9;
    double atol = 1e-12;
    double t_hold = 200.0;

    friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

/// Grid overrides for a scenario run.
struct GridConfig {
    std::optional<std::size_t> points;
    std::optional<double> start;
    std::optional<double> stop;
    std::optional<std::vector<double>> axis2;

    friend bool operator==(const GridConfig&, const GridConfig&) = default;
};

/// An explicit sweep, used when no scenario is named.
struct SweepConfig {
    AxisSpec axis1;
    std::optional<AxisSpec> axis2;
    std::vector<Direction> directions{Direction::Forward, Direction::Backward};
    bool hysteresis = false;

    friend bool operator==(const SweepConfig&, const SweepConfig&) = default;
};

/// A fully validated run description. params holds the defaults (the PT
/// operating point) overlaid with the fields the config names; the names are
/// kept in explicit_params so a scenario only receives those as overrides.
struct RunConfig {
    SystemParams params;
    std::vector<std::string> explicit_params;
    std::optional<std::string> scenario;
    GridConfig grid;
    std::optional<SweepConfig> sweep;
    SolverConfig solver;
    std::optional<std::string> output_path;
    OutputFormat format = OutputFormat::Csv;
    int threads = 0;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses the JSON config schema. Unknown keys and wrong types throw
/// ConfigError(SchemaError) with the field path; invariant violations throw
/// ConfigError(RangeError).
RunConfig parse_config(std::string_view text);

/// Canonical JSON for a config; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

ScenarioOverrides scenario_overrides(const RunConfig& config);
SweepSpec sweep_spec(const RunConfig& config);

/// Locale-independent shortest round-trip decimal.
std::string format_double(double value);

/// CSV header, exactly as written.
inline constexpr std::string_view kCsvHeader =
    "scenario,direction,axis1,axis2,branch,I1,T,isolation_db,stable,verdict";

/// CSV output starts with "# key=value" metadata lines when the result has
/// metadata, then the header and one line per row. JSON mirrors the rows and
/// the metadata.
std::string write_result(const SweepResult& result, OutputFormat format);

/// Relative paths are resolved against NRCAV_OUTPUT_DIR when it is set.
std::filesystem::path resolve_output_path(const std::string& path);

/// Writes write_result(...) to path; IO failures throw std::runtime_error
/// carrying the system message.
void write_result_file(const SweepResult& result, OutputFormat format, const std::string& path);

}  // namespace nrcav
