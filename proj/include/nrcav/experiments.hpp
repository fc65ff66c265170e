#pragma once

#include "nrcav/dynamics.hpp"
#include "nrcav/parallel.hpp"
#include "nrcav/steady.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nrcav {

inline constexpr std::string_view kToolVersion = "nrcav 1.0.0";

struct AxisSpec {
    SweepAxis axis = SweepAxis::EpsPSq;
    std::vector<double> values;

    friend bool operator==(const AxisSpec&, const AxisSpec&) = default;
};

/// n evenly spaced values from start to stop inclusive.
AxisSpec linspace_axis(SweepAxis axis, double start, double stop, std::size_t n);

/// n values stop/n, 2 stop/n, ..., stop: the open-at-zero grids used by the
/// figures (eps_p = 0 has no transmission, g = 0 can be marginal).
AxisSpec open_axis(SweepAxis axis, double stop, std::size_t n);

struct SweepSpec {
    AxisSpec axis1;
    std::optional<AxisSpec> axis2;
    std::vector<Direction> directions{Direction::Forward, Direction::Backward};
    bool hysteresis = false;  // dynamic up/down scan along axis1 (eps_p_sq only)
    double t_hold = 200.0;
    SettleOptions settle;
};

struct SweepRow {
    Direction direction = Direction::Forward;
    double axis1 = 0.0;
    std::optional<double> axis2;
    int branch = -1;                      // -1 marks a failed grid point
    double I1 = 0.0;
    std::optional<double> T;
    std::optional<double> isolation_db;   // +-inf or NaN when undefined
    std::optional<Stability> stability;
    std::string verdict;
};

struct SweepMetadata {
    std::string scenario = "custom";
    std::string description;
    std::string axis1;
    std::string axis2;
    SystemParams params;
    double pt_balance = 0.0;
    bool hysteresis = false;
    double t_hold = 0.0;
    std::string tool_version{kToolVersion};
};

struct SweepResult {
    std::optional<SweepMetadata> metadata;
    std::vector<SweepRow> rows;
};

/// Evaluates branches, transmissions and the isolation of the selected
/// branches at every grid point and direction. Grid-point failures become
/// rows with branch == -1 and verdict "error:<code>". Row order: axis2,
/// axis1, direction, branch index.
SweepResult sweep(const SweepSpec& spec, const SystemParams& params,
                  const ExecPolicy& policy = {}, std::string scenario = "custom");

struct Scenario {
    std::string id;
    std::string description;
    SystemParams base;
    SweepSpec spec;
    // axis1 grid recipe: linspace(start, stop, points), or open_axis(stop,
    // points) when start is absent
    std::optional<double> axis1_start;
    double axis1_stop = 1.0;
    std::size_t points = 400;
};

std::span<const std::string_view> scenario_ids();

/// Throws Error(UnknownScenario).
Scenario make_scenario(std::string_view id);

struct ScenarioOverrides {
    std::vector<std::pair<std::string, double>> params;
    std::optional<std::size_t> points;
    std::optional<double> start;   // axis1 range; open grid when absent
    std::optional<double> stop;
    std::optional<std::vector<double>> axis2_values;
    std::optional<double> t_hold;
};

/// Sets a SystemParams field by name; false for an unknown name.
bool set_param(SystemParams& params, std::string_view name, double value);

/// Applies overrides, rejecting unknown fields and fields the scenario
/// sweeps (SchemaError).
Scenario apply_overrides(Scenario scenario, const ScenarioOverrides& overrides);

SweepResult run_scenario(std::string_view id, const ScenarioOverrides& overrides = {},
                         const ExecPolicy& policy = {});

}  // namespace nrcav
