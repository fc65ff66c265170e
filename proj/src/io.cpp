#include "nrcav/io.hpp"

#include "nrcav/error.hpp"

#include <json.hpp>

#include <array>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace nrcav {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr std::array<std::string_view, 9> kParamNames = {
    "g", "J", "kappa1", "kappa2", "kappa_e", "gamma", "delta1", "delta2", "eps_p",
};

double get_param(const SystemParams& p, std::string_view name)
{
    if (name == "g") return p.g;
    if (name == "J") return p.J;
    if (name == "kappa1") return p.kappa1;
    if (name == "kappa2") return p.kappa2;
    if (name == "kappa_e") return p.kappa_e;
    if (name == "gamma") return p.gamma;
    if (name == "delta1") return p.delta1;
    if (name == "delta2") return p.delta2;
    return p.eps_p;
}

[[noreturn]] void schema_error(const std::string& path, const std::string& what)
{
    throw ConfigError(ErrorCode::SchemaError, path, what);
}

[[noreturn]] void range_error(const std::string& path, const std::string& what)
{
    throw ConfigError(ErrorCode::RangeError, path, what);
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<std::string_view> allowed)
{
    if (!obj.is_object()) {
        schema_error(path, "expected an object");
    }
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (auto a : allowed) {
            known = known || key == a;
        }
        if (!known) {
            schema_error(path.empty() ? key : path + "." + key, "unknown key");
        }
    }
}

double number_at(const json& v, const std::string& path)
{
    if (!v.is_number()) {
        schema_error(path, "expected a number");
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        range_error(path, "must be finite");
    }
    return x;
}

std::size_t count_at(const json& v, const std::string& path)
{
    if (!v.is_number_integer()) {
        schema_error(path, "expected an integer");
    }
    const auto x = v.get<long long>();
    if (x < 1) {
        range_error(path, "must be >= 1");
    }
    return static_cast<std::size_t>(x);
}

std::string string_at(const json& v, const std::string& path)
{
    if (!v.is_string()) {
        schema_error(path, "expected a string");
    }
    return v.get<std::string>();
}

std::vector<double> numbers_at(const json& v, const std::string& path)
{
    if (!v.is_array()) {
        schema_error(path, "expected an array of numbers");
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(number_at(v[i], path + "[" + std::to_string(i) + "]"));
    }
    if (out.empty()) {
        range_error(path, "must not be empty");
    }
    return out;
}

void validate_params(const SystemParams& p)
{
    if (p.kappa2 != 1.0) range_error("params.kappa2", "must equal 1 (rates are in units of kappa2)");
    if (!(p.kappa_e > 0.0)) range_error("params.kappa_e", "must be > 0");
    if (!(p.gamma > 0.0)) range_error("params.gamma", "must be > 0");
    if (!(p.g >= 0.0)) range_error("params.g", "must be >= 0");
    if (!(p.J >= 0.0)) range_error("params.J", "must be >= 0");
    if (!(p.eps_p >= 0.0)) range_error("params.eps_p", "must be >= 0");
}

AxisSpec parse_axis_spec(const json& v, const std::string& path)
{
    check_keys(v, path, {"name", "values", "start", "stop", "points"});
    if (!v.contains("name")) {
        schema_error(path + ".name", "required");
    }
    const auto name = string_at(v["name"], path + ".name");
    const auto axis = parse_axis(name);
    if (!axis) {
        range_error(path + ".name", "unknown axis '" + name + "'");
    }
    if (v.contains("values")) {
        if (v.contains("start") || v.contains("stop") || v.contains("points")) {
            schema_error(path, "give either values or start/stop/points");
        }
        return AxisSpec{*axis, numbers_at(v["values"], path + ".values")};
    }
    for (const char* key : {"start", "stop", "points"}) {
        if (!v.contains(key)) {
            schema_error(path + "." + key, "required");
        }
    }
    return linspace_axis(*axis, number_at(v["start"], path + ".start"),
                         number_at(v["stop"], path + ".stop"),
                         count_at(v["points"], path + ".points"));
}

}  // namespace

std::optional<OutputFormat> parse_format(std::string_view text)
{
    if (text == "csv") return OutputFormat::Csv;
    if (text == "json") return OutputFormat::Json;
    return std::nullopt;
}

RunConfig parse_config(std::string_view text)
{
    json root;
    try {
        root = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        schema_error("$", std::string("invalid JSON: ") + e.what());
    }
    check_keys(root, "", {"params", "scenario", "grid", "sweep", "solver", "output", "threads"});

    RunConfig cfg;
    if (root.contains("params")) {
        const auto& params = root["params"];
        check_keys(params, "params",
                   {"g", "J", "kappa1", "kappa2", "kappa_e", "gamma", "delta1", "delta2", "eps_p"});
        // Schema order, so serialization is canonical.
        for (auto name : kParamNames) {
            const std::string key(name);
            if (params.contains(key)) {
                set_param(cfg.params, name, number_at(params[key], "params." + key));
                cfg.explicit_params.push_back(key);
            }
        }
    }
    validate_params(cfg.params);

    if (root.contains("scenario")) {
        cfg.scenario = string_at(root["scenario"], "scenario");
        try {
            (void)make_scenario(*cfg.scenario);
        } catch (const Error&) {
            range_error("scenario", "unknown scenario '" + *cfg.scenario + "'");
        }
    }
    if (root.contains("grid")) {
        const auto& grid = root["grid"];
        check_keys(grid, "grid", {"points", "start", "stop", "axis2"});
        if (grid.contains("points")) cfg.grid.points = count_at(grid["points"], "grid.points");
        if (grid.contains("start")) cfg.grid.start = number_at(grid["start"], "grid.start");
        if (grid.contains("stop")) cfg.grid.stop = number_at(grid["stop"], "grid.stop");
        if (grid.contains("axis2")) cfg.grid.axis2 = numbers_at(grid["axis2"], "grid.axis2");
        if (!cfg.scenario) {
            schema_error("grid", "only valid together with a scenario");
        }
    }
    if (root.contains("sweep")) {
        if (cfg.scenario) {
            schema_error("sweep", "give either a scenario or a sweep, not both");
        }
        const auto& sw = root["sweep"];
        check_keys(sw, "sweep", {"axis1", "axis2", "directions", "hysteresis"});
        if (!sw.contains("axis1")) {
            schema_error("sweep.axis1", "required");
        }
        SweepConfig s;
        s.axis1 = parse_axis_spec(sw["axis1"], "sweep.axis1");
        if (sw.contains("axis2")) {
            s.axis2 = parse_axis_spec(sw["axis2"], "sweep.axis2");
        }
        if (sw.contains("directions")) {
            const auto& dirs = sw["directions"];
            if (!dirs.is_array() || dirs.empty()) {
                schema_error("sweep.directions", "expected a non-empty array");
            }
            s.directions.clear();
            for (std::size_t i = 0; i < dirs.size(); ++i) {
                const std::string path = "sweep.directions[" + std::to_string(i) + "]";
                const auto d = parse_direction(string_at(dirs[i], path));
                if (!d) {
                    range_error(path, "expected forward or backward");
                }
                s.directions.push_back(*d);
            }
        }
        if (sw.contains("hysteresis")) {
            if (!sw["hysteresis"].is_boolean()) {
                schema_error("sweep.hysteresis", "expected a boolean");
            }
            s.hysteresis = sw["hysteresis"].get<bool>();
            if (s.hysteresis && s.axis1.axis != SweepAxis::EpsPSq) {
                range_error("sweep.hysteresis", "needs axis1 = eps_p_sq");
            }
        }
        cfg.sweep = std::move(s);
    }
    if (root.contains("solver")) {
        const auto& solver = root["solver"];
        check_keys(solver, "solver", {"rtol", "atol", "t_hold"});
        if (solver.contains("rtol")) cfg.solver.rtol = number_at(solver["rtol"], "solver.rtol");
        if (solver.contains("atol")) cfg.solver.atol = number_at(solver["atol"], "solver.atol");
        if (solver.contains("t_hold")) cfg.solver.t_hold = number_at(solver["t_hold"], "solver.t_hold");
        if (!(cfg.solver.rtol > 0.0 && cfg.solver.rtol <= 1e-2)) range_error("solver.rtol", "must lie in (0, 1e-2]");
        if (!(cfg.solver.atol > 0.0 && cfg.solver.atol <= 1e-2)) range_error("solver.atol", "must lie in (0, 1e-2]");
        if (!(cfg.solver.t_hold >= 50.0)) range_error("solver.t_hold", "must be >= 50");
    }
    if (root.contains("output")) {
        const auto& out = root["output"];
        check_keys(out, "output", {"path", "format"});
        if (out.contains("path")) cfg.output_path = string_at(out["path"], "output.path");
        if (out.contains("format")) {
            const auto f = parse_format(string_at(out["format"], "output.format"));
            if (!f) {
                range_error("output.format", "expected csv or json");
            }
            cfg.format = *f;
        }
    }
    if (root.contains("threads")) {
        if (!root["threads"].is_number_integer() || root["threads"].get<long long>() < 0) {
            range_error("threads", "expected a non-negative integer");
        }
        cfg.threads = root["threads"].get<int>();
    }
    return cfg;
}

std::string serialize_config(const RunConfig& c)
{
    ordered_json root = ordered_json::object();
    ordered_json params = ordered_json::object();
    for (const auto& name : c.explicit_params) {
        params[name] = get_param(c.params, name);
    }
    root["params"] = params;
    if (c.scenario) {
        root["scenario"] = *c.scenario;
        ordered_json grid = ordered_json::object();
        if (c.grid.points) grid["points"] = *c.grid.points;
        if (c.grid.start) grid["start"] = *c.grid.start;
        if (c.grid.stop) grid["stop"] = *c.grid.stop;
        if (c.grid.axis2) grid["axis2"] = *c.grid.axis2;
        if (!grid.empty()) root["grid"] = grid;
    }
    if (c.sweep) {
        auto axis = [](const AxisSpec& a) {
            ordered_json j;
            j["name"] = std::string(to_string(a.axis));
            j["values"] = a.values;
            return j;
        };
        ordered_json sw;
        sw["axis1"] = axis(c.sweep->axis1);
        if (c.sweep->axis2) sw["axis2"] = axis(*c.sweep->axis2);
        ordered_json dirs = ordered_json::array();
        for (auto d : c.sweep->directions) dirs.push_back(std::string(to_string(d)));
        sw["directions"] = dirs;
        sw["hysteresis"] = c.sweep->hysteresis;
        root["sweep"] = sw;
    }
    root["solver"] = {{"rtol", c.solver.rtol}, {"atol", c.solver.atol}, {"t_hold", c.solver.t_hold}};
    ordered_json out = ordered_json::object();
    if (c.output_path) out["path"] = *c.output_path;
    out["format"] = c.format == OutputFormat::Csv ? "csv" : "json";
    root["output"] = out;
    root["threads"] = c.threads;
    return root.dump(2);
}

ScenarioOverrides scenario_overrides(const RunConfig& c)
{
    ScenarioOverrides o;
    for (const auto& name : c.explicit_params) {
        o.params.emplace_back(name, get_param(c.params, name));
    }
    o.points = c.grid.points;
    o.start = c.grid.start;
    o.stop = c.grid.stop;
    o.axis2_values = c.grid.axis2;
    o.t_hold = c.solver.t_hold;
    return o;
}

SweepSpec sweep_spec(const RunConfig& c)
{
    SweepSpec spec;
    if (c.sweep) {
        spec.axis1 = c.sweep->axis1;
        spec.axis2 = c.sweep->axis2;
        spec.directions = c.sweep->directions;
        spec.hysteresis = c.sweep->hysteresis;
    }
    spec.t_hold = c.solver.t_hold;
    spec.settle.integrator.rtol = c.solver.rtol;
    spec.settle.integrator.atol = c.solver.atol;
    return spec;
}

std::string format_double(double value)
{
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) {
        throw std::runtime_error("format_double: conversion failed");
    }
    return std::string(buf.data(), ptr);
}

namespace {

void csv_row(std::ostringstream& os, const std::string& scenario, const SweepRow& r)
{
    os << scenario << ',' << to_string(r.direction) << ',' << format_double(r.axis1) << ','
       << (r.axis2 ? format_double(*r.axis2) : "") << ',' << r.branch << ',';
    if (r.branch >= 0) {
        os << format_double(r.I1);
    }
    os << ',' << (r.T ? format_double(*r.T) : "") << ','
       << (r.isolation_db ? format_double(*r.isolation_db) : "") << ','
       << (r.stability ? std::string(to_string(*r.stability)) : "") << ',' << r.verdict << '\n';
}

ordered_json json_number(std::optional<double> v)
{
    if (!v) return nullptr;
    if (!std::isfinite(*v)) return format_double(*v);
    return *v;
}

ordered_json metadata_json(const SweepMetadata& m)
{
    ordered_json j;
    j["scenario"] = m.scenario;
    j["description"] = m.description;
    j["tool_version"] = m.tool_version;
    j["axis1"] = m.axis1;
    j["axis2"] = m.axis2;
    ordered_json p;
    for (auto name : kParamNames) {
        p[std::string(name)] = get_param(m.params, name);
    }
    j["params"] = p;
    j["pt_balance"] = m.pt_balance;
    j["hysteresis"] = m.hysteresis;
    j["t_hold"] = m.t_hold;
    return j;
}

}  // namespace

std::string write_result(const SweepResult& result, OutputFormat format)
{
    const std::string scenario = result.metadata ? result.metadata->scenario : std::string();
    if (format == OutputFormat::Csv) {
        std::ostringstream os;
        if (result.metadata) {
            const auto& m = *result.metadata;
            os << "# scenario=" << m.scenario << '\n';
            os << "# description=" << m.description << '\n';
            os << "# tool_version=" << m.tool_version << '\n';
            os << "# axis1=" << m.axis1 << '\n';
            os << "# axis2=" << m.axis2 << '\n';
            for (auto name : kParamNames) {
                os << "# params." << name << '=' << format_double(get_param(m.params, name)) << '\n';
            }
            os << "# pt_balance=" << format_double(m.pt_balance) << '\n';
            os << "# hysteresis=" << (m.hysteresis ? "true" : "false") << '\n';
            os << "# t_hold=" << format_double(m.t_hold) << '\n';
        }
        os << kCsvHeader << '\n';
        for (const auto& r : result.rows) {
            csv_row(os, scenario, r);
        }
        return os.str();
    }

    ordered_json root;
    root["metadata"] = result.metadata ? metadata_json(*result.metadata) : ordered_json(nullptr);
    ordered_json rows = ordered_json::array();
    for (const auto& r : result.rows) {
        ordered_json j;
        j["scenario"] = scenario;
        j["direction"] = std::string(to_string(r.direction));
        j["axis1"] = r.axis1;
        j["axis2"] = json_number(r.axis2);
        j["branch"] = r.branch;
        j["I1"] = r.branch >= 0 ? json_number(r.I1) : ordered_json(nullptr);
        j["T"] = json_number(r.T);
        j["isolation_db"] = json_number(r.isolation_db);
        j["stable"] = r.stability ? ordered_json(*r.stability == Stability::Stable)
                                  : ordered_json(nullptr);
        j["verdict"] = r.verdict;
        rows.push_back(std::move(j));
    }
    root["rows"] = std::move(rows);
    return root.dump(1) + "\n";
}

std::filesystem::path resolve_output_path(const std::string& path)
{
    std::filesystem::path p(path);
    const char* dir = std::getenv("NRCAV_OUTPUT_DIR");
    if (p.is_relative() && dir != nullptr && *dir != '\0') {
        return std::filesystem::path(dir) / p;
    }
    return p;
}

void write_result_file(const SweepResult& result, OutputFormat format, const std::string& path)
{
    const auto target = resolve_output_path(path);
    std::ofstream out(target, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open " + target.string() + ": " + std::strerror(errno));
    }
    out << write_result(result, format);
    out.flush();
    if (!out) {
        throw std::runtime_error("write failed for " + target.string() + ": " +
                                 std::strerror(errno));
    }
}

}  // namespace nrcav
