#include "nrcav/io.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>

using namespace nrcav;

namespace {

std::string error_path(const std::string& text)
{
    try {
        (void)parse_config(text);
    } catch (const ConfigError& e) {
        return e.path();
    }
    return "<no error>";
}

}  // namespace

TEST_CASE("empty config gives the default operating point")
{
    const RunConfig cfg = parse_config("{}");
    CHECK(cfg == RunConfig{});
    CHECK(cfg.params == SystemParams{});
    CHECK(cfg.params.kappa1 == -7.4);
    CHECK(cfg.params.kappa_e == 3.2);
}

TEST_CASE("config errors name the offending field")
{
    try {
        (void)parse_config(R"({"params":{"gamma":-1}})");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.code() == ErrorCode::RangeError);
        CHECK(e.path() == "params.gamma");
    }
    CHECK(error_path(R"({"params":{"gama":1}})") == "params.gama");
    CHECK(error_path(R"({"params":{"g":"three"}})") == "params.g");
    CHECK(error_path(R"({"bogus":1})") == "bogus");
    CHECK(error_path("{not json") == "$");
    CHECK(error_path(R"({"scenario":"fig99"})") == "scenario");
    CHECK(error_path(R"({"grid":{"points":10}})") == "grid");
    CHECK(error_path(R"({"sweep":{"axis1":{"name":"g","values":[1]}},"scenario":"fig4a"})") == "sweep");
    CHECK(error_path(R"({"sweep":{"axis1":{"name":"g","start":1,"stop":2}}})") == "sweep.axis1.points");
    CHECK(error_path(R"({"solver":{"rtol":0}})") == "solver.rtol");
    CHECK(error_path(R"({"threads":-2})") == "threads");
}

TEST_CASE("config round trip")
{
    const char* text = R"({
        "params": {"g": 4, "kappa1": 1, "kappa_e": 3, "eps_p": 0.1},
        "sweep": {"axis1": {"name": "eps_p_sq", "start": 0.1, "stop": 1.0, "points": 7},
                  "axis2": {"name": "J", "values": [2, 4]},
                  "directions": ["backward"], "hysteresis": true},
        "solver": {"rtol": 1e-8, "atol": 1e-11, "t_hold": 150},
        "output": {"path": "x.json", "format": "json"},
        "threads": 2
    })";
    const RunConfig a = parse_config(text);
    const RunConfig b = parse_config(serialize_config(a));
    CHECK(a == b);
    CHECK(serialize_config(a) == serialize_config(b));
    CHECK(a.sweep->axis1.values.size() == 7);
    CHECK(a.sweep->directions == std::vector<Direction>{Direction::Backward});

    const RunConfig s = parse_config(R"({"scenario":"fig2a","grid":{"points":50,"axis2":[3,4]}})");
    CHECK(parse_config(serialize_config(s)) == s);
    const auto o = scenario_overrides(s);
    CHECK(o.points == std::size_t{50});
    CHECK(o.axis2_values == std::vector<double>{3.0, 4.0});
}

TEST_CASE("number formatting is shortest round-trip and locale free")
{
    CHECK(format_double(0.36) == "0.36");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-2.5e-12) == "-2.5e-12");
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    const double x = 0.1 + 0.2;
    CHECK(std::stod(format_double(x)) == x);
}

TEST_CASE("empty result is a header-only CSV")
{
    CHECK(write_result(SweepResult{}, OutputFormat::Csv) == std::string(kCsvHeader) + "\n");
}

TEST_CASE("CSV and JSON carry the full parameter set")
{
    SweepSpec spec;
    spec.axis1 = AxisSpec{SweepAxis::EpsPSq, {0.1296}};
    const auto r = sweep(spec, SystemParams{}, ExecPolicy::serial(), "probe");
    const auto csv = write_result(r, OutputFormat::Csv);
    for (const char* key : {"# scenario=probe", "# params.g=3", "# params.kappa1=-7.4",
                            "# params.kappa_e=3.2", "# params.gamma=0.1", "# pt_balance=0",
                            "# params.eps_p=0.36"}) {
        CHECK(csv.find(key) != std::string::npos);
    }
    CHECK(csv.find(std::string(kCsvHeader)) != std::string::npos);
    CHECK(csv.find("probe,forward,0.1296,,0,") != std::string::npos);

    const auto json = nlohmann::json::parse(write_result(r, OutputFormat::Json));
    CHECK(json["metadata"]["params"]["kappa1"].get<double>() == -7.4);
    CHECK(json["rows"].size() == 2);
    CHECK(write_result(r, OutputFormat::Csv) == csv);
}

TEST_CASE("output directory override")
{
    const auto dir = std::filesystem::temp_directory_path() / "nrcav_io_test";
    std::filesystem::create_directories(dir);
    ::setenv("NRCAV_OUTPUT_DIR", dir.c_str(), 1);
    CHECK(resolve_output_path("a.csv") == dir / "a.csv");
    CHECK(resolve_output_path("/abs/b.csv") == std::filesystem::path("/abs/b.csv"));
    write_result_file(SweepResult{}, OutputFormat::Csv, "a.csv");
    std::ifstream in(dir / "a.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == kCsvHeader);
    ::unsetenv("NRCAV_OUTPUT_DIR");
    CHECK_THROWS(write_result_file(SweepResult{}, OutputFormat::Csv, "/nonexistent/dir/x.csv"));
}

TEST_CASE("format names")
{
    CHECK(parse_format("json") == OutputFormat::Json);
    CHECK_FALSE(parse_format("xml").has_value());
}
