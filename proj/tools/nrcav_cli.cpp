// nrcav: steady states, sweeps and hysteresis scans of the two-cavity /
// quantum-emitter system from the command line.
//
// Exit codes: 0 success, 1 usage or config error, 2 solver or IO failure.

#include "nrcav/dynamics.hpp"
#include "nrcav/error.hpp"
#include "nrcav/experiments.hpp"
#include "nrcav/io.hpp"
#include "nrcav/observables.hpp"
#include "nrcav/steady.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace nrcav;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Options shared by the subcommands that evaluate the model.
struct CommonOptions {
    std::string config_path;
    std::map<std::string, double> values;
    std::map<std::string, CLI::Option*> flags;
    std::string dir = "both";
    std::string out;
    std::string format;
    int threads = -1;

    void attach(CLI::App* app, bool with_dir)
    {
        app->add_option("--config", config_path, "JSON run configuration")
            ->check(CLI::ExistingFile);
        const std::vector<std::pair<std::string, std::string>> params = {
            {"g", "--g"},           {"J", "--J"},         {"kappa1", "--kappa1"},
            {"kappa_e", "--kappa-e"}, {"gamma", "--gamma"}, {"delta1", "--delta1"},
            {"delta2", "--delta2"}, {"eps_p", "--eps-p"},
        };
        for (const auto& [name, flag] : params) {
            values[name] = 0.0;
            flags[name] = app->add_option(flag, values[name], name + " in units of kappa2");
        }
        if (with_dir) {
            app->add_option("--dir", dir, "forward, backward or both")
                ->check(CLI::IsMember({"forward", "backward", "both"}));
        }
        app->add_option("--threads", threads, "worker threads (default: NRCAV_THREADS)");
    }

    void attach_output(CLI::App* app)
    {
        app->add_option("--out", out, "output file (default: stdout)");
        app->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    }

    RunConfig load() const
    {
        RunConfig cfg;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            std::stringstream ss;
            ss << in.rdbuf();
            cfg = parse_config(ss.str());
        }
        // Command-line parameters override the file and count as explicit.
        for (const auto& [name, opt] : flags) {
            if (opt->count() > 0) {
                set_param(cfg.params, name, values.at(name));
                bool listed = false;
                for (const auto& n : cfg.explicit_params) {
                    listed = listed || n == name;
                }
                if (!listed) {
                    cfg.explicit_params.push_back(name);
                }
            }
        }
        try {
            validate(cfg.params);
        } catch (const Error& e) {
            throw ConfigError(ErrorCode::RangeError, "params", e.what());
        }
        if (threads >= 0) {
            cfg.threads = threads;
        }
        if (!out.empty()) {
            cfg.output_path = out;
        }
        if (!format.empty()) {
            cfg.format = *parse_format(format);
        }
        return cfg;
    }

    std::vector<Direction> directions() const
    {
        if (dir == "forward") return {Direction::Forward};
        if (dir == "backward") return {Direction::Backward};
        return {Direction::Forward, Direction::Backward};
    }
};

ExecPolicy policy_for(const RunConfig& cfg)
{
    ExecPolicy p;
    p.threads = cfg.threads;
    return p;
}

void emit(const SweepResult& result, const RunConfig& cfg)
{
    if (cfg.output_path) {
        write_result_file(result, cfg.format, *cfg.output_path);
        std::cerr << "wrote " << resolve_output_path(*cfg.output_path).string() << '\n';
    } else {
        std::cout << write_result(result, cfg.format);
    }
}

std::string fmt(double v) { return format_double(v); }

void print_params(const SystemParams& p)
{
    std::cout << "params: g=" << fmt(p.g) << " J=" << fmt(p.J) << " kappa1=" << fmt(p.kappa1)
              << " kappa2=" << fmt(p.kappa2) << " kappa_e=" << fmt(p.kappa_e)
              << " gamma=" << fmt(p.gamma) << " delta1=" << fmt(p.delta1)
              << " delta2=" << fmt(p.delta2) << " eps_p=" << fmt(p.eps_p)
              << "  (pt_balance=" << fmt(pt_balance(p)) << ")\n";
}

// Branch the system occupies after raising the drive quasi-statically from
// zero to the requested eps_p.
std::optional<SteadyBranch> selected_branch(const SystemParams& p, Direction dir)
{
    if (p.eps_p == 0.0) {
        return std::nullopt;
    }
    const auto axis = open_axis(SweepAxis::EpsPSq, p.eps_p * p.eps_p, 200);
    const auto path = continuation_sweep(p, dir, SweepAxis::EpsPSq, axis.values, ExecPolicy::serial());
    const auto sel = select_branches(path);
    if (path.back().error || !sel.back().branch) {
        return std::nullopt;
    }
    return path.back().branches[*sel.back().branch];
}

int run_steady(const CommonOptions& opts)
{
    const RunConfig cfg = opts.load();
    const SystemParams& p = cfg.params;
    print_params(p);
    std::map<Direction, double> selected_T;
    for (Direction dir : opts.directions()) {
        const auto branches = enumerate_branches(p, dir);
        std::cout << to_string(dir) << ": " << branches.size() << " branch(es)\n";
        std::cout << "  branch  I1                       T                        stability  max_re_eig\n";
        for (std::size_t i = 0; i < branches.size(); ++i) {
            const auto& b = branches[i];
            std::string T = "-";
            if (p.eps_p > 0.0) {
                T = fmt(transmission(p, dir, b).T);
            }
            std::printf("  %-6zu  %-23s  %-23s  %-9s  %s\n", i, fmt(b.I1).c_str(), T.c_str(),
                        std::string(to_string(b.stability)).c_str(),
                        fmt(b.max_real_eigenvalue).c_str());
        }
        if (const auto sel = selected_branch(p, dir)) {
            const double T = transmission(p, dir, *sel).T;
            selected_T[dir] = T;
            std::cout << "  selected (quasi-static drive ramp): I1=" << fmt(sel->I1)
                      << " T=" << fmt(T) << '\n';
        }
    }
    if (selected_T.size() == 2) {
        try {
            const double iso =
                isolation_ratio(selected_T[Direction::Backward], selected_T[Direction::Forward]);
            std::cout << "isolation_db (selected, 10 log10 T_L/T_R): " << fmt(iso) << '\n';
        } catch (const UndefinedRatio& e) {
            std::cout << "isolation_db: undefined (" << (e.sign() > 0 ? "+inf" : e.sign() < 0 ? "-inf" : "nan")
                      << ")\n";
        }
    }
    return 0;
}

int run_stability(const CommonOptions& opts)
{
    const RunConfig cfg = opts.load();
    print_params(cfg.params);
    for (Direction dir : opts.directions()) {
        const auto branches = enumerate_branches(cfg.params, dir);
        for (std::size_t i = 0; i < branches.size(); ++i) {
            const auto& b = branches[i];
            std::cout << to_string(dir) << " branch " << i << ": I1=" << fmt(b.I1) << " "
                      << to_string(b.stability) << " residual=" << fmt(b.residual) << '\n';
            const auto eig = jacobian_eigenvalues(b.state, cfg.params);
            std::vector<cplx> sorted(eig.data(), eig.data() + eig.size());
            std::sort(sorted.begin(), sorted.end(), [](cplx a, cplx b) {
                return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag();
            });
            for (const auto& z : sorted) {
                std::cout << "    " << fmt(z.real()) << (z.imag() < 0 ? " - " : " + ")
                          << fmt(std::abs(z.imag())) << "i\n";
            }
        }
    }
    return 0;
}

struct SweepOptions {
    std::string axis = "eps_p_sq";
    double from = 0.0;
    double to = 1.0;
    std::size_t points = 100;
    std::string axis2;
    std::vector<double> values2;
    bool hysteresis = false;
};

int run_sweep(const CommonOptions& opts, const SweepOptions& so, bool have_axis)
{
    RunConfig cfg = opts.load();
    if (!cfg.sweep || have_axis) {
        SweepConfig s;
        const auto axis = parse_axis(so.axis);
        if (!axis) {
            throw UsageError("unknown axis '" + so.axis + "'");
        }
        s.axis1 = linspace_axis(*axis, so.from, so.to, so.points);
        if (!so.axis2.empty()) {
            const auto a2 = parse_axis(so.axis2);
            if (!a2 || so.values2.empty()) {
                throw UsageError("--axis2 needs a known axis name and --values");
            }
            s.axis2 = AxisSpec{*a2, so.values2};
        }
        s.hysteresis = so.hysteresis;
        if (s.hysteresis && s.axis1.axis != SweepAxis::EpsPSq) {
            throw UsageError("--hysteresis needs --axis eps_p_sq");
        }
        s.directions = opts.directions();
        cfg.sweep = s;
    }
    emit(sweep(sweep_spec(cfg), cfg.params, policy_for(cfg)), cfg);
    return 0;
}

int run_hysteresis(const CommonOptions& opts, double from, double to, std::size_t points,
                   double t_hold)
{
    const RunConfig cfg = opts.load();
    print_params(cfg.params);
    const auto schedule = up_down_schedule(from, to, points);
    SettleOptions so;
    so.integrator.rtol = cfg.solver.rtol;
    so.integrator.atol = cfg.solver.atol;
    for (Direction dir : opts.directions()) {
        const auto scan = hysteresis_scan(cfg.params, dir, schedule, t_hold, so);
        std::cout << "# " << to_string(dir) << "\n";
        std::cout << "eps_p_sq,pass,I1,verdict\n";
        for (std::size_t k = 0; k < scan.size(); ++k) {
            std::cout << fmt(scan[k].eps_sq) << ',' << (k < points ? "up" : "down") << ','
                      << fmt(scan[k].I1) << ',' << to_string(scan[k].verdict) << '\n';
        }
        const auto w = hysteresis_window(scan);
        std::cout << "# loop: ";
        if (w.present) {
            std::cout << '[' << fmt(w.lo) << ", " << fmt(w.hi) << "] width " << fmt(w.width());
        } else {
            std::cout << "none";
        }
        std::cout << "; turning points:";
        for (double tp : turning_points(cfg.params, dir)) {
            std::cout << ' ' << fmt(tp);
        }
        std::cout << '\n';
    }
    return 0;
}

int run_figure(const CommonOptions& opts, const std::string& id, std::size_t points)
{
    RunConfig cfg = opts.load();
    cfg.scenario = id;
    if (points > 0) {
        cfg.grid.points = points;
    }
    emit(run_scenario(id, scenario_overrides(cfg), policy_for(cfg)), cfg);
    return 0;
}

int run_validate(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot read " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    const RunConfig cfg = parse_config(ss.str());
    std::cout << serialize_config(cfg) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Nonreciprocal transmission of coupled microcavities with a quantum emitter"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(nrcav::kToolVersion));

    CommonOptions steady_opts, stability_opts, sweep_opts, hyst_opts, figure_opts;

    auto* steady = app.add_subcommand("steady", "branches and transmission at one parameter point");
    steady_opts.attach(steady, true);

    auto* stability = app.add_subcommand("stability", "Jacobian eigenvalues of every branch");
    stability_opts.attach(stability, true);

    SweepOptions so;
    auto* sweep_cmd = app.add_subcommand("sweep", "branches and observables over a grid");
    sweep_opts.attach(sweep_cmd, true);
    sweep_opts.attach_output(sweep_cmd);
    auto* axis_opt = sweep_cmd->add_option("--axis", so.axis, "eps_p_sq, g, J, delta1 or delta2");
    sweep_cmd->add_option("--from", so.from, "first axis value");
    sweep_cmd->add_option("--to", so.to, "last axis value");
    sweep_cmd->add_option("--points", so.points, "grid points")->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--axis2", so.axis2, "second axis name");
    sweep_cmd->add_option("--values", so.values2, "second axis values")->delimiter(',');
    sweep_cmd->add_flag("--hysteresis", so.hysteresis, "dynamic up/down scan along eps_p_sq");

    double h_from = 0.0, h_to = 1.0, t_hold = 200.0;
    std::size_t h_points = 100;
    auto* hyst = app.add_subcommand("hysteresis", "quasi-static up/down drive scan");
    hyst_opts.attach(hyst, true);
    hyst->add_option("--from", h_from, "lowest eps_p^2")->check(CLI::NonNegativeNumber);
    hyst->add_option("--to", h_to, "highest eps_p^2")->check(CLI::NonNegativeNumber);
    hyst->add_option("--points", h_points, "points per pass")->check(CLI::PositiveNumber);
    hyst->add_option("--t-hold", t_hold, "hold time per step [1/kappa2]")->check(CLI::Range(50.0, 1e9));

    std::string figure_id;
    std::size_t figure_points = 0;
    auto* figure = app.add_subcommand("figure", "run a named figure scenario");
    figure->add_option("id", figure_id, "scenario id")->required();
    figure->add_option("--points", figure_points, "grid points along axis1");
    figure_opts.attach(figure, false);
    figure_opts.attach_output(figure);

    std::string validate_path;
    auto* validate_cmd = app.add_subcommand("validate", "parse and check a config file");
    validate_cmd->add_option("file", validate_path, "config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*steady) return run_steady(steady_opts);
        if (*stability) return run_stability(stability_opts);
        if (*sweep_cmd) return run_sweep(sweep_opts, so, axis_opt->count() > 0);
        if (*hyst) return run_hysteresis(hyst_opts, h_from, h_to, h_points, t_hold);
        if (*figure) return run_figure(figure_opts, figure_id, figure_points);
        if (*validate_cmd) return run_validate(validate_path);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "config error (" << to_string(e.code()) << ") at " << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::UnknownScenario) {
            std::cerr << "error: " << e.what() << '\n';
            return 1;
        }
        std::cerr << "solver error (" << to_string(e.code()) << "): " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
