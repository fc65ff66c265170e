#include "nrcav/experiments.hpp"

#include "nrcav/error.hpp"
#include "nrcav/observables.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace nrcav {

AxisSpec linspace_axis(SweepAxis axis, double start, double stop, std::size_t n)
{
    AxisSpec a{axis, std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        a.values[i] = n == 1 ? start
                             : start + (stop - start) * static_cast<double>(i) /
                                           static_cast<double>(n - 1);
    }
    return a;
}

AxisSpec open_axis(SweepAxis axis, double stop, std::size_t n)
{
    AxisSpec a{axis, std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        a.values[i] = stop * static_cast<double>(i + 1) / static_cast<double>(n);
    }
    return a;
}

namespace {

struct Marker {
    bool up = false;
    bool down = false;
    bool up_dynamic = false;
    bool down_dynamic = false;
};

std::string verdict_text(const Marker& m)
{
    if (!m.up && !m.down) {
        return "none";
    }
    std::string text = m.up && m.down ? "both" : (m.up ? "up" : "down");
    const bool dynamic = (!m.up || m.up_dynamic) && (!m.down || m.down_dynamic);
    return text + (dynamic ? ":settled" : ":tracked");
}

std::optional<double> isolation_or_flag(double T_L, double T_R)
{
    try {
        return isolation_ratio(T_L, T_R);
    } catch (const UndefinedRatio& e) {
        if (e.sign() > 0) {
            return std::numeric_limits<double>::infinity();
        }
        if (e.sign() < 0) {
            return -std::numeric_limits<double>::infinity();
        }
        return std::numeric_limits<double>::quiet_NaN();
    }
}

}  // namespace

SweepResult sweep(const SweepSpec& spec, const SystemParams& params, const ExecPolicy& policy,
                  std::string scenario)
{
    if (spec.hysteresis && spec.axis1.axis != SweepAxis::EpsPSq) {
        throw Error(ErrorCode::RangeError, "hysteresis scans need eps_p_sq as axis1");
    }
    const std::size_t n1 = spec.axis1.values.size();
    const std::size_t n2 = spec.axis2 ? spec.axis2->values.size() : 1;
    const std::size_t nd = spec.directions.size();
    const std::size_t lines = n2 * nd;

    auto line_params = [&](std::size_t i2) {
        SystemParams p = params;
        if (spec.axis2) {
            set_axis(p, spec.axis2->axis, spec.axis2->values[i2]);
        }
        return p;
    };

    // 1. Independent enumeration at every (axis2, direction, axis1) point.
    std::vector<BranchSet> sets(lines * n1);
    parallel_for(sets.size(), policy, [&](std::size_t idx) {
        const std::size_t line = idx / n1;
        const std::size_t i1 = idx % n1;
        const std::size_t i2 = line / nd;
        const Direction dir = spec.directions[line % nd];
        SystemParams p = line_params(i2);
        set_axis(p, spec.axis1.axis, spec.axis1.values[i1]);
        BranchSet& set = sets[idx];
        set.axis_value = spec.axis1.values[i1];
        try {
            set.branches = enumerate_branches(p, dir);
        } catch (const Error& e) {
            set.error = e.code();
            set.message = e.what();
        }
    });

    // 2. Branch selection along axis1 for each line, upward and downward.
    std::vector<std::vector<Selection>> up(lines);
    std::vector<std::vector<Selection>> down(lines);
    parallel_for(lines, policy, [&](std::size_t line) {
        const std::span<const BranchSet> path(sets.data() + line * n1, n1);
        std::vector<BranchSet> reversed(path.rbegin(), path.rend());

        std::vector<HysteresisStep> dyn_up;
        std::vector<HysteresisStep> dyn_down;
        if (spec.hysteresis && n1 > 0) {
            std::vector<double> schedule(spec.axis1.values);
            schedule.insert(schedule.end(), spec.axis1.values.rbegin() + 1,
                            spec.axis1.values.rend());
            const auto scan = hysteresis_scan(line_params(line / nd), spec.directions[line % nd],
                                              schedule, spec.t_hold, spec.settle);
            dyn_up.assign(scan.begin(), scan.begin() + static_cast<std::ptrdiff_t>(n1));
            dyn_down.assign(scan.begin() + static_cast<std::ptrdiff_t>(n1 - 1), scan.end());
        }
        up[line] = select_branches(path, dyn_up, spec.settle.match_tol);
        auto rev = select_branches(reversed, dyn_down, spec.settle.match_tol);
        down[line].assign(rev.rbegin(), rev.rend());
    });

    // 3. Assembly in grid order.
    SweepResult result;
    SweepMetadata meta;
    meta.scenario = std::move(scenario);
    meta.axis1 = std::string(to_string(spec.axis1.axis));
    meta.axis2 = spec.axis2 ? std::string(to_string(spec.axis2->axis)) : std::string();
    meta.params = params;
    meta.pt_balance = pt_balance(params);
    meta.hysteresis = spec.hysteresis;
    meta.t_hold = spec.hysteresis ? spec.t_hold : 0.0;

    const auto fwd = std::find(spec.directions.begin(), spec.directions.end(), Direction::Forward);
    const auto bwd = std::find(spec.directions.begin(), spec.directions.end(), Direction::Backward);

    for (std::size_t i2 = 0; i2 < n2; ++i2) {
        const SystemParams base = line_params(i2);
        for (std::size_t i1 = 0; i1 < n1; ++i1) {
            SystemParams p = base;
            set_axis(p, spec.axis1.axis, spec.axis1.values[i1]);
            const bool driven = p.eps_p > 0.0;

            auto selected_T = [&](std::size_t d) -> std::optional<double> {
                const std::size_t line = i2 * nd + d;
                const auto& set = sets[line * n1 + i1];
                const auto& sel = up[line][i1];
                if (set.error || !sel.branch || !driven) {
                    return std::nullopt;
                }
                return transmission(p, spec.directions[d], set.branches[*sel.branch]).T;
            };
            std::optional<double> iso;
            if (fwd != spec.directions.end() && bwd != spec.directions.end()) {
                const auto TR = selected_T(static_cast<std::size_t>(fwd - spec.directions.begin()));
                const auto TL = selected_T(static_cast<std::size_t>(bwd - spec.directions.begin()));
                if (TR && TL) {
                    iso = isolation_or_flag(*TL, *TR);
                }
            }

            for (std::size_t d = 0; d < nd; ++d) {
                const std::size_t line = i2 * nd + d;
                const auto& set = sets[line * n1 + i1];
                SweepRow row;
                row.direction = spec.directions[d];
                row.axis1 = spec.axis1.values[i1];
                if (spec.axis2) {
                    row.axis2 = spec.axis2->values[i2];
                }
                row.isolation_db = iso;
                if (set.error) {
                    row.branch = -1;
                    row.verdict = "error:" + std::string(to_string(*set.error));
                    result.rows.push_back(std::move(row));
                    continue;
                }
                for (std::size_t b = 0; b < set.branches.size(); ++b) {
                    const auto& br = set.branches[b];
                    SweepRow r = row;
                    r.branch = static_cast<int>(b);
                    r.I1 = br.I1;
                    r.stability = br.stability;
                    if (driven) {
                        r.T = transmission(p, row.direction, br).T;
                    }
                    Marker m;
                    m.up = up[line][i1].branch == b;
                    m.up_dynamic = up[line][i1].from_dynamics;
                    m.down = down[line][i1].branch == b;
                    m.down_dynamic = down[line][i1].from_dynamics;
                    r.verdict = verdict_text(m);
                    result.rows.push_back(std::move(r));
                }
            }
        }
    }
    result.metadata = std::move(meta);
    return result;
}

namespace {

constexpr std::array<std::string_view, 18> kScenarioIds = {
    "fig2a", "fig2b", "fig2c", "fig2d", "fig3",  "fig4a", "fig4b", "fig5a",
    "fig5b", "fig5c", "fig5d", "fig5e", "fig5f", "fig6a", "fig6b", "fig6c",
    "fig6d", "fig7",
};

SystemParams gain_reference()
{
    return SystemParams{};  // gamma=0.1, kappa1=-7.4, kappa_e=3.2, resonant
}

void rebuild_axis1(Scenario& s)
{
    const SweepAxis axis = s.spec.axis1.axis;
    s.spec.axis1 = s.axis1_start ? linspace_axis(axis, *s.axis1_start, s.axis1_stop, s.points)
                                 : open_axis(axis, s.axis1_stop, s.points);
}

Scenario bistability_family(std::string id, std::string description, SystemParams base,
                            double stop, SweepAxis family, std::vector<double> values)
{
    Scenario s;
    s.id = std::move(id);
    s.description = std::move(description);
    s.base = base;
    s.spec.axis1.axis = SweepAxis::EpsPSq;
    s.spec.axis2 = AxisSpec{family, std::move(values)};
    s.spec.hysteresis = true;
    s.axis1_stop = stop;
    return s;
}

std::string_view param_for_axis(SweepAxis axis)
{
    switch (axis) {
    case SweepAxis::EpsPSq: return "eps_p";
    case SweepAxis::G: return "g";
    case SweepAxis::J: return "J";
    case SweepAxis::Delta1: return "delta1";
    case SweepAxis::Delta2: return "delta2";
    }
    return "";
}

}  // namespace

std::span<const std::string_view> scenario_ids()
{
    return kScenarioIds;
}

Scenario make_scenario(std::string_view id)
{
    Scenario s;
    SystemParams passive = passive_reference();

    if (id == "fig2a" || id == "fig2b") {
        passive.J = 4.0;
        s = bistability_family(std::string(id),
                               id == "fig2a" ? "forward output |a2|^2 vs eps_p^2, curves over g"
                                             : "backward output |a1|^2 vs eps_p^2, curves over g",
                               passive, 3.0, SweepAxis::G, {2, 3, 4, 5, 6, 7});
    } else if (id == "fig2c" || id == "fig2d") {
        passive.g = 2.0;
        s = bistability_family(std::string(id),
                               id == "fig2c" ? "forward output vs eps_p^2, curves over J = g, 2g, 3g"
                                             : "backward output vs eps_p^2, curves over J = g, 2g, 3g",
                               passive, 1.0, SweepAxis::J, {2, 4, 6});
    } else if (id == "fig3") {
        passive.g = 2.0;
        passive.J = 4.0;
        s = bistability_family("fig3", "output vs eps_p^2, curves over cavity-probe detuning",
                               passive, 1.0, SweepAxis::Delta1, {0.0, 0.25, 0.5, 1.0});
    } else if (id == "fig4a" || id == "fig4b") {
        SystemParams p = passive;
        if (id == "fig4a") {
            p.g = 4.0;
        } else {
            p = gain_reference();
            p.g = 3.0;
        }
        p.J = 4.0;
        s.id = std::string(id);
        s.description = id == "fig4a" ? "passive-passive outputs and isolation vs eps_p^2"
                                      : "active-passive (PT) outputs and isolation vs eps_p^2";
        s.base = p;
        s.spec.axis1.axis = SweepAxis::EpsPSq;
        s.spec.hysteresis = true;
        s.axis1_stop = 1.5;
    } else if (id == "fig5a" || id == "fig5b") {
        s.id = std::string(id);
        s.description = "PT transmission and isolation vs g (J=4, eps_p=0.36)";
        s.base = gain_reference();
        s.spec.axis1.axis = SweepAxis::G;
        s.axis1_stop = 6.0;
    } else if (id == "fig5c" || id == "fig5d") {
        s.id = std::string(id);
        s.description = "PT transmission and isolation vs J (g=3, eps_p=0.39)";
        s.base = gain_reference();
        s.base.eps_p = 0.39;
        s.spec.axis1.axis = SweepAxis::J;
        s.axis1_stop = 8.0;
    } else if (id == "fig5e" || id == "fig5f") {
        s.id = std::string(id);
        s.description = "PT transmission and isolation vs eps_p^2 (g=3, J=4)";
        s.base = gain_reference();
        s.spec.axis1.axis = SweepAxis::EpsPSq;
        s.axis1_stop = 2.0;
    } else if (id == "fig6a" || id == "fig6b" || id == "fig6c" || id == "fig6d") {
        const bool first = id == "fig6a" || id == "fig6b";
        s.id = std::string(id);
        s.description = first ? "PT transmission and isolation vs delta1 (delta2=0)"
                              : "PT transmission and isolation vs delta2 (delta1=0)";
        s.base = gain_reference();
        s.spec.axis1.axis = first ? SweepAxis::Delta1 : SweepAxis::Delta2;
        s.axis1_start = -4.0;
        s.axis1_stop = 4.0;
    } else if (id == "fig7") {
        s.id = "fig7";
        s.description = "PT outputs vs eps_p^2 at weak cavity coupling (J=1): reversed direction";
        s.base = gain_reference();
        s.base.J = 1.0;
        s.spec.axis1.axis = SweepAxis::EpsPSq;
        s.spec.hysteresis = true;
        s.axis1_stop = 2.5;
    } else {
        throw Error(ErrorCode::UnknownScenario, "unknown scenario '" + std::string(id) + "'");
    }
    rebuild_axis1(s);
    return s;
}

bool set_param(SystemParams& p, std::string_view name, double value)
{
    if (name == "g") p.g = value;
    else if (name == "J") p.J = value;
    else if (name == "kappa1") p.kappa1 = value;
    else if (name == "kappa2") p.kappa2 = value;
    else if (name == "kappa_e") p.kappa_e = value;
    else if (name == "gamma") p.gamma = value;
    else if (name == "delta1") p.delta1 = value;
    else if (name == "delta2") p.delta2 = value;
    else if (name == "eps_p") p.eps_p = value;
    else return false;
    return true;
}

Scenario apply_overrides(Scenario s, const ScenarioOverrides& o)
{
    for (const auto& [name, value] : o.params) {
        const bool swept = name == param_for_axis(s.spec.axis1.axis) ||
                           (s.spec.axis2 && name == param_for_axis(s.spec.axis2->axis));
        if (swept) {
            throw ConfigError(ErrorCode::SchemaError, "params." + name,
                              "field is swept by scenario " + s.id);
        }
        if (!set_param(s.base, name, value)) {
            throw ConfigError(ErrorCode::SchemaError, "params." + name, "unknown field");
        }
    }
    try {
        validate(s.base);
    } catch (const Error& e) {
        throw ConfigError(ErrorCode::RangeError, "params", e.what());
    }
    if (o.points) {
        if (*o.points == 0) {
            throw ConfigError(ErrorCode::RangeError, "grid.points", "must be >= 1");
        }
        s.points = *o.points;
    }
    if (o.start) {
        s.axis1_start = o.start;
    }
    if (o.stop) {
        s.axis1_stop = *o.stop;
    }
    if (o.axis2_values) {
        if (!s.spec.axis2) {
            throw ConfigError(ErrorCode::SchemaError, "grid.axis2",
                              "scenario " + s.id + " has no second axis");
        }
        s.spec.axis2->values = *o.axis2_values;
    }
    if (o.t_hold) {
        s.spec.t_hold = *o.t_hold;
    }
    rebuild_axis1(s);
    return s;
}

SweepResult run_scenario(std::string_view id, const ScenarioOverrides& overrides,
                         const ExecPolicy& policy)
{
    const Scenario s = apply_overrides(make_scenario(id), overrides);
    SweepResult r = sweep(s.spec, s.base, policy, s.id);
    r.metadata->description = s.description;
    return r;
}

}  // namespace nrcav
