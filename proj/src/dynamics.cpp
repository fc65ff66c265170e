#include "nrcav/dynamics.hpp"

#include "nrcav/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nrcav {

std::string_view to_string(Verdict v)
{
    switch (v) {
    case Verdict::Settled: return "settled";
    case Verdict::BlowUp: return "blow_up";
    case Verdict::NotSettled: return "not_settled";
    }
    return "?";
}

Trajectory integrate(const SystemParams& params, Direction dir, const StateVector& initial,
                     double t_end, double rtol, double atol,
                     std::span<const double> sample_times)
{
    if (!(t_end > 0.0)) {
        throw Error(ErrorCode::RangeError, "t_end must be > 0");
    }
    if (!(rtol > 0.0 && rtol <= 1e-2 && atol > 0.0 && atol <= 1e-2)) {
        throw Error(ErrorCode::RangeError, "tolerances must lie in (0, 1e-2]");
    }
    for (std::size_t i = 0; i < sample_times.size(); ++i) {
        const double ts = sample_times[i];
        if (!(ts > 0.0 && ts <= t_end) || (i > 0 && !(ts > sample_times[i - 1]))) {
            throw Error(ErrorCode::RangeError,
                        "sample times must increase strictly within (0, t_end]");
        }
    }

    const MeanFieldSystem system(params, dir);
    IntegratorOptions opt;
    opt.rtol = rtol;
    opt.atol = atol;

    Trajectory traj;
    traj.times.push_back(0.0);
    traj.states.push_back(initial);
    std::size_t next_sample = 0;

    const auto stats = integrate_dopri5(
        system, realify(initial), 0.0, t_end, opt, [&](const AcceptedStep& step) {
            const double t1 = step.t0 + step.h;
            if (sample_times.empty()) {
                traj.times.push_back(t1);
                traj.states.push_back(complexify(step.y1));
            } else {
                while (next_sample < sample_times.size() && sample_times[next_sample] <= t1) {
                    const double ts = sample_times[next_sample++];
                    traj.times.push_back(ts);
                    traj.states.push_back(
                        complexify(ts == t1 ? step.y1 : step.interpolate(ts)));
                }
            }
            return StepControl::Continue;
        });

    traj.accepted_steps = stats.accepted;
    traj.rejected_steps = stats.rejected;
    traj.verdict_time = stats.t_final;
    if (stats.blew_up) {
        traj.verdict = Verdict::BlowUp;
        if (!sample_times.empty() && stats.t_final > traj.times.back()) {
            // Record where it went, so the last state shows the blow-up.
            traj.times.push_back(stats.t_final);
            traj.states.push_back(complexify(stats.y_final));
        }
    } else {
        const double r = system.drift(stats.y_final).norm();
        traj.verdict = r < 1e-10 ? Verdict::Settled : Verdict::NotSettled;
    }
    return traj;
}

std::optional<std::size_t> match_branch(double I1, std::span<const SteadyBranch> branches,
                                        double tol, bool* ambiguous)
{
    if (ambiguous != nullptr) {
        *ambiguous = false;
    }
    std::optional<std::size_t> best;
    std::size_t within = 0;
    for (std::size_t k = 0; k < branches.size(); ++k) {
        const double gap = std::abs(branches[k].I1 - I1);
        if (gap <= tol) {
            ++within;
        }
        if (!best || gap < std::abs(branches[*best].I1 - I1)) {
            best = k;
        }
    }
    if (within > 1) {
        if (ambiguous != nullptr) {
            *ambiguous = true;
        }
        return std::nullopt;
    }
    if (within == 0) {
        return std::nullopt;
    }
    return best;
}

namespace {

// Integrates from initial until settled/blow-up or t_limit.
//
// Close to an attractor an adaptive step drifts up to the stability boundary
// of the method, where step rejections leave a jitter of order rtol*|y| that
// can sit above drift_tol. Once the drift is below polish_drift the run
// therefore continues with the step capped at 1/||Jacobian||_inf, well inside
// the stability region, where the discrete map contracts onto the fixed point.
SettleResult run_until_settled(const MeanFieldSystem& system, const StateVector& initial,
                               double t_limit, const SettleOptions& options)
{
    SettleResult out;
    const RealState y0 = realify(initial);
    const double r0 = system.drift(y0).norm();
    if (r0 < options.drift_tol) {
        out.verdict = Verdict::Settled;
        out.state = initial;
        out.I1 = std::norm(initial.a1);
        out.drift_norm = r0;
        return out;
    }

    double last_drift = r0;
    const bool polish = options.polish_drift > options.drift_tol;
    auto stats = integrate_dopri5(
        system, y0, 0.0, t_limit, options.integrator, [&](const AcceptedStep& step) {
            last_drift = step.f1.norm();
            const bool stop = last_drift < options.drift_tol ||
                              (polish && last_drift < options.polish_drift);
            return stop ? StepControl::Stop : StepControl::Continue;
        });

    if (stats.stopped && last_drift >= options.drift_tol && stats.t_final < t_limit) {
        IntegratorOptions fine = options.integrator;
        const double bound = system.jacobian(complexify(stats.y_final))
                                 .cwiseAbs()
                                 .rowwise()
                                 .sum()
                                 .maxCoeff();
        fine.max_step = 1.0 / std::max(bound, 1e-12);
        if (options.integrator.max_step > 0.0) {
            fine.max_step = std::min(fine.max_step, options.integrator.max_step);
        }
        fine.initial_step = fine.max_step;
        const double t0 = stats.t_final;
        const std::size_t accepted = stats.accepted;
        const std::size_t rejected = stats.rejected;
        stats = integrate_dopri5(
            system, stats.y_final, t0, t_limit, fine, [&](const AcceptedStep& step) {
                last_drift = step.f1.norm();
                return last_drift < options.drift_tol ? StepControl::Stop : StepControl::Continue;
            });
        stats.accepted += accepted;
        stats.rejected += rejected;
    }

    out.time = stats.t_final;
    out.state = complexify(stats.y_final);
    out.I1 = std::norm(out.state.a1);
    out.drift_norm = last_drift;
    if (stats.blew_up) {
        out.verdict = Verdict::BlowUp;
        out.I1 = std::numeric_limits<double>::quiet_NaN();
    } else if (stats.stopped && last_drift < options.drift_tol) {
        out.verdict = Verdict::Settled;
    } else {
        out.verdict = Verdict::NotSettled;
    }
    return out;
}

}  // namespace

SettleResult settle(const SystemParams& params, Direction dir, const StateVector& initial,
                    std::span<const SteadyBranch> branches, const SettleOptions& options)
{
    const MeanFieldSystem system(params, dir);
    SettleResult out = run_until_settled(system, initial, options.t_max, options);
    if (out.verdict == Verdict::Settled) {
        out.branch = match_branch(out.I1, branches, options.match_tol, &out.ambiguous);
    }
    return out;
}

SettleResult settle(const SystemParams& params, Direction dir, const StateVector& initial,
                    const SettleOptions& options)
{
    std::vector<SteadyBranch> branches;
    try {
        branches = enumerate_branches(params, dir);
    } catch (const Error&) {
        // Nothing to match against; the verdict itself is still meaningful.
    }
    return settle(params, dir, initial, branches, options);
}

std::vector<HysteresisStep> hysteresis_scan(const SystemParams& params, Direction dir,
                                            std::span<const double> schedule, double t_hold,
                                            const SettleOptions& options)
{
    if (!(t_hold >= 50.0)) {
        throw Error(ErrorCode::RangeError, "t_hold must be >= 50 (units of 1/kappa2)");
    }
    for (double e : schedule) {
        if (!(e >= 0.0) || !std::isfinite(e)) {
            throw Error(ErrorCode::RangeError, "eps_p^2 schedule values must be finite and >= 0");
        }
    }

    std::vector<HysteresisStep> out;
    out.reserve(schedule.size());
    StateVector carried = StateVector::ground();
    for (double eps_sq : schedule) {
        SystemParams p = params;
        p.eps_p = std::sqrt(eps_sq);
        const MeanFieldSystem system(p, dir);
        const SettleResult r = run_until_settled(system, carried, t_hold, options);

        HysteresisStep step;
        step.eps_sq = eps_sq;
        step.verdict = r.verdict;
        step.state = r.state;
        step.I1 = r.I1;
        out.push_back(step);
        carried = r.verdict == Verdict::BlowUp ? StateVector::ground() : r.state;
    }
    return out;
}

std::vector<double> up_down_schedule(double lo, double hi, std::size_t n)
{
    std::vector<double> up(n);
    for (std::size_t i = 0; i < n; ++i) {
        up[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    std::vector<double> out = up;
    for (std::size_t i = n; i-- > 1;) {
        out.push_back(up[i - 1]);
    }
    return out;
}

LoopWindow hysteresis_window(std::span<const HysteresisStep> scan, double rel_tol)
{
    LoopWindow w;
    if (scan.empty()) {
        return w;
    }
    const auto peak = static_cast<std::size_t>(
        std::max_element(scan.begin(), scan.end(),
                         [](const auto& a, const auto& b) { return a.eps_sq < b.eps_sq; }) -
        scan.begin());
    for (std::size_t i = 0; i <= peak; ++i) {
        const auto& up = scan[i];
        // mirrored index in the downward pass
        const std::size_t j = 2 * peak - i;
        if (j >= scan.size() || scan[j].eps_sq != up.eps_sq) {
            continue;
        }
        const auto& down = scan[j];
        if (!std::isfinite(up.I1) || !std::isfinite(down.I1)) {
            continue;
        }
        const double ref = std::max({std::abs(up.I1), std::abs(down.I1), 1e-12});
        if (std::abs(up.I1 - down.I1) > rel_tol * ref) {
            if (!w.present) {
                w.present = true;
                w.lo = up.eps_sq;
                w.hi = up.eps_sq;
            } else {
                w.lo = std::min(w.lo, up.eps_sq);
                w.hi = std::max(w.hi, up.eps_sq);
            }
        }
    }
    return w;
}

std::vector<Selection> select_branches(std::span<const BranchSet> path,
                                       std::span<const HysteresisStep> dynamics,
                                       double match_tol)
{
    std::vector<Selection> out(path.size());
    std::optional<double> reference;
    for (std::size_t k = 0; k < path.size(); ++k) {
        const auto& set = path[k];
        if (set.error || set.branches.empty()) {
            continue;
        }
        const auto& branches = set.branches;
        Selection sel;
        if (k < dynamics.size() && dynamics[k].verdict == Verdict::Settled) {
            sel.branch = match_branch(dynamics[k].I1, branches, match_tol);
            sel.from_dynamics = sel.branch.has_value();
        }
        if (!sel.branch) {
            if (!reference) {
                sel.branch = 0;
            } else {
                const bool any_stable =
                    std::any_of(branches.begin(), branches.end(), [](const SteadyBranch& b) {
                        return b.stability == Stability::Stable;
                    });
                double best = std::numeric_limits<double>::infinity();
                for (std::size_t i = 0; i < branches.size(); ++i) {
                    if (any_stable && branches[i].stability != Stability::Stable) {
                        continue;
                    }
                    const double gap = std::abs(branches[i].I1 - *reference);
                    if (gap < best) {
                        best = gap;
                        sel.branch = i;
                    }
                }
            }
        }
        reference = branches[*sel.branch].I1;
        out[k] = sel;
    }
    return out;
}

}  // namespace nrcav
