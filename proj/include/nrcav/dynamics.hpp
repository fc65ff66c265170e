#pragma once

#include "nrcav/integrator.hpp"
#include "nrcav/steady.hpp"

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace nrcav {

enum class Verdict { Settled, BlowUp, NotSettled };

std::string_view to_string(Verdict v);

struct Trajectory {
    std::vector<double> times;
    std::vector<StateVector> states;
    Verdict verdict = Verdict::NotSettled;
    double verdict_time = 0.0;  // blow-up time for BlowUp, end time otherwise
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
};

/// Integrates the realified system from initial over [0, t_end]. With an
/// empty sample_times every accepted step is recorded; otherwise the dense
/// output is sampled at those (increasing, in (0, t_end]) times. The verdict
/// is BlowUp if the state norm passes 1e6, Settled if the final drift is
/// below 1e-10, else NotSettled.
Trajectory integrate(const SystemParams& params, Direction dir, const StateVector& initial,
                     double t_end, double rtol = 1e-9, double atol = 1e-12,
                     std::span<const double> sample_times = {});

struct SettleOptions {
    double drift_tol = 1e-10;
    double t_max = 1e4;
    double match_tol = 1e-4;
    double polish_drift = 1e-6;  // switch to stability-limited steps below this
    IntegratorOptions integrator;
};

struct SettleResult {
    Verdict verdict = Verdict::NotSettled;
    double time = 0.0;
    StateVector state;
    double I1 = 0.0;
    double drift_norm = 0.0;
    std::optional<std::size_t> branch;  // index into the branches matched against
    bool ambiguous = false;             // two branches within match_tol
};

/// Runs until ||drift|| < drift_tol (Settled), the norm passes the blow-up
/// threshold (BlowUp) or t > t_max (NotSettled). A Settled state is matched
/// to the nearest branch in I1 when the gap is below match_tol.
SettleResult settle(const SystemParams& params, Direction dir, const StateVector& initial,
                    std::span<const SteadyBranch> branches, const SettleOptions& options = {});

/// Same, matching against enumerate_branches(params, dir).
SettleResult settle(const SystemParams& params, Direction dir, const StateVector& initial,
                    const SettleOptions& options = {});

/// Nearest-I1 match; nullopt when nothing is within tol or the match is
/// ambiguous (ambiguous is then set).
std::optional<std::size_t> match_branch(double I1, std::span<const SteadyBranch> branches,
                                        double tol, bool* ambiguous = nullptr);

struct HysteresisStep {
    double eps_sq = 0.0;
    double I1 = 0.0;  // NaN after a blow-up
    Verdict verdict = Verdict::NotSettled;
    StateVector state;
};

/// Quasi-static drive protocol: at each eps_p^2 of the schedule the state
/// carried from the previous step is held for up to t_hold (stopping early
/// once settled). A blow-up reseeds the next step from the ground state.
std::vector<HysteresisStep> hysteresis_scan(const SystemParams& params, Direction dir,
                                            std::span<const double> eps_sq_schedule,
                                            double t_hold = 200.0,
                                            const SettleOptions& options = {});

/// n values from lo to hi followed by the same values back down (hi once).
std::vector<double> up_down_schedule(double lo, double hi, std::size_t n);

struct LoopWindow {
    bool present = false;
    double lo = 0.0;  // first drive where the up and down passes disagree
    double hi = 0.0;  // last such drive

    double width() const { return present ? hi - lo : 0.0; }
};

/// Compares the upward and downward halves of an up-down scan; points where
/// the observed I1 differ by more than rel_tol (relative) form the loop. The
/// default sits well above the lag left by a finite hold on steep monostable
/// curves and well below the branch separation inside a real loop.
LoopWindow hysteresis_window(std::span<const HysteresisStep> scan, double rel_tol = 5e-2);

/// Which branch is physically occupied at each point of a one-parameter
/// path. A Settled dynamic verdict decides by nearest I1; otherwise the
/// previous selection is continued quasi-statically (nearest I1, Stable
/// branches preferred), starting from the lowest branch.
struct Selection {
    std::optional<std::size_t> branch;
    bool from_dynamics = false;
};

std::vector<Selection> select_branches(std::span<const BranchSet> path,
                                       std::span<const HysteresisStep> dynamics = {},
                                       double match_tol = 1e-4);

}  // namespace nrcav
