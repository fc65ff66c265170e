#pragma once

#include "nrcav/error.hpp"
#include "nrcav/model.hpp"
#include "nrcav/parallel.hpp"

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nrcav {

enum class Stability { Stable, Unstable };

std::string_view to_string(Stability s);

/// One fixed point of the mean-field system.
struct SteadyBranch {
    double I1 = 0.0;                 // |a1|^2
    StateVector state;
    Stability stability = Stability::Stable;
    double residual = 0.0;           // ||drift(state)||
    double max_real_eigenvalue = 0.0;
    int newton_iterations = 0;
};

/// c3 I^3 + c2 I^2 + c1 I + c0 = 0 in the cavity-1 intensity I.
struct CubicCoefficients {
    double c3 = 0.0;
    double c2 = 0.0;
    double c1 = 0.0;
    double c0 = 0.0;

    double operator()(double I) const;
};

/// Closed-form elimination of the stationarity conditions.
///
/// At a fixed point sigma_ge = 2 g sigma_z a1 / x3 and
/// sigma_z = -1 / (2 (1 + s I)) with s = 2 g^2 / |x3|^2, leaving
///
///     [A + B / (1 + s I)] a1 = D,   A = x1 + J^2/x2,  B = g^2/x3,
///
/// with D = -sqrt(kappa_e) eps_p (forward) or -i J sqrt(kappa_e) eps_p / x2
/// (backward). Squaring and clearing (1 + s I)^2 gives a real cubic.
struct SaturationReduction {
    cplx A;
    cplx B;
    double s = 0.0;
    cplx D;

    static SaturationReduction from(const SystemParams& params, Direction dir);

    /// |D|^2 as a function of I along the steady-state curve.
    double drive_intensity(double I) const;
};

/// Throws DegenerateParams for g == 0 or gamma == 0, SingularCoefficient if
/// x2 or x3 vanishes.
CubicCoefficients reduce_to_cubic(const SystemParams& params, Direction dir);

/// Back-substitutes a root into the full state. Throws NotARoot if the drift
/// residual of the result exceeds 1e-8.
StateVector lift(double I1, const SystemParams& params, Direction dir);

/// The unique fixed point of the g == 0 linear cavity pair. Throws
/// SingularLinearSystem when x1 x2 + J^2 vanishes.
SteadyBranch linear_solve(const SystemParams& params, Direction dir);

/// Eigenvalues of the realified Jacobian at state.
Eigen::Matrix<cplx, kStateDim, 1> jacobian_eigenvalues(const StateVector& state,
                                                       const SystemParams& params);

/// Labels by the largest eigenvalue real part; throws MarginalStability when
/// it lies within +-1e-9 of zero.
Stability classify(const StateVector& state, const SystemParams& params,
                   double* max_real_eigenvalue = nullptr);

struct NewtonOptions {
    double residual_tol = 1e-12;
    double step_tol = 1e-14;
    int max_iterations = 100;
};

/// Damped Newton on drift(s) = 0 in the 7 real coordinates, followed by
/// classification. Throws NoConvergence with the iteration count and the
/// final residual.
SteadyBranch newton_refine(const StateVector& guess, const SystemParams& params,
                           Direction dir, const NewtonOptions& options = {});

/// All steady branches sorted ascending by I1 (1 to 3 of them).
std::vector<SteadyBranch> enumerate_branches(const SystemParams& params, Direction dir);

/// eps_p^2 values at which two branches merge (double roots of the cubic),
/// ascending. Empty when the response is single-valued for every drive.
std::vector<double> turning_points(const SystemParams& params, Direction dir);

enum class SweepAxis { EpsPSq, G, J, Delta1, Delta2 };

std::string_view to_string(SweepAxis axis);
std::optional<SweepAxis> parse_axis(std::string_view text);
void set_axis(SystemParams& params, SweepAxis axis, double value);
double get_axis(const SystemParams& params, SweepAxis axis);

/// Branches at one grid point, or the error that stopped enumeration there.
struct BranchSet {
    double axis_value = 0.0;
    std::vector<SteadyBranch> branches;
    std::optional<ErrorCode> error;
    std::string message;
};

/// Independent enumeration at every grid point, assembled in grid order.
std::vector<BranchSet> continuation_sweep(const SystemParams& params, Direction dir,
                                          SweepAxis axis, std::span<const double> grid,
                                          const ExecPolicy& policy = {});

}  // namespace nrcav
