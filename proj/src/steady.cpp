#include "nrcav/steady.hpp"

#include "nrcav/cubic.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>

namespace nrcav {

namespace {

constexpr cplx I_unit{0.0, 1.0};
constexpr double kMarginalMargin = 1e-9;
constexpr double kLiftTolerance = 1e-8;
constexpr double kNegativeRootClamp = 1e-12;
constexpr double kDuplicateDistance = 1e-9;

}  // namespace

std::string_view to_string(Stability s)
{
    return s == Stability::Stable ? "stable" : "unstable";
}

double CubicCoefficients::operator()(double I) const
{
    return eval_cubic({c3, c2, c1, c0}, I);
}

SaturationReduction SaturationReduction::from(const SystemParams& p, Direction dir)
{
    const auto [x1, x2, x3] = coefficients(p);
    if (x2 == cplx{} || x3 == cplx{}) {
        throw Error(ErrorCode::SingularCoefficient,
                    "x2 or x3 vanishes; the elimination divides by it");
    }
    SaturationReduction r;
    r.A = x1 + p.J * p.J / x2;
    r.B = p.g * p.g / x3;
    r.s = 2.0 * p.g * p.g / std::norm(x3);
    const double f = drive_amplitude(p);
    r.D = dir == Direction::Forward ? cplx{-f, 0.0} : -I_unit * p.J * f / x2;
    return r;
}

double SaturationReduction::drive_intensity(double I) const
{
    const double q = 1.0 + s * I;
    return I * std::norm(A * q + B) / (q * q);
}

CubicCoefficients reduce_to_cubic(const SystemParams& p, Direction dir)
{
    if (p.g == 0.0 || p.gamma == 0.0) {
        throw Error(ErrorCode::DegenerateParams,
                    "cubic reduction needs g > 0 and gamma > 0; use linear_solve for g = 0");
    }
    const auto r = SaturationReduction::from(p, dir);
    // |(A + B) + A s I|^2 I = |D|^2 (1 + s I)^2
    const cplx P = r.A + r.B;
    const cplx Q = r.A * r.s;
    const double d = std::norm(r.D);
    CubicCoefficients c;
    c.c3 = std::norm(Q);
    c.c2 = 2.0 * (P * std::conj(Q)).real() - d * r.s * r.s;
    c.c1 = std::norm(P) - 2.0 * d * r.s;
    c.c0 = -d;
    return c;
}

StateVector lift(double I1, const SystemParams& p, Direction dir)
{
    const auto r = SaturationReduction::from(p, dir);
    const auto [x1, x2, x3] = coefficients(p);
    const double q = 1.0 + r.s * I1;
    const cplx bracket = r.A + r.B / q;

    StateVector s;
    s.a1 = bracket == cplx{} ? cplx{} : r.D / bracket;
    const double f2 = dir == Direction::Backward ? drive_amplitude(p) : 0.0;
    s.a2 = (I_unit * p.J * s.a1 - f2) / x2;
    s.sigma_z = -1.0 / (2.0 * q);
    s.sigma_ge = 2.0 * p.g * s.sigma_z * s.a1 / x3;

    const double residual = norm(drift(s, p, dir));
    if (!(residual <= kLiftTolerance)) {
        throw Error(ErrorCode::NotARoot, "lifted state has drift residual above 1e-8");
    }
    return s;
}

Eigen::Matrix<cplx, kStateDim, 1> jacobian_eigenvalues(const StateVector& state,
                                                       const SystemParams& params)
{
    // The Jacobian is direction independent; either direction will do.
    const RealJacobian m = jacobian(state, params, Direction::Forward);
    Eigen::EigenSolver<RealJacobian> solver(m, false);
    return solver.eigenvalues();
}

Stability classify(const StateVector& state, const SystemParams& params,
                   double* max_real_eigenvalue)
{
    const auto eig = jacobian_eigenvalues(state, params);
    double max_re = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < kStateDim; ++k) {
        max_re = std::max(max_re, eig[k].real());
    }
    if (max_real_eigenvalue != nullptr) {
        *max_real_eigenvalue = max_re;
    }
    if (std::abs(max_re) <= kMarginalMargin) {
        throw Error(ErrorCode::MarginalStability,
                    "largest Jacobian eigenvalue real part is within 1e-9 of zero");
    }
    return max_re < 0.0 ? Stability::Stable : Stability::Unstable;
}

namespace {

SteadyBranch make_branch(const StateVector& s, const SystemParams& p, Direction dir,
                         int iterations)
{
    SteadyBranch b;
    b.state = s;
    b.I1 = std::norm(s.a1);
    b.residual = norm(drift(s, p, dir));
    b.newton_iterations = iterations;
    b.stability = classify(s, p, &b.max_real_eigenvalue);
    return b;
}

}  // namespace

SteadyBranch linear_solve(const SystemParams& p, Direction dir)
{
    const auto [x1, x2, x3] = coefficients(p);
    const cplx det = x1 * x2 + p.J * p.J;
    const double scale = std::max({std::abs(x1 * x2), p.J * p.J, 1.0});
    if (std::abs(det) <= 1e-14 * scale) {
        throw Error(ErrorCode::SingularLinearSystem,
                    "x1 x2 + J^2 vanishes: undamped linear cavity mode");
    }
    const double f = drive_amplitude(p);
    const double f1 = dir == Direction::Forward ? f : 0.0;
    const double f2 = dir == Direction::Backward ? f : 0.0;

    StateVector s;
    s.a1 = (-f1 * x2 - I_unit * p.J * f2) / det;
    s.a2 = (-f2 * x1 - I_unit * p.J * f1) / det;
    s.sigma_ge = cplx{};
    s.sigma_z = -0.5;
    return make_branch(s, p, dir, 0);
}

SteadyBranch newton_refine(const StateVector& guess, const SystemParams& p, Direction dir,
                           const NewtonOptions& options)
{
    const MeanFieldSystem system(p, dir);
    RealState y = realify(guess);
    RealState f = system.drift(y);
    double residual = f.norm();
    if (!std::isfinite(residual)) {
        throw NoConvergence(0, residual);
    }

    int iterations = 0;
    bool converged = residual < options.residual_tol;
    while (!converged && iterations < options.max_iterations) {
        ++iterations;
        const RealJacobian jac = system.jacobian(complexify(y));
        const RealState step = jac.fullPivLu().solve(-f);
        if (!step.allFinite()) {
            throw NoConvergence(static_cast<std::size_t>(iterations), residual);
        }

        // Backtracking on the residual norm.
        double lambda = 1.0;
        bool accepted = false;
        RealState y_try;
        RealState f_try;
        while (lambda >= 1.0 / 1024.0) {
            y_try = y + lambda * step;
            f_try = system.drift(y_try);
            if (f_try.norm() < residual) {
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted) {
            // No decrease along the Newton direction: either at the rounding
            // floor or stuck.
            if (residual < 1e-10) {
                break;
            }
            throw NoConvergence(static_cast<std::size_t>(iterations), residual);
        }
        y = y_try;
        f = f_try;
        residual = f.norm();
        if (residual < options.residual_tol) {
            converged = true;
        } else if ((lambda * step).norm() < options.step_tol) {
            if (residual >= 1e-10) {
                throw NoConvergence(static_cast<std::size_t>(iterations), residual);
            }
            converged = true;
        }
    }
    if (!converged && residual >= 1e-10) {
        throw NoConvergence(static_cast<std::size_t>(iterations), residual);
    }
    return make_branch(complexify(y), p, dir, iterations);
}

std::vector<SteadyBranch> enumerate_branches(const SystemParams& p, Direction dir)
{
    validate(p);
    if (p.g == 0.0) {
        return {linear_solve(p, dir)};
    }
    const auto c = reduce_to_cubic(p, dir);

    std::vector<SteadyBranch> branches;
    for (double root : real_cubic_roots(c.c3, c.c2, c.c1, c.c0)) {
        if (root < -kNegativeRootClamp) {
            continue;
        }
        const double I1 = std::max(root, 0.0);
        auto branch = newton_refine(lift(I1, p, dir), p, dir);
        const bool duplicate =
            std::any_of(branches.begin(), branches.end(), [&](const SteadyBranch& b) {
                return distance(b.state, branch.state) < kDuplicateDistance;
            });
        if (!duplicate) {
            branches.push_back(std::move(branch));
        }
    }
    std::sort(branches.begin(), branches.end(),
              [](const SteadyBranch& a, const SteadyBranch& b) { return a.I1 < b.I1; });
    return branches;
}

std::vector<double> turning_points(const SystemParams& p, Direction dir)
{
    if (p.g == 0.0 || p.gamma == 0.0) {
        return {};
    }
    const auto r = SaturationReduction::from(p, dir);
    const cplx P = r.A + r.B;
    const cplx Q = r.A * r.s;
    const double n3 = std::norm(Q);
    const double n2 = 2.0 * (P * std::conj(Q)).real();
    const double n1 = std::norm(P);
    // d|D|^2/dI = 0 along the steady curve |D|^2 = I |P + Q I|^2 / (1 + s I)^2
    const auto critical =
        real_cubic_roots(r.s * n3, 3.0 * n3, 2.0 * n2 - r.s * n1, n1);

    // |D|^2 = k eps_p^2 with k independent of eps_p.
    SystemParams unit = p;
    unit.eps_p = 1.0;
    const double k = std::norm(SaturationReduction::from(unit, dir).D);
    std::vector<double> out;
    if (k == 0.0) {
        return out;
    }
    for (double I : critical) {
        if (I > 0.0) {
            const double d = r.drive_intensity(I);
            if (d > 0.0) {
                out.push_back(d / k);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string_view to_string(SweepAxis axis)
{
    switch (axis) {
    case SweepAxis::EpsPSq: return "eps_p_sq";
    case SweepAxis::G: return "g";
    case SweepAxis::J: return "J";
    case SweepAxis::Delta1: return "delta1";
    case SweepAxis::Delta2: return "delta2";
    }
    return "?";
}

std::optional<SweepAxis> parse_axis(std::string_view text)
{
    for (auto axis : {SweepAxis::EpsPSq, SweepAxis::G, SweepAxis::J, SweepAxis::Delta1,
                      SweepAxis::Delta2}) {
        if (text == to_string(axis)) {
            return axis;
        }
    }
    return std::nullopt;
}

void set_axis(SystemParams& p, SweepAxis axis, double value)
{
    switch (axis) {
    case SweepAxis::EpsPSq: p.eps_p = std::sqrt(value); break;
    case SweepAxis::G: p.g = value; break;
    case SweepAxis::J: p.J = value; break;
    case SweepAxis::Delta1: p.delta1 = value; break;
    case SweepAxis::Delta2: p.delta2 = value; break;
    }
}

double get_axis(const SystemParams& p, SweepAxis axis)
{
    switch (axis) {
    case SweepAxis::EpsPSq: return p.eps_p * p.eps_p;
    case SweepAxis::G: return p.g;
    case SweepAxis::J: return p.J;
    case SweepAxis::Delta1: return p.delta1;
    case SweepAxis::Delta2: return p.delta2;
    }
    return 0.0;
}

std::vector<BranchSet> continuation_sweep(const SystemParams& params, Direction dir,
                                          SweepAxis axis, std::span<const double> grid,
                                          const ExecPolicy& policy)
{
    std::vector<BranchSet> out(grid.size());
    parallel_for(grid.size(), policy, [&](std::size_t i) {
        BranchSet& row = out[i];
        row.axis_value = grid[i];
        SystemParams p = params;
        set_axis(p, axis, grid[i]);
        try {
            row.branches = enumerate_branches(p, dir);
        } catch (const Error& e) {
            row.error = e.code();
            row.message = e.what();
        }
    });
    return out;
}

}  // namespace nrcav
