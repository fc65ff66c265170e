#pragma once

#include "nrcav/params.hpp"

#include <Eigen/Core>

#include <complex>

namespace nrcav {

using cplx = std::complex<double>;

/// Number of real coordinates of the mean-field state.
inline constexpr int kStateDim = 7;

using RealState = Eigen::Matrix<double, kStateDim, 1>;
using RealJacobian = Eigen::Matrix<double, kStateDim, kStateDim>;

/// Mean-field amplitudes. sigma_z = (sigma_ee - sigma_gg)/2, so the undriven
/// ground state has sigma_z = -1/2.
struct StateVector {
    cplx a1{};
    cplx a2{};
    cplx sigma_ge{};
    double sigma_z = -0.5;

    static StateVector ground() { return {}; }

    friend bool operator==(const StateVector&, const StateVector&) = default;
};

// Realified layout, fixed everywhere:
// (Re a1, Im a1, Re a2, Im a2, Re sigma_ge, Im sigma_ge, sigma_z).
RealState realify(const StateVector& s);
StateVector complexify(const RealState& y);

/// Euclidean norm in realified coordinates.
double norm(const StateVector& s);
double distance(const StateVector& a, const StateVector& b);

struct DriftCoefficients {
    cplx x1;  // -(i delta1 + kappa1/2 + kappa_e/2)
    cplx x2;  // -(i delta1 + kappa2/2 + kappa_e/2)
    cplx x3;  // -i(delta1 + delta2) - gamma/2
};

DriftCoefficients coefficients(const SystemParams& params);

/// Drive amplitude sqrt(kappa_e) eps_p entering the driven cavity.
double drive_amplitude(const SystemParams& params);

/// Direction-dependent mean-field vector field with coefficients computed
/// once. Cheap to copy; holds no mutable state.
class MeanFieldSystem {
public:
    MeanFieldSystem(const SystemParams& params, Direction dir);

    StateVector drift(const StateVector& s) const;
    RealState drift(const RealState& y) const;

    /// d(drift)/d(state) in realified coordinates. The drive is constant, so
    /// the result does not depend on the direction.
    RealJacobian jacobian(const StateVector& s) const;

    const SystemParams& params() const noexcept { return params_; }
    Direction direction() const noexcept { return dir_; }
    const DriftCoefficients& coeffs() const noexcept { return coeffs_; }

private:
    SystemParams params_;
    Direction dir_;
    DriftCoefficients coeffs_;
    double drive1_;  // source into cavity 1
    double drive2_;  // source into cavity 2
};

StateVector drift(const StateVector& s, const SystemParams& params, Direction dir);
RealJacobian jacobian(const StateVector& s, const SystemParams& params, Direction dir);

/// Net effective cavity rate (kappa1+kappa_e)/2 + (kappa2+kappa_e)/2; zero
/// when the gain of cavity 1 balances the loss of cavity 2.
double pt_balance(const SystemParams& params);

}  // namespace nrcav
