#pragma once

#include "nrcav/steady.hpp"

namespace nrcav {

/// Outgoing waveguide field: sqrt(kappa_e) a2 for Forward, sqrt(kappa_e) a1
/// for Backward. Meaningful for steady states only.
cplx output_amplitude(const StateVector& state, const SystemParams& params, Direction dir);

struct TransmissionRecord {
    Direction direction = Direction::Forward;
    double T = 0.0;  // |S_out|^2 / eps_p^2
    cplx out_amplitude;
    double branch_I1 = 0.0;
};

/// Throws ZeroDrive when eps_p == 0.
TransmissionRecord transmission(const SystemParams& params, Direction dir,
                                const SteadyBranch& branch);

/// 10 log10(T_L / T_R) in dB; positive when backward transmission wins.
/// Throws UndefinedRatio if either argument is <= 0.
double isolation_ratio(double T_L, double T_R);

}  // namespace nrcav
