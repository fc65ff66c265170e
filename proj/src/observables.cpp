#include "nrcav/observables.hpp"

#include "nrcav/error.hpp"

#include <cmath>

namespace nrcav {

cplx output_amplitude(const StateVector& state, const SystemParams& params, Direction dir)
{
    const double root_ke = std::sqrt(params.kappa_e);
    return root_ke * (dir == Direction::Forward ? state.a2 : state.a1);
}

TransmissionRecord transmission(const SystemParams& params, Direction dir,
                                const SteadyBranch& branch)
{
    if (params.eps_p == 0.0) {
        throw Error(ErrorCode::ZeroDrive, "transmission is undefined without a probe");
    }
    TransmissionRecord rec;
    rec.direction = dir;
    rec.out_amplitude = output_amplitude(branch.state, params, dir);
    rec.T = std::norm(rec.out_amplitude) / (params.eps_p * params.eps_p);
    rec.branch_I1 = branch.I1;
    return rec;
}

double isolation_ratio(double T_L, double T_R)
{
    const bool left_ok = T_L > 0.0;
    const bool right_ok = T_R > 0.0;
    if (!left_ok || !right_ok) {
        const int sign = left_ok ? +1 : (right_ok ? -1 : 0);
        throw UndefinedRatio(sign, "isolation ratio needs T_L > 0 and T_R > 0");
    }
    // difference of logs keeps isolation_ratio(a, b) == -isolation_ratio(b, a) exact
    return 10.0 * (std::log10(T_L) - std::log10(T_R));
}

}  // namespace nrcav
