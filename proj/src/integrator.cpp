#include "nrcav/integrator.hpp"

#include "nrcav/error.hpp"

#include <algorithm>
#include <cmath>

namespace nrcav {

namespace {

// Dormand & Prince (1980) coefficients, dense output from Hairer's DOPRI5.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

// PI controller constants (Hairer, Norsett & Wanner).
constexpr double kSafety = 0.9;
constexpr double kBeta = 0.04;
constexpr double kExpo = 0.2 - kBeta * 0.75;
constexpr double kFacMin = 0.2;   // hnew >= 0.2 h
constexpr double kFacMax = 10.0;  // hnew <= 10 h

double error_norm(const RealState& err, const RealState& y0, const RealState& y1,
                  double rtol, double atol)
{
    double sum = 0.0;
    for (int i = 0; i < kStateDim; ++i) {
        const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const double r = err[i] / sc;
        sum += r * r;
    }
    return std::sqrt(sum / kStateDim);
}

double initial_step(const MeanFieldSystem& system, const RealState& y0, const RealState& f0,
                    double rtol, double atol, double span)
{
    RealState sc;
    for (int i = 0; i < kStateDim; ++i) {
        sc[i] = atol + rtol * std::abs(y0[i]);
    }
    const double dnf = (f0.array() / sc.array()).matrix().squaredNorm() / kStateDim;
    const double dny = (y0.array() / sc.array()).matrix().squaredNorm() / kStateDim;
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
    h = std::min(h, span);
    const RealState f1 = system.drift(RealState(y0 + h * f0));
    const double der2 =
        std::sqrt(((f1 - f0).array() / sc.array()).matrix().squaredNorm() / kStateDim) / h;
    const double der12 = std::max(der2, std::sqrt(dnf));
    const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3)
                                     : std::pow(0.01 / der12, 1.0 / 5.0);
    return std::min({100.0 * h, h1, span});
}

}  // namespace

RealState AcceptedStep::interpolate(double t) const
{
    const double theta = (t - t0) / h;
    const double theta1 = 1.0 - theta;
    return cont[0] +
           theta * (cont[1] + theta1 * (cont[2] + theta * (cont[3] + theta1 * cont[4])));
}

IntegrationStats integrate_dopri5(const MeanFieldSystem& system, const RealState& y_start,
                                  double t0, double t_end, const IntegratorOptions& opt,
                                  const std::function<StepControl(const AcceptedStep&)>& on_step)
{
    IntegrationStats stats;
    RealState y = y_start;
    double t = t0;
    RealState k1 = system.drift(y);
    const double span = t_end - t0;

    double h = opt.initial_step > 0.0 ? opt.initial_step
                                      : initial_step(system, y, k1, opt.rtol, opt.atol, span);
    if (opt.max_step > 0.0) {
        h = std::min(h, opt.max_step);
    }
    double fac_old = 1e-4;
    bool last_rejected = false;

    AcceptedStep step;
    while (t < t_end) {
        if (t + h > t_end || t_end - (t + h) < 1e-12 * std::max(1.0, std::abs(t_end))) {
            h = t_end - t;
        }
        if (h < opt.min_step) {
            throw Error(ErrorCode::StepUnderflow, "integration step fell below the minimum");
        }

        const RealState k2 = system.drift(RealState(y + h * a21 * k1));
        const RealState k3 = system.drift(RealState(y + h * (a31 * k1 + a32 * k2)));
        const RealState k4 = system.drift(RealState(y + h * (a41 * k1 + a42 * k2 + a43 * k3)));
        const RealState k5 =
            system.drift(RealState(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
        const RealState k6 = system.drift(
            RealState(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
        const RealState y1 =
            y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
        const RealState k7 = system.drift(y1);
        const RealState err =
            h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double en = error_norm(err, y, y1, opt.rtol, opt.atol);
        if (!std::isfinite(en)) {
            en = 1e10;
        }
        const double fac11 = std::pow(en, kExpo);

        if (en <= 1.0) {
            step.t0 = t;
            step.h = h;
            step.y0 = y;
            step.y1 = y1;
            step.f1 = k7;
            const RealState ydiff = y1 - y;
            const RealState bspl = h * k1 - ydiff;
            step.cont[0] = y;
            step.cont[1] = ydiff;
            step.cont[2] = bspl;
            step.cont[3] = ydiff - h * k7 - bspl;
            step.cont[4] = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);

            t = (h == t_end - step.t0) ? t_end : t + h;
            y = y1;
            k1 = k7;
            ++stats.accepted;

            double fac = fac11 / std::pow(fac_old, kBeta);
            fac = std::clamp(fac / kSafety, 1.0 / kFacMax, 1.0 / kFacMin);
            double h_new = h / fac;
            if (last_rejected) {
                h_new = std::min(h_new, h);
            }
            fac_old = std::max(en, 1e-4);
            last_rejected = false;

            if (!y.allFinite() || y.squaredNorm() > opt.blowup_norm) {
                stats.blew_up = true;
                break;
            }
            if (on_step && on_step(step) == StepControl::Stop) {
                stats.stopped = true;
                break;
            }
            h = opt.max_step > 0.0 ? std::min(h_new, opt.max_step) : h_new;
        } else {
            ++stats.rejected;
            h /= std::min(1.0 / kFacMin, fac11 / kSafety);
            last_rejected = true;
        }
    }
    stats.t_final = t;
    stats.y_final = y;
    return stats;
}

}  // namespace nrcav
