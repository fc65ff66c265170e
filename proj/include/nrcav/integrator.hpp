#pragma once

#include "nrcav/model.hpp"

#include <cstddef>
#include <functional>

namespace nrcav {

struct IntegratorOptions {
    double rtol = 1e-9;
    double atol = 1e-12;
    double initial_step = 0.0;   // 0: pick automatically
    double max_step = 0.0;       // 0: unbounded
    double min_step = 1e-14;     // StepUnderflow below this
    // Runaway threshold on the squared state norm (intracavity photon number
    // plus O(1) emitter terms); past it the Rabi frequency 2g|a1| makes
    // further integration pointless.
    double blowup_norm = 1e6;
};

/// One accepted Dormand-Prince step, with the data for its quartic dense
/// output on [t0, t0 + h].
struct AcceptedStep {
    double t0 = 0.0;
    double h = 0.0;
    RealState y0;
    RealState y1;
    RealState f1;  // drift at y1 (first stage of the next step)
    RealState cont[5];

    RealState interpolate(double t) const;
};

enum class StepControl { Continue, Stop };

struct IntegrationStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    double t_final = 0.0;
    RealState y_final;
    bool blew_up = false;
    bool stopped = false;
};

/// Explicit embedded 5(4) Runge-Kutta (Dormand-Prince) with PI step-size
/// control on y' = f(y). on_step is called after every accepted step and may
/// stop the integration early. Blow-up (non-finite or norm above the
/// threshold) ends the run with blew_up set. Throws Error(StepUnderflow).
IntegrationStats integrate_dopri5(const MeanFieldSystem& system, const RealState& y0,
                                  double t0, double t_end, const IntegratorOptions& options,
                                  const std::function<StepControl(const AcceptedStep&)>& on_step);

}  // namespace nrcav
