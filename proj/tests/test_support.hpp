#pragma once

#include "nrcav/model.hpp"
#include "nrcav/params.hpp"

#include <random>

namespace nrcav::testing {

// Passive-passive parameters with the given emitter and cavity couplings.
inline SystemParams passive(double g, double J, double eps_sq)
{
    SystemParams p = passive_reference();
    p.g = g;
    p.J = J;
    p.eps_p = std::sqrt(eps_sq);
    return p;
}

inline StateVector random_state(std::mt19937_64& rng, double scale = 1.0)
{
    std::uniform_real_distribution<double> u(-scale, scale);
    StateVector s;
    s.a1 = {u(rng), u(rng)};
    s.a2 = {u(rng), u(rng)};
    s.sigma_ge = {u(rng), u(rng)};
    s.sigma_z = u(rng);
    return s;
}

}  // namespace nrcav::testing
