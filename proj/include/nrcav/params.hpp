#pragma once

#include <optional>
#include <string_view>

namespace nrcav {

/// Physical parameters of the two-cavity/emitter system. Every rate and
/// detuning is measured in units of the passive-cavity decay kappa2, time in
/// 1/kappa2, eps_p in sqrt(kappa2).
///
/// The member defaults are the gain/loss (PT) operating point: gamma=0.1,
/// g=3, J=4, kappa1=-7.4, kappa_e=3.2, resonant, eps_p=0.36.
struct SystemParams {
    double g = 3.0;         // emitter-cavity coupling
    double J = 4.0;         // cavity-cavity coupling
    double kappa1 = -7.4;   // cavity-1 intrinsic decay; negative means gain
    double kappa2 = 1.0;    // unit of all rates
    double kappa_e = 3.2;   // cavity-waveguide coupling, shared by both cavities
    double gamma = 0.1;     // emitter spontaneous decay
    double delta1 = 0.0;    // omega_c - omega_p
    double delta2 = 0.0;    // omega_e - omega_c
    double eps_p = 0.36;    // probe amplitude, real and >= 0

    friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

/// Throws Error(RangeError) naming the first violated invariant.
void validate(const SystemParams& params);

/// Passive-passive set of the bistability figures: kappa1=kappa2=1,
/// kappa_e=3, gamma=0.1, resonant.
SystemParams passive_reference();

/// Forward drives cavity 1 and reads cavity 2 (R); Backward drives cavity 2
/// and reads cavity 1 (L).
enum class Direction { Forward, Backward };

std::string_view to_string(Direction dir);
std::optional<Direction> parse_direction(std::string_view text);

}  // namespace nrcav
