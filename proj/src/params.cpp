#include "nrcav/params.hpp"

#include "nrcav/error.hpp"

#include <cmath>
#include <string>

namespace nrcav {

namespace {
void require(bool ok, const char* what)
{
    if (!ok) {
        throw Error(ErrorCode::RangeError, what);
    }
}
}  // namespace

void validate(const SystemParams& p)
{
    require(std::isfinite(p.g) && std::isfinite(p.J) && std::isfinite(p.kappa1) &&
                std::isfinite(p.kappa2) && std::isfinite(p.kappa_e) &&
                std::isfinite(p.gamma) && std::isfinite(p.delta1) &&
                std::isfinite(p.delta2) && std::isfinite(p.eps_p),
            "all parameters must be finite");
    require(p.kappa2 == 1.0, "kappa2 must equal 1 (rates are in units of kappa2)");
    require(p.kappa_e > 0.0, "kappa_e must be > 0");
    require(p.gamma > 0.0, "gamma must be > 0");
    require(p.g >= 0.0, "g must be >= 0");
    require(p.J >= 0.0, "J must be >= 0");
    require(p.eps_p >= 0.0, "eps_p must be >= 0");
}

SystemParams passive_reference()
{
    SystemParams p;
    p.kappa1 = 1.0;
    p.kappa_e = 3.0;
    p.gamma = 0.1;
    p.delta1 = 0.0;
    p.delta2 = 0.0;
    return p;
}

std::string_view to_string(Direction dir)
{
    return dir == Direction::Forward ? "forward" : "backward";
}

std::optional<Direction> parse_direction(std::string_view text)
{
    if (text == "forward" || text == "R") {
        return Direction::Forward;
    }
    if (text == "backward" || text == "L") {
        return Direction::Backward;
    }
    return std::nullopt;
}

}  // namespace nrcav
