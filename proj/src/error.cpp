#include "nrcav/error.hpp"

#include <sstream>

namespace nrcav {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::DegenerateParams: return "DegenerateParams";
    case ErrorCode::SingularCoefficient: return "SingularCoefficient";
    case ErrorCode::SingularLinearSystem: return "SingularLinearSystem";
    case ErrorCode::NotARoot: return "NotARoot";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::MarginalStability: return "MarginalStability";
    case ErrorCode::StepUnderflow: return "StepUnderflow";
    case ErrorCode::ZeroDrive: return "ZeroDrive";
    case ErrorCode::UndefinedRatio: return "UndefinedRatio";
    case ErrorCode::UnknownScenario: return "UnknownScenario";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::RangeError: return "RangeError";
    }
    return "Unknown";
}

namespace {
std::string no_convergence_message(std::size_t iterations, double residual)
{
    std::ostringstream os;
    os << "Newton did not converge after " << iterations
       << " iterations (residual " << residual << ")";
    return os.str();
}
}  // namespace

NoConvergence::NoConvergence(std::size_t iterations, double residual)
    : Error(ErrorCode::NoConvergence, no_convergence_message(iterations, residual)),
      iterations_(iterations), residual_(residual)
{
}

}  // namespace nrcav
