#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nrcav {

enum class ErrorCode {
    DegenerateParams,
    SingularCoefficient,
    SingularLinearSystem,
    NotARoot,
    NoConvergence,
    MarginalStability,
    StepUnderflow,
    ZeroDrive,
    UndefinedRatio,
    UnknownScenario,
    SchemaError,
    RangeError,
};

std::string_view to_string(ErrorCode code);

/// Base class for every failure the library reports. Callers that need to
/// keep going (sweeps, scans) catch this and record code() per row.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

class NoConvergence : public Error {
public:
    NoConvergence(std::size_t iterations, double residual);

    std::size_t iterations() const noexcept { return iterations_; }
    double residual() const noexcept { return residual_; }

private:
    std::size_t iterations_;
    double residual_;
};

/// Raised by isolation_ratio when a transmission is not positive. sign() is
/// +1 for a +inf ratio (only T_R vanishes), -1 for -inf, 0 when both vanish.
class UndefinedRatio : public Error {
public:
    UndefinedRatio(int sign, const std::string& what)
        : Error(ErrorCode::UndefinedRatio, what), sign_(sign) {}

    int sign() const noexcept { return sign_; }

private:
    int sign_;
};

/// Config errors carry the JSON path of the offending field ("params.gamma").
class ConfigError : public Error {
public:
    ConfigError(ErrorCode code, std::string path, const std::string& what)
        : Error(code, path + ": " + what), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace nrcav
