#pragma once

#include <stdexcept>
#include <string>

namespace laxfactor {

enum class ErrorKind {
    NonConvergent,
    Overflow,
    NearSingular,
    NonConverged,
    PoleOrderTooHigh,
    DimensionMismatch,
    DegenerateConfiguration,
    RankDeficiencyViolation,
    MissingDynamical,
    CollisionDetected,
    StepUnderflow,
    ConfigError,
    InvalidArgument,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool ok, ErrorKind kind, const std::string& what) {
    if (!ok) fail(kind, what);
}

}  // namespace laxfactor
