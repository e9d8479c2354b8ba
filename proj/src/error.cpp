#include "laxfactor/error.hpp"

namespace laxfactor {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NonConvergent: return "NonConvergent";
        case ErrorKind::Overflow: return "Overflow";
        case ErrorKind::NearSingular: return "NearSingular";
        case ErrorKind::NonConverged: return "NonConverged";
        case ErrorKind::PoleOrderTooHigh: return "PoleOrderTooHigh";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::DegenerateConfiguration: return "DegenerateConfiguration";
        case ErrorKind::RankDeficiencyViolation: return "RankDeficiencyViolation";
        case ErrorKind::MissingDynamical: return "MissingDynamical";
        case ErrorKind::CollisionDetected: return "CollisionDetected";
        case ErrorKind::StepUnderflow: return "StepUnderflow";
        case ErrorKind::ConfigError: return "ConfigError";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

}  // namespace laxfactor
