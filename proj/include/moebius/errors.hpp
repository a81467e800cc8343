#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace moebius {

enum class ErrorCode {
    InvalidInput,
    DegenerateSubspace,
    PointsNotInGeneralPosition,
    NotGeneralPosition,
    EqualSpheres,
    InconsistentClassification,
    FrameConstructionFailed,
    WitnessFailed,
    IncomparablePairs,
    InternalError,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::DegenerateSubspace: return "DegenerateSubspace";
    case ErrorCode::PointsNotInGeneralPosition: return "PointsNotInGeneralPosition";
    case ErrorCode::NotGeneralPosition: return "NotGeneralPosition";
    case ErrorCode::EqualSpheres: return "EqualSpheres";
    case ErrorCode::InconsistentClassification: return "InconsistentClassification";
    case ErrorCode::FrameConstructionFailed: return "FrameConstructionFailed";
    case ErrorCode::WitnessFailed: return "WitnessFailed";
    case ErrorCode::IncomparablePairs: return "IncomparablePairs";
    case ErrorCode::InternalError: return "InternalError";
    }
    return "Unknown";
}

/// Exception carrying a machine-readable error category.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

namespace detail {

inline std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

} // namespace detail

/// Numerical thresholds shared by all operations.
///
/// `rank` decides when a Gram or singular value counts as zero (relative to
/// the largest one). `case_band` is the absolute half-width of the tangency
/// band around eigenvalue 1. `membership` bounds the relative residual for
/// "vector lies in subspace" tests.
struct Tolerances {
    double rank = 1e-9;
    double case_band = 1e-8;
    double membership = 1e-8;
};

} // namespace moebius
