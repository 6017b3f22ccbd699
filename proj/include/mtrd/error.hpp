#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mtrd {

enum class ErrorCode {
    SingularPoint,
    UnsupportedOrder,
    SingularStencil,
    BadRange,
    DimensionMismatch,
    MissingCoefficient,
    CoefficientVanishes,
    BadParameter,
    DegenerateTransform,
    OutOfDomain,
    NoConnection,
    EmptyGrid,
    UnsupportedForm,
    StabilityViolation,
    NonFinite,
    LevelNotCrossed,
    ParseError,
    ConfigError,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::SingularPoint: return "SingularPoint";
        case ErrorCode::UnsupportedOrder: return "UnsupportedOrder";
        case ErrorCode::SingularStencil: return "SingularStencil";
        case ErrorCode::BadRange: return "BadRange";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::MissingCoefficient: return "MissingCoefficient";
        case ErrorCode::CoefficientVanishes: return "CoefficientVanishes";
        case ErrorCode::BadParameter: return "BadParameter";
        case ErrorCode::DegenerateTransform: return "DegenerateTransform";
        case ErrorCode::OutOfDomain: return "OutOfDomain";
        case ErrorCode::NoConnection: return "NoConnection";
        case ErrorCode::EmptyGrid: return "EmptyGrid";
        case ErrorCode::UnsupportedForm: return "UnsupportedForm";
        case ErrorCode::StabilityViolation: return "StabilityViolation";
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::LevelNotCrossed: return "LevelNotCrossed";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace mtrd
