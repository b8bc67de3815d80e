#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace transel {

enum class ErrorCode {
    InvalidArgument,
    DegenerateData,
    DomainError,
    NonPositiveInput,
    DegenerateTransform,
    IntegrationFailure,
    NonPositiveCurvature,
    MixingFailure,
    OrdinateUnderflow,
    InconsistentEvidence,
    ParseError,
    EmptyColumn,
    IoError,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::DegenerateData: return "DegenerateData";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::NonPositiveInput: return "NonPositiveInput";
        case ErrorCode::DegenerateTransform: return "DegenerateTransform";
        case ErrorCode::IntegrationFailure: return "IntegrationFailure";
        case ErrorCode::NonPositiveCurvature: return "NonPositiveCurvature";
        case ErrorCode::MixingFailure: return "MixingFailure";
        case ErrorCode::OrdinateUnderflow: return "OrdinateUnderflow";
        case ErrorCode::InconsistentEvidence: return "InconsistentEvidence";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::EmptyColumn: return "EmptyColumn";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace transel
