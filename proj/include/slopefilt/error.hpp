#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace slopefilt {

enum class ErrorCode {
    DimensionMismatch,
    InvalidScale,
    DuplicateSymbol,
    UnknownSymbol,
    MissingSymbol,
    AmbiguousCandidates,
    CertificateViolation,
    IndexOutOfRange,
    NotNested,
    EnumerationTooLarge,
    MatrixTooLarge,
    SymbolicModelNotSpecialized,
    SamplingExhausted,
    ParseError,
    ValidationError,
    InexactDivision,
    Overflow,
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidScale: return "InvalidScale";
    case ErrorCode::DuplicateSymbol: return "DuplicateSymbol";
    case ErrorCode::UnknownSymbol: return "UnknownSymbol";
    case ErrorCode::MissingSymbol: return "MissingSymbol";
    case ErrorCode::AmbiguousCandidates: return "AmbiguousCandidates";
    case ErrorCode::CertificateViolation: return "CertificateViolation";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NotNested: return "NotNested";
    case ErrorCode::EnumerationTooLarge: return "EnumerationTooLarge";
    case ErrorCode::MatrixTooLarge: return "MatrixTooLarge";
    case ErrorCode::SymbolicModelNotSpecialized: return "SymbolicModelNotSpecialized";
    case ErrorCode::SamplingExhausted: return "SamplingExhausted";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::InexactDivision: return "InexactDivision";
    case ErrorCode::Overflow: return "Overflow";
    }
    return "Unknown";
}

/// Every failure surfaced by the library carries a machine-readable code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Raised when a chain fails one of its exact checks. `step` is the chain
/// step index (or -1 for global checks) and `witness` describes the offending
/// candidate subgroup.
class CertificateViolation : public Error {
public:
    CertificateViolation(std::string check, int step, std::string witness)
        : Error(ErrorCode::CertificateViolation,
                check + " failed at step " + std::to_string(step) + " for " + witness),
          check_(std::move(check)), step_(step), witness_(std::move(witness)) {}

    const std::string& check() const noexcept { return check_; }
    int step() const noexcept { return step_; }
    const std::string& witness() const noexcept { return witness_; }

private:
    std::string check_;
    int step_;
    std::string witness_;
};

} // namespace slopefilt
