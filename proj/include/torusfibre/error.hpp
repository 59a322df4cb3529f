#pragma once

// Error taxonomy shared by every module. Each error carries a kind (used by
// the CLI to pick an exit status) and a message naming the failing check.

#include <stdexcept>
#include <string>
#include <string_view>

namespace torusfibre {

enum class ErrorKind {
    // input / validation failures
    InvalidBranch,
    NonIntegralGenus,
    GenusTooSmall,
    NonIntegralB,
    GcdViolation,
    UnsupportedOrbitStructure,
    NotZeroDimensional,
    OracleDegreeOverflow,
    MissingChernData,
    SymbolicPhaseInNumericContext,
    InsufficientSamples,
    Parse,
    // arithmetic inconsistencies (a violated internal invariant)
    ZeroDivision,
    DegenerateTerm,
    NonIntegralMultiplicity,
    NonIntegralRank,
    IncompatibleClass,
    RankMismatch,
    SumRuleViolation,
    IllConditioned,
    ResidualTooLarge,
    // environment
    Io,
};

constexpr std::string_view to_string(ErrorKind k) {
    switch (k) {
    case ErrorKind::InvalidBranch: return "InvalidBranch";
    case ErrorKind::NonIntegralGenus: return "NonIntegralGenus";
    case ErrorKind::GenusTooSmall: return "GenusTooSmall";
    case ErrorKind::NonIntegralB: return "NonIntegralB";
    case ErrorKind::GcdViolation: return "GcdViolation";
    case ErrorKind::UnsupportedOrbitStructure: return "UnsupportedOrbitStructure";
    case ErrorKind::NotZeroDimensional: return "NotZeroDimensional";
    case ErrorKind::OracleDegreeOverflow: return "OracleDegreeOverflow";
    case ErrorKind::MissingChernData: return "MissingChernData";
    case ErrorKind::SymbolicPhaseInNumericContext: return "SymbolicPhaseInNumericContext";
    case ErrorKind::InsufficientSamples: return "InsufficientSamples";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::ZeroDivision: return "ZeroDivision";
    case ErrorKind::DegenerateTerm: return "DegenerateTerm";
    case ErrorKind::NonIntegralMultiplicity: return "NonIntegralMultiplicity";
    case ErrorKind::NonIntegralRank: return "NonIntegralRank";
    case ErrorKind::IncompatibleClass: return "IncompatibleClass";
    case ErrorKind::RankMismatch: return "RankMismatch";
    case ErrorKind::SumRuleViolation: return "SumRuleViolation";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::ResidualTooLarge: return "ResidualTooLarge";
    case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

/// Coarse category used for CLI exit codes.
enum class ErrorCategory { Validation = 1, Inconsistency = 2, Io = 3 };

constexpr ErrorCategory category(ErrorKind k) {
    switch (k) {
    case ErrorKind::ZeroDivision:
    case ErrorKind::DegenerateTerm:
    case ErrorKind::NonIntegralMultiplicity:
    case ErrorKind::NonIntegralRank:
    case ErrorKind::IncompatibleClass:
    case ErrorKind::RankMismatch:
    case ErrorKind::SumRuleViolation:
    case ErrorKind::IllConditioned:
    case ErrorKind::ResidualTooLarge:
        return ErrorCategory::Inconsistency;
    case ErrorKind::Io:
        return ErrorCategory::Io;
    default:
        return ErrorCategory::Validation;
    }
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
    if (!cond) fail(kind, what);
}

} // namespace torusfibre
