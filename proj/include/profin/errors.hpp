#pragma once

#include <stdexcept>
#include <string>

namespace profin {

/// Error taxonomy shared by all modules. Every failure carries a kind that
/// maps onto a CLI exit code: Usage -> 2, SizeLimit -> 4, everything else -> 3.
enum class ErrorKind {
    AxiomViolation,
    SizeLimit,
    GroupMismatch,
    Ramified,
    BondNotSurjective,
    LevelOrder,
    IncoherentAtLevel,
    TowerMismatch,
    InvalidCode,
    LengthMismatch,
    EmptyInput,
    NotAbelian,
    KindMismatch,
    UnknownLabel,
    Usage,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message, long long detail = -1)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
          kind_(kind),
          detail_(detail) {}

    ErrorKind kind() const { return kind_; }
    const char* kind_name() const { return error_kind_name(kind_); }

    /// Structured payload: the incoherent level for IncoherentAtLevel, the
    /// offending 0-based bit index for InvalidCode, -1 otherwise.
    long long detail() const { return detail_; }

    int exit_code() const {
        switch (kind_) {
            case ErrorKind::Usage: return 2;
            case ErrorKind::SizeLimit: return 4;
            default: return 3;
        }
    }

private:
    ErrorKind kind_;
    long long detail_;
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::AxiomViolation: return "AxiomViolation";
        case ErrorKind::SizeLimit: return "SizeLimit";
        case ErrorKind::GroupMismatch: return "GroupMismatch";
        case ErrorKind::Ramified: return "Ramified";
        case ErrorKind::BondNotSurjective: return "BondNotSurjective";
        case ErrorKind::LevelOrder: return "LevelOrder";
        case ErrorKind::IncoherentAtLevel: return "IncoherentAtLevel";
        case ErrorKind::TowerMismatch: return "TowerMismatch";
        case ErrorKind::InvalidCode: return "InvalidCode";
        case ErrorKind::LengthMismatch: return "LengthMismatch";
        case ErrorKind::EmptyInput: return "EmptyInput";
        case ErrorKind::NotAbelian: return "NotAbelian";
        case ErrorKind::KindMismatch: return "KindMismatch";
        case ErrorKind::UnknownLabel: return "UnknownLabel";
        case ErrorKind::Usage: return "Usage";
    }
    return "Unknown";
}

}  // namespace profin
