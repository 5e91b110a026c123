#pragma once

#include <stdexcept>
#include <string>

namespace ecdlp {

enum class ErrorKind {
    NotPrime,
    Singular,
    DegenerateDoubling,
    NotInSubgroup,
    NotInvertible,
    UnsupportedGate,
    ParseError,
    InvalidCircuit,
    DeallocNonZero,
    NormLoss,
    BranchExplosion,
    TooLarge,
    WidthMismatch,
    ModulusMismatch,
    ShiftAlreadySet,
    ValueOutOfRange,
    NonInvertibleRegion,
    InputsNoLongerLive,
    InvalidArgument,
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NotPrime: return "NotPrime";
        case ErrorKind::Singular: return "Singular";
        case ErrorKind::DegenerateDoubling: return "DegenerateDoubling";
        case ErrorKind::NotInSubgroup: return "NotInSubgroup";
        case ErrorKind::NotInvertible: return "NotInvertible";
        case ErrorKind::UnsupportedGate: return "UnsupportedGate";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::InvalidCircuit: return "InvalidCircuit";
        case ErrorKind::DeallocNonZero: return "DeallocNonZero";
        case ErrorKind::NormLoss: return "NormLoss";
        case ErrorKind::BranchExplosion: return "BranchExplosion";
        case ErrorKind::TooLarge: return "TooLarge";
        case ErrorKind::WidthMismatch: return "WidthMismatch";
        case ErrorKind::ModulusMismatch: return "ModulusMismatch";
        case ErrorKind::ShiftAlreadySet: return "ShiftAlreadySet";
        case ErrorKind::ValueOutOfRange: return "ValueOutOfRange";
        case ErrorKind::NonInvertibleRegion: return "NonInvertibleRegion";
        case ErrorKind::InputsNoLongerLive: return "InputsNoLongerLive";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

/// Single exception type for the library; `kind()` distinguishes failure modes.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace ecdlp
