#pragma once

#include <stdexcept>
#include <string>

namespace keplerkit {

enum class ErrorKind {
    DomainError,
    NotCompact,
    RBlowup,
    StepFailure,
    TurningPointFailure,
    PeriodFailure,
    NoBracket,
    SymmetryResidual,
    BoundaryTooClose,
    NoReturn,
    TangentialCrossing,
    QuadratureFailure,
    IoError,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(std::string(to_string(kind)) + ": " + msg), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, msg); }

inline const char* to_string(ErrorKind k) {
    switch (k) {
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::NotCompact: return "NotCompact";
    case ErrorKind::RBlowup: return "RBlowup";
    case ErrorKind::StepFailure: return "StepFailure";
    case ErrorKind::TurningPointFailure: return "TurningPointFailure";
    case ErrorKind::PeriodFailure: return "PeriodFailure";
    case ErrorKind::NoBracket: return "NoBracket";
    case ErrorKind::SymmetryResidual: return "SymmetryResidual";
    case ErrorKind::BoundaryTooClose: return "BoundaryTooClose";
    case ErrorKind::NoReturn: return "NoReturn";
    case ErrorKind::TangentialCrossing: return "TangentialCrossing";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::IoError: return "IoError";
    }
    return "Error";
}

} // namespace keplerkit
