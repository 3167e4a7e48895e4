#pragma once

#include <stdexcept>
#include <string>

namespace topoforge {

enum class ErrorKind {
    UnknownGroup,
    InvalidParameter,
    NumericalInconsistency,
    NotAdmissible,
    MultiplicityUnsupported,
    NotAPath,
    NotGaugeInvariant,
    NotIncident,
    BudgetExceeded,
    ZeroState,
    ZeroResult,
    ShapeMismatch,
    InvalidGeometry,
    NotConcatenable,
    CrossingUnsupported,
    ParseError,
    GluingInconsistent,
    NonManifoldEdge,
    HasBoundary,
    InadmissibleBoundary,
    StructureUnsupported,
};

inline const char* kind_name(ErrorKind k) {
    switch (k) {
    case ErrorKind::UnknownGroup: return "UnknownGroup";
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::NumericalInconsistency: return "NumericalInconsistency";
    case ErrorKind::NotAdmissible: return "NotAdmissible";
    case ErrorKind::MultiplicityUnsupported: return "MultiplicityUnsupported";
    case ErrorKind::NotAPath: return "NotAPath";
    case ErrorKind::NotGaugeInvariant: return "NotGaugeInvariant";
    case ErrorKind::NotIncident: return "NotIncident";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::ZeroState: return "ZeroState";
    case ErrorKind::ZeroResult: return "ZeroResult";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::InvalidGeometry: return "InvalidGeometry";
    case ErrorKind::NotConcatenable: return "NotConcatenable";
    case ErrorKind::CrossingUnsupported: return "CrossingUnsupported";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::GluingInconsistent: return "GluingInconsistent";
    case ErrorKind::NonManifoldEdge: return "NonManifoldEdge";
    case ErrorKind::HasBoundary: return "HasBoundary";
    case ErrorKind::InadmissibleBoundary: return "InadmissibleBoundary";
    case ErrorKind::StructureUnsupported: return "StructureUnsupported";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(kind_name(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

} // namespace topoforge
