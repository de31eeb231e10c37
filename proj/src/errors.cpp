#include "scalarfield/errors.hpp"

namespace scalarfield {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotNegativeDefiniteAtZero: return "NotNegativeDefiniteAtZero";
    case ErrorKind::NoPositivePrimitive: return "NoPositivePrimitive";
    case ErrorKind::SplitNotSubordinate: return "SplitNotSubordinate";
    case ErrorKind::LambdaOutOfRange: return "LambdaOutOfRange";
    case ErrorKind::BadResolution: return "BadResolution";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::WrongSymmetryClass: return "WrongSymmetryClass";
    case ErrorKind::BadRadius: return "BadRadius";
    case ErrorKind::GridTooSmall: return "GridTooSmall";
    case ErrorKind::NotFound: return "NotFound";
    case ErrorKind::DilationCapExceeded: return "DilationCapExceeded";
    case ErrorKind::BadEndpoint: return "BadEndpoint";
    case ErrorKind::BadBase: return "BadBase";
    case ErrorKind::NoDescent: return "NoDescent";
    case ErrorKind::BrokenPath: return "BrokenPath";
    case ErrorKind::MonotonicityViolation: return "MonotonicityViolation";
    case ErrorKind::NoAdmissibleSeed: return "NoAdmissibleSeed";
    case ErrorKind::BelowThreshold: return "BelowThreshold";
    case ErrorKind::IterationCap: return "IterationCap";
    case ErrorKind::StiffnessFailure: return "StiffnessFailure";
    case ErrorKind::NoBracket: return "NoBracket";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace scalarfield
