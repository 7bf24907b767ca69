#include "divlab/error.hpp"

namespace divlab {

const char* error_name(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::ZeroNorm: return "ZeroNorm";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::NonFiniteEvaluation: return "NonFiniteEvaluation";
    case ErrorKind::TimeOutOfRange: return "TimeOutOfRange";
    case ErrorKind::DivergenceDetected: return "DivergenceDetected";
    case ErrorKind::NonFiniteState: return "NonFiniteState";
    case ErrorKind::AlphaUnderflow: return "AlphaUnderflow";
    case ErrorKind::UnknownCondition: return "UnknownCondition";
    case ErrorKind::InfeasibleCount: return "InfeasibleCount";
    case ErrorKind::UnknownDimension: return "UnknownDimension";
    case ErrorKind::TooFewSamples: return "TooFewSamples";
    case ErrorKind::EmptySet: return "EmptySet";
    case ErrorKind::GroupTooSmall: return "GroupTooSmall";
    case ErrorKind::DegenerateReference: return "DegenerateReference";
    case ErrorKind::MalformedHeader: return "MalformedHeader";
    case ErrorKind::TruncatedPixelData: return "TruncatedPixelData";
    case ErrorKind::UnsupportedMaxval: return "UnsupportedMaxval";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::DataError: return "DataError";
    }
    return "UnknownError";
}

} // namespace divlab
