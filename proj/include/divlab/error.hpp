#pragma once

#include <stdexcept>
#include <string>

namespace divlab {

enum class ErrorKind {
    ZeroNorm,
    LengthMismatch,
    DomainError,
    NonFiniteEvaluation,
    TimeOutOfRange,
    DivergenceDetected,
    NonFiniteState,
    AlphaUnderflow,
    UnknownCondition,
    InfeasibleCount,
    UnknownDimension,
    TooFewSamples,
    EmptySet,
    GroupTooSmall,
    DegenerateReference,
    MalformedHeader,
    TruncatedPixelData,
    UnsupportedMaxval,
    ConfigError,
    DataError,
};

const char* error_name(ErrorKind kind);

// Single exception type; the kind drives test assertions and CLI exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& msg) {
    throw Error(kind, msg);
}

} // namespace divlab
