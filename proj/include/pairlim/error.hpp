#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pairlim {

enum class ErrorCode {
    // model-core
    EmptyModel,
    NonPositiveRate,
    ProportionsDoNotSumToOne,
    DimensionMismatch,
    NTooSmall,
    InvalidRegime,
    InvalidState,
    // ssa-engine
    InvalidConfig,
    InvalidInit,
    MaxEventsExceeded,
    MismatchedReplicas,
    // limit-solvers
    DomainError,
    SolverStall,
    InitMassMismatch,
    NegativeVariance,
    ConsistencyCheckFailed,
    // stationary
    UnsupportedRegime,
    SpaceTooLarge,
    // queue-oracles
    Nonconvergence,
    UnstableMM1,
    // verify-harness
    EmptySample,
    GridMismatch,
    // cli-io
    ConfigError,
    IoError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace pairlim
