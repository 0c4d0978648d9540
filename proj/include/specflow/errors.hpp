#pragma once

#include <stdexcept>
#include <string>

namespace specflow {

enum class ErrorCode {
    PoleProximity,
    EmptyMeasure,
    NonConvergedInversion,
    NegativeDensity,
    QuadratureAccuracy,
    EmptySupport,
    DegenerateLeadingCoefficient,
    BranchAmbiguity,
    ContinuationStall,
    SingularJacobian,
    CharacteristicDegenerate,
    CharacteristicBlowup,
    ShootingFailure,
    CausticEncountered,
    InvalidRaneyParams,
    DimensionOrder,
    AtomRoundingError,
    DiscretizationTooCoarse,
    DomainMismatch,
    MassDrift,
    SingularIntegrand,
    InvalidInitialData,
    InvalidMeasure,
    InvalidArgument,
    IoFailure,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }
    const char* name() const noexcept { return error_name(code_); }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
    if (!cond) raise(code, what);
}

}  // namespace specflow
