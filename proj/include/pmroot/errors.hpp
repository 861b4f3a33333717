#pragma once

#include <stdexcept>
#include <string>

namespace pmroot {

/// Structured error codes. Every failure mode of the library maps to one of
/// these so callers (and the CLI exit-code table) can dispatch on kind.
enum class ErrorCode {
    // input / representation
    UnsortedAbscissae,
    FlatSegment,
    NonSelfMap,
    OutOfDomain,
    RangeMismatch,
    BudgetExceeded,
    // interval analysis
    NoCharacteristicInterval,
    OutOfLapRange,
    // condition checking
    WrongLap,
    NoPattern,
    NotReversing,
    EvenFixedPointCount,
    NonIsolatedFixedPoints,
    PreconditionFailed,
    // kernel construction
    AnchorOutOfRange,
    OrbitCapExceeded,
    MultipleInteriorFixedPoints,
    // assembly
    ConditionsNotMet,
    RangeViolation,
    AssemblyAmbiguous,
    NoApplicableTheorem,
    // verification / io
    EvaluationFailure,
    RecipeMismatch,
    ParseError,
};

const char* to_string(ErrorCode code);

class PmError : public std::runtime_error {
public:
    PmError(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw PmError(code, what);
}

} // namespace pmroot
