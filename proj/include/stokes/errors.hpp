#pragma once

#include <stdexcept>
#include <string>

namespace stokes {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DivisionByZeroInterval : Error { using Error::Error; };
struct NegativeArgument : Error { using Error::Error; };
struct ZeroInBox : Error { using Error::Error; };
struct BranchCutIntersect : Error { using Error::Error; };
struct DenominatorVanishes : Error { using Error::Error; };
struct OutsideTail : Error { using Error::Error; };
struct ExponentTooSmall : Error { using Error::Error; };
struct DenominatorNonpositive : Error { using Error::Error; };
struct OutOfRange : Error { using Error::Error; };
struct NotCertified : Error { using Error::Error; };
struct EnclosureFailed : Error { using Error::Error; };
struct StepUnderflow : Error { using Error::Error; };
struct MaxStepsExceeded : Error { using Error::Error; };
struct NoCrossing : Error { using Error::Error; };
struct DomainGuardViolated : Error { using Error::Error; };
struct QuadratureFailed : Error { using Error::Error; };
struct MissingRun : Error { using Error::Error; };

// Raised when a certificate precondition (a denominator gate) fails; carries the gate name.
struct GateFailed : Error {
    explicit GateFailed(const std::string& gate)
        : Error("gate failed: " + gate), gate_name(gate) {}
    std::string gate_name;
};

} // namespace stokes
