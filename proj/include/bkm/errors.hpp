#pragma once

#include <stdexcept>
#include <string>

namespace bkm {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// polynomial layer
struct DivisionByZeroPoly : Error { DivisionByZeroPoly() : Error("polynomial division by zero polynomial") {} };
struct DuplicateNode : Error { using Error::Error; };

// reconstruction layer
struct SharedRoot : Error { using Error::Error; };
struct EvaluationAtEigenvalue : Error { using Error::Error; };
struct SingularMmatrix : Error { using Error::Error; };
struct DegenerateEigenvalues : Error { using Error::Error; };

// integration layer
struct BlowUp : Error { using Error::Error; };
struct SingularityHit : Error { using Error::Error; };
struct ToleranceFailure : Error { using Error::Error; };
struct OffLevelSet : Error { using Error::Error; };

// synthesis / verification layer
struct NonpositiveCLambda : Error { using Error::Error; };
struct EigenvalueCollision : Error { using Error::Error; };
struct GridTooCoarse : Error { using Error::Error; };
struct MuEqualsLambda : Error { using Error::Error; };

// configuration
struct ConfigError : Error { using Error::Error; };

} // namespace bkm
