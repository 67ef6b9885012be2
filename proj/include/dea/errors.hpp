#pragma once

#include <stdexcept>
#include <string>

namespace dea {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// lp
struct NumericalFailure : Error { using Error::Error; };

// ingest
struct UnreadableFile : Error { using Error::Error; };
struct SchemaMismatch : Error { using Error::Error; };
struct EmptyPanel : Error { using Error::Error; };
struct YearAbsent : Error { using Error::Error; };

// composites
struct NegativeInput : Error { using Error::Error; };
struct MissingCosts : Error { using Error::Error; };

// model bank
struct UnknownModel : Error { using Error::Error; };
struct MissingFactorData : Error { using Error::Error; };

// engine
struct SolverFailure : Error { using Error::Error; };
struct ZeroOutputUnsupported : Error { using Error::Error; };
struct MismatchedInputs : Error { using Error::Error; };

// bootstrap
struct DegenerateSample : Error { using Error::Error; };

// study
struct InsufficientYears : Error { using Error::Error; };

}  // namespace dea
