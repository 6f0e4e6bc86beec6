#pragma once
// Exception taxonomy. ValidationError covers rejected inputs; SolverError
// covers numerical failures in an otherwise valid problem. The CLI maps the
// two families to distinct exit codes.

#include <stdexcept>
#include <string>

namespace fpp {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : Error {
  using Error::Error;
};

struct SolverError : Error {
  using Error::Error;
};

// --- input validation ---

struct ArbitrageViolation : ValidationError {
  using ValidationError::ValidationError;
};

struct ProbabilityOutOfRange : ValidationError {
  using ValidationError::ValidationError;
};

struct NonpositiveWealth : ValidationError {
  using ValidationError::ValidationError;
};

struct DomainError : ValidationError {
  using ValidationError::ValidationError;
};

struct ThetaOne : ValidationError {
  using ValidationError::ValidationError;
};

struct ParseError : ValidationError {
  using ValidationError::ValidationError;
};

// --- numerical failures ---

struct BracketFailure : SolverError {
  using SolverError::SolverError;
};

struct QuadratureFailure : SolverError {
  using SolverError::SolverError;
};

struct PathologicalTheta : SolverError {
  using SolverError::SolverError;
};

struct DivergenceDetected : SolverError {
  using SolverError::SolverError;
};

struct NoConstructiveBranch : SolverError {
  using SolverError::SolverError;
};

struct WrongSignRegime : SolverError {
  using SolverError::SolverError;
};

struct NonConcaveDetected : SolverError {
  using SolverError::SolverError;
};

struct AdmissibilityViolation : SolverError {
  using SolverError::SolverError;
};

}  // namespace fpp
