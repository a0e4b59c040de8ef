#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace twophase {

// Model construction / evaluation errors.
struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One or more of the structural hypotheses on V and p fail on the sampled grid.
// what() lists every violated condition with an offending density.
struct HypothesisViolation : ModelError {
  std::vector<std::string> items;
  explicit HypothesisViolation(std::vector<std::string> violations)
      : ModelError(join(violations)), items(std::move(violations)) {}

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s = "hypothesis validation failed:";
    for (const auto& item : v) s += "\n  " + item;
    return s;
  }
};

// rf_lo/rf_hi/v_c do not define a valid phase split.
struct InvalidThresholds : ModelError {
  using ModelError::ModelError;
};

// lambda_1 = v - rho p'(rho) fails to be negative somewhere on the congested set.
struct Lambda1SignViolation : ModelError {
  using ModelError::ModelError;
};

// Scalar argument outside the range of an invertible map (p_inverse, flux inverse, ...).
struct OutOfRange : ModelError {
  using ModelError::ModelError;
};

// Solver-level errors.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A Riemann datum is not a member of the phase space Omega.
struct OutsideDomain : SolverError {
  using SolverError::SolverError;
};

// Jump speed requested between states of equal density.
struct EqualDensities : SolverError {
  using SolverError::SolverError;
};

// Defensive: an ARZ intermediate state left the congested set.
struct IntermediateOutsideOmegaC : SolverError {
  using SolverError::SolverError;
};

// A bracketed scalar root could not be located.
struct NoRoot : SolverError {
  using SolverError::SolverError;
};

// Trace selection requested for a pair whose unconstrained solution already
// satisfies the constraint.
struct NotInN : SolverError {
  using SolverError::SolverError;
};

// Verification scan asked for a domain key that is not in the catalog.
struct UnknownDomain : SolverError {
  using SolverError::SolverError;
};

}  // namespace twophase
