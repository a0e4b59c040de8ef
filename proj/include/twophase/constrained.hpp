#pragma once

#include <string>

#include "twophase/riemann.hpp"

namespace twophase {

// Riemann datum with a point constraint on the flow at x = 0.
// q0 must lie strictly inside (0, q_max).
struct ConstraintProblem {
  State left, right;
  double q0 = 0.0;
};

// Side of the constrained/exceeding decomposition for one of the two
// unconstrained solvers. Regions: 1 free/free, 2 congested/congested,
// 3 congested/free, 4 free/congested.
struct Classification {
  int region = 0;
  bool exceeds = false;  // true: unconstrained traces violate the constraint
  int solver_id = 1;
  std::string tag() const;  // "C1", "N4_1", ...
};

Classification classify(const Model& m, const ConstraintProblem& pb, int solver_id);

enum class TraceCase { T11a, T11b, T21a, T21b, T12a, T12b, T22a, T22b };
const char* trace_case_name(TraceCase c);

// Pair of interface traces (u_hat left of x=0, u_check right of x=0) with
// equal flow <= q0.
struct TracePair {
  State u_hat, u_check;
  TraceCase tag = TraceCase::T11a;
};

// Trace selection for the constrained solvers; NotInN when the pair is on
// the constrained side (no interface needed).
TracePair select_traces_r1c(const Model& m, const ConstraintProblem& pb);
TracePair select_traces_r2c(const Model& m, const ConstraintProblem& pb);

// Constrained solvers: unconstrained solution when the constraint is already
// satisfied, otherwise left fan to u_hat, stationary interface, right fan
// from u_check.
WaveFan solve_r1c(const Model& m, const ConstraintProblem& pb);
WaveFan solve_r2c(const Model& m, const ConstraintProblem& pb);

// Brute-force bound on the interface flow achievable by any admissible trace
// pair for the first constrained solver: u_hat candidates on a v-grid over
// {W = w_l} (plus the exact root at flow q0 when attainable), u_check
// candidates of matching flow; validity checked through the unconstrained
// solver's one-sided traces. Independent of the selection formulas.
double flow_max_oracle(const Model& m, const ConstraintProblem& pb, int grid = 400);

nlohmann::json trace_pair_to_json(const TracePair& tp);

// Uniform handle over the four solvers.
struct SolverChoice {
  enum Kind { R1, R2, R1c, R2c };
  Kind kind = R1;
  double q0 = 0.0;

  bool constrained() const { return kind == R1c || kind == R2c; }
  int solver_id() const { return (kind == R1 || kind == R1c) ? 1 : 2; }
  std::string name() const;
};

SolverChoice parse_solver(const std::string& name, double q0);
WaveFan solve(const Model& m, const SolverChoice& s, State l, State r);

}  // namespace twophase
