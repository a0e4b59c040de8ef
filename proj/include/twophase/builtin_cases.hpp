#pragma once

#include <string>
#include <vector>

#include "twophase/verification.hpp"

namespace twophase::cases {

// Built-in reference model: affine V (v_max=2, R=6), power p (gamma=2,
// v_ref=1, rho_max=1), rf_lo=1.5, rf_hi=2, adjustable v_c.
Model reference_model(double v_c = 1.0);

struct CaseResult {
  std::string name;
  bool pass = false;
  std::vector<std::string> lines;
};

// Total-variation comparison of the two constrained solvers, instance where
// the first solver produces strictly more variation in v and in W.
CaseResult tv_example_1();
// Companion instance where the second solver produces strictly more.
CaseResult tv_example_2();

// Consistency condition (I) fails with true premises when the middle state
// equals the right state and its flow exceeds the constraint.
CaseResult truncation_inconsistency();
// Juxtaposing solutions through a congested middle state of flow q0 does not
// reproduce the direct solution (conclusion of condition (II) fails).
CaseResult juxtaposition_inconsistency();
// The unconstrained second solver itself violates condition (II).
CaseResult r2_juxtaposition_failure();

// L1 continuity probes: above the critical constraint level the first
// constrained solver jumps by a computable gap under a vanishing
// perturbation; below it, and for the second solver always, the distances
// vanish.
CaseResult continuity_gap();
CaseResult continuity_convergence();

std::vector<CaseResult> run_all();
const std::vector<std::string>& case_names();
CaseResult run_case(const std::string& name);

}  // namespace twophase::cases
