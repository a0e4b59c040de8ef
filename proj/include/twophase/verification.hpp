#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "twophase/constrained.hpp"

namespace twophase {

struct CheckReport {
  std::string name;
  bool pass = true;
  double residual = 0.0;
  double tolerance = 0.0;
  std::string witness;

  nlohmann::json to_json() const;
};

// Weak-solution check: mass RH at every discontinuity (tol 1e-9), momentum
// RH where required (tol 1e-9), |lambda(u(xi)) - xi| at 32 interior points of
// every rarefaction (tol 1e-8), plus the structural fan checks.
CheckReport check_weak_solution(const WaveFan& fan);

// Consistency of a solver at a triple (u_l, u_m, u_r) and a point x_bar.
// Condition (I): if S[u_l,u_r](x_bar) = u_m then S[u_l,u_m] equals
// S[u_l,u_r] truncated at x_bar (and symmetrically for S[u_m,u_r]).
// Condition (II): if S[u_l,u_m](x_bar) = u_m = S[u_m,u_r](x_bar) then the
// juxtaposition of the two solutions at x_bar equals S[u_l,u_r].
// Premises, conclusions and implications are reported separately.
struct ConsistencyReport {
  bool premise_i = false, conclusion_i = false;
  bool premise_ii = false, conclusion_ii = false;
  std::string witness_i, witness_ii;

  bool implication_i() const { return !premise_i || conclusion_i; }
  bool implication_ii() const { return !premise_ii || conclusion_ii; }
  bool pass() const { return implication_i() && implication_ii(); }
};

ConsistencyReport check_consistency(const Model& m, const SolverChoice& s,
                                    State ul, State um, State ur, double xbar);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform(double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(eng_);
  }
  int uniform_int(int a, int b) {
    return std::uniform_int_distribution<int>(a, b)(eng_);
  }

 private:
  std::mt19937_64 eng_;
};

// Random states: phase "f" (free curve), "c" (congested set), "any".
State sample_state(const Model& m, Rng& rng, const std::string& phase);

// Catalogued state sets used by invariance and consistency scans. Parameters
// are read from `params` (q0, rho_min, rho_max, w_min, w_max, v_min, v_max,
// w_bar as applicable). Throws UnknownDomain for an unknown key.
//
//   omega, omega_f, omega_c        phase space and its two phases
//   d1                             {u in Omega : flow <= q0}
//   d2                             {u in Omega_f : flow <= q0}
//   d2_prime                       {u in Omega_c : W >= w0(q0), flow <= q0}
//   d2_dprime                      {u in Omega : W = w_bar, flow <= q0}
//   free_band                      {u in Omega_f : rho_min <= rho <= rho_max}
//   congested_box                  {u in Omega_c : w,v in the given boxes}
//   upper_mixed                    free band between u_f(w_min), u_f(w_max)
//                                  plus {u in Omega_c : w in box, v >= v_min}
//   lower_mixed                    {u in Omega_f : rho_min <= rho <= rho_f(w_max)}
//                                  plus {u in Omega_c : w <= w_max, v >= v_min}
//   r1c_a / r2c_a                  Omega_f plus {u in Omega_c : flow <= q0
//                                  <= v p^-1(w_max - v)}
//   r1c_b                          Omega_f plus {u in Omega_c : v = v_c}
//   r2c_b                          Omega_f plus the single state u_c(w_max)
//   r1c_c / r2c_c                  Omega_c
//   r1c_d / r2c_d                  Omega_c plus the free state of flow q0
struct Domain {
  std::string name;
  std::function<bool(State)> contains;
  std::function<State(Rng&)> sample;
};

Domain make_domain(const Model& m, const std::string& key,
                   const nlohmann::json& params = {});

struct ScanReport {
  std::string name;
  int samples = 0;
  int failures = 0;
  int premise_i_held = 0;   // consistency scans only
  int premise_ii_held = 0;  // consistency scans only
  std::vector<CheckReport> witnesses;  // failing cases, capped at 16

  bool pass() const { return failures == 0; }
  nlohmann::json to_json() const;
};

// Random pairs from `dom`, u_m picked from the solved fan at a random x_bar;
// checks both consistency conditions per triple.
ScanReport consistency_scan(const Model& m, const SolverChoice& s,
                            const Domain& dom, int n, std::uint64_t seed);

// Random pairs from `dom`; every state of the solved fan (wave endpoints and
// sampled rarefaction interiors) must stay in `dom`.
ScanReport invariant_scan(const Model& m, const SolverChoice& s,
                          const Domain& dom, int n, std::uint64_t seed);

// Random pairs of the given scenario ("ff", "cc", "fc", "cf"); every fan
// must pass check_weak_solution.
ScanReport weak_solution_scan(const Model& m, const SolverChoice& s,
                              const std::string& scenario, int n,
                              std::uint64_t seed);

// Closed-form classification against the trace flows of the unconstrained
// solver, n random pairs per q0 value.
ScanReport classification_crosscheck(const Model& m, int solver_id,
                                     const std::vector<double>& q0s, int n,
                                     std::uint64_t seed);

// Constructive reachability for the minimal R1c invariant domains
// ("r1c_a".."r1c_d"): grid targets of the claimed-minimal set must appear
// among the fan states of explicit chains of R1c solves seeded in Omega_f
// (a, b) or Omega_c (c, d).
ScanReport reachability_scan(const Model& m, const std::string& domain_key,
                             double q0, int grid = 100);

// L1([lo,hi]) distances between solve(ul_n, ur) and solve(ul, ur) for the
// perturbed left states ul_n = perturb(n), n in ns.
std::vector<double> continuity_probe(const Model& m, const SolverChoice& s,
                                     State ul, State ur,
                                     const std::function<State(int)>& perturb,
                                     const std::vector<int>& ns,
                                     double lo = -1.0, double hi = 1.0,
                                     int quad_n = 10000);

}  // namespace twophase
