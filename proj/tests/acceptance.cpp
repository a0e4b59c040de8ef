// Acceptance gate: one line per criterion, nonzero exit when any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "twophase/builtin_cases.hpp"
#include "twophase/verification.hpp"

using namespace twophase;

namespace {

int g_failures = 0;

void report(int idx, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << idx << ": " << detail
            << std::endl;
  if (!ok) ++g_failures;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// Constraint levels spanning the four capacity regimes of a model: below the
// critical-curve top, at it, between the two curve tops, above the maximal one.
std::vector<double> q0_levels(const Model& m) {
  double a = m.flow(m.curve_u_c(m.constants().w_c));
  double b = m.flow(m.curve_u_c(m.constants().w_max));
  double hi = std::min(1.1 * b, 0.5 * (b + m.constants().q_max));
  return {0.5 * a, a, 0.5 * (a + b), hi};
}

std::vector<SolverChoice> all_solvers(const Model& m) {
  std::vector<SolverChoice> out = {parse_solver("r1", 0.0), parse_solver("r2", 0.0)};
  for (double q : q0_levels(m)) {
    out.push_back(parse_solver("r1c", q));
    out.push_back(parse_solver("r2c", q));
  }
  return out;
}

void criterion_weak_solutions(const std::vector<Model>& models) {
  auto t0 = std::chrono::steady_clock::now();
  long pairs = 0;
  int failures = 0;
  int scans = 0;
  std::string first_witness;
  for (const Model& m : models) {
    for (const char* sc : {"ff", "cc", "fc", "cf"}) {
      for (const SolverChoice& s : all_solvers(m)) {
        ScanReport rep =
            weak_solution_scan(m, s, sc, 10000, 1000u + static_cast<unsigned>(scans));
        ++scans;
        pairs += rep.samples;
        failures += rep.failures;
        if (!rep.pass() && first_witness.empty() && !rep.witnesses.empty())
          first_witness = rep.witnesses.front().witness;
      }
    }
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ostringstream d;
  d << "every fan of both unconstrained and both constrained solvers is an "
       "admissible weak solution: "
    << scans << " scans, " << pairs << " pairs, " << failures << " failures, "
    << fmt(secs) << " s";
  if (!first_witness.empty()) d << "; first: " << first_witness;
  report(1, failures == 0 && secs < 60.0, d.str());
}

void criterion_interface_flow(const std::vector<Model>& models) {
  int checked = 0, n2 = 0, violations = 0;
  for (std::size_t mi = 0; mi < models.size(); ++mi) {
    const Model& m = models[mi];
    Rng rng(7000u + mi);
    const char* scenarios[4] = {"ff", "cc", "fc", "cf"};
    for (int i = 0; i < 4000; ++i) {
      const char* sc = scenarios[i % 4];
      State l = sample_state(m, rng, std::string(1, sc[0]));
      State r = sample_state(m, rng, std::string(1, sc[1]));
      for (double q0 : q0_levels(m)) {
        ConstraintProblem pb{l, r, q0};
        for (int sid : {1, 2}) {
          if (!classify(m, pb, sid).exceeds) continue;
          WaveFan fan = sid == 1 ? solve_r1c(m, pb) : solve_r2c(m, pb);
          double ql = m.flow(fan.trace_left());
          double qr = m.flow(fan.trace_right());
          ++checked;
          if (ql > q0 + 1e-9 || qr > q0 + 1e-9) ++violations;
          if (std::abs(ql - qr) > 1e-9) ++violations;
          if (sid == 2 && classify(m, pb, 2).region == 2) {
            ++n2;
            if (std::abs(ql - q0) > 1e-9 || std::abs(qr - q0) > 1e-9) ++violations;
          }
        }
      }
    }
  }
  std::ostringstream d;
  d << "interface traces never exceed the constraint and match it exactly in "
       "the congested-congested exceeding class: "
    << checked << " exceeding solves, " << n2 << " of them congested-congested, "
    << violations << " violations";
  report(2, violations == 0 && n2 > 0, d.str());
}

void criterion_flow_bound(const Model& m) {
  bool ok = true;
  std::ostringstream d;

  double anchor1 = flow_max_oracle(m, {{1.0, m.V(1.0)}, {2.0, 1.0}, 1.0});
  double anchor2 =
      flow_max_oracle(m, {{1.9, m.V(1.9)}, {1.9, m.V(1.9)}, 2.1});
  if (std::abs(anchor1 - 1.0) > 1e-7) ok = false;
  if (std::abs(anchor2 - 2.08406653764541) > 1e-6) ok = false;

  const char* scenarios[4] = {"ff", "cc", "fc", "cf"};
  std::vector<double> q0s = q0_levels(m);
  Rng rng(8100u);
  int found = 0, tried = 0, violations = 0;
  double worst = 0.0;
  while (found < 100 && tried < 200000) {
    const char* sc = scenarios[tried % 4];
    double q0 = q0s[(tried / 4) % 4];
    ++tried;
    State l = sample_state(m, rng, std::string(1, sc[0]));
    State r = sample_state(m, rng, std::string(1, sc[1]));
    ConstraintProblem pb{l, r, q0};
    if (!classify(m, pb, 1).exceeds) continue;
    ++found;
    double hat = m.flow(select_traces_r1c(m, pb).u_hat);
    double oracle = flow_max_oracle(m, pb);
    worst = std::max(worst, oracle - hat);
    if (oracle > hat + 1e-6) ++violations;
  }
  if (violations > 0 || found < 100) ok = false;
  d << "the selected interface flow is maximal among admissible trace pairs: "
    << found << " exceeding pairs, max oracle excess " << fmt(worst)
    << ", anchors " << fmt(anchor1) << " and " << fmt(anchor2);
  report(3, ok, d.str());
}

void criterion_consistency(const std::vector<Model>& models) {
  bool ok = true;
  std::ostringstream d;
  long failures = 0;
  for (std::size_t mi = 0; mi < models.size(); ++mi) {
    const Model& m = models[mi];
    double q0 = q0_levels(m)[2];
    ScanReport rep = consistency_scan(m, parse_solver("r1c", q0),
                                      make_domain(m, "d1", {{"q0", q0}}), 1000,
                                      9000u + mi);
    failures += rep.failures;
    if (rep.premise_i_held == 0 || rep.premise_ii_held == 0) ok = false;
  }
  if (failures > 0) ok = false;
  cases::CaseResult c1 = cases::truncation_inconsistency();
  cases::CaseResult c2 = cases::juxtaposition_inconsistency();
  cases::CaseResult c3 = cases::r2_juxtaposition_failure();
  if (!(c1.pass && c2.pass && c3.pass)) ok = false;
  d << "the first constrained solver is consistent on its invariant set "
       "(2x1000 triples, "
    << failures
    << " failures) while the documented counterexamples break conditions (I) "
       "and (II): "
    << (c1.pass ? "ok" : "FAIL") << "/" << (c2.pass ? "ok" : "FAIL") << "/"
    << (c3.pass ? "ok" : "FAIL");
  report(4, ok, d.str());
}

void criterion_continuity() {
  cases::CaseResult hi = cases::continuity_gap();
  cases::CaseResult lo = cases::continuity_convergence();
  std::ostringstream d;
  d << "vanishing perturbations leave an order-one gap above the critical "
       "constraint level and vanish below it: "
    << (hi.pass ? "gap ok" : "gap FAIL") << ", "
    << (lo.pass ? "convergence ok" : "convergence FAIL");
  report(5, hi.pass && lo.pass, d.str());
}

void criterion_invariance(const std::vector<Model>& models) {
  long failures = 0;
  int scans = 0;
  std::string first;
  for (std::size_t mi = 0; mi < models.size(); ++mi) {
    const Model& m = models[mi];
    std::vector<double> qs = q0_levels(m);
    double w_c = m.constants().w_c;

    struct Inst {
      std::string key;
      nlohmann::json params;
      SolverChoice s;
    };
    std::vector<Inst> insts = {
        {"free_band", {{"rho_min", 0.3}, {"rho_max", 1.8}}, parse_solver("r1", 0.0)},
        {"congested_box",
         {{"w_min", 2.8}, {"w_max", 3.2}, {"v_min", 0.2}, {"v_max", 0.8}},
         parse_solver("r1", 0.0)},
        {"upper_mixed",
         {{"w_min", w_c}, {"w_max", 3.0}, {"v_min", 0.25}},
         parse_solver("r1", 0.0)},
        {"lower_mixed",
         {{"rho_min", 0.5}, {"w_max", 3.0}, {"v_min", 0.25}},
         parse_solver("r1", 0.0)},
    };
    for (int sid : {1, 2}) {
      std::string prefix = sid == 1 ? "r1c_" : "r2c_";
      std::string solver = sid == 1 ? "r1c" : "r2c";
      double qa[4] = {qs[2], qs[3], qs[2], qs[0]};
      const char* suffix[4] = {"a", "b", "c", "d"};
      for (int k = 0; k < 4; ++k) {
        insts.push_back({prefix + suffix[k],
                         {{"q0", qa[k]}},
                         parse_solver(solver, qa[k])});
      }
    }
    for (const Inst& inst : insts) {
      ScanReport rep = invariant_scan(m, inst.s, make_domain(m, inst.key, inst.params),
                                      10000, 11000u + static_cast<unsigned>(scans));
      ++scans;
      failures += rep.failures;
      if (rep.failures > 0 && first.empty())
        first = inst.key + ": " + rep.witnesses.front().witness;
    }
  }

  long reach_failures = 0;
  long reach_samples = 0;
  for (const Model& m : models) {
    std::vector<double> qs = q0_levels(m);
    double qa[4] = {qs[2], qs[3], qs[2], qs[0]};
    const char* keys[4] = {"r1c_a", "r1c_b", "r1c_c", "r1c_d"};
    for (int k = 0; k < 4; ++k) {
      ScanReport rep = reachability_scan(m, keys[k], qa[k], 100);
      reach_failures += rep.failures;
      reach_samples += rep.samples;
    }
  }

  std::ostringstream d;
  d << "the catalogued state sets are invariant (" << scans
    << " scans x 10000 pairs, " << failures
    << " escapes) and the minimal ones are reachable (" << reach_samples
    << " grid targets, " << reach_failures << " missed)";
  if (!first.empty()) d << "; first: " << first;
  report(6, failures == 0 && reach_failures == 0, d.str());
}

void criterion_total_variation() {
  cases::CaseResult a = cases::tv_example_1();
  cases::CaseResult b = cases::tv_example_2();
  std::ostringstream d;
  d << "closed-form total variation of the invariants orders the two "
       "constrained solvers both ways: "
    << (a.pass ? "first-larger ok" : "first-larger FAIL") << ", "
    << (b.pass ? "second-larger ok" : "second-larger FAIL");
  report(7, a.pass && b.pass, d.str());
}

void criterion_classification(const std::vector<Model>& models) {
  long failures = 0;
  for (std::size_t mi = 0; mi < models.size(); ++mi) {
    const Model& m = models[mi];
    for (int sid : {1, 2}) {
      ScanReport rep = classification_crosscheck(m, sid, q0_levels(m), 10000,
                                                 13000u + static_cast<unsigned>(mi * 2 + sid));
      failures += rep.failures;
    }
  }
  std::ostringstream d;
  d << "closed-form constrained/exceeding classification agrees with solved "
       "trace flows: 4 scans x 10000 pairs, "
    << failures << " disagreements";
  report(8, failures == 0, d.str());
}

}  // namespace

int main() {
  std::vector<Model> models;
  models.push_back(cases::reference_model(1.0));
  models.push_back(cases::reference_model(1.3));

  try {
    criterion_weak_solutions(models);
    criterion_interface_flow(models);
    criterion_flow_bound(models[0]);
    criterion_consistency(models);
    criterion_continuity();
    criterion_invariance(models);
    criterion_total_variation();
    criterion_classification(models);
  } catch (const std::exception& e) {
    std::cout << "FAIL acceptance: unexpected exception: " << e.what() << std::endl;
    return 1;
  }

  std::cout << (g_failures == 0 ? "acceptance: all 8 criteria passed"
                                : "acceptance: " + std::to_string(g_failures) +
                                      " criterion(s) failed")
            << std::endl;
  return g_failures == 0 ? 0 : 1;
}
