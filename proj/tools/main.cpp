#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "twophase/builtin_cases.hpp"

using namespace twophase;

namespace {

State parse_state_arg(const std::string& s) {
  auto comma = s.find(',');
  if (comma == std::string::npos)
    throw SolverError("state must be given as 'rho,v', got '" + s + "'");
  try {
    return State{std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
  } catch (const std::exception&) {
    throw SolverError("state must be given as 'rho,v', got '" + s + "'");
  }
}

Model load_model(const std::string& path) {
  if (path.empty()) return Model::from_json(Model::reference_config());
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open model file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ModelError("bad model file '" + path + "': " + e.what());
  }
  return Model::from_json(j);
}

int run_solve(const Model& m, const std::string& solver_s, double q0, State l,
              State r, const std::string& out_prefix, int samples) {
  SolverChoice s = parse_solver(solver_s, q0);
  WaveFan fan = solve(m, s, l, r);
  nlohmann::json out;
  out["solver"] = s.name();
  if (s.constrained()) out["q0"] = s.q0;
  out["fan"] = fan_to_json(fan);
  auto [tl, tr] = fan.traces();
  out["trace_left"] = {tl.rho, tl.v};
  out["trace_right"] = {tr.rho, tr.v};
  if (s.constrained()) {
    ConstraintProblem pb{l, r, s.q0};
    Classification cls = classify(m, pb, s.solver_id());
    out["classification"] = cls.tag();
    if (cls.exceeds) {
      TracePair tp = s.kind == SolverChoice::R1c ? select_traces_r1c(m, pb)
                                                 : select_traces_r2c(m, pb);
      out["trace_pair"] = trace_pair_to_json(tp);
    }
  }
  std::cout << out.dump(2) << "\n";
  if (!out_prefix.empty()) {
    std::ofstream jf(out_prefix + ".fan.json");
    jf << out.dump(2) << "\n";
    std::ofstream cf(out_prefix + ".profile.csv");
    write_profile_csv(fan, cf, samples);
    if (!jf || !cf)
      throw SolverError("cannot write outputs with prefix '" + out_prefix + "'");
  }
  return 0;
}

int run_classify(const Model& m, const std::string& solver_s, double q0,
                 State l, State r) {
  SolverChoice s = parse_solver(solver_s, q0);
  Classification cls = classify(m, ConstraintProblem{l, r, q0}, s.solver_id());
  std::cout << cls.tag() << "\n";
  return 0;
}

int run_verify(const Model& m, const std::string& solver_s, double q0, State l,
               State r) {
  SolverChoice s = parse_solver(solver_s, q0);
  WaveFan fan = solve(m, s, l, r);
  bool all = true;
  CheckReport rep = check_weak_solution(fan);
  std::cout << rep.to_json().dump() << "\n";
  all = all && rep.pass;
  if (s.constrained()) {
    auto [tl, tr] = fan.traces();
    double q_if = std::max(m.flow(tl), m.flow(tr));
    CheckReport cb;
    cb.name = "constraint_bound";
    cb.tolerance = 1e-9;
    cb.residual = std::max(0.0, q_if - s.q0);
    cb.pass = q_if <= s.q0 + 1e-9;
    cb.witness = "interface flow " + std::to_string(q_if);
    std::cout << cb.to_json().dump() << "\n";
    all = all && cb.pass;
  }
  return all ? 0 : 2;
}

int run_scan(const Model& m, const std::string& kind,
             const std::string& solver_s, const std::string& domain,
             const std::string& scenario, const std::string& params_s,
             double q0, bool has_q0, const std::vector<double>& q0_list, int n,
             int grid, std::uint64_t seed) {
  SolverChoice s = parse_solver(solver_s, q0);
  nlohmann::json params = nlohmann::json::parse(params_s);
  if (has_q0 && !params.contains("q0")) params["q0"] = q0;

  ScanReport rep;
  if (kind == "weak") {
    rep = weak_solution_scan(m, s, scenario, n, seed);
  } else if (kind == "consistency") {
    rep = consistency_scan(m, s, make_domain(m, domain, params), n, seed);
  } else if (kind == "invariant") {
    rep = invariant_scan(m, s, make_domain(m, domain, params), n, seed);
  } else if (kind == "classification") {
    std::vector<double> qs = q0_list;
    if (qs.empty() && has_q0) qs.push_back(q0);
    rep = classification_crosscheck(m, s.solver_id(), qs, n, seed);
  } else if (kind == "reachability") {
    rep = reachability_scan(m, domain, q0, grid);
  } else {
    throw SolverError("unknown scan kind '" + kind + "'");
  }
  std::cout << rep.to_json().dump(2) << "\n";
  return rep.pass() ? 0 : 2;
}

int run_examples(const std::string& which) {
  std::vector<cases::CaseResult> results;
  if (which == "all")
    results = cases::run_all();
  else
    results.push_back(cases::run_case(which));
  bool all = true;
  for (const auto& res : results) {
    std::cout << "== " << res.name << " ==\n";
    for (const auto& line : res.lines) std::cout << line << "\n";
    std::cout << (res.pass ? "PASS" : "FAIL") << "\n";
    all = all && res.pass;
  }
  return all ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Riemann solvers for a two-phase traffic model with a flow "
               "constraint at x = 0"};
  app.require_subcommand(1);
  std::string model_path;
  app.add_option("--model", model_path,
                 "model configuration JSON file (default: built-in)");

  std::string left_s, right_s, out_prefix, which = "all";
  std::string solver_s = "r1", kind, domain = "omega", scenario = "ff";
  std::string params_s = "{}";
  double q0 = 0.0;
  std::vector<double> q0_list;
  int samples = 2001, n = 1000, grid = 100;
  std::uint64_t seed = 1;

  auto* sc_solve =
      app.add_subcommand("solve", "solve a Riemann datum, print the wave fan");
  sc_solve->add_option("--left", left_s, "left state 'rho,v'")->required();
  sc_solve->add_option("--right", right_s, "right state 'rho,v'")->required();
  sc_solve->add_option("--solver", solver_s, "r1|r2|r1c|r2c");
  sc_solve->add_option("--q0", q0, "constraint level for r1c/r2c");
  sc_solve->add_option("--out", out_prefix,
                       "write PREFIX.fan.json and PREFIX.profile.csv");
  sc_solve->add_option("--samples", samples, "profile sample count");

  auto* sc_classify = app.add_subcommand(
      "classify", "print the constrained/exceeding region tag");
  sc_classify->add_option("--left", left_s, "left state 'rho,v'")->required();
  sc_classify->add_option("--right", right_s, "right state 'rho,v'")->required();
  sc_classify->add_option("--solver", solver_s, "r1|r2|r1c|r2c");
  sc_classify->add_option("--q0", q0, "constraint level")->required();

  auto* sc_verify = app.add_subcommand(
      "verify", "check the solution, print JSON-line reports");
  sc_verify->add_option("--left", left_s, "left state 'rho,v'")->required();
  sc_verify->add_option("--right", right_s, "right state 'rho,v'")->required();
  sc_verify->add_option("--solver", solver_s, "r1|r2|r1c|r2c");
  sc_verify->add_option("--q0", q0, "constraint level for r1c/r2c");

  auto* sc_scan = app.add_subcommand("scan", "randomized property scans");
  sc_scan->add_option("--kind", kind,
                      "weak|consistency|invariant|classification|reachability")
      ->required();
  sc_scan->add_option("--solver", solver_s, "r1|r2|r1c|r2c");
  sc_scan->add_option("--domain", domain, "domain key (see make_domain)");
  sc_scan->add_option("--scenario", scenario, "ff|cc|fc|cf (weak scans)");
  sc_scan->add_option("--params", params_s, "domain parameters as JSON");
  auto* q0_opt = sc_scan->add_option("--q0", q0, "constraint level");
  sc_scan->add_option("--q0-list", q0_list, "q0 values for classification scans")
      ->delimiter(',');
  sc_scan->add_option("--n", n, "sample count");
  sc_scan->add_option("--grid", grid, "grid size for reachability scans");
  sc_scan->add_option("--seed", seed, "RNG seed");

  auto* sc_examples =
      app.add_subcommand("examples", "run the built-in worked examples");
  sc_examples->add_option(
      "--which", which,
      "tv1|tv2|cons-i|cons-ii|r2-remark|continuity-high|continuity-low|all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    Model m = load_model(model_path);
    if (sc_solve->parsed())
      return run_solve(m, solver_s, q0, parse_state_arg(left_s),
                       parse_state_arg(right_s), out_prefix, samples);
    if (sc_classify->parsed())
      return run_classify(m, solver_s, q0, parse_state_arg(left_s),
                          parse_state_arg(right_s));
    if (sc_verify->parsed())
      return run_verify(m, solver_s, q0, parse_state_arg(left_s),
                        parse_state_arg(right_s));
    if (sc_scan->parsed())
      return run_scan(m, kind, solver_s, domain, scenario, params_s, q0,
                      q0_opt->count() > 0, q0_list, n, grid, seed);
    if (sc_examples->parsed()) return run_examples(which);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
