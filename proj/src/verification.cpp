#include "twophase/verification.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace twophase {

namespace {

std::string fmt_state(State u) {
  std::ostringstream os;
  os.precision(12);
  os << "(" << u.rho << ", " << u.v << ")";
  return os.str();
}

void push_witness(ScanReport& rep, CheckReport cr) {
  if (rep.witnesses.size() < 16) rep.witnesses.push_back(std::move(cr));
}

using Profile = std::function<State(double)>;

// Sample-based equality of two profiles on a window around xbar, skipping
// small neighbourhoods of the listed breakpoints.
bool profiles_match(const Profile& a, const Profile& b, double xbar, double L,
                    const std::vector<double>& breaks, std::string& witness) {
  double delta = 1e-6 * L;
  for (int side : {-1, 1}) {
    for (int i = 0; i < 64; ++i) {
      double xi = xbar + side * (i + 0.5) / 64.0 * L;
      bool skip = false;
      for (double br : breaks)
        if (std::abs(xi - br) < delta) {
          skip = true;
          break;
        }
      if (skip) continue;
      State x = a(xi), y = b(xi);
      if (!same_state(x, y)) {
        std::ostringstream os;
        os.precision(12);
        os << "xi=" << xi << ": " << fmt_state(x) << " vs " << fmt_state(y);
        witness = os.str();
        return false;
      }
    }
  }
  return true;
}

State sample_congested_where(const Model& m, Rng& rng,
                             const std::function<bool(State)>& ok) {
  for (int i = 0; i < 200000; ++i) {
    State u{rng.uniform(m.rf_lo(), m.constants().r_max),
            rng.uniform(0.0, m.v_c())};
    if (m.membership(u) == Phase::Congested && ok(u)) return u;
  }
  throw SolverError("sample_congested_where: rejection sampling failed");
}

void require_q0(const Model& m, double q0, const std::string& key) {
  if (!(q0 > 0.0) || !(q0 < m.constants().q_max))
    throw OutOfRange("domain '" + key + "': q0 must lie in (0, q_max)");
}

}  // namespace

nlohmann::json CheckReport::to_json() const {
  return nlohmann::json{{"name", name},
                        {"pass", pass},
                        {"residual", residual},
                        {"tolerance", tolerance},
                        {"witness", witness}};
}

nlohmann::json ScanReport::to_json() const {
  nlohmann::json w = nlohmann::json::array();
  for (const auto& cr : witnesses) w.push_back(cr.to_json());
  return nlohmann::json{{"name", name},
                        {"samples", samples},
                        {"failures", failures},
                        {"premise_i_held", premise_i_held},
                        {"premise_ii_held", premise_ii_held},
                        {"pass", pass()},
                        {"witnesses", w}};
}

CheckReport check_weak_solution(const WaveFan& fan) {
  CheckReport rep;
  rep.name = "weak_solution";
  rep.tolerance = 1e-9;
  FanReport fr = validate_fan(fan);
  for (const auto& v : fr.violations) {
    rep.pass = false;
    rep.residual = std::max(rep.residual, v.residual);
    if (rep.witness.empty()) rep.witness = v.check + ": " + v.detail;
  }
  const Model& m = fan.model();
  const auto& ws = fan.waves();
  for (std::size_t i = 0; i < ws.size(); ++i) {
    if (!ws[i].is_rarefaction()) continue;
    for (int k = 1; k <= 32; ++k) {
      double xi =
          ws[i].speed_lo + (ws[i].speed_hi - ws[i].speed_lo) * k / 33.0;
      State u = rarefaction_state(m, ws[i], xi);
      double lam = ws[i].family == WaveFamily::Free ? m.lambda_free(u.rho)
                                                    : m.lambda1(u);
      double res = std::abs(lam - xi);
      if (res > 1e-8) {
        rep.pass = false;
        rep.tolerance = 1e-8;
        rep.residual = std::max(rep.residual, res);
        if (rep.witness.empty())
          rep.witness =
              "rarefaction self-similarity off at wave " + std::to_string(i);
      }
    }
  }
  return rep;
}

ConsistencyReport check_consistency(const Model& m, const SolverChoice& s,
                                    State ul, State um, State ur,
                                    double xbar) {
  WaveFan big = solve(m, s, ul, ur);
  WaveFan lm = solve(m, s, ul, um);
  WaveFan mr = solve(m, s, um, ur);

  ConsistencyReport rep;
  rep.premise_i = same_state(big.evaluate(xbar), um);
  rep.premise_ii =
      same_state(lm.evaluate(xbar), um) && same_state(mr.evaluate(xbar), um);

  double smax = std::max({big.max_abs_speed(), lm.max_abs_speed(),
                          mr.max_abs_speed()});
  double L = 1.0 + 1.25 * smax;
  std::vector<double> breaks{xbar};
  for (const WaveFan* f : {&big, &lm, &mr})
    for (const auto& w : f->waves()) {
      breaks.push_back(w.speed_lo);
      breaks.push_back(w.speed_hi);
    }

  Profile big_p = [&](double xi) { return big.evaluate(xi); };
  Profile lm_p = [&](double xi) { return lm.evaluate(xi); };
  Profile mr_p = [&](double xi) { return mr.evaluate(xi); };
  Profile truncated = [&](double xi) {
    return xi < xbar ? big.evaluate(xi) : um;
  };
  Profile extended = [&](double xi) {
    return xi < xbar ? um : big.evaluate(xi);
  };
  Profile juxtaposed = [&](double xi) {
    return xi < xbar ? lm.evaluate(xi) : mr.evaluate(xi);
  };

  std::string wa, wb;
  bool left_half = profiles_match(lm_p, truncated, xbar, L, breaks, wa);
  bool right_half = profiles_match(mr_p, extended, xbar, L, breaks, wb);
  rep.conclusion_i = left_half && right_half;
  rep.witness_i = left_half ? wb : wa;
  rep.conclusion_ii =
      profiles_match(big_p, juxtaposed, xbar, L, breaks, rep.witness_ii);
  return rep;
}

State sample_state(const Model& m, Rng& rng, const std::string& phase) {
  if (phase == "f") {
    double rho = rng.uniform(0.0, m.rf_hi());
    return State{rho, m.V(rho)};
  }
  if (phase == "c")
    return sample_congested_where(m, rng, [](State) { return true; });
  if (phase == "any")
    return sample_state(m, rng, rng.uniform_int(0, 1) ? "f" : "c");
  throw SolverError("sample_state: phase must be 'f', 'c' or 'any'");
}

Domain make_domain(const Model& m, const std::string& key,
                   const nlohmann::json& params) {
  const Model* mp = &m;
  const Constants& k = m.constants();
  Domain dom;
  dom.name = key;

  if (key == "omega") {
    dom.contains = [mp](State u) { return mp->in_domain(u); };
    dom.sample = [mp](Rng& rng) { return sample_state(*mp, rng, "any"); };
    return dom;
  }
  if (key == "omega_f") {
    dom.contains = [mp](State u) { return mp->is_free(mp->membership(u)); };
    dom.sample = [mp](Rng& rng) { return sample_state(*mp, rng, "f"); };
    return dom;
  }
  if (key == "omega_c") {
    dom.contains = [mp](State u) {
      return mp->membership(u) == Phase::Congested;
    };
    dom.sample = [mp](Rng& rng) { return sample_state(*mp, rng, "c"); };
    return dom;
  }

  if (key == "d1" || key == "d2") {
    double q0 = params.at("q0").get<double>();
    require_q0(m, q0, key);
    double rho_cap = m.free_flux_inverse(q0);
    if (key == "d2") {
      dom.contains = [mp, q0](State u) {
        return mp->is_free(mp->membership(u)) && mp->flow(u) <= q0 + domain_tol;
      };
      dom.sample = [mp, rho_cap](Rng& rng) {
        double rho = rng.uniform(0.0, rho_cap);
        return State{rho, mp->V(rho)};
      };
      return dom;
    }
    dom.contains = [mp, q0](State u) {
      return mp->in_domain(u) && mp->flow(u) <= q0 + domain_tol;
    };
    dom.sample = [mp, q0, rho_cap](Rng& rng) {
      if (rng.uniform_int(0, 1)) {
        double rho = rng.uniform(0.0, rho_cap);
        return State{rho, mp->V(rho)};
      }
      return sample_congested_where(
          *mp, rng, [mp, q0](State u) { return mp->flow(u) <= q0; });
    };
    return dom;
  }

  if (key == "d2_prime") {
    double q0 = params.at("q0").get<double>();
    require_q0(m, q0, key);
    // Marker floor: the curve {W = w0} has top flow exactly q0.
    double w0 = m.v_c() + m.p(q0 / m.v_c());
    if (w0 < k.w_c - domain_tol || w0 > k.w_max + domain_tol)
      throw OutOfRange("domain 'd2_prime': q0 outside the curve-top range");
    dom.contains = [mp, q0, w0](State u) {
      return mp->membership(u) == Phase::Congested &&
             mp->marker(u) >= w0 - domain_tol && mp->flow(u) <= q0 + domain_tol;
    };
    dom.sample = [mp, q0, w0](Rng& rng) {
      return sample_congested_where(*mp, rng, [mp, q0, w0](State u) {
        return mp->marker(u) >= w0 && mp->flow(u) <= q0;
      });
    };
    return dom;
  }

  if (key == "d2_dprime") {
    double q0 = params.at("q0").get<double>();
    require_q0(m, q0, key);
    double w_bar = params.value("w_bar", k.w_c);
    if (w_bar < k.w_c - domain_tol || w_bar > k.w_max + domain_tol)
      throw OutOfRange("domain 'd2_dprime': w_bar outside [w_c, w_max]");
    bool with_free_low = std::abs(w_bar - k.w_c) <= domain_tol;
    State uf = m.curve_u_f(w_bar);
    bool with_uf = m.flow(uf) <= q0 + domain_tol;
    double v_top = (q0 >= m.flow(m.curve_u_c(w_bar)))
                       ? m.v_c()
                       : m.congested_state_for_flow(w_bar, q0).v;
    double rho_low_cap =
        with_free_low ? std::min(m.rf_lo(), m.free_flux_inverse(q0)) : 0.0;
    dom.contains = [mp, q0, w_bar](State u) {
      return mp->in_domain(u) && std::abs(mp->marker(u) - w_bar) <= domain_tol &&
             mp->flow(u) <= q0 + domain_tol;
    };
    dom.sample = [mp, w_bar, v_top, with_free_low, with_uf, uf,
                  rho_low_cap](Rng& rng) {
      bool any_free = with_free_low || with_uf;
      if (!any_free || rng.uniform_int(0, 1)) {
        double v = rng.uniform(0.0, v_top);
        return State{mp->p_inverse(w_bar - v), v};
      }
      if (with_free_low && (!with_uf || rng.uniform_int(0, 4) > 0)) {
        double rho = rng.uniform(0.0, rho_low_cap);
        return State{rho, mp->V(rho)};
      }
      return uf;
    };
    return dom;
  }

  if (key == "free_band") {
    double rho_min = params.value("rho_min", 0.0);
    double rho_max = params.value("rho_max", m.rf_hi());
    dom.contains = [mp, rho_min, rho_max](State u) {
      return mp->is_free(mp->membership(u)) && u.rho >= rho_min - domain_tol &&
             u.rho <= rho_max + domain_tol;
    };
    dom.sample = [mp, rho_min, rho_max](Rng& rng) {
      double rho = rng.uniform(rho_min, rho_max);
      return State{rho, mp->V(rho)};
    };
    return dom;
  }

  if (key == "congested_box") {
    double w_min = params.value("w_min", k.w_c);
    double w_max = params.value("w_max", k.w_max);
    double v_min = params.value("v_min", 0.0);
    double v_max = params.value("v_max", m.v_c());
    auto inside = [mp, w_min, w_max, v_min, v_max](State u) {
      if (mp->membership(u) != Phase::Congested) return false;
      double w = u.v + mp->p(u.rho);
      return w >= w_min - domain_tol && w <= w_max + domain_tol &&
             u.v >= v_min - domain_tol && u.v <= v_max + domain_tol;
    };
    dom.contains = inside;
    dom.sample = [mp, inside](Rng& rng) {
      return sample_congested_where(*mp, rng, inside);
    };
    return dom;
  }

  if (key == "upper_mixed" || key == "lower_mixed") {
    double w_box = params.value("w_max", k.w_max);
    double v_min = params.value("v_min", 0.0);
    double rho_lo = key == "upper_mixed"
                        ? m.curve_u_f(params.value("w_min", k.w_c)).rho
                        : params.value("rho_min", 0.0);
    double w_lo = key == "upper_mixed" ? params.value("w_min", k.w_c) : k.w_c;
    double rho_hi = m.curve_u_f(w_box).rho;
    auto in_congested = [mp, w_lo, w_box, v_min](State u) {
      if (mp->membership(u) != Phase::Congested) return false;
      double w = u.v + mp->p(u.rho);
      return w >= w_lo - domain_tol && w <= w_box + domain_tol &&
             u.v >= v_min - domain_tol;
    };
    dom.contains = [mp, rho_lo, rho_hi, in_congested](State u) {
      if (mp->is_free(mp->membership(u)))
        return u.rho >= rho_lo - domain_tol && u.rho <= rho_hi + domain_tol;
      return in_congested(u);
    };
    dom.sample = [mp, rho_lo, rho_hi, in_congested](Rng& rng) {
      if (rng.uniform_int(0, 1)) {
        double rho = rng.uniform(rho_lo, rho_hi);
        return State{rho, mp->V(rho)};
      }
      return sample_congested_where(*mp, rng, in_congested);
    };
    return dom;
  }

  if (key == "r1c_a" || key == "r2c_a") {
    double q0 = params.at("q0").get<double>();
    require_q0(m, q0, key);
    if (q0 > m.flow(m.curve_u_c(k.w_max)) + domain_tol)
      throw OutOfRange("domain '" + key + "': q0 above the top-curve flow");
    auto in_piece = [mp, q0](State u) {
      if (mp->membership(u) != Phase::Congested) return false;
      return mp->flow(u) <= q0 + domain_tol &&
             u.v * mp->p_inverse(mp->constants().w_max - u.v) >=
                 q0 - domain_tol;
    };
    dom.contains = [mp, in_piece](State u) {
      return mp->is_free(mp->membership(u)) || in_piece(u);
    };
    dom.sample = [mp, in_piece](Rng& rng) {
      if (rng.uniform_int(0, 1)) return sample_state(*mp, rng, "f");
      return sample_congested_where(*mp, rng, in_piece);
    };
    return dom;
  }

  if (key == "r1c_b" || key == "r2c_b") {
    bool top_only = key == "r2c_b";
    State top = m.curve_u_c(k.w_max);
    dom.contains = [mp, top_only, top](State u) {
      if (mp->is_free(mp->membership(u))) return true;
      if (mp->membership(u) != Phase::Congested) return false;
      return top_only ? same_state(u, top)
                      : std::abs(u.v - mp->v_c()) <= domain_tol;
    };
    dom.sample = [mp, top_only, top](Rng& rng) {
      if (rng.uniform_int(0, 1)) return sample_state(*mp, rng, "f");
      if (top_only) return top;
      double w = rng.uniform(mp->constants().w_c, mp->constants().w_max);
      return mp->curve_u_c(w);
    };
    return dom;
  }

  if (key == "r1c_c" || key == "r2c_c") {
    Domain d = make_domain(m, "omega_c", params);
    d.name = key;
    return d;
  }

  if (key == "r1c_d" || key == "r2c_d") {
    double q0 = params.at("q0").get<double>();
    require_q0(m, q0, key);
    double rho0 = m.free_flux_inverse(q0);
    State u0{rho0, m.V(rho0)};
    dom.contains = [mp, u0](State u) {
      return mp->membership(u) == Phase::Congested || same_state(u, u0);
    };
    dom.sample = [mp, u0](Rng& rng) {
      if (rng.uniform_int(0, 1)) return u0;
      return sample_state(*mp, rng, "c");
    };
    return dom;
  }

  throw UnknownDomain("unknown domain '" + key + "'");
}

ScanReport consistency_scan(const Model& m, const SolverChoice& s,
                            const Domain& dom, int n, std::uint64_t seed) {
  ScanReport rep;
  rep.name = "consistency:" + s.name() + ":" + dom.name;
  Rng rng(seed);
  for (int i = 0; i < n; ++i) {
    State ul = dom.sample(rng), ur = dom.sample(rng);
    WaveFan fan = solve(m, s, ul, ur);
    double x_cap = 1.0 + 1.25 * fan.max_abs_speed();
    double xbar = rng.uniform(-x_cap, x_cap);
    State um = fan.evaluate(xbar);
    ConsistencyReport cr = check_consistency(m, s, ul, um, ur, xbar);
    ++rep.samples;
    if (cr.premise_i) ++rep.premise_i_held;
    if (cr.premise_ii) ++rep.premise_ii_held;
    if (!cr.pass()) {
      ++rep.failures;
      CheckReport w;
      w.name = cr.implication_i() ? "consistency_ii" : "consistency_i";
      w.pass = false;
      std::ostringstream os;
      os.precision(12);
      os << "ul=" << fmt_state(ul) << " um=" << fmt_state(um)
         << " ur=" << fmt_state(ur) << " xbar=" << xbar << "; "
         << (cr.implication_i() ? cr.witness_ii : cr.witness_i);
      w.witness = os.str();
      push_witness(rep, std::move(w));
    }
  }
  return rep;
}

ScanReport invariant_scan(const Model& m, const SolverChoice& s,
                          const Domain& dom, int n, std::uint64_t seed) {
  ScanReport rep;
  rep.name = "invariant:" + s.name() + ":" + dom.name;
  Rng rng(seed);
  for (int i = 0; i < n; ++i) {
    State ul = dom.sample(rng), ur = dom.sample(rng);
    WaveFan fan = solve(m, s, ul, ur);
    ++rep.samples;
    State offender;
    bool ok = dom.contains(fan.left_state());
    if (!ok) offender = fan.left_state();
    for (const auto& w : fan.waves()) {
      if (!ok) break;
      for (State u : {w.left, w.right})
        if (!dom.contains(u)) {
          ok = false;
          offender = u;
          break;
        }
      if (ok && w.is_rarefaction()) {
        for (int j = 1; j <= 8; ++j) {
          double xi = w.speed_lo + (w.speed_hi - w.speed_lo) * j / 9.0;
          State u = rarefaction_state(m, w, xi);
          if (!dom.contains(u)) {
            ok = false;
            offender = u;
            break;
          }
        }
      }
    }
    if (!ok) {
      ++rep.failures;
      CheckReport w;
      w.name = "invariance";
      w.pass = false;
      w.witness = "ul=" + fmt_state(ul) + " ur=" + fmt_state(ur) +
                  " escapes at " + fmt_state(offender);
      push_witness(rep, std::move(w));
    }
  }
  return rep;
}

ScanReport weak_solution_scan(const Model& m, const SolverChoice& s,
                              const std::string& scenario, int n,
                              std::uint64_t seed) {
  if (scenario.size() != 2)
    throw SolverError("weak_solution_scan: scenario must be two of 'f'/'c'");
  ScanReport rep;
  rep.name = "weak:" + s.name() + ":" + scenario;
  Rng rng(seed);
  for (int i = 0; i < n; ++i) {
    State ul = sample_state(m, rng, scenario.substr(0, 1));
    State ur = sample_state(m, rng, scenario.substr(1, 1));
    WaveFan fan = solve(m, s, ul, ur);
    CheckReport cr = check_weak_solution(fan);
    if (s.constrained()) {
      auto [tl, tr] = fan.traces();
      double q_if = std::max(m.flow(tl), m.flow(tr));
      if (q_if > s.q0 + 1e-9) {
        cr.pass = false;
        cr.witness = "interface flow " + std::to_string(q_if) +
                     " above the constraint";
      }
    }
    ++rep.samples;
    if (!cr.pass) {
      ++rep.failures;
      cr.name = "weak_solution ul=" + fmt_state(ul) + " ur=" + fmt_state(ur);
      push_witness(rep, std::move(cr));
    }
  }
  return rep;
}

ScanReport classification_crosscheck(const Model& m, int solver_id,
                                     const std::vector<double>& q0s, int n,
                                     std::uint64_t seed) {
  ScanReport rep;
  rep.name = "classification:r" + std::to_string(solver_id);
  if (q0s.empty()) throw SolverError("classification_crosscheck: no q0 values");
  static const char* scenarios[4] = {"ff", "cc", "fc", "cf"};
  Rng rng(seed);
  for (int i = 0; i < n; ++i) {
    const char* sc = scenarios[i % 4];
    State ul = sample_state(m, rng, std::string(1, sc[0]));
    State ur = sample_state(m, rng, std::string(1, sc[1]));
    double q0 = q0s[i % q0s.size()];
    Classification cls = classify(m, ConstraintProblem{ul, ur, q0}, solver_id);
    WaveFan fan = solver_id == 1 ? solve_r1(m, ul, ur) : solve_r2(m, ul, ur);
    auto [tl, tr] = fan.traces();
    bool exceeds = std::max(m.flow(tl), m.flow(tr)) > q0;
    ++rep.samples;
    if (exceeds != cls.exceeds) {
      ++rep.failures;
      CheckReport w;
      w.name = "classification";
      w.pass = false;
      w.witness = "ul=" + fmt_state(ul) + " ur=" + fmt_state(ur) +
                  " q0=" + std::to_string(q0) + " tag=" + cls.tag() +
                  " trace flow disagrees";
      push_witness(rep, std::move(w));
    }
  }
  return rep;
}

ScanReport reachability_scan(const Model& m, const std::string& domain_key,
                             double q0, int grid) {
  ScanReport rep;
  rep.name = "reachability:" + domain_key;
  const Constants& k = m.constants();
  require_q0(m, q0, domain_key);

  auto contains_state = [](const WaveFan& fan, State t) {
    auto close = [&](State a) {
      return std::abs(a.rho - t.rho) <= 1e-8 && std::abs(a.v - t.v) <= 1e-8;
    };
    if (close(fan.left_state())) return true;
    for (const auto& w : fan.waves())
      if (close(w.left) || close(w.right)) return true;
    return false;
  };
  auto expect = [&](const WaveFan& fan, State t, const std::string& step) {
    ++rep.samples;
    if (!contains_state(fan, t)) {
      ++rep.failures;
      CheckReport w;
      w.name = step;
      w.pass = false;
      w.witness = "target " + fmt_state(t) + " not among the fan states";
      push_witness(rep, std::move(w));
    }
  };
  auto r1c = [&](State l, State r) {
    return solve_r1c(m, ConstraintProblem{l, r, q0});
  };

  if (domain_key == "r1c_a") {
    if (q0 > m.flow(m.curve_u_c(k.w_max)))
      throw OutOfRange("reachability r1c_a: q0 above the top-curve flow");
    double v1 = m.congested_state_for_flow(k.w_max, q0).v;
    double v2 = (q0 >= m.flow(m.curve_u_c(k.w_c)))
                    ? m.v_c()
                    : m.congested_state_for_flow(k.w_c, q0).v;
    int g = std::max(2, (int)std::lround(std::sqrt((double)grid)));
    State seed{0.5 * m.rf_lo(), m.V(0.5 * m.rf_lo())};
    for (int i = 0; i < g; ++i) {
      double vt = v1 + (v2 - v1) * (i + 0.5) / g;
      double r_lo = m.p_inverse(k.w_c - vt);
      double r_hi = std::min(q0 / vt, m.p_inverse(k.w_max - vt));
      for (int j = 0; j < g; ++j) {
        double rt = r_lo + (r_hi - r_lo) * (j + 0.5) / g;
        State target{rt, vt};
        // Chain: hat trace of a one-sided datum lands on {W = w_A}; a
        // free/low datum against it produces the w_c companion; a matching
        // free datum against that reaches the target.
        double w_a = vt + m.p(q0 / vt);
        State a{q0 / vt, vt};
        State b{r_lo, vt};
        State uf_a = m.curve_u_f(w_a);
        expect(r1c(uf_a, uf_a), a, "step1");
        expect(r1c(seed, a), b, "step2");
        State uf_t = m.curve_u_f(vt + m.p(rt));
        expect(r1c(uf_t, b), target, "step3");
      }
    }
    return rep;
  }

  if (domain_key == "r1c_b") {
    if (q0 < m.flow(m.curve_u_c(k.w_max)))
      throw OutOfRange("reachability r1c_b: q0 below the top-curve flow");
    State uf_top = m.curve_u_f(k.w_max);
    State top = m.curve_u_c(k.w_max);
    expect(r1c(uf_top, uf_top), top, "step1");
    for (int i = 0; i < grid; ++i) {
      double wt = k.w_c + (k.w_max - k.w_c) * (i + 0.5) / grid;
      expect(r1c(m.curve_u_f(wt), top), m.curve_u_c(wt), "step2");
    }
    return rep;
  }

  if (domain_key == "r1c_c") {
    int g = std::max(2, (int)std::lround(std::sqrt((double)grid)));
    for (int i = 0; i < g; ++i) {
      double w = k.w_c + (k.w_max - k.w_c) * (i + 0.5) / g;
      for (int j = 0; j < g; ++j) {
        double v = m.v_c() * (j + 0.5) / g;
        State t{m.p_inverse(w - v), v};
        expect(r1c(t, t), t, "trivial");
      }
    }
    return rep;
  }

  if (domain_key == "r1c_d") {
    if (q0 >= m.flow(m.curve_u_c(k.w_c)))
      throw OutOfRange("reachability r1c_d: q0 must sit below the w_c curve top");
    double rho0 = m.free_flux_inverse(q0);
    State u0{rho0, m.V(rho0)};
    State uc = m.curve_u_c(k.w_c);
    expect(r1c(uc, uc), u0, "step1");
    return rep;
  }

  throw UnknownDomain("reachability_scan: unknown domain '" + domain_key + "'");
}

std::vector<double> continuity_probe(const Model& m, const SolverChoice& s,
                                     State ul, State ur,
                                     const std::function<State(int)>& perturb,
                                     const std::vector<int>& ns, double lo,
                                     double hi, int quad_n) {
  WaveFan base = solve(m, s, ul, ur);
  std::vector<double> out;
  out.reserve(ns.size());
  for (int n : ns) {
    WaveFan pert = solve(m, s, perturb(n), ur);
    out.push_back(l1_distance(pert, base, lo, hi, quad_n));
  }
  return out;
}

}  // namespace twophase
