#include "twophase/constrained.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>
#include <vector>

namespace twophase {

namespace {

std::string fmt_state(State u) {
  std::ostringstream os;
  os.precision(12);
  os << "(" << u.rho << ", " << u.v << ")";
  return os.str();
}

void validate_problem(const Model& m, const ConstraintProblem& pb,
                      const char* who) {
  if (!(pb.q0 > 0.0) || !(pb.q0 < m.constants().q_max))
    throw OutOfRange(std::string(who) + ": q0 = " + std::to_string(pb.q0) +
                     " must lie strictly inside (0, q_max)");
  if (!m.in_domain(pb.left))
    throw OutsideDomain(std::string(who) + ": left state " +
                        fmt_state(pb.left) + " is not in Omega");
  if (!m.in_domain(pb.right))
    throw OutsideDomain(std::string(who) + ": right state " +
                        fmt_state(pb.right) + " is not in Omega");
}

// Flow of the ARZ intermediate state (w = w_l, v = v_r).
double middle_flow(const Model& m, double w_l, double v_r) {
  return m.p_inverse(w_l - v_r) * v_r;
}

State free_state_for_flow(const Model& m, double q) {
  double rho = m.free_flux_inverse(q);
  return State{rho, m.V(rho)};
}

// u_hat on {W = w_l} for the target flow q0: exact curve top when the whole
// curve stays below q0, interior root otherwise.
State hat_on_curve(const Model& m, double w, double q0) {
  State top = m.curve_u_c(w);
  if (m.flow(top) <= q0) return top;
  return m.congested_state_for_flow(w, q0);
}

Wave interface_wave(const Model& m, State u_hat, State u_check) {
  Wave w;
  w.kind = WaveKind::ConstraintInterface;
  w.family = WaveFamily::None;
  w.left = u_hat;
  w.right = u_check;
  w.speed_lo = w.speed_hi = 0.0;
  w.momentum_exempt = std::abs(m.marker(u_check) - m.marker(u_hat)) > domain_tol;
  return w;
}

WaveFan compose(const Model& m, State l, const WaveFan& left_fan,
                const TracePair& tp, const WaveFan& right_fan) {
  std::vector<Wave> waves = left_fan.waves();
  waves.push_back(interface_wave(m, tp.u_hat, tp.u_check));
  const auto& rw = right_fan.waves();
  waves.insert(waves.end(), rw.begin(), rw.end());
  return WaveFan(m, l, std::move(waves));
}

}  // namespace

std::string Classification::tag() const {
  std::string t = exceeds ? "N" : "C";
  if (region == 4) return t + "4_" + std::to_string(solver_id);
  return t + std::to_string(region);
}

Classification classify(const Model& m, const ConstraintProblem& pb,
                        int solver_id) {
  if (solver_id != 1 && solver_id != 2)
    throw SolverError("classify: solver_id must be 1 or 2");
  validate_problem(m, pb, "classify");

  State l = pb.left, r = pb.right;
  Phase pl = m.membership(l), pr = m.membership(r);
  Classification cls;
  cls.solver_id = solver_id;

  if (m.is_free(pl) && m.is_free(pr)) {
    cls.region = 1;
    cls.exceeds = m.flow(l) > pb.q0;
  } else if (pl == Phase::Congested && pr == Phase::Congested) {
    cls.region = 2;
    cls.exceeds = middle_flow(m, m.marker(l), r.v) > pb.q0;
  } else if (pl == Phase::Congested) {
    cls.region = 3;
    cls.exceeds = m.flow(m.curve_u_f(m.marker(l))) > pb.q0;
  } else {
    cls.region = 4;
    double qm = middle_flow(m, m.marker(l), r.v);
    if (solver_id == 1) {
      cls.exceeds = std::min(m.flow(l), qm) > pb.q0;
    } else {
      double w_l = m.marker(l), w_r = m.marker(r);
      cls.exceeds = (w_l <= w_r) ? std::min(m.flow(l), m.flow(r)) > pb.q0
                                 : qm > pb.q0;
    }
  }
  return cls;
}

const char* trace_case_name(TraceCase c) {
  switch (c) {
    case TraceCase::T11a: return "T11a";
    case TraceCase::T11b: return "T11b";
    case TraceCase::T21a: return "T21a";
    case TraceCase::T21b: return "T21b";
    case TraceCase::T12a: return "T12a";
    case TraceCase::T12b: return "T12b";
    case TraceCase::T22a: return "T22a";
    case TraceCase::T22b: return "T22b";
  }
  return "?";
}

TracePair select_traces_r1c(const Model& m, const ConstraintProblem& pb) {
  Classification cls = classify(m, pb, 1);
  if (!cls.exceeds)
    throw NotInN("select_traces_r1c: constraint already satisfied for " +
                 fmt_state(pb.left) + ", " + fmt_state(pb.right));
  double w_l = m.marker(pb.left);
  TracePair tp;

  if (cls.region == 1 || cls.region == 3) {
    double q_top = m.flow(m.curve_u_c(w_l));
    if (pb.q0 > q_top) {
      tp.u_hat = m.curve_u_c(w_l);
      tp.u_check = free_state_for_flow(m, q_top);
      tp.tag = TraceCase::T11a;
    } else {
      tp.u_hat = m.congested_state_for_flow(w_l, pb.q0);
      tp.u_check = free_state_for_flow(m, pb.q0);
      tp.tag = TraceCase::T11b;
    }
    return tp;
  }

  // Right state congested; its velocity is positive here, otherwise the
  // intermediate flow would vanish and the datum could not exceed q0.
  double v_r = pb.right.v;
  if (!(v_r > domain_tol))
    throw SolverError("select_traces_r1c: degenerate right velocity");
  tp.u_hat = m.congested_state_for_flow(w_l, pb.q0);
  double threshold = m.p_inverse(m.constants().w_c - v_r) * v_r;
  if (pb.q0 >= threshold) {
    tp.u_check = State{pb.q0 / v_r, v_r};
    tp.tag = TraceCase::T21a;
  } else {
    tp.u_check = free_state_for_flow(m, pb.q0);
    tp.tag = TraceCase::T21b;
  }
  return tp;
}

TracePair select_traces_r2c(const Model& m, const ConstraintProblem& pb) {
  Classification cls = classify(m, pb, 2);
  if (!cls.exceeds)
    throw NotInN("select_traces_r2c: constraint already satisfied for " +
                 fmt_state(pb.left) + ", " + fmt_state(pb.right));
  const Constants& k = m.constants();
  double w_l = m.marker(pb.left);
  TracePair tp;

  if (cls.region == 1 || cls.region == 3) {
    double q_cap = m.flow(m.curve_u_c(k.w_max));
    if (pb.q0 > q_cap) {
      tp.u_hat = m.curve_u_c(k.w_max);
      tp.u_check = free_state_for_flow(m, q_cap);
      tp.tag = TraceCase::T12a;
      return tp;
    }
    tp.tag = TraceCase::T12b;
  } else {
    tp.tag = (pb.q0 >= m.p_inverse(k.w_c - pb.right.v) * pb.right.v)
                 ? TraceCase::T22a
                 : TraceCase::T22b;
  }

  // u_hat sits on {W = w_hat} with w_hat = max(w_l, v_c + p(q0/v_c)): the
  // marker may rise above w_l so that flow q0 is attainable on the curve.
  double w_lift = m.v_c() + m.p(pb.q0 / m.v_c());
  tp.u_hat = (w_lift > w_l) ? State{pb.q0 / m.v_c(), m.v_c()}
                            : hat_on_curve(m, w_l, pb.q0);

  if (tp.tag == TraceCase::T22a) {
    tp.u_check = State{pb.q0 / pb.right.v, pb.right.v};
  } else {
    tp.u_check = free_state_for_flow(m, pb.q0);
  }
  return tp;
}

WaveFan solve_r1c(const Model& m, const ConstraintProblem& pb) {
  Classification cls = classify(m, pb, 1);
  if (!cls.exceeds) return solve_r1(m, pb.left, pb.right);
  TracePair tp = select_traces_r1c(m, pb);
  WaveFan left = solve_r1(m, pb.left, tp.u_hat);
  WaveFan right = solve_r1(m, tp.u_check, pb.right);
  return compose(m, pb.left, left, tp, right);
}

WaveFan solve_r2c(const Model& m, const ConstraintProblem& pb) {
  Classification cls = classify(m, pb, 2);
  if (!cls.exceeds) return solve_r2(m, pb.left, pb.right);
  TracePair tp = select_traces_r2c(m, pb);
  double w_l = m.marker(pb.left);

  if (cls.region == 3 && pb.q0 > m.flow(m.curve_u_c(w_l))) {
    // The left datum's curve cannot reach flow q0, so u_hat lives on a higher
    // marker curve. Fan: congested-to-free pieces down to u_f(w_l), then a
    // single backward jump onto u_hat.
    State ufw = m.curve_u_f(w_l);
    WaveFan head = solve_r2(m, pb.left, ufw);
    double sj = sigma(m, ufw, tp.u_hat);
    double head_top = head.waves().empty() ? -1e300 : head.waves().back().speed_hi;
    if (sj < 0.0 && head_top <= sj) {
      std::vector<Wave> waves = head.waves();
      Wave j;
      j.kind = WaveKind::PhaseTransition;
      j.family = WaveFamily::None;
      j.left = ufw;
      j.right = tp.u_hat;
      j.speed_lo = j.speed_hi = sj;
      j.momentum_exempt =
          std::abs(m.marker(tp.u_hat) - m.marker(ufw)) > domain_tol;
      waves.push_back(j);
      waves.push_back(interface_wave(m, tp.u_hat, tp.u_check));
      WaveFan right = solve_r2(m, tp.u_check, pb.right);
      const auto& rw = right.waves();
      waves.insert(waves.end(), rw.begin(), rw.end());
      return WaveFan(m, pb.left, std::move(waves));
    }
    std::cerr << "solve_r2c: unexpected wave ordering for data "
              << fmt_state(pb.left) << ", " << fmt_state(pb.right)
              << " (jump speed " << sj << "); using generic composition\n";
  }

  WaveFan left = solve_r2(m, pb.left, tp.u_hat);
  WaveFan right = solve_r2(m, tp.u_check, pb.right);
  return compose(m, pb.left, left, tp, right);
}

double flow_max_oracle(const Model& m, const ConstraintProblem& pb, int grid) {
  Classification cls = classify(m, pb, 1);
  if (!cls.exceeds)
    throw NotInN("flow_max_oracle: datum is on the constrained side");
  State l = pb.left, r = pb.right;
  double w_l = m.marker(l);

  std::vector<State> hats;
  hats.reserve(grid + 1);
  for (int i = 1; i <= grid; ++i) {
    double v = m.v_c() * double(i) / double(grid);
    hats.push_back(State{m.p_inverse(w_l - v), v});
  }
  if (pb.q0 <= m.flow(m.curve_u_c(w_l)))
    hats.push_back(m.congested_state_for_flow(w_l, pb.q0));

  auto left_ok = [&](State hat) {
    WaveFan fan = solve_r1(m, l, hat);
    return same_state(fan.trace_left(), hat);
  };
  auto right_ok = [&](State chk) {
    if (m.membership(chk) == Phase::Outside) return false;
    WaveFan fan = solve_r1(m, chk, r);
    return same_state(fan.trace_right(), chk);
  };
  auto find_check = [&](double q) {
    State chk = free_state_for_flow(m, q);
    if (right_ok(chk)) return true;
    if (m.membership(r) == Phase::Congested && r.v > domain_tol) {
      chk = State{q / r.v, r.v};
      if (m.membership(chk) == Phase::Congested && right_ok(chk)) return true;
    }
    for (int i = 1; i <= grid; ++i) {
      double v = m.v_c() * double(i) / double(grid);
      chk = State{q / v, v};
      if (m.membership(chk) == Phase::Congested && right_ok(chk)) return true;
    }
    return false;
  };

  double best = -1.0;
  for (State hat : hats) {
    if (m.membership(hat) != Phase::Congested) continue;
    double q = hat.rho * hat.v;
    if (q > pb.q0 + 1e-12 || q <= best) continue;
    if (!left_ok(hat)) continue;
    if (find_check(q)) best = q;
  }
  if (best < 0.0)
    throw NoRoot("flow_max_oracle: no admissible trace pair found");
  return best;
}

nlohmann::json trace_pair_to_json(const TracePair& tp) {
  return nlohmann::json{{"u_hat", {tp.u_hat.rho, tp.u_hat.v}},
                        {"u_check", {tp.u_check.rho, tp.u_check.v}},
                        {"case", trace_case_name(tp.tag)}};
}

std::string SolverChoice::name() const {
  switch (kind) {
    case R1: return "r1";
    case R2: return "r2";
    case R1c: return "r1c";
    case R2c: return "r2c";
  }
  return "?";
}

SolverChoice parse_solver(const std::string& name, double q0) {
  SolverChoice s;
  s.q0 = q0;
  if (name == "r1") s.kind = SolverChoice::R1;
  else if (name == "r2") s.kind = SolverChoice::R2;
  else if (name == "r1c") s.kind = SolverChoice::R1c;
  else if (name == "r2c") s.kind = SolverChoice::R2c;
  else throw SolverError("unknown solver '" + name + "'");
  return s;
}

WaveFan solve(const Model& m, const SolverChoice& s, State l, State r) {
  switch (s.kind) {
    case SolverChoice::R1: return solve_r1(m, l, r);
    case SolverChoice::R2: return solve_r2(m, l, r);
    case SolverChoice::R1c: return solve_r1c(m, ConstraintProblem{l, r, s.q0});
    case SolverChoice::R2c: return solve_r2c(m, ConstraintProblem{l, r, s.q0});
  }
  throw SolverError("solve: bad solver kind");
}

}  // namespace twophase
