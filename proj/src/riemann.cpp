#include "twophase/riemann.hpp"

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

void require_in_domain(const Model& m, State u, const char* who) {
  if (m.membership(u) == Phase::Outside)
    throw OutsideDomain(std::string(who) + ": state " + fmt_state(u) +
                        " is not in Omega");
}

Wave jump(const Model& m, WaveKind kind, WaveFamily family, State l, State r,
          double speed) {
  Wave w;
  w.kind = kind;
  w.family = family;
  w.left = l;
  w.right = r;
  w.speed_lo = w.speed_hi = speed;
  if (kind == WaveKind::PhaseTransition || kind == WaveKind::ConstraintInterface)
    w.momentum_exempt = std::abs(m.marker(r) - m.marker(l)) > domain_tol;
  return w;
}

Wave rarefaction(WaveFamily family, State l, State r, double lo, double hi) {
  Wave w;
  w.kind = WaveKind::Rarefaction;
  w.family = family;
  w.left = l;
  w.right = r;
  w.speed_lo = lo;
  w.speed_hi = hi;
  return w;
}

// ARZ intermediate state: w = w_l, v = v_r.
State arz_middle(const Model& m, double w_l, double v_r) {
  State um{m.p_inverse(w_l - v_r), v_r};
  if (m.membership(um) != Phase::Congested)
    throw IntermediateOutsideOmegaC("intermediate state " + fmt_state(um) +
                                    " left the congested set");
  return um;
}

void append_arz_waves(const Model& m, State l, State r, double w_l,
                      std::vector<Wave>& waves) {
  State um = arz_middle(m, w_l, r.v);
  if (!same_state(l, um)) {
    if (um.rho > l.rho)
      waves.push_back(jump(m, WaveKind::Shock, WaveFamily::One, l, um,
                           sigma(m, l, um)));
    else
      waves.push_back(rarefaction(WaveFamily::One, l, um, m.lambda1(l),
                                  m.lambda1(um)));
  }
  if (!same_state(um, r))
    waves.push_back(jump(m, WaveKind::Contact, WaveFamily::Two, um, r, r.v));
}

void append_lwr_waves(const Model& m, State l, State r,
                      std::vector<Wave>& waves) {
  if (same_state(l, r)) return;
  if (l.rho < r.rho)
    waves.push_back(jump(m, WaveKind::Shock, WaveFamily::Free, l, r,
                         sigma(m, l, r)));
  else
    waves.push_back(rarefaction(WaveFamily::Free, l, r, m.lambda_free(l.rho),
                                m.lambda_free(r.rho)));
}

}  // namespace

double sigma(const Model& m, State l, State r) {
  (void)m;
  if (std::abs(l.rho - r.rho) <= domain_tol)
    throw EqualDensities("sigma: equal densities " + fmt_state(l) + ", " +
                         fmt_state(r));
  return (r.rho * r.v - l.rho * l.v) / (r.rho - l.rho);
}

WaveFan solve_lwr(const Model& m, State l, State r) {
  Phase pl = m.membership(l), pr = m.membership(r);
  if (!m.is_free(pl) || !m.is_free(pr))
    throw OutsideDomain("solve_lwr: data " + fmt_state(l) + ", " +
                        fmt_state(r) + " must both be free states");
  std::vector<Wave> waves;
  append_lwr_waves(m, l, r, waves);
  return WaveFan(m, l, std::move(waves));
}

WaveFan solve_arz(const Model& m, State l, State r) {
  if (m.membership(l) != Phase::Congested ||
      m.membership(r) != Phase::Congested)
    throw OutsideDomain("solve_arz: data " + fmt_state(l) + ", " +
                        fmt_state(r) + " must both be congested states");
  std::vector<Wave> waves;
  if (!same_state(l, r))
    append_arz_waves(m, l, r, l.v + m.p(l.rho), waves);
  return WaveFan(m, l, std::move(waves));
}

WaveFan solve_r1(const Model& m, State l, State r) {
  Phase pl = m.membership(l), pr = m.membership(r);
  require_in_domain(m, l, "solve_r1");
  require_in_domain(m, r, "solve_r1");

  if (m.is_free(pl) && m.is_free(pr)) return solve_lwr(m, l, r);
  if (pl == Phase::Congested && pr == Phase::Congested) return solve_arz(m, l, r);

  std::vector<Wave> waves;
  if (m.is_free(pl)) {
    // Free to congested: transition to the state with w = w_l, v = v_r, then
    // the ARZ tail (which degenerates to the 2-contact).
    double w_l = m.marker(l);
    State um = arz_middle(m, w_l, r.v);
    if (!same_state(l, um))
      waves.push_back(jump(m, WaveKind::PhaseTransition, WaveFamily::None, l,
                           um, sigma(m, l, um)));
    if (!same_state(um, r))
      append_arz_waves(m, um, r, w_l, waves);
    return WaveFan(m, l, std::move(waves));
  }

  // Congested to free: ARZ up to u_c(w_l), transition to u_f(w_l), then LWR.
  double w_l = l.v + m.p(l.rho);
  State ucw = m.curve_u_c(w_l);
  State ufw = m.curve_u_f(w_l);
  if (!same_state(l, ucw)) append_arz_waves(m, l, ucw, w_l, waves);
  if (!same_state(ucw, ufw))
    waves.push_back(jump(m, WaveKind::PhaseTransition, WaveFamily::None, ucw,
                         ufw, sigma(m, ucw, ufw)));
  append_lwr_waves(m, ufw, r, waves);
  return WaveFan(m, l, std::move(waves));
}

WaveFan solve_r2(const Model& m, State l, State r) {
  Phase pl = m.membership(l), pr = m.membership(r);
  require_in_domain(m, l, "solve_r2");
  require_in_domain(m, r, "solve_r2");

  if (m.is_free(pl) && pr == Phase::Congested && l.rho > domain_tol) {
    double w_l = m.marker(l);
    double w_r = r.v + m.p(r.rho);
    if (w_r - w_l > domain_tol) {
      // Single momentum-nonconserving jump.
      std::vector<Wave> waves{jump(m, WaveKind::PhaseTransition,
                                   WaveFamily::None, l, r, sigma(m, l, r))};
      return WaveFan(m, l, std::move(waves));
    }
  }
  return solve_r1(m, l, r);
}

}  // namespace twophase
