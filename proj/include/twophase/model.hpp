#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <variant>

#include "json.hpp"
#include "twophase/errors.hpp"

namespace twophase {

// Absolute tolerance for scalar root finding.
inline constexpr double root_tol = 1e-12;
// Membership slack and state-equality tolerance.
inline constexpr double domain_tol = 1e-9;

struct State {
  double rho = 0.0;
  double v = 0.0;
};

inline bool same_state(const State& a, const State& b, double tol = domain_tol) {
  return std::abs(a.rho - b.rho) <= tol && std::abs(a.v - b.v) <= tol;
}

enum class Phase { FreeLow, FreeHigh, Congested, Outside };

const char* phase_name(Phase p);

// Velocity law V(rho), nonincreasing, with rho*V strictly increasing on the
// free band. The affine family is V(rho) = v_max (1 - rho/R).
struct VelocityLaw {
  std::string family;  // "affine" or "custom"
  std::function<double(double)> value;
  std::function<double(double)> slope;
  std::function<double(double)> curvature;
  double v_max = 0.0;  // affine parameters
  double r_cap = 0.0;

  static VelocityLaw affine(double v_max, double r_cap);
  static VelocityLaw custom(std::function<double(double)> value,
                            std::function<double(double)> slope,
                            std::function<double(double)> curvature);
};

// Pressure law p(rho), strictly increasing on (0, inf).
//   power: p(rho) = (v_ref/gamma) (rho/rho_max)^gamma, gamma > 0
//   log:   p(rho) = v_ref log(rho/rho_max)
struct PressureLaw {
  std::string family;  // "power", "log" or "custom"
  std::function<double(double)> value;
  std::function<double(double)> slope;
  std::function<double(double)> curvature;
  std::function<double(double)> inverse;  // closed form when available
  double gamma = 0.0;
  double v_ref = 0.0;
  double rho_max = 0.0;

  static PressureLaw power(double gamma, double v_ref, double rho_max);
  static PressureLaw log_law(double v_ref, double rho_max);
  static PressureLaw custom(std::function<double(double)> value,
                            std::function<double(double)> slope,
                            std::function<double(double)> curvature);
};

struct Constants {
  double v_max = 0.0;  // V(0)
  double v_min = 0.0;  // V(rf_hi)
  double w_c = 0.0;    // p(rf_lo) + V(rf_lo)
  double w_max = 0.0;  // p(rf_hi) + V(rf_hi)
  double r_c = 0.0;    // p^-1(w_c)
  double r_max = 0.0;  // p^-1(w_max)
  double q_max = 0.0;  // rf_hi * v_min
};

// Two-phase model: free states live on the curve v = V(rho), rho in
// [0, rf_hi]; congested states fill {rho in [rf_lo, r_max], v in [0, v_c],
// w_c <= v + p(rho) <= w_max}. Construction validates the structural
// hypotheses on a sampled grid and precomputes the derived constants.
class Model {
 public:
  Model(VelocityLaw velocity, PressureLaw pressure, double rf_lo, double rf_hi,
        double v_c, int n_grid = 512);

  static Model from_json(const nlohmann::json& cfg);
  // Built-in default configuration: affine V (v_max=2, R=6), power p
  // (gamma=2, v_ref=1, rho_max=1), rf_lo=1.5, rf_hi=2, v_c=1.
  static nlohmann::json reference_config();
  nlohmann::json config() const;

  double rf_lo() const { return rf_lo_; }
  double rf_hi() const { return rf_hi_; }
  double v_c() const { return v_c_; }
  const Constants& constants() const { return k_; }

  double V(double rho) const { return vel_.value(rho); }
  double V_slope(double rho) const { return vel_.slope(rho); }
  double V_curvature(double rho) const { return vel_.curvature(rho); }
  double p(double rho) const { return pre_.value(rho); }
  double p_slope(double rho) const { return pre_.slope(rho); }
  double p_curvature(double rho) const { return pre_.curvature(rho); }

  // Inverse of p over (0, r_max]; OutOfRange outside the attained range.
  double p_inverse(double y) const;
  double free_flux(double rho) const { return rho * vel_.value(rho); }
  // Inverse of rho -> rho V(rho) on [0, rf_hi]; OutOfRange outside [0, q_max].
  double free_flux_inverse(double q) const;

  // Congested curve parameterizations over w in [w_c, w_max].
  State curve_u_c(double w) const;  // (p^-1(w - v_c), v_c)
  State curve_u_f(double w) const;  // free state with V(rho) + p(rho) = w

  Phase membership(State u) const;
  bool in_domain(State u) const { return membership(u) != Phase::Outside; }
  bool is_free(Phase ph) const {
    return ph == Phase::FreeLow || ph == Phase::FreeHigh;
  }

  double flow(State u) const;    // rho v; OutsideDomain if u not in Omega
  double marker(State u) const;  // W(u); OutsideDomain if u not in Omega
  std::pair<double, double> flow_and_marker(State u) const;

  double lambda_free(double rho) const {
    return vel_.value(rho) + rho * vel_.slope(rho);
  }
  double lambda1(State u) const { return u.v - u.rho * pre_.slope(u.rho); }
  double lambda2(State u) const { return u.v; }
  // Free phase: the single speed; congested: {lambda1, lambda2}.
  std::variant<double, std::array<double, 2>> char_speeds(State u) const;

  // State on {W = w} inter Omega_c with flow q, found as the unique root of
  // v p^-1(w - v) = q on (0, v_c]. Requires 0 < q <= flow of curve_u_c(w).
  State congested_state_for_flow(double w, double q) const;

 private:
  double p_inverse_raw(double y) const;  // no range check
  void validate(int n_grid);

  VelocityLaw vel_;
  PressureLaw pre_;
  double rf_lo_ = 0.0, rf_hi_ = 0.0, v_c_ = 0.0;
  Constants k_;
  nlohmann::json cfg_;
};

}  // namespace twophase
