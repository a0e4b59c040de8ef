#include "twophase/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "twophase/roots.hpp"

namespace twophase {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

std::string fmt_state(State u) {
  return "(" + fmt(u.rho) + ", " + fmt(u.v) + ")";
}

}  // namespace

const char* phase_name(Phase p) {
  switch (p) {
    case Phase::FreeLow: return "free_low";
    case Phase::FreeHigh: return "free_high";
    case Phase::Congested: return "congested";
    case Phase::Outside: return "outside";
  }
  return "outside";
}

VelocityLaw VelocityLaw::affine(double v_max, double r_cap) {
  VelocityLaw law;
  law.family = "affine";
  law.v_max = v_max;
  law.r_cap = r_cap;
  law.value = [v_max, r_cap](double rho) { return v_max * (1.0 - rho / r_cap); };
  law.slope = [v_max, r_cap](double) { return -v_max / r_cap; };
  law.curvature = [](double) { return 0.0; };
  return law;
}

VelocityLaw VelocityLaw::custom(std::function<double(double)> value,
                                std::function<double(double)> slope,
                                std::function<double(double)> curvature) {
  VelocityLaw law;
  law.family = "custom";
  law.value = std::move(value);
  law.slope = std::move(slope);
  law.curvature = std::move(curvature);
  return law;
}

PressureLaw PressureLaw::power(double gamma, double v_ref, double rho_max) {
  if (!(gamma > 0.0))
    throw ModelError("pressure family \"power\" requires gamma > 0");
  PressureLaw law;
  law.family = "power";
  law.gamma = gamma;
  law.v_ref = v_ref;
  law.rho_max = rho_max;
  law.value = [=](double rho) {
    return v_ref / gamma * std::pow(rho / rho_max, gamma);
  };
  law.slope = [=](double rho) {
    return v_ref / rho_max * std::pow(rho / rho_max, gamma - 1.0);
  };
  law.curvature = [=](double rho) {
    return v_ref * (gamma - 1.0) / (rho_max * rho_max) *
           std::pow(rho / rho_max, gamma - 2.0);
  };
  law.inverse = [=](double y) {
    return rho_max * std::pow(gamma * y / v_ref, 1.0 / gamma);
  };
  return law;
}

PressureLaw PressureLaw::log_law(double v_ref, double rho_max) {
  PressureLaw law;
  law.family = "log";
  law.gamma = 0.0;
  law.v_ref = v_ref;
  law.rho_max = rho_max;
  law.value = [=](double rho) { return v_ref * std::log(rho / rho_max); };
  law.slope = [=](double rho) { return v_ref / rho; };
  law.curvature = [=](double rho) { return -v_ref / (rho * rho); };
  law.inverse = [=](double y) { return rho_max * std::exp(y / v_ref); };
  return law;
}

PressureLaw PressureLaw::custom(std::function<double(double)> value,
                                std::function<double(double)> slope,
                                std::function<double(double)> curvature) {
  PressureLaw law;
  law.family = "custom";
  law.value = std::move(value);
  law.slope = std::move(slope);
  law.curvature = std::move(curvature);
  return law;
}

Model::Model(VelocityLaw velocity, PressureLaw pressure, double rf_lo,
             double rf_hi, double v_c, int n_grid)
    : vel_(std::move(velocity)),
      pre_(std::move(pressure)),
      rf_lo_(rf_lo),
      rf_hi_(rf_hi),
      v_c_(v_c) {
  validate(std::max(n_grid, 8));

  cfg_["V"]["family"] = vel_.family;
  if (vel_.family == "affine") {
    cfg_["V"]["v_max"] = vel_.v_max;
    cfg_["V"]["R"] = vel_.r_cap;
  }
  cfg_["p"]["family"] = pre_.family;
  if (pre_.family == "power") cfg_["p"]["gamma"] = pre_.gamma;
  if (pre_.family == "power" || pre_.family == "log") {
    cfg_["p"]["v_ref"] = pre_.v_ref;
    cfg_["p"]["rho_max"] = pre_.rho_max;
  }
  cfg_["rf_lo"] = rf_lo_;
  cfg_["rf_hi"] = rf_hi_;
  cfg_["v_c"] = v_c_;
  cfg_["n_grid"] = std::max(n_grid, 8);
}

void Model::validate(int n_grid) {
  if (!(rf_lo_ > 0.0) || !(rf_hi_ > rf_lo_))
    throw InvalidThresholds("thresholds must satisfy 0 < rf_lo < rf_hi (got " +
                            fmt(rf_lo_) + ", " + fmt(rf_hi_) + ")");
  if (!(vel_.value(rf_hi_) > 0.0))
    throw InvalidThresholds("V(rf_hi) must be positive (got " +
                            fmt(vel_.value(rf_hi_)) + ")");
  if (!(v_c_ > 0.0) || v_c_ > vel_.value(rf_hi_) + domain_tol)
    throw InvalidThresholds("v_c must lie in (0, V(rf_hi)] = (0, " +
                            fmt(vel_.value(rf_hi_)) + "], got " + fmt(v_c_));

  std::vector<std::string> bad;
  auto record = [&bad](const std::string& cond, double rho, double val) {
    if (bad.size() < 32)
      bad.push_back(cond + " fails at rho=" + fmt(rho) + " (value " +
                    fmt(val) + ")");
  };

  // H1 on [0, rf_hi].
  bool h1_first = true, h1_second = true, h1_third = true;
  for (int i = 0; i <= n_grid; ++i) {
    double rho = rf_hi_ * i / n_grid;
    double vr = vel_.slope(rho);
    double lf = vel_.value(rho) + rho * vr;
    double cc = 2.0 * vr + rho * vel_.curvature(rho);
    if (vr > 0.0 && h1_first) { record("H1: V' <= 0", rho, vr); h1_first = false; }
    if (!(lf > 0.0) && h1_second) { record("H1: V + rho V' > 0", rho, lf); h1_second = false; }
    if (cc > 0.0 && h1_third) { record("H1: 2V' + rho V'' <= 0", rho, cc); h1_third = false; }
  }

  // Upper density bound: expand until p reaches w_max.
  double w_max_est = pre_.value(rf_hi_) + vel_.value(rf_hi_);
  double r_hi = rf_hi_;
  int expand = 0;
  while (pre_.value(r_hi) < w_max_est && expand++ < 200) r_hi *= 1.25;
  if (pre_.value(r_hi) < w_max_est)
    bad.push_back("H2: p never reaches w_max = " + fmt(w_max_est));

  // H2 on [rf_lo, r_hi].
  bool h2_first = true, h2_second = true;
  for (int i = 0; i <= n_grid; ++i) {
    double rho = rf_lo_ + (r_hi - rf_lo_) * i / n_grid;
    double pr = pre_.slope(rho);
    double cc = 2.0 * pr + rho * pre_.curvature(rho);
    if (!(pr > 0.0) && h2_first) { record("H2: p' > 0", rho, pr); h2_first = false; }
    if (!(cc > 0.0) && h2_second) { record("H2: 2p' + rho p'' > 0", rho, cc); h2_second = false; }
  }

  // H3 on [rf_lo, rf_hi].
  bool h3_first = true, h3_second = true;
  for (int i = 0; i <= n_grid; ++i) {
    double rho = rf_lo_ + (rf_hi_ - rf_lo_) * i / n_grid;
    double s = vel_.slope(rho) + pre_.slope(rho);
    double gap = rho * pre_.slope(rho) - vel_.value(rho);
    if (!(s > 0.0) && h3_first) { record("H3: V' + p' > 0", rho, s); h3_first = false; }
    if (!(gap > 0.0) && h3_second) { record("H3: V < rho p'", rho, gap); h3_second = false; }
  }

  if (!bad.empty()) throw HypothesisViolation(std::move(bad));

  k_.v_max = vel_.value(0.0);
  k_.v_min = vel_.value(rf_hi_);
  k_.w_c = pre_.value(rf_lo_) + vel_.value(rf_lo_);
  k_.w_max = pre_.value(rf_hi_) + k_.v_min;
  k_.r_c = p_inverse_raw(k_.w_c);
  k_.r_max = p_inverse_raw(k_.w_max);
  k_.q_max = rf_hi_ * k_.v_min;

  // lambda_1 < 0 everywhere on the congested set, sampled in (w, v).
  for (int i = 0; i <= n_grid; ++i) {
    double w = k_.w_c + (k_.w_max - k_.w_c) * i / n_grid;
    for (int j = 0; j <= n_grid; ++j) {
      double v = v_c_ * j / n_grid;
      double rho = p_inverse_raw(w - v);
      double l1 = v - rho * pre_.slope(rho);
      if (!(l1 < 0.0))
        throw Lambda1SignViolation(
            "lambda_1 = " + fmt(l1) + " at congested state " +
            fmt_state({rho, v}) + " (w = " + fmt(w) + ")");
    }
  }
}

Model Model::from_json(const nlohmann::json& cfg) {
  try {
    const auto& vj = cfg.at("V");
    VelocityLaw vel;
    std::string vfam = vj.at("family").get<std::string>();
    if (vfam == "affine")
      vel = VelocityLaw::affine(vj.at("v_max").get<double>(),
                                vj.at("R").get<double>());
    else
      throw ModelError("unknown velocity family \"" + vfam + "\"");

    const auto& pj = cfg.at("p");
    PressureLaw pre;
    std::string pfam = pj.at("family").get<std::string>();
    if (pfam == "power")
      pre = PressureLaw::power(pj.at("gamma").get<double>(),
                               pj.at("v_ref").get<double>(),
                               pj.at("rho_max").get<double>());
    else if (pfam == "log")
      pre = PressureLaw::log_law(pj.at("v_ref").get<double>(),
                                 pj.at("rho_max").get<double>());
    else
      throw ModelError("unknown pressure family \"" + pfam + "\"");

    int n_grid = cfg.value("n_grid", 512);
    return Model(std::move(vel), std::move(pre), cfg.at("rf_lo").get<double>(),
                 cfg.at("rf_hi").get<double>(), cfg.at("v_c").get<double>(),
                 n_grid);
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("model config: ") + e.what());
  }
}

nlohmann::json Model::reference_config() {
  return {
      {"V", {{"family", "affine"}, {"v_max", 2.0}, {"R", 6.0}}},
      {"p", {{"family", "power"}, {"gamma", 2.0}, {"v_ref", 1.0}, {"rho_max", 1.0}}},
      {"rf_lo", 1.5},
      {"rf_hi", 2.0},
      {"v_c", 1.0},
  };
}

nlohmann::json Model::config() const { return cfg_; }

double Model::p_inverse_raw(double y) const {
  if (pre_.inverse) return pre_.inverse(y);
  double lo = rf_lo_, hi = rf_lo_;
  int n = 0;
  while (pre_.value(lo) > y && n++ < 2000) lo *= 0.5;
  n = 0;
  while (pre_.value(hi) < y && n++ < 2000) hi *= 2.0;
  if (pre_.value(lo) > y || pre_.value(hi) < y)
    throw OutOfRange("p_inverse: no bracket for y = " + fmt(y));
  return find_root([&](double r) { return pre_.value(r) - y; },
                   [&](double r) { return pre_.slope(r); }, lo, hi, root_tol);
}

double Model::p_inverse(double y) const {
  if (y > k_.w_max + domain_tol)
    throw OutOfRange("p_inverse: y = " + fmt(y) + " above p(r_max) = " +
                     fmt(k_.w_max));
  y = std::min(y, k_.w_max);
  if (pre_.family == "power") {
    if (y < -domain_tol)
      throw OutOfRange("p_inverse: y = " + fmt(y) + " below the range of p");
    y = std::max(y, 0.0);
  }
  return p_inverse_raw(y);
}

double Model::free_flux_inverse(double q) const {
  if (q < -domain_tol || q > k_.q_max + domain_tol)
    throw OutOfRange("free_flux_inverse: q = " + fmt(q) +
                     " outside [0, q_max = " + fmt(k_.q_max) + "]");
  q = std::clamp(q, 0.0, k_.q_max);
  if (vel_.family == "affine") {
    double disc = 1.0 - 4.0 * q / (vel_.v_max * vel_.r_cap);
    return vel_.r_cap / 2.0 * (1.0 - std::sqrt(std::max(disc, 0.0)));
  }
  return find_root([&](double r) { return free_flux(r) - q; },
                   [&](double r) { return lambda_free(r); }, 0.0, rf_hi_,
                   root_tol);
}

State Model::curve_u_c(double w) const {
  if (w < k_.w_c - domain_tol || w > k_.w_max + domain_tol)
    throw OutOfRange("curve_u_c: w = " + fmt(w) + " outside [" + fmt(k_.w_c) +
                     ", " + fmt(k_.w_max) + "]");
  w = std::clamp(w, k_.w_c, k_.w_max);
  return {p_inverse_raw(w - v_c_), v_c_};
}

State Model::curve_u_f(double w) const {
  if (w < k_.w_c - domain_tol || w > k_.w_max + domain_tol)
    throw OutOfRange("curve_u_f: w = " + fmt(w) + " outside [" + fmt(k_.w_c) +
                     ", " + fmt(k_.w_max) + "]");
  w = std::clamp(w, k_.w_c, k_.w_max);
  double rho = find_root(
      [&](double r) { return vel_.value(r) + pre_.value(r) - w; },
      [&](double r) { return vel_.slope(r) + pre_.slope(r); }, rf_lo_, rf_hi_,
      root_tol);
  return {rho, vel_.value(rho)};
}

Phase Model::membership(State u) const {
  if (u.rho >= -domain_tol && u.rho <= rf_hi_ + domain_tol &&
      std::abs(u.v - vel_.value(u.rho)) <= domain_tol)
    return u.rho < rf_lo_ ? Phase::FreeLow : Phase::FreeHigh;
  if (u.rho >= rf_lo_ - domain_tol && u.rho <= k_.r_max + domain_tol &&
      u.v >= -domain_tol && u.v <= v_c_ + domain_tol) {
    double w = u.v + pre_.value(std::max(u.rho, rf_lo_ * 0.5));
    if (w >= k_.w_c - domain_tol && w <= k_.w_max + domain_tol)
      return Phase::Congested;
  }
  return Phase::Outside;
}

double Model::flow(State u) const { return flow_and_marker(u).first; }

double Model::marker(State u) const { return flow_and_marker(u).second; }

std::pair<double, double> Model::flow_and_marker(State u) const {
  Phase ph = membership(u);
  if (ph == Phase::Outside)
    throw OutsideDomain("state " + fmt_state(u) + " is not in Omega");
  double w = ph == Phase::FreeLow ? k_.w_c : u.v + pre_.value(u.rho);
  return {u.rho * u.v, w};
}

std::variant<double, std::array<double, 2>> Model::char_speeds(State u) const {
  Phase ph = membership(u);
  if (ph == Phase::Outside)
    throw OutsideDomain("state " + fmt_state(u) + " is not in Omega");
  if (is_free(ph)) return lambda_free(u.rho);
  return std::array<double, 2>{lambda1(u), lambda2(u)};
}

State Model::congested_state_for_flow(double w, double q) const {
  if (!(q > 0.0))
    throw OutOfRange("congested_state_for_flow: q must be positive, got " +
                     fmt(q));
  State top = curve_u_c(w);
  double q_top = top.rho * top.v;
  if (q > q_top + domain_tol)
    throw NoRoot("congested_state_for_flow: q = " + fmt(q) +
                 " above curve maximum " + fmt(q_top));
  if (q >= q_top) return top;
  double lo = q / (2.0 * p_inverse_raw(w));
  double v = find_root(
      [&](double x) { return x * p_inverse_raw(w - x) - q; },
      [&](double x) {
        double rho = p_inverse_raw(w - x);
        return rho - x / pre_.slope(rho);
      },
      lo, v_c_, root_tol);
  return {p_inverse_raw(w - v), v};
}

}  // namespace twophase
