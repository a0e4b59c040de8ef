#include "twophase/wave_fan.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
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

bool is_discontinuity(const Wave& w) { return !w.is_rarefaction(); }

}  // namespace

const char* wave_kind_name(WaveKind k) {
  switch (k) {
    case WaveKind::Shock: return "shock";
    case WaveKind::Contact: return "contact";
    case WaveKind::Rarefaction: return "rarefaction";
    case WaveKind::PhaseTransition: return "phase_transition";
    case WaveKind::ConstraintInterface: return "constraint_interface";
  }
  return "shock";
}

const char* wave_family_name(WaveFamily f) {
  switch (f) {
    case WaveFamily::Free: return "free";
    case WaveFamily::One: return "1";
    case WaveFamily::Two: return "2";
    case WaveFamily::None: return "none";
  }
  return "none";
}

WaveKind wave_kind_from_name(const std::string& s) {
  if (s == "shock") return WaveKind::Shock;
  if (s == "contact") return WaveKind::Contact;
  if (s == "rarefaction") return WaveKind::Rarefaction;
  if (s == "phase_transition") return WaveKind::PhaseTransition;
  if (s == "constraint_interface") return WaveKind::ConstraintInterface;
  throw SolverError("unknown wave kind \"" + s + "\"");
}

WaveFamily wave_family_from_name(const std::string& s) {
  if (s == "free") return WaveFamily::Free;
  if (s == "1") return WaveFamily::One;
  if (s == "2") return WaveFamily::Two;
  if (s == "none") return WaveFamily::None;
  throw SolverError("unknown wave family \"" + s + "\"");
}

WaveFan::WaveFan(const Model& m, State constant)
    : model_(&m), left_(constant) {}

WaveFan::WaveFan(const Model& m, State leftmost, std::vector<Wave> waves)
    : model_(&m), left_(leftmost), waves_(std::move(waves)) {}

State rarefaction_state(const Model& m, const Wave& w, double xi) {
  xi = std::clamp(xi, w.speed_lo, w.speed_hi);
  double r_lo = std::min(w.left.rho, w.right.rho);
  double r_hi = std::max(w.left.rho, w.right.rho);
  if (r_hi - r_lo <= root_tol) return w.left;
  if (w.family == WaveFamily::Free) {
    double rho = find_root(
        [&](double r) { return m.lambda_free(r) - xi; },
        [&](double r) { return 2.0 * m.V_slope(r) + r * m.V_curvature(r); },
        r_lo, r_hi, root_tol);
    return {rho, m.V(rho)};
  }
  if (w.family == WaveFamily::One) {
    double w0 = w.left.v + m.p(w.left.rho);
    double rho = find_root(
        [&](double r) { return w0 - m.p(r) - r * m.p_slope(r) - xi; },
        [&](double r) { return -2.0 * m.p_slope(r) - r * m.p_curvature(r); },
        r_lo, r_hi, root_tol);
    return {rho, w0 - m.p(rho)};
  }
  throw SolverError("rarefaction_state: unsupported family");
}

State WaveFan::evaluate(double xi) const {
  State cur = left_;
  for (const auto& w : waves_) {
    if (xi < w.speed_lo) return cur;
    if (w.is_rarefaction() && xi < w.speed_hi)
      return rarefaction_state(*model_, w, xi);
    cur = w.right;
  }
  return cur;
}

State WaveFan::trace_left() const {
  State cur = left_;
  for (const auto& w : waves_) {
    if (w.is_rarefaction()) {
      if (w.speed_hi < 0.0) {
        cur = w.right;
        continue;
      }
      if (w.speed_lo < 0.0) return rarefaction_state(*model_, w, 0.0);
      return cur;
    }
    if (w.speed() < 0.0) {
      cur = w.right;
      continue;
    }
    return cur;
  }
  return cur;
}

State WaveFan::trace_right() const {
  State cur = left_;
  for (const auto& w : waves_) {
    if (w.is_rarefaction()) {
      if (w.speed_hi <= 0.0) {
        cur = w.right;
        continue;
      }
      if (w.speed_lo < 0.0) return rarefaction_state(*model_, w, 0.0);
      return cur;
    }
    if (w.speed() <= 0.0) {
      cur = w.right;
      continue;
    }
    return cur;
  }
  return cur;
}

std::pair<double, double> WaveFan::tv_invariants() const {
  double tv_v = 0.0, tv_w = 0.0;
  for (const auto& w : waves_) {
    tv_v += std::abs(w.right.v - w.left.v);
    tv_w += std::abs(model_->marker(w.right) - model_->marker(w.left));
  }
  return {tv_v, tv_w};
}

double WaveFan::max_abs_speed() const {
  double s = 0.0;
  for (const auto& w : waves_)
    s = std::max(s, std::max(std::abs(w.speed_lo), std::abs(w.speed_hi)));
  return s;
}

double l1_distance(const WaveFan& a, const WaveFan& b, double lo, double hi,
                   int n) {
  double h = (hi - lo) / n;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    double xi = lo + (i + 0.5) * h;
    State ua = a.evaluate(xi), ub = b.evaluate(xi);
    acc += std::abs(ua.rho - ub.rho) + std::abs(ua.v - ub.v);
  }
  return acc * h;
}

namespace {

void check_momentum(const Model& m, const Wave& w, int idx, FanReport& rep) {
  bool both_congested = m.membership(w.left) == Phase::Congested &&
                        m.membership(w.right) == Phase::Congested;
  bool structural = w.kind == WaveKind::PhaseTransition ||
                    w.kind == WaveKind::ConstraintInterface;
  if (!both_congested && !structural) return;
  if (w.momentum_exempt) {
    double dw = m.marker(w.right) - m.marker(w.left);
    rep.skipped.push_back("wave " + std::to_string(idx) + " (" +
                          wave_kind_name(w.kind) +
                          "): momentum check skipped, W jump " + fmt(dw));
    return;
  }
  auto [ql, wl] = m.flow_and_marker(w.left);
  auto [qr, wr] = m.flow_and_marker(w.right);
  double res = std::abs(w.speed() * (w.right.rho * wr - w.left.rho * wl) -
                        (qr * wr - ql * wl));
  if (res > 1e-9)
    rep.violations.push_back(
        {"momentum_rh", idx, res, "momentum jump condition violated"});
}

}  // namespace

FanReport validate_fan(const WaveFan& fan) {
  const Model& m = fan.model();
  FanReport rep;
  const auto& ws = fan.waves();

  auto check_state = [&](State u, int idx, const char* what) {
    if (m.membership(u) == Phase::Outside)
      rep.violations.push_back({"domain", idx, 0.0,
                                std::string(what) + " state (" + fmt(u.rho) +
                                    ", " + fmt(u.v) + ") outside Omega"});
  };

  check_state(fan.left_state(), -1, "leftmost");
  State prev = fan.left_state();
  double prev_speed = -1e300;

  for (int i = 0; i < static_cast<int>(ws.size()); ++i) {
    const Wave& w = ws[i];
    check_state(w.left, i, "left");
    check_state(w.right, i, "right");

    if (!same_state(prev, w.left))
      rep.violations.push_back(
          {"adjacency", i,
           std::max(std::abs(prev.rho - w.left.rho),
                    std::abs(prev.v - w.left.v)),
           "wave left state does not chain to the previous state"});

    if (w.speed_lo > w.speed_hi + 1e-12)
      rep.violations.push_back({"speed_order", i, w.speed_lo - w.speed_hi,
                                "speed_lo above speed_hi"});
    if (w.speed_lo < prev_speed - 1e-9)
      rep.violations.push_back({"speed_order", i, prev_speed - w.speed_lo,
                                "wave speeds decrease left to right"});
    prev_speed = w.speed_hi;

    if (w.is_rarefaction()) {
      if (w.family != WaveFamily::Free && w.family != WaveFamily::One) {
        rep.violations.push_back(
            {"rarefaction_family", i, 0.0,
             "rarefaction in a linearly degenerate family"});
      } else {
        double ll = w.family == WaveFamily::Free ? m.lambda_free(w.left.rho)
                                                 : m.lambda1(w.left);
        double lr = w.family == WaveFamily::Free ? m.lambda_free(w.right.rho)
                                                 : m.lambda1(w.right);
        if (std::abs(ll - w.speed_lo) > 1e-9)
          rep.violations.push_back({"rarefaction_edge", i,
                                    std::abs(ll - w.speed_lo),
                                    "left edge speed != characteristic"});
        if (std::abs(lr - w.speed_hi) > 1e-9)
          rep.violations.push_back({"rarefaction_edge", i,
                                    std::abs(lr - w.speed_hi),
                                    "right edge speed != characteristic"});
        for (int k = 1; k <= 8; ++k) {
          double xi = w.speed_lo + (w.speed_hi - w.speed_lo) * k / 9.0;
          check_state(rarefaction_state(m, w, xi), i, "rarefaction interior");
        }
      }
    } else {
      double res = std::abs(w.speed() * (w.right.rho - w.left.rho) -
                            (w.right.rho * w.right.v - w.left.rho * w.left.v));
      if (res > 1e-9)
        rep.violations.push_back(
            {"mass_rh", i, res, "mass jump condition violated"});
      if (m.membership(w.left) != Phase::Outside &&
          m.membership(w.right) != Phase::Outside)
        check_momentum(m, w, i, rep);
      if (w.kind == WaveKind::Contact) {
        if (std::abs(w.left.v - w.right.v) > 1e-9)
          rep.violations.push_back({"contact_velocity", i,
                                    std::abs(w.left.v - w.right.v),
                                    "contact states differ in v"});
        if (std::abs(w.speed() - w.right.v) > 1e-9)
          rep.violations.push_back({"contact_speed", i,
                                    std::abs(w.speed() - w.right.v),
                                    "contact speed differs from v"});
      }
      if (w.kind == WaveKind::ConstraintInterface &&
          std::abs(w.speed()) > 1e-12)
        rep.violations.push_back({"interface_speed", i, std::abs(w.speed()),
                                  "constraint interface is not stationary"});
    }
    prev = w.right;
  }
  return rep;
}

nlohmann::json fan_to_json(const WaveFan& fan) {
  nlohmann::json j;
  j["left_state"] = {fan.left_state().rho, fan.left_state().v};
  j["waves"] = nlohmann::json::array();
  for (const auto& w : fan.waves()) {
    nlohmann::json wj;
    wj["kind"] = wave_kind_name(w.kind);
    wj["family"] = wave_family_name(w.family);
    wj["left"] = {w.left.rho, w.left.v};
    wj["right"] = {w.right.rho, w.right.v};
    if (w.is_rarefaction())
      wj["speed"] = {w.speed_lo, w.speed_hi};
    else
      wj["speed"] = w.speed_lo;
    wj["momentum_exempt"] = w.momentum_exempt;
    j["waves"].push_back(std::move(wj));
  }
  return j;
}

WaveFan fan_from_json(const Model& m, const nlohmann::json& j) {
  std::vector<Wave> waves;
  for (const auto& wj : j.at("waves")) {
    Wave w;
    w.kind = wave_kind_from_name(wj.at("kind").get<std::string>());
    w.family = wave_family_from_name(wj.at("family").get<std::string>());
    w.left = {wj.at("left")[0].get<double>(), wj.at("left")[1].get<double>()};
    w.right = {wj.at("right")[0].get<double>(), wj.at("right")[1].get<double>()};
    if (wj.at("speed").is_array()) {
      w.speed_lo = wj.at("speed")[0].get<double>();
      w.speed_hi = wj.at("speed")[1].get<double>();
    } else {
      w.speed_lo = w.speed_hi = wj.at("speed").get<double>();
    }
    w.momentum_exempt = wj.value("momentum_exempt", false);
    waves.push_back(w);
  }
  State left;
  if (j.contains("left_state"))
    left = {j["left_state"][0].get<double>(), j["left_state"][1].get<double>()};
  else if (!waves.empty())
    left = waves.front().left;
  else
    throw SolverError("fan_from_json: empty fan without left_state");
  return WaveFan(m, left, std::move(waves));
}

void write_profile_csv(const WaveFan& fan, std::ostream& os, int samples) {
  const Model& m = fan.model();
  double s = fan.max_abs_speed();
  double lo = -1.0, hi = 1.0;
  if (s > 0.0) {
    lo = -1.25 * s;
    hi = 1.25 * s;
  }
  samples = std::max(samples, 2);

  auto piece_id = [&](double xi) {
    const auto& ws = fan.waves();
    for (int i = 0; i < static_cast<int>(ws.size()); ++i) {
      if (xi < ws[i].speed_lo) return 2 * i;
      if (ws[i].is_rarefaction() && xi < ws[i].speed_hi) return 2 * i + 1;
    }
    return 2 * static_cast<int>(ws.size());
  };

  os << "xi,rho,v,q,w,phase,wave_id\n";
  char buf[160];
  for (int i = 0; i < samples; ++i) {
    double xi = lo + (hi - lo) * i / (samples - 1);
    State u = fan.evaluate(xi);
    auto [q, w] = m.flow_and_marker(u);
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,%.12g,%s,%d\n", xi,
                  u.rho, u.v, q, w, phase_name(m.membership(u)), piece_id(xi));
    os << buf;
  }
}

}  // namespace twophase
