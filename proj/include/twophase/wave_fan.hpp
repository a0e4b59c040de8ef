#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include "json.hpp"
#include "twophase/model.hpp"

namespace twophase {

enum class WaveKind { Shock, Contact, Rarefaction, PhaseTransition, ConstraintInterface };
enum class WaveFamily { Free, One, Two, None };

const char* wave_kind_name(WaveKind k);
const char* wave_family_name(WaveFamily f);
WaveKind wave_kind_from_name(const std::string& s);
WaveFamily wave_family_from_name(const std::string& s);

struct Wave {
  WaveKind kind = WaveKind::Shock;
  WaveFamily family = WaveFamily::None;
  State left, right;
  double speed_lo = 0.0;  // == speed_hi except for rarefactions
  double speed_hi = 0.0;
  // True for jumps that are momentum-nonconserving by construction (the
  // free-to-congested jump of the second solver, constraint interfaces with a
  // marker jump). Validation logs these instead of checking the momentum
  // Rankine-Hugoniot condition.
  bool momentum_exempt = false;

  bool is_rarefaction() const { return kind == WaveKind::Rarefaction; }
  double speed() const { return speed_lo; }
};

// Self-similar solution: leftmost state plus waves ordered by speed.
class WaveFan {
 public:
  WaveFan(const Model& m, State constant);
  WaveFan(const Model& m, State leftmost, std::vector<Wave> waves);

  const Model& model() const { return *model_; }
  const State& left_state() const { return left_; }
  State right_state() const {
    return waves_.empty() ? left_ : waves_.back().right;
  }
  const std::vector<Wave>& waves() const { return waves_; }

  // Value at xi = x/t, right-continuous at discontinuities.
  State evaluate(double xi) const;
  // Structural one-sided traces at xi = 0. The left trace applies every wave
  // of strictly negative speed, the right trace also zero-speed jumps; a
  // rarefaction spanning 0 contributes its sonic state to both.
  State trace_left() const;
  State trace_right() const;
  std::pair<State, State> traces() const { return {trace_left(), trace_right()}; }

  // Total variation of v and of W along the fan.
  std::pair<double, double> tv_invariants() const;
  double max_abs_speed() const;

 private:
  const Model* model_;
  State left_;
  std::vector<Wave> waves_;
};

// State inside a rarefaction wave at xi (between speed_lo and speed_hi).
State rarefaction_state(const Model& m, const Wave& w, double xi);

// Midpoint-rule L1 distance of (rho, v) profiles over [lo, hi].
double l1_distance(const WaveFan& a, const WaveFan& b, double lo, double hi,
                   int n = 10000);

struct FanViolation {
  std::string check;
  int wave = -1;  // index into waves(), -1 for fan-level checks
  double residual = 0.0;
  std::string detail;
};

struct FanReport {
  std::vector<FanViolation> violations;
  std::vector<std::string> skipped;  // logged momentum exemptions
  bool ok() const { return violations.empty(); }
};

// Structural validation: weakly increasing speeds, adjacent states chained,
// all states inside Omega, mass RH at every discontinuity, momentum RH at
// both-congested jumps and phase transitions unless exempt, rarefaction edge
// speeds equal to characteristic speeds, contacts move with v, interfaces
// are stationary.
FanReport validate_fan(const WaveFan& fan);

nlohmann::json fan_to_json(const WaveFan& fan);
WaveFan fan_from_json(const Model& m, const nlohmann::json& j);

// Sampled profile: columns xi,rho,v,q,w,phase,wave_id over a range covering
// 1.25x the fastest wave (fallback [-1, 1] for constant fans).
void write_profile_csv(const WaveFan& fan, std::ostream& os, int samples = 2001);

}  // namespace twophase
