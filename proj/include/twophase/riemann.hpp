#pragma once

#include "twophase/wave_fan.hpp"

namespace twophase {

// Chord speed (q_r - q_l) / (rho_r - rho_l); EqualDensities when the
// densities agree within domain_tol.
double sigma(const Model& m, State l, State r);

// Scalar LWR solver on the free curve: shock for increasing density,
// rarefaction otherwise. All wave speeds are positive.
WaveFan solve_lwr(const Model& m, State l, State r);

// ARZ solver inside the congested set: 1-wave to the state with w = w_l,
// v = v_r, then a 2-contact with speed v_r.
WaveFan solve_arz(const Model& m, State l, State r);

// Phase-transition solver R1 (cases: both free -> LWR; both congested ->
// ARZ; free/congested and congested/free via intermediate transition states).
WaveFan solve_r1(const Model& m, State l, State r);

// Variant R2: a single momentum-nonconserving jump when l is free, r is
// congested, rho_l != 0 and w_l < w_r; identical to R1 otherwise.
WaveFan solve_r2(const Model& m, State l, State r);

}  // namespace twophase
