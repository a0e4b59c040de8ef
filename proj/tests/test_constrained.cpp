#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "twophase/builtin_cases.hpp"
#include "twophase/constrained.hpp"
#include "twophase/verification.hpp"

using namespace twophase;

namespace {

bool near(double a, double b, double tol = 1e-9) { return std::abs(a - b) <= tol; }

bool fans_equal(const WaveFan& a, const WaveFan& b, double tol = 1e-12) {
  if (!same_state(a.left_state(), b.left_state(), tol)) return false;
  if (a.waves().size() != b.waves().size()) return false;
  for (std::size_t i = 0; i < a.waves().size(); ++i) {
    const Wave& x = a.waves()[i];
    const Wave& y = b.waves()[i];
    if (x.kind != y.kind) return false;
    if (std::abs(x.speed_lo - y.speed_lo) > tol) return false;
    if (std::abs(x.speed_hi - y.speed_hi) > tol) return false;
    if (!same_state(x.right, y.right, tol)) return false;
  }
  return true;
}

// Flow carried across the stationary interface.
double interface_flow(const Model& m, const WaveFan& fan) {
  return m.flow(fan.trace_left());
}

}  // namespace

TEST_CASE("classification tags") {
  Model m = cases::reference_model();
  auto tag = [&](State l, State r, double q0, int sid) {
    return classify(m, {l, r, q0}, sid).tag();
  };
  State f1{1.0, m.V(1.0)};

  CHECK(tag({0.0, 2.0}, {2.0, 4.0 / 3.0}, 1.0, 1) == "C1");
  CHECK(tag({1.9, m.V(1.9)}, {1.9, m.V(1.9)}, 2.1, 1) == "N1");
  CHECK(tag({2.2, 0.8}, {2.1, 0.5}, 1.0, 1) == "N2");
  CHECK(tag({2.2, 0.8}, {2.1, 0.5}, 1.0, 2) == "N2");
  CHECK(tag({2.2, 0.8}, {2.1, 0.5}, 1.5, 1) == "C2");
  CHECK(tag({2.2, 0.8}, {0.5, m.V(0.5)}, 2.0, 1) == "N3");
  CHECK(tag(f1, {2.0, 1.0}, 1.0, 1) == "N4_1");
  CHECK(tag(f1, {2.0, 1.0}, 1.0, 2) == "N4_2");
  CHECK(tag(f1, {2.2, 0.7}, 2.0, 1) == "C4_1");
  CHECK(tag(f1, {2.2, 0.7}, 2.0, 2) == "C4_2");

  CHECK_THROWS_AS((void)classify(m, {f1, f1, 0.0}, 1), OutOfRange);
  CHECK_THROWS_AS((void)classify(m, {f1, f1, m.constants().q_max}, 1), OutOfRange);
  CHECK_THROWS_AS((void)classify(m, {f1, f1, 1.0}, 3), SolverError);
  CHECK_THROWS_AS((void)classify(m, {{1.2, 0.5}, f1, 1.0}, 1), OutsideDomain);
}

TEST_CASE("the two solvers split the same pair differently") {
  Model m = cases::reference_model();
  ConstraintProblem pb{{1.4, m.V(1.4)}, {2.20605228103657, 0.9}, 1.9};
  CHECK_FALSE(classify(m, pb, 1).exceeds);  // middle flow 1.6717 <= 1.9
  CHECK(classify(m, pb, 2).exceeds);        // min(2.1467, 1.9854) > 1.9
  CHECK(fans_equal(solve_r1c(m, pb), solve_r1(m, pb.left, pb.right)));
}

TEST_CASE("trace selection, first solver, free left with surplus capacity") {
  Model m = cases::reference_model();
  State l{1.9, m.V(1.9)};

  SUBCASE("constraint above the curve top keeps the critical state") {
    ConstraintProblem pb{l, l, 2.1};
    TracePair tp = select_traces_r1c(m, pb);
    CHECK(tp.tag == TraceCase::T11a);
    CHECK(near(tp.u_hat.rho, 2.08406653764541));
    CHECK(near(tp.u_hat.v, 1.0));
    CHECK(near(tp.u_check.rho, 1.34235094574763));
    CHECK(near(tp.u_check.v, 1.55254968475079));

    WaveFan fan = solve_r1c(m, pb);
    REQUIRE(fan.waves().size() == 3);
    CHECK(fan.waves()[0].kind == WaveKind::PhaseTransition);
    CHECK(near(fan.waves()[0].speed(), -2.78486321076314));
    CHECK(fan.waves()[1].kind == WaveKind::ConstraintInterface);
    CHECK(fan.waves()[1].speed() == 0.0);
    CHECK(fan.waves()[2].kind == WaveKind::Shock);
    CHECK(near(fan.waves()[2].speed(), 0.919216351417456));
    CHECK(validate_fan(fan).ok());
    // Interface flow stays strictly below the constraint in this case.
    CHECK(near(interface_flow(m, fan), 2.08406653764541));
    CHECK(interface_flow(m, fan) <= 2.1 + 1e-9);
  }

  SUBCASE("binding constraint selects the curve state of flow q0") {
    ConstraintProblem pb{l, l, 2.0};
    TracePair tp = select_traces_r1c(m, pb);
    CHECK(tp.tag == TraceCase::T11b);
    CHECK(near(tp.u_hat.rho, 2.10864403994219));
    CHECK(near(tp.u_hat.v, 0.94847682307481));
    CHECK(near(tp.u_check.rho, 1.26794919243112));
    CHECK(near(tp.u_check.v, 1.57735026918963));

    WaveFan fan = solve_r1c(m, pb);
    CHECK(validate_fan(fan).ok());
    CHECK(near(m.flow(fan.trace_left()), 2.0));
    CHECK(near(m.flow(fan.trace_right()), 2.0));
  }
}

TEST_CASE("trace selection, first solver, congested right") {
  Model m = cases::reference_model();
  State r{2.0, 1.0};

  SUBCASE("demand below q0 passes through the right velocity") {
    ConstraintProblem pb{{1.9, m.V(1.9)}, r, 1.9};
    CHECK(classify(m, pb, 1).tag() == "N4_1");
    TracePair tp = select_traces_r1c(m, pb);
    CHECK(tp.tag == TraceCase::T21a);
    CHECK(near(tp.u_check.rho, 1.9));
    CHECK(near(tp.u_check.v, 1.0));
    CHECK(near(m.flow(tp.u_hat), 1.9));
    CHECK(near(m.marker(tp.u_hat), 3.17166666666667));
    CHECK(tp.u_hat.v < 1.0);

    WaveFan fan = solve_r1c(m, pb);
    REQUIRE(fan.waves().size() == 3);
    CHECK(fan.waves()[0].kind == WaveKind::PhaseTransition);
    CHECK(fan.waves()[0].speed() < 0.0);
    CHECK(fan.waves()[1].kind == WaveKind::ConstraintInterface);
    CHECK(fan.waves()[2].kind == WaveKind::Contact);
    CHECK(near(fan.waves()[2].speed(), 1.0, 1e-12));
    CHECK(validate_fan(fan).ok());
  }

  SUBCASE("demand above q0 reroutes through the free phase") {
    ConstraintProblem pb{{1.0, m.V(1.0)}, r, 1.0};
    TracePair tp = select_traces_r1c(m, pb);
    CHECK(tp.tag == TraceCase::T21b);
    CHECK(near(tp.u_hat.rho, 2.06970497975282));
    CHECK(near(tp.u_hat.v, 0.483160648393197));
    CHECK(near(tp.u_check.rho, 0.550510257216822));
    CHECK(near(tp.u_check.v, 1.81649658092773));

    WaveFan fan = solve_r1c(m, pb);
    REQUIRE(fan.waves().size() == 4);
    CHECK(near(fan.waves()[0].speed(), -0.623224794953014));
    CHECK(fan.waves()[1].kind == WaveKind::ConstraintInterface);
    CHECK(fan.waves()[2].kind == WaveKind::PhaseTransition);
    CHECK(near(fan.waves()[2].speed(), 0.641058716644981));
    CHECK(fan.waves()[3].kind == WaveKind::Contact);
    CHECK(validate_fan(fan).ok());
    CHECK(near(m.flow(fan.trace_left()), 1.0));
    CHECK(near(m.flow(fan.trace_right()), 1.0));
  }

  SUBCASE("selection refuses pairs that satisfy the constraint") {
    CHECK_THROWS_AS((void)select_traces_r1c(m, {{0.5, m.V(0.5)}, {1.5, 1.5}, 2.0}),
                    NotInN);
  }
}

TEST_CASE("trace selection, second solver") {
  Model m = cases::reference_model();
  State l{1.6, m.V(1.6)};  // flow 2.3467, marker 2.7467

  SUBCASE("constraint above the reachable maximum") {
    ConstraintProblem pb{l, l, 2.2};
    CHECK(classify(m, pb, 2).tag() == "N1");
    TracePair tp = select_traces_r2c(m, pb);
    CHECK(tp.tag == TraceCase::T12a);
    CHECK(near(tp.u_hat.rho, 2.16024689946929));
    CHECK(near(tp.u_hat.v, 1.0));
    CHECK(near(tp.u_check.rho, 1.41278252857646));
    CHECK(near(tp.u_check.v, 1.52907249047451));

    WaveFan fan = solve_r2c(m, pb);
    REQUIRE(fan.waves().size() == 3);
    CHECK(fan.waves()[0].kind == WaveKind::PhaseTransition);
    CHECK(fan.waves()[0].momentum_exempt);
    CHECK(fan.waves()[0].speed() < 0.0);
    CHECK(fan.waves()[2].kind == WaveKind::Shock);
    CHECK(validate_fan(fan).ok());
    // Interface flow caps at the top of the maximal-marker curve, below q0.
    CHECK(near(interface_flow(m, fan), 2.16024689946929));
  }

  SUBCASE("attainable constraint lifts the left state to the critical speed") {
    ConstraintProblem pb{l, l, 2.0};
    TracePair tp = select_traces_r2c(m, pb);
    CHECK(tp.tag == TraceCase::T12b);
    CHECK(near(tp.u_hat.rho, 2.0));
    CHECK(near(tp.u_hat.v, 1.0));
    CHECK(near(tp.u_check.rho, 1.26794919243112));

    WaveFan fan = solve_r2c(m, pb);
    REQUIRE(fan.waves().size() == 3);
    CHECK(near(fan.waves()[0].speed(), -0.866666666666668));
    CHECK(fan.waves()[0].momentum_exempt);
    CHECK(near(m.flow(fan.trace_left()), 2.0));
    CHECK(near(m.flow(fan.trace_right()), 2.0));
    CHECK(validate_fan(fan).ok());
  }
}

TEST_CASE("second solver with a congested right datum") {
  Model m = cases::reference_model();
  State l{1.4, m.V(1.4)};
  State r{2.20605228103657, 0.9};  // marker w_max

  SUBCASE("fast right velocity keeps the flow at q0 through a contact") {
    ConstraintProblem pb{l, r, 1.9};
    CHECK(classify(m, pb, 2).tag() == "N4_2");
    TracePair tp = select_traces_r2c(m, pb);
    CHECK(tp.tag == TraceCase::T22a);
    CHECK(near(tp.u_hat.rho, 1.9));
    CHECK(near(tp.u_hat.v, 1.0));
    CHECK(near(tp.u_check.rho, 2.11111111111111));
    CHECK(near(tp.u_check.v, 0.9));
    CHECK(near(m.marker(tp.u_check), 3.1283950617284));

    WaveFan fan = solve_r2c(m, pb);
    REQUIRE(fan.waves().size() == 3);
    CHECK(fan.waves()[0].kind == WaveKind::PhaseTransition);
    CHECK(near(fan.waves()[0].speed(), -0.493333333333333));
    CHECK(fan.waves()[0].momentum_exempt);
    CHECK(fan.waves()[1].kind == WaveKind::ConstraintInterface);
    CHECK(fan.waves()[2].kind == WaveKind::Contact);
    CHECK(near(fan.waves()[2].speed(), 0.9, 1e-12));
    CHECK(validate_fan(fan).ok());
    CHECK(near(m.flow(fan.trace_left()), 1.9));
    CHECK(near(m.flow(fan.trace_right()), 1.9));
  }

  SUBCASE("slow right velocity reroutes through the free phase") {
    ConstraintProblem pb{l, r, 1.5};
    TracePair tp = select_traces_r2c(m, pb);
    CHECK(tp.tag == TraceCase::T22b);
    CHECK(near(tp.u_check.rho, 0.878679656440357));
    CHECK(near(tp.u_check.v, 1.70710678118655, 1e-8));
    CHECK(near(m.flow(tp.u_hat), 1.5));
    CHECK(near(m.marker(tp.u_hat), 2.625));  // no lift below the left marker
    CHECK(tp.u_hat.v < 1.0);

    WaveFan fan = solve_r2c(m, pb);
    REQUIRE(fan.waves().size() == 3);
    CHECK(fan.waves()[0].speed() < 0.0);
    CHECK(fan.waves()[2].kind == WaveKind::PhaseTransition);
    CHECK(fan.waves()[2].speed() > 0.0);
    CHECK(validate_fan(fan).ok());
    CHECK(near(m.flow(fan.trace_left()), 1.5));
    CHECK(near(m.flow(fan.trace_right()), 1.5));
  }
}

TEST_CASE("second solver, congested left with an exceeding free-phase demand") {
  Model m = cases::reference_model();
  State l{2.0, 1.0};  // the critical state u_c(3)
  State r{0.5, m.V(0.5)};

  SUBCASE("constraint above the left-curve top inserts a free excursion") {
    ConstraintProblem pb{l, r, 2.1};
    CHECK(classify(m, pb, 2).tag() == "N3");
    TracePair tp = select_traces_r2c(m, pb);
    CHECK(tp.tag == TraceCase::T12b);
    CHECK(near(tp.u_hat.rho, 2.1));
    CHECK(near(tp.u_hat.v, 1.0));

    WaveFan fan = solve_r2c(m, pb);
    REQUIRE(fan.waves().size() == 4);
    State uf{1.78629964784689, 1.40456678405104};
    CHECK(fan.waves()[0].kind == WaveKind::PhaseTransition);
    CHECK(same_state(fan.waves()[0].right, uf, 1e-9));
    CHECK(near(fan.waves()[0].speed(), sigma(m, l, uf)));
    CHECK_FALSE(fan.waves()[0].momentum_exempt);
    CHECK(fan.waves()[1].kind == WaveKind::PhaseTransition);
    CHECK(fan.waves()[1].momentum_exempt);
    CHECK(fan.waves()[0].speed() < fan.waves()[1].speed());
    CHECK(fan.waves()[1].speed() < 0.0);
    CHECK(fan.waves()[2].kind == WaveKind::ConstraintInterface);
    CHECK(fan.waves()[3].kind == WaveKind::Rarefaction);
    CHECK(validate_fan(fan).ok());
    CHECK(near(interface_flow(m, fan), 2.1));
    CHECK(near(fan.waves()[2].right.rho, 3.0 - std::sqrt(2.7)));
  }

  SUBCASE("attainable constraint stays congested on the left") {
    ConstraintProblem pb{l, r, 1.9};
    TracePair tp = select_traces_r2c(m, pb);
    CHECK(tp.tag == TraceCase::T12b);
    CHECK(near(m.flow(tp.u_hat), 1.9));
    CHECK(near(m.marker(tp.u_hat), 3.0));  // lift would drop the marker, keep w_l

    WaveFan fan = solve_r2c(m, pb);
    REQUIRE(fan.waves().size() == 3);
    CHECK(fan.waves()[0].kind == WaveKind::Shock);
    CHECK(fan.waves()[0].family == WaveFamily::One);
    CHECK(fan.waves()[0].speed() < 0.0);
    CHECK(validate_fan(fan).ok());
    CHECK(near(m.flow(fan.trace_left()), 1.9));
  }
}

TEST_CASE("constrained solvers defer to the unconstrained ones when satisfied") {
  Model m = cases::reference_model();
  ConstraintProblem pb{{0.5, m.V(0.5)}, {1.5, 1.5}, 2.0};
  CHECK(fans_equal(solve_r1c(m, pb), solve_r1(m, pb.left, pb.right)));
  CHECK(fans_equal(solve_r2c(m, pb), solve_r2(m, pb.left, pb.right)));

  ConstraintProblem cc{{2.2, 0.8}, {2.1, 0.5}, 1.5};
  CHECK(fans_equal(solve_r1c(m, cc), solve_arz(m, cc.left, cc.right)));
}

TEST_CASE("brute-force interface-flow bound matches the selected traces") {
  Model m = cases::reference_model();

  CHECK(near(flow_max_oracle(m, {{1.0, m.V(1.0)}, {2.0, 1.0}, 1.0}), 1.0, 1e-7));
  CHECK(near(flow_max_oracle(m, {{1.9, m.V(1.9)}, {1.9, m.V(1.9)}, 2.1}),
             2.08406653764541, 1e-6));

  const char* scenarios[4] = {"ff", "cc", "fc", "cf"};
  const double q0s[4] = {0.901387818865997, 1.80277563773199, 1.98151126860064,
                         2.37627158941622};
  Rng rng(91u);
  int found = 0, tried = 0;
  while (found < 20 && tried < 4000) {
    const char* sc = scenarios[tried % 4];
    double q0 = q0s[(tried / 4) % 4];
    ++tried;
    State l = sample_state(m, rng, std::string(1, sc[0]));
    State r = sample_state(m, rng, std::string(1, sc[1]));
    ConstraintProblem pb{l, r, q0};
    if (!classify(m, pb, 1).exceeds) continue;
    ++found;
    double hat = m.flow(select_traces_r1c(m, pb).u_hat);
    double oracle = flow_max_oracle(m, pb, 200);
    CAPTURE(l.rho);
    CAPTURE(r.rho);
    CAPTURE(q0);
    CHECK(oracle <= hat + 1e-6);
    CHECK(oracle >= hat - 1e-6);
  }
  CHECK(found == 20);
}

TEST_CASE("solver handles and serialization") {
  Model m = cases::reference_model();
  CHECK(parse_solver("r1", 0.0).kind == SolverChoice::R1);
  CHECK(parse_solver("r2c", 1.5).q0 == 1.5);
  CHECK(parse_solver("r1c", 2.0).constrained());
  CHECK(parse_solver("r2", 0.0).solver_id() == 2);
  CHECK_THROWS_AS((void)parse_solver("r3", 0.0), SolverError);

  ConstraintProblem pb{{1.0, m.V(1.0)}, {2.0, 1.0}, 1.0};
  CHECK(fans_equal(solve(m, parse_solver("r1c", 1.0), pb.left, pb.right),
                   solve_r1c(m, pb)));
  CHECK(fans_equal(solve(m, parse_solver("r2", 0.0), pb.left, pb.right),
                   solve_r2(m, pb.left, pb.right)));

  nlohmann::json j = trace_pair_to_json(select_traces_r1c(m, pb));
  CHECK(j.contains("u_hat"));
  CHECK(j.contains("u_check"));
  CHECK(j["case"] == "T21b");
}
