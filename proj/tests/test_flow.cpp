#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "liftham/errors.hpp"
#include "liftham/flow.hpp"

using namespace liftham;

namespace {

const Coord T = Coord::time();
const std::complex<double> I(0.0, 1.0);

Expr ct(long long n) { return Expr::integer(n); }
Expr co(Coord c) { return Expr::coordinate(c); }
Expr z(int r, int i) { return co(Coord::z(r, i)); }
Expr zb(int r, int i) { return co(Coord::zbar(r, i)); }

}  // namespace

TEST_CASE("energy drift measure") {
  CHECK(energy_drift({}) == 0.0);
  CHECK(energy_drift({{2.0, 0.0}, {2.0, 0.0}}) == 0.0);
  CHECK(energy_drift({{1.0, 0.0}, {1.5, 0.0}, {0.5, 0.0}}) == doctest::Approx(0.5));
}

TEST_CASE("oscillator flows on the unit circle") {
  HamiltonianSystem sys{CoordSystem(1, 0), LiftKind::vertical(0), z(0, 1) * zb(0, 1)};
  IntegratorConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 1.0;
  Trajectory tr = integrate(sys, {{Coord::z(0, 1), {1.0, 0.0}}}, cfg);
  REQUIRE(tr.states.size() == 1001);
  // exact clock
  CHECK(tr.states[500].at(T).real() == 0.0 + 500.0 * 1e-3);
  CHECK(tr.states.back().at(T).real() == 1e-3 * 1000.0);
  // z(t) = exp(-i t), zb initialized to the conjugate follows exp(+i t)
  std::complex<double> zf = tr.states.back().at(Coord::z(0, 1));
  CHECK(std::abs(zf - std::exp(-I)) < 1e-10);
  std::complex<double> zbf = tr.states.back().at(Coord::zbar(0, 1));
  CHECK(std::abs(zbf - std::exp(I)) < 1e-10);
  CHECK(tr.energy_drift < 1e-12);
  CHECK(tr.layout.size() == 3);
  CHECK(tr.layout[0] == T);
}

TEST_CASE("euler drifts where rk4 holds") {
  HamiltonianSystem sys{CoordSystem(1, 0), LiftKind::vertical(0), z(0, 1) * zb(0, 1)};
  IntegratorConfig cfg;
  cfg.dt = 1e-2;
  cfg.t_end = 1.0;
  cfg.method = Method::Euler;
  Trajectory tr = integrate(sys, {{Coord::z(0, 1), {1.0, 0.0}}}, cfg);
  CHECK(tr.energy_drift > 1e-4);
  CHECK(tr.energy_drift < 5e-2);
}

TEST_CASE("vertical flow freezes the lower levels and drives the top linearly") {
  HamiltonianSystem sys{CoordSystem(1, 1), LiftKind::vertical(1), z(0, 1) * zb(0, 1)};
  IntegratorConfig cfg;
  cfg.dt = 1e-2;
  cfg.t_end = 2.0;
  std::complex<double> z0(0.8, 0.5);
  Trajectory tr = integrate(sys, {{Coord::z(0, 1), z0}}, cfg);
  const auto& last = tr.states.back();
  CHECK(std::abs(last.at(Coord::z(0, 1)) - z0) == 0.0);  // unconstrained, frozen
  // dz1/dt = -i z0 with z0 constant
  CHECK(std::abs(last.at(Coord::z(1, 1)) - (-I * z0 * 2.0)) < 1e-12);
  CHECK(std::abs(last.at(Coord::zbar(1, 1)) - (I * std::conj(z0) * 2.0)) < 1e-12);
  CHECK(tr.energy_drift < 1e-14);  // H = z0 zb0 exactly constant
}

TEST_CASE("complete flow couples the levels") {
  HamiltonianSystem sys{CoordSystem(1, 1), LiftKind::complete(1), z(0, 1) * zb(0, 1)};
  IntegratorConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 1.0;
  Trajectory tr = integrate(sys, {{Coord::z(0, 1), {1.0, 0.0}}}, cfg);
  // dz0 = -i z1, dz1 = -i z0 from z0=1, z1=0: z0 = cos t, z1 = -i sin t
  const auto& last = tr.states.back();
  CHECK(std::abs(last.at(Coord::z(0, 1)) - std::complex<double>(std::cos(1.0), 0.0)) < 1e-10);
  CHECK(std::abs(last.at(Coord::z(1, 1)) - (-I * std::sin(1.0))) < 1e-10);
  // H^c starts at exactly 0 and stays at roundoff scale
  CHECK(std::abs(tr.energies.front()) == 0.0);
  CHECK(tr.energy_drift < 1e-3);
}

TEST_CASE("blow-up raises a step-stamped error") {
  // dz/dt = z^2 from z(0) = 1 blows up at t = 1
  HamiltonianSystem sys{CoordSystem(1, 0), LiftKind::vertical(0),
                        Expr::unit_i() * z(0, 1) * z(0, 1) * zb(0, 1)};
  IntegratorConfig cfg;
  cfg.dt = 1e-2;
  cfg.t_end = 2.0;
  bool thrown = false;
  try {
    integrate(sys, {{Coord::z(0, 1), {1.0, 0.0}}}, cfg);
  } catch (const NonFiniteState& e) {
    thrown = true;
    CHECK(e.step > 0);
    CHECK(e.code == "non_finite_state");
  }
  CHECK(thrown);
}

TEST_CASE("integration argument validation") {
  HamiltonianSystem sys{CoordSystem(1, 0), LiftKind::vertical(0), z(0, 1) * zb(0, 1)};
  IntegratorConfig bad_dt;
  bad_dt.dt = 0.0;
  CHECK_THROWS_AS(integrate(sys, {}, bad_dt), EngineError);
  IntegratorConfig rev;
  rev.t_end = -1.0;
  CHECK_THROWS_AS(integrate(sys, {}, rev), EngineError);
  IntegratorConfig ok;
  CHECK_THROWS_AS(integrate(sys, {{T, {0.0, 0.0}}}, ok), ChartMismatch);
  CHECK_THROWS_AS(integrate(sys, {{Coord::z(1, 1), {0.0, 0.0}}}, ok), ChartMismatch);

  // zero-span flow records exactly the initial state
  IntegratorConfig flat;
  flat.t_end = 0.0;
  Trajectory tr = integrate(sys, {{Coord::z(0, 1), {1.0, 0.0}}}, flat);
  CHECK(tr.states.size() == 1);
  CHECK(tr.energy_drift == 0.0);
}
