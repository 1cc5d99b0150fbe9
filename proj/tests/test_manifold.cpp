#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "liftham/chart.hpp"
#include "liftham/errors.hpp"

using namespace liftham;

namespace {

const Coord T = Coord::time();
const Coord Z = Coord::z(0, 1);
const Coord ZB = Coord::zbar(0, 1);

Expr ct(long long n) { return Expr::integer(n); }
Expr co(Coord c) { return Expr::coordinate(c); }

}  // namespace

TEST_CASE("chart enumeration order and count") {
  CoordSystem ch(2, 1);
  CHECK(ch.coordinate_count() == 9);
  auto cs = ch.enumerate();
  REQUIRE(cs.size() == 9);
  const char* expected[] = {"t",    "z0_1", "zb0_1", "z0_2", "zb0_2",
                            "z1_1", "zb1_1", "z1_2", "zb1_2"};
  for (size_t i = 0; i < 9; ++i) CHECK(cs[i].name() == expected[i]);
  CHECK(ch.fiber_coordinates().size() == 8);
  CHECK(ch.fiber_coordinates()[0] == Z);

  CHECK(ch.contains(T));
  CHECK(ch.contains(Coord::z(1, 2)));
  CHECK(!ch.contains(Coord::z(2, 1)));
  CHECK(!ch.contains(Coord::zbar(0, 3)));

  CHECK_THROWS_AS(CoordSystem(0, 1), ChartMismatch);
  CHECK_THROWS_AS(CoordSystem(1, -1), ChartMismatch);
}

TEST_CASE("component validation and zero dropping") {
  CoordSystem ch(1, 0);
  std::map<Coord, Expr> comp{{T, ct(1)}, {Z, Expr()}, {ZB, co(Z)}};
  VectorField v(ch, comp);
  CHECK(v.components().size() == 2);  // zero dropped
  CHECK(v.component(Z).is_zero());
  CHECK(structurally_equal(v.component(ZB), co(Z)));
  CHECK_THROWS_AS(v.component(Coord::z(1, 1)), ChartMismatch);

  std::map<Coord, Expr> off_key{{Coord::z(1, 1), ct(1)}};
  CHECK_THROWS_AS(VectorField(ch, off_key), ChartMismatch);
  std::map<Coord, Expr> off_free{{Z, co(Coord::z(0, 2))}};
  CHECK_THROWS_AS(OneForm(ch, off_free), ChartMismatch);
}

TEST_CASE("pairing") {
  CoordSystem ch(1, 0);
  OneForm w(ch, {{T, ct(1)}, {Z, co(ZB)}});
  VectorField v(ch, {{T, ct(1)}, {Z, co(Z)}});
  CHECK(structurally_equal(pairing(w, v), ct(1) + co(Z) * co(ZB)));

  VectorField other(CoordSystem(1, 1), {{T, ct(1)}});
  CHECK_THROWS_AS(pairing(w, other), ChartMismatch);
}

TEST_CASE("differential and derivation") {
  CoordSystem ch(1, 0);
  Expr f = co(Z) * co(ZB) + co(T);
  OneForm df = differential(f, ch);
  CHECK(structurally_equal(df.component(T), ct(1)));
  CHECK(structurally_equal(df.component(Z), co(ZB)));
  CHECK(structurally_equal(df.component(ZB), co(Z)));

  VectorField v(ch, {{Z, co(Z)}, {ZB, co(ZB)}});
  CHECK(structurally_equal(apply_field(v, f), ct(2) * co(Z) * co(ZB)));
  CHECK(structurally_equal(apply_field(v, f), pairing(df, v)));
}

TEST_CASE("two-form antisymmetry and canonical storage") {
  CoordSystem ch(1, 0);
  TwoForm phi(ch);
  phi.add_term(ZB, Z, ct(1));  // dzb ∧ dz, stored on (z, zb) with flipped sign
  REQUIRE(phi.entries().size() == 1);
  CHECK(phi.entries().begin()->first.first == Z);
  CHECK(phi.entries().begin()->first.second == ZB);
  CHECK(structurally_equal(phi.coefficient(Z, ZB), ct(-1)));
  CHECK(structurally_equal(phi.coefficient(ZB, Z), ct(1)));

  phi.add_term(Z, Z, ct(5));  // vanishes
  CHECK(phi.entries().size() == 1);
  phi.add_term(Z, ZB, ct(1));  // cancels the stored entry
  CHECK(phi.entries().empty());
}

TEST_CASE("exterior derivative of a one-form") {
  CoordSystem ch(1, 0);
  // d(zb dz) = dzb ∧ dz
  OneForm w(ch, {{Z, co(ZB)}});
  TwoForm dw = exterior_derivative_1(w);
  REQUIRE(dw.entries().size() == 1);
  CHECK(structurally_equal(dw.coefficient(ZB, Z), ct(1)));

  // d(t dz) = dt ∧ dz
  TwoForm dw2 = exterior_derivative_1(OneForm(ch, {{Z, co(T)}}));
  CHECK(structurally_equal(dw2.coefficient(T, Z), ct(1)));

  // d(df) = 0 by commuting partials
  Expr f = co(Z) * co(Z) * co(ZB) + co(T) * co(Z) + Expr::exp(co(ZB));
  CHECK(exterior_derivative_1(differential(f, ch)).entries().empty());
}

TEST_CASE("interior product sign convention") {
  CoordSystem ch(1, 0);
  // phi = -i dzb ∧ dz = i dz ∧ dzb
  TwoForm phi(ch);
  phi.add_term(Z, ZB, Expr::unit_i());
  // i_{∂/∂z} phi = i dzb
  VectorField dz(ch, {{Z, ct(1)}});
  OneForm r = interior_product(dz, phi);
  CHECK(structurally_equal(r.component(ZB), Expr::unit_i()));
  CHECK(r.component(Z).is_zero());
  CHECK(r.component(T).is_zero());
  // i_{∂/∂zb} phi = -i dz
  VectorField dzb(ch, {{ZB, ct(1)}});
  OneForm r2 = interior_product(dzb, phi);
  CHECK(structurally_equal(r2.component(Z), -Expr::unit_i()));

  // alternation: i_Z (i_Z phi) pairs to zero
  VectorField mix(ch, {{Z, co(ZB)}, {ZB, co(Z) * co(Z)}});
  CHECK(pairing(interior_product(mix, phi), mix).is_zero());
}

TEST_CASE("tensor entries and application") {
  CoordSystem ch(1, 0);
  Tensor11 id = Tensor11::identity(ch);
  VectorField v(ch, {{T, ct(1)}, {Z, co(ZB)}, {ZB, co(Z)}});
  VectorField idv = apply_tensor11(id, v);
  for (const Coord& c : ch.enumerate())
    CHECK(structurally_equal(idv.component(c), v.component(c)));

  OneForm w(ch, {{T, co(Z)}, {Z, ct(2)}});
  OneForm wid = apply_tensor11(w, id);
  for (const Coord& c : ch.enumerate())
    CHECK(structurally_equal(wid.component(c), w.component(c)));

  // phi = z ∂/∂zb ⊗ dz: phi(∂/∂z) = z ∂/∂zb, phi(∂/∂zb) = 0
  Tensor11 phi(ch);
  phi.add_entry(ZB, Z, co(Z));
  VectorField pv = apply_tensor11(phi, v);
  CHECK(pv.component(T).is_zero());
  CHECK(pv.component(Z).is_zero());
  CHECK(structurally_equal(pv.component(ZB), co(Z) * co(ZB)));
  // (w ∘ phi)(X) = w(phi X): picks up w_zb * phi^zb_z on dz
  OneForm w2(ch, {{ZB, co(ZB)}});
  OneForm w2phi = apply_tensor11(w2, phi);
  CHECK(structurally_equal(w2phi.component(Z), co(Z) * co(ZB)));
  CHECK(w2phi.component(ZB).is_zero());

  // accumulation cancels to zero and prunes the entry
  phi.add_entry(ZB, Z, -co(Z));
  CHECK(phi.entries().empty());
}
