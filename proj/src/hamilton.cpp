#include "liftham/hamilton.hpp"

#include <set>
#include <utility>

#include "liftham/errors.hpp"

namespace liftham {

Expr conjugate_swap(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Constant:
      return Expr::constant(e.constant_value().conj());
    case ExprKind::Coordinate:
      return Expr::coordinate(e.coordinate_ref().conjugate());
    case ExprKind::Sum: {
      Expr acc;
      for (const Expr& kid : e.children()) acc = acc + conjugate_swap(kid);
      return acc;
    }
    case ExprKind::Product: {
      Expr acc = Expr::integer(1);
      for (const Expr& kid : e.children()) acc = acc * conjugate_swap(kid);
      return acc;
    }
    case ExprKind::Power:
      return Expr::pow(conjugate_swap(e.base()), e.exponent());
    case ExprKind::Exp:
      return Expr::exp(conjugate_swap(e.arg()));
  }
  return e;
}

namespace {

int covered_levels(const CoordSystem& chart, LiftKind kind) {
  if (kind.order < 0 || kind.order > chart.k)
    throw ChartMismatch("lift order " + std::to_string(kind.order) + " outside 0.." +
                        std::to_string(chart.k) + " of the chart");
  return kind.tag == LiftKind::Tag::Vertical ? 0 : kind.order;
}

}  // namespace

OneForm liouville_form(const CoordSystem& chart, LiftKind kind) {
  const Expr half_i = Expr::unit_i() * Expr::rational(1, 2);
  int top = covered_levels(chart, kind);
  std::map<Coord, Expr> comp;
  for (int r = 0; r <= top; ++r)
    for (int i = 1; i <= chart.m; ++i) {
      comp.emplace(Coord::z(r, i), half_i * Expr::coordinate(Coord::zbar(r, i)));
      comp.emplace(Coord::zbar(r, i), -(half_i * Expr::coordinate(Coord::z(r, i))));
    }
  return OneForm(chart, std::move(comp));
}

TwoForm symplectic_form(const CoordSystem& chart, LiftKind kind) {
  TwoForm dlam = exterior_derivative_1(liouville_form(chart, kind));
  TwoForm phi(chart);
  for (const auto& [pair, e] : dlam.entries()) phi.add_term(pair.first, pair.second, -e);
  return phi;
}

SolvedField solve_hamiltonian_field(const HamiltonianSystem& sys) {
  const CoordSystem& ch = sys.chart;
  Expr lifted = sys.kind.tag == LiftKind::Tag::Vertical
                    ? vertical_lift_function(sys.hamiltonian, ch, sys.kind.order)
                    : complete_lift_function(sys.hamiltonian, ch, sys.kind.order);
  TwoForm phi = symplectic_form(ch, sys.kind);

  std::map<Coord, Expr> dh;
  for (const Coord& c : ch.enumerate()) dh.emplace(c, wirtinger_derivative(lifted, c));

  // per canonical pair (c1, c2) -> f:  i_Z phi = dH reads
  //   f Z[c1] = dH[c2]   and   -f Z[c2] = dH[c1]
  std::map<Coord, Expr> comp{{Coord::time(), Expr::integer(1)}};
  std::set<Coord> placed;
  std::set<Coord> paired;
  const int shift = sys.kind.tag == LiftKind::Tag::Vertical ? sys.kind.order : 0;
  for (const auto& [pair, f] : phi.entries()) {
    const Coord& c1 = pair.first;
    const Coord& c2 = pair.second;
    paired.insert(c1);
    paired.insert(c2);
    Coord target1 = c1.at_level(c1.level + shift);
    Coord target2 = c2.at_level(c2.level + shift);
    Expr v1 = Expr::div(dh.at(c2), f);
    Expr v2 = -Expr::div(dh.at(c1), f);
    if (!v1.is_zero()) comp.emplace(target1, v1);
    if (!v2.is_zero()) comp.emplace(target2, v2);
    placed.insert(target1);
    placed.insert(target2);
  }

  SolvedField out{VectorField(ch, std::move(comp)), lifted, {}, {}};
  for (const Coord& c : ch.fiber_coordinates())
    if (placed.count(c) == 0) out.unconstrained.push_back(c);
  for (const Coord& c : ch.enumerate())
    if (paired.count(c) == 0 && !dh.at(c).is_zero()) out.obstructions.emplace(c, dh.at(c));
  return out;
}

EquationSet emit_equations(const HamiltonianSystem& sys) {
  SolvedField solved = solve_hamiltonian_field(sys);
  EquationSet out{sys.chart, sys.kind, {}, std::move(solved.unconstrained),
                  std::move(solved.obstructions), {}};
  for (const Coord& c : sys.chart.fiber_coordinates())
    out.equations.emplace_back(c, solved.field.component(c));
  if (sys.kind.tag == LiftKind::Tag::Vertical && sys.kind.order > 0)
    out.annotations.emplace_back(
        "all_levels_reading",
        "the emitted top-level right-hand sides, built from level-0 derivatives of H, can also "
        "be read verbatim at every lower level; only the top level is asserted");
  out.annotations.emplace_back("time_dependence",
                               to_string(wirtinger_derivative(solved.lifted_hamiltonian,
                                                              Coord::time())));
  return out;
}

}  // namespace liftham
