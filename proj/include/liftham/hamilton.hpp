#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "liftham/chart.hpp"
#include "liftham/lifts.hpp"

namespace liftham {

// z <-> zb swap applied recursively, with constants conjugated and t fixed.
// Sends H to its formal complex conjugate.
Expr conjugate_swap(const Expr& e);

// λ = (i/2) Σ ( zb_{ri} dz^{ri} - z_{ri} dzb^{ri} ), over level 0 for the
// vertical kind and over levels 0..order for the complete kind. No dt part.
OneForm liouville_form(const CoordSystem& chart, LiftKind kind);

// Φ = -dλ; every covered level contributes the canonical pair
// (z_{ri}, zb_{ri}) -> i.
TwoForm symplectic_form(const CoordSystem& chart, LiftKind kind);

struct HamiltonianSystem {
  CoordSystem chart;
  LiftKind kind;
  Expr hamiltonian;  // on the base coordinates (t and level 0 only)
};

struct SolvedField {
  VectorField field;        // Z with Z[t] = 1 and the paired fiber components
  Expr lifted_hamiltonian;  // H after the kind's function lift
  std::vector<Coord> unconstrained;    // fiber coordinates no pairing touches
  std::map<Coord, Expr> obstructions;  // nonzero dH components with no pairing
};

// Solves i_Z Φ = dH for Z on the lifted structure. For the vertical kind the
// level-0 equations are placed on the top level (order) of Z; for the
// complete kind every level is solved in place.
SolvedField solve_hamiltonian_field(const HamiltonianSystem& sys);

struct EquationSet {
  CoordSystem chart;
  LiftKind kind;
  // one entry per fiber coordinate in canonical order, zeros kept
  std::vector<std::pair<Coord, Expr>> equations;
  std::vector<Coord> unconstrained;
  std::map<Coord, Expr> obstructions;
  std::vector<std::pair<std::string, std::string>> annotations;
};

EquationSet emit_equations(const HamiltonianSystem& sys);

}  // namespace liftham
