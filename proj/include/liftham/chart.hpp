#pragma once

#include <map>
#include <utility>
#include <vector>

#include "liftham/coord.hpp"
#include "liftham/expr.hpp"

namespace liftham {

// Chart (t, z^{ri}, zb^{ri}) with 0 <= r <= k, 1 <= i <= m, on the k-th
// extension of the time-extended product manifold.
struct CoordSystem {
  int m = 1;  // complex fiber dimension of the base
  int k = 0;  // extension order

  CoordSystem(int m_, int k_);

  // t first, then (level, index) with z before zb
  std::vector<Coord> enumerate() const;
  std::vector<Coord> fiber_coordinates() const;  // enumerate() minus t
  int coordinate_count() const { return 2 * m * (k + 1) + 1; }
  bool contains(const Coord& c) const;

  friend bool operator==(const CoordSystem& a, const CoordSystem& b) {
    return a.m == b.m && a.k == b.k;
  }
  friend bool operator!=(const CoordSystem& a, const CoordSystem& b) { return !(a == b); }
};

// Z = Z^c ∂/∂x^c. Components are validated against the chart (keys and free
// coordinates), zero components are dropped, missing ones read as zero.
class VectorField {
 public:
  VectorField(CoordSystem chart, std::map<Coord, Expr> components);

  const CoordSystem& chart() const { return chart_; }
  const std::map<Coord, Expr>& components() const { return comp_; }
  Expr component(const Coord& c) const;

 private:
  CoordSystem chart_;
  std::map<Coord, Expr> comp_;
};

// ω = ω_c dx^c, same storage discipline as VectorField.
class OneForm {
 public:
  OneForm(CoordSystem chart, std::map<Coord, Expr> components);

  const CoordSystem& chart() const { return chart_; }
  const std::map<Coord, Expr>& components() const { return comp_; }
  Expr component(const Coord& c) const;

 private:
  CoordSystem chart_;
  std::map<Coord, Expr> comp_;
};

// Antisymmetric 2-form stored on canonical pairs a < b; add_term flips the
// sign as needed and dx^a ∧ dx^a contributions vanish.
class TwoForm {
 public:
  explicit TwoForm(CoordSystem chart);

  void add_term(const Coord& a, const Coord& b, const Expr& coeff);
  Expr coefficient(const Coord& a, const Coord& b) const;  // signed lookup

  const CoordSystem& chart() const { return chart_; }
  const std::map<std::pair<Coord, Coord>, Expr>& entries() const { return entries_; }

 private:
  CoordSystem chart_;
  std::map<std::pair<Coord, Coord>, Expr> entries_;
};

// (1,1) tensor field, entries keyed (output coordinate, input coordinate).
class Tensor11 {
 public:
  explicit Tensor11(CoordSystem chart);
  static Tensor11 identity(const CoordSystem& chart);

  void add_entry(const Coord& out, const Coord& in, const Expr& coeff);
  Expr entry(const Coord& out, const Coord& in) const;

  const CoordSystem& chart() const { return chart_; }
  const std::map<std::pair<Coord, Coord>, Expr>& entries() const { return entries_; }

 private:
  CoordSystem chart_;
  std::map<std::pair<Coord, Coord>, Expr> entries_;
};

Expr pairing(const OneForm& w, const VectorField& Z);

// df over the chart of the coordinates f actually uses
OneForm differential(const Expr& f, const CoordSystem& chart);

// Z acting on f as a derivation
Expr apply_field(const VectorField& Z, const Expr& f);

TwoForm exterior_derivative_1(const OneForm& w);

// i_Z phi, with (i_Z phi)(X) = phi(Z, X)
OneForm interior_product(const VectorField& Z, const TwoForm& phi);

VectorField apply_tensor11(const Tensor11& T, const VectorField& Z);
OneForm apply_tensor11(const OneForm& w, const Tensor11& T);  // w ∘ T

}  // namespace liftham
