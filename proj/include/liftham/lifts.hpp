#pragma once

#include "liftham/chart.hpp"
#include "liftham/coord.hpp"
#include "liftham/expr.hpp"

namespace liftham {

// Which lift to apply and how many extension levels it spans. Order 0 is the
// identity lift; order j places/spreads data up to chart level j.
struct LiftKind {
  enum class Tag { Vertical, Complete };
  Tag tag = Tag::Vertical;
  int order = 0;

  static LiftKind vertical(int order) { return {Tag::Vertical, order}; }
  static LiftKind complete(int order) { return {Tag::Complete, order}; }
};

// One application of the total-derivative operator
//   D = t ∂/∂t + Σ_{r,i} ( z^{(r+1)i} ∂/∂z^{ri} + zb^{(r+1)i} ∂/∂zb^{ri} ),
// reading the velocity of level r as the level-(r+1) coordinate. Throws
// ChartMismatch when a step would need a level beyond the chart.
Expr total_derivative_step(const Expr& f, const CoordSystem& chart);

long long binomial(int n, int r);

// Function lifts. The input must use only t and level-0 coordinates
// (InvalidBaseExpression otherwise). Vertical is the pullback along the
// projection, i.e. the same expression; complete is D applied `order` times.
Expr vertical_lift_function(const Expr& f, const CoordSystem& target, int order);
Expr complete_lift_function(const Expr& f, const CoordSystem& target, int order);

// Linear lift extensions: defined for any base field/form (no unit time
// component required), C-linear in the object. The time component is carried
// over verbatim by both kinds.
//   field, vertical:  fiber components placed verbatim at level `order`
//   field, complete:  level r gets C(order, r) D^r of the level-0 component
//   form,  vertical:  fiber components stay at level 0
//   form,  complete:  level r gets D^(order - r) of the level-0 component
VectorField lift_vector_field_linear(const VectorField& W, const CoordSystem& target,
                                     LiftKind kind);
OneForm lift_one_form_linear(const OneForm& w, const CoordSystem& target, LiftKind kind);

// Strict lifts of the distinguished objects Z = ∂/∂t + Z^{0i} ∂/∂z^{0i} + conj
// and ω = dt + ω_{0i} dz^{0i} + conj. The time component must be structurally
// 1 (InvalidBaseField / InvalidBaseForm) and the object must live on the
// order-0 chart of the same fiber dimension.
VectorField vertical_lift_vector_field(const VectorField& Z, const CoordSystem& target, int order);
VectorField complete_lift_vector_field(const VectorField& Z, const CoordSystem& target, int order);
OneForm vertical_lift_one_form(const OneForm& w, const CoordSystem& target, int order);
OneForm complete_lift_one_form(const OneForm& w, const CoordSystem& target, int order);

// Lift of a (1,1) tensor, built column-by-column from the linear lifts of the
// base columns. After construction the defining action on a spanning family
// of base fields is re-checked; any entry the action does not reproduce
// raises Underdetermined.
Tensor11 lift_tensor11(const Tensor11& phi, const CoordSystem& target, LiftKind kind);

// Almost-contact data assembled from lifted base objects: xi is always
// completely lifted, eta follows `kind`, and phi = -I + xi ⊗ eta. The lifted
// pairing eta(xi) must be structurally 1 (NotNormalized otherwise).
struct ContactStructure {
  CoordSystem chart;
  VectorField xi;
  OneForm eta;
  Tensor11 phi;
};

ContactStructure build_contact_structure(const VectorField& xi_base, const OneForm& eta_base,
                                         const CoordSystem& target, LiftKind kind);

struct ContactReport {
  bool phi_xi_zero = false;          // phi(xi) = 0, symbolic
  bool eta_phi_zero = false;         // eta ∘ phi = 0, symbolic
  bool eta_xi_one = false;           // eta(xi) = 1, symbolic
  bool kernel_dimension_one = false; // numeric, with kernel parallel to xi
  int expected_real_rank = 0;        // 2 m (k+1): rank of phi over R-directions
  int expected_complex_count = 0;    // m (k+1): the same count in complex pairs
  int sample_points = 0;

  bool passed() const {
    return phi_xi_zero && eta_phi_zero && eta_xi_one && kernel_dimension_one;
  }
};

// Symbolic identities plus a numeric rank probe of phi at random chart points
// (fixed seed; zb sampled as the conjugate of z). Only the kernel dimension
// and its direction are asserted; the rank counts are informational.
ContactReport verify_contact(const ContactStructure& cs);

}  // namespace liftham
