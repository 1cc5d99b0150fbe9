#pragma once

#include <complex>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "liftham/coord.hpp"
#include "liftham/rational.hpp"

namespace liftham {

enum class ExprKind { Constant, Coordinate, Sum, Product, Power, Exp };

// Immutable expression in normal form: a sum of terms, each term an exact
// complex-rational coefficient times a sorted list of factors (coordinate,
// exponential, or reciprocal-of-sum bases with integer exponents). All
// construction goes through the static factories, which normalize eagerly;
// two structurally equal expressions in the polynomial+exp fragment are
// therefore identical trees.
class Expr {
 public:
  Expr();  // the zero constant

  static Expr constant(ComplexRational v);
  static Expr integer(long long n);
  static Expr rational(long long num, long long den);
  static Expr unit_i();
  static Expr coordinate(Coord c);

  static Expr add(const Expr& a, const Expr& b);
  static Expr sub(const Expr& a, const Expr& b);
  static Expr mul(const Expr& a, const Expr& b);
  static Expr div(const Expr& a, const Expr& b);  // a * b^-1
  static Expr neg(const Expr& a);
  static Expr pow(const Expr& a, long long n);  // integer powers only
  static Expr exp(const Expr& a);

  // queries (valid for the indicated kinds only)
  ExprKind kind() const;
  const ComplexRational& constant_value() const;  // Constant
  const Coord& coordinate_ref() const;            // Coordinate
  const std::vector<Expr>& children() const;      // Sum, Product
  const Expr& base() const;                       // Power
  long long exponent() const;                     // Power
  const Expr& arg() const;                        // Exp

  bool is_zero() const;
  bool is_one() const;

  // deterministic total order on normalized expressions; 0 iff identical
  static int compare(const Expr& a, const Expr& b);

  friend Expr operator+(const Expr& a, const Expr& b) { return add(a, b); }
  friend Expr operator-(const Expr& a, const Expr& b) { return sub(a, b); }
  friend Expr operator*(const Expr& a, const Expr& b) { return mul(a, b); }
  friend Expr operator/(const Expr& a, const Expr& b) { return div(a, b); }
  friend Expr operator-(const Expr& a) { return neg(a); }

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;

  friend struct ExprOps;
};

// Formal partial derivative treating every coordinate (z and zb included) as
// an independent symbol.
Expr wirtinger_derivative(const Expr& e, const Coord& c);

// Simultaneous substitution.
Expr substitute(const Expr& e, const std::map<Coord, Expr>& bindings);

// Folds to double-precision complex. Throws UnboundCoordinate for missing
// bindings and DivisionByZero when a reciprocal base evaluates below 1e-300.
std::complex<double> eval_numeric(const Expr& e,
                                  const std::map<Coord, std::complex<double>>& point);

// True iff a - b normalizes to the zero constant. Sound on the
// polynomial+exp fragment; no zero-equivalence claim beyond it.
bool structurally_equal(const Expr& a, const Expr& b);

// Canonical deterministic rendering; parses back to the same normal form.
std::string to_string(const Expr& e);

std::set<Coord> free_coordinates(const Expr& e);

// Rebuilds e bottom-up through the factories; used to confirm that
// normalization is idempotent.
Expr normalized(const Expr& e);

}  // namespace liftham
