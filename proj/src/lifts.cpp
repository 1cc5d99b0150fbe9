#include "liftham/lifts.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "liftham/errors.hpp"

namespace liftham {

long long binomial(int n, int r) {
  if (r < 0 || r > n) return 0;
  if (r > n - r) r = n - r;
  long long acc = 1;
  for (int j = 1; j <= r; ++j) acc = acc * (n - r + j) / j;
  return acc;
}

Expr total_derivative_step(const Expr& f, const CoordSystem& chart) {
  Expr acc;
  for (const Coord& c : free_coordinates(f)) {
    if (!chart.contains(c))
      throw ChartMismatch("total derivative of a function using off-chart coordinate '" +
                          c.name() + "'");
    if (c.is_time()) {
      acc = acc + Expr::coordinate(c) * wirtinger_derivative(f, c);
    } else {
      if (c.level + 1 > chart.k)
        throw ChartMismatch("total derivative step needs level " + std::to_string(c.level + 1) +
                            ", chart stops at " + std::to_string(chart.k));
      acc = acc + Expr::coordinate(c.at_level(c.level + 1)) * wirtinger_derivative(f, c);
    }
  }
  return acc;
}

namespace {

void require_order(int order, const CoordSystem& target) {
  if (order < 0 || order > target.k)
    throw ChartMismatch("lift order " + std::to_string(order) + " outside 0.." +
                        std::to_string(target.k) + " of the target chart");
}

void require_base_function(const Expr& f, const CoordSystem& target) {
  for (const Coord& c : free_coordinates(f)) {
    if (c.is_time()) continue;
    if (!target.contains(c) || c.level != 0)
      throw InvalidBaseExpression("function lift input uses non-base coordinate '" + c.name() +
                                  "'");
  }
}

CoordSystem base_of(const CoordSystem& target) { return CoordSystem(target.m, 0); }

Expr iterated_step(Expr f, const CoordSystem& chart, int times) {
  for (int j = 0; j < times; ++j) f = total_derivative_step(f, chart);
  return f;
}

}  // namespace

Expr vertical_lift_function(const Expr& f, const CoordSystem& target, int order) {
  require_order(order, target);
  require_base_function(f, target);
  return f;
}

Expr complete_lift_function(const Expr& f, const CoordSystem& target, int order) {
  require_order(order, target);
  require_base_function(f, target);
  return iterated_step(f, target, order);
}

VectorField lift_vector_field_linear(const VectorField& W, const CoordSystem& target,
                                     LiftKind kind) {
  require_order(kind.order, target);
  if (W.chart() != base_of(target))
    throw ChartMismatch("field lift input must live on the order-0 chart of the same fiber");
  std::map<Coord, Expr> out;
  Expr wt = W.component(Coord::time());
  if (!wt.is_zero()) out.emplace(Coord::time(), wt);
  for (int i = 1; i <= target.m; ++i) {
    for (const Coord& c0 : {Coord::z(0, i), Coord::zbar(0, i)}) {
      Expr a = W.component(c0);
      if (a.is_zero()) continue;
      if (kind.tag == LiftKind::Tag::Vertical) {
        out.emplace(c0.at_level(kind.order), a);
      } else {
        Expr d = a;  // D^r, built incrementally
        for (int r = 0; r <= kind.order; ++r) {
          if (r > 0) d = total_derivative_step(d, target);
          Expr piece = Expr::integer(binomial(kind.order, r)) * d;
          if (!piece.is_zero()) out.emplace(c0.at_level(r), piece);
        }
      }
    }
  }
  return VectorField(target, std::move(out));
}

OneForm lift_one_form_linear(const OneForm& w, const CoordSystem& target, LiftKind kind) {
  require_order(kind.order, target);
  if (w.chart() != base_of(target))
    throw ChartMismatch("form lift input must live on the order-0 chart of the same fiber");
  std::map<Coord, Expr> out;
  Expr wt = w.component(Coord::time());
  if (!wt.is_zero()) out.emplace(Coord::time(), wt);
  for (int i = 1; i <= target.m; ++i) {
    for (const Coord& c0 : {Coord::z(0, i), Coord::zbar(0, i)}) {
      Expr a = w.component(c0);
      if (a.is_zero()) continue;
      if (kind.tag == LiftKind::Tag::Vertical) {
        out.emplace(c0, a);  // components stay at level 0
      } else {
        // level r carries D^(order-r): build downward so D is applied once per level
        std::vector<Expr> powers(static_cast<size_t>(kind.order) + 1);
        powers[0] = a;
        for (int j = 1; j <= kind.order; ++j)
          powers[static_cast<size_t>(j)] = total_derivative_step(powers[static_cast<size_t>(j - 1)], target);
        for (int r = 0; r <= kind.order; ++r) {
          const Expr& piece = powers[static_cast<size_t>(kind.order - r)];
          if (!piece.is_zero()) out.emplace(c0.at_level(r), piece);
        }
      }
    }
  }
  return OneForm(target, std::move(out));
}

namespace {

void require_strict_field(const VectorField& Z, const CoordSystem& target) {
  if (Z.chart() != CoordSystem(target.m, 0))
    throw InvalidBaseField("lift input must be a field on the order-0 chart with fiber dimension " +
                           std::to_string(target.m));
  if (!structurally_equal(Z.component(Coord::time()), Expr::integer(1)))
    throw InvalidBaseField("lift input must have time component 1, got '" +
                           to_string(Z.component(Coord::time())) + "'");
}

void require_strict_form(const OneForm& w, const CoordSystem& target) {
  if (w.chart() != CoordSystem(target.m, 0))
    throw InvalidBaseForm("lift input must be a form on the order-0 chart with fiber dimension " +
                          std::to_string(target.m));
  if (!structurally_equal(w.component(Coord::time()), Expr::integer(1)))
    throw InvalidBaseForm("lift input must have time component 1, got '" +
                          to_string(w.component(Coord::time())) + "'");
}

}  // namespace

VectorField vertical_lift_vector_field(const VectorField& Z, const CoordSystem& target,
                                       int order) {
  require_order(order, target);
  require_strict_field(Z, target);
  return lift_vector_field_linear(Z, target, LiftKind::vertical(order));
}

VectorField complete_lift_vector_field(const VectorField& Z, const CoordSystem& target,
                                       int order) {
  require_order(order, target);
  require_strict_field(Z, target);
  return lift_vector_field_linear(Z, target, LiftKind::complete(order));
}

OneForm vertical_lift_one_form(const OneForm& w, const CoordSystem& target, int order) {
  require_order(order, target);
  require_strict_form(w, target);
  return lift_one_form_linear(w, target, LiftKind::vertical(order));
}

OneForm complete_lift_one_form(const OneForm& w, const CoordSystem& target, int order) {
  require_order(order, target);
  require_strict_form(w, target);
  return lift_one_form_linear(w, target, LiftKind::complete(order));
}

namespace {

// base columns of phi as vector fields
VectorField tensor_column(const Tensor11& phi, const Coord& in) {
  std::map<Coord, Expr> comp;
  for (const Coord& out : phi.chart().enumerate()) {
    Expr e = phi.entry(out, in);
    if (!e.is_zero()) comp.emplace(out, e);
  }
  return VectorField(phi.chart(), std::move(comp));
}

void place_column(Tensor11& out, const Coord& col, const VectorField& v) {
  for (const auto& [row, e] : v.components()) out.add_entry(row, col, e);
}

// re-check the defining action of the lifted tensor on a spanning family of
// unit-time base fields
void probe_tensor_lift(const Tensor11& base, const Tensor11& lifted, const CoordSystem& target,
                       LiftKind kind) {
  const CoordSystem bchart = base.chart();
  const Coord t = Coord::time();
  std::vector<std::pair<std::string, VectorField>> probes;
  probes.emplace_back("d/dt", VectorField(bchart, {{t, Expr::integer(1)}}));
  for (const Coord& c : bchart.fiber_coordinates()) {
    Expr x = Expr::coordinate(c);
    Expr xc = Expr::coordinate(c.conjugate());
    int which = 0;
    for (const Expr& g : {x, x * x, xc}) {
      std::map<Coord, Expr> comp{{t, Expr::integer(1)}, {c, g}};
      probes.emplace_back("d/dt + g d/d" + c.name() + " (#" + std::to_string(which++) + ")",
                          VectorField(bchart, std::move(comp)));
    }
  }
  for (const auto& [label, X] : probes) {
    VectorField lhs =
        apply_tensor11(lifted, lift_vector_field_linear(X, target, LiftKind::complete(kind.order)));
    VectorField rhs = lift_vector_field_linear(apply_tensor11(base, X), target, kind);
    for (const Coord& c : target.enumerate())
      if (!structurally_equal(lhs.component(c), rhs.component(c)))
        throw Underdetermined("row " + c.name() + " probed along " + label);
  }
}

}  // namespace

Tensor11 lift_tensor11(const Tensor11& phi, const CoordSystem& target, LiftKind kind) {
  require_order(kind.order, target);
  if (phi.chart() != base_of(target))
    throw ChartMismatch("tensor lift input must live on the order-0 chart of the same fiber");
  Tensor11 out(target);
  const Coord t = Coord::time();
  // time column by the linear lift of the base time column
  place_column(out, t, lift_vector_field_linear(tensor_column(phi, t), target, kind));
  for (int i = 1; i <= target.m; ++i) {
    for (const Coord& c0 : {Coord::z(0, i), Coord::zbar(0, i)}) {
      VectorField W = tensor_column(phi, c0);
      if (kind.tag == LiftKind::Tag::Vertical) {
        // only level-0 input columns survive vertically
        place_column(out, c0, lift_vector_field_linear(W, target, kind));
      } else {
        // level-s column: time part only at s = 0, fiber part is the
        // binomial spread of D^(r-s) starting at level s
        Expr wt = W.component(t);
        if (!wt.is_zero()) out.add_entry(t, c0, wt);
        for (int ii = 1; ii <= target.m; ++ii) {
          for (const Coord& y0 : {Coord::z(0, ii), Coord::zbar(0, ii)}) {
            Expr a = W.component(y0);
            if (a.is_zero()) continue;
            std::vector<Expr> d(static_cast<size_t>(kind.order) + 1);
            d[0] = a;
            for (int j = 1; j <= kind.order; ++j)
              d[static_cast<size_t>(j)] = total_derivative_step(d[static_cast<size_t>(j - 1)], target);
            for (int s = 0; s <= kind.order; ++s)
              for (int r = s; r <= kind.order; ++r) {
                Expr piece =
                    Expr::integer(binomial(kind.order - s, r - s)) * d[static_cast<size_t>(r - s)];
                if (!piece.is_zero()) out.add_entry(y0.at_level(r), c0.at_level(s), piece);
              }
          }
        }
      }
    }
  }
  probe_tensor_lift(phi, out, target, kind);
  return out;
}

ContactStructure build_contact_structure(const VectorField& xi_base, const OneForm& eta_base,
                                         const CoordSystem& target, LiftKind kind) {
  VectorField xi = complete_lift_vector_field(xi_base, target, kind.order);
  OneForm eta = kind.tag == LiftKind::Tag::Vertical
                    ? vertical_lift_one_form(eta_base, target, kind.order)
                    : complete_lift_one_form(eta_base, target, kind.order);
  Expr p = pairing(eta, xi);
  if (!p.is_one()) throw NotNormalized(to_string(p));
  Tensor11 phi(target);
  for (const Coord& c : target.enumerate()) phi.add_entry(c, c, Expr::integer(-1));
  for (const auto& [out, xo] : xi.components())
    for (const auto& [in, ei] : eta.components()) phi.add_entry(out, in, xo * ei);
  return ContactStructure{target, std::move(xi), std::move(eta), std::move(phi)};
}

namespace {

double unit_interval(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * (1.0 / 9007199254740992.0);
}
double symmetric_unit(std::mt19937_64& g) { return 2.0 * unit_interval(g) - 1.0; }

}  // namespace

ContactReport verify_contact(const ContactStructure& cs) {
  ContactReport rep;
  const CoordSystem& ch = cs.chart;
  rep.expected_real_rank = 2 * ch.m * (ch.k + 1);
  rep.expected_complex_count = ch.m * (ch.k + 1);
  rep.sample_points = 10;

  VectorField phi_xi = apply_tensor11(cs.phi, cs.xi);
  rep.phi_xi_zero = phi_xi.components().empty();
  OneForm eta_phi = apply_tensor11(cs.eta, cs.phi);
  rep.eta_phi_zero = eta_phi.components().empty();
  rep.eta_xi_one = pairing(cs.eta, cs.xi).is_one();

  const std::vector<Coord> coords = ch.enumerate();
  const int n = static_cast<int>(coords.size());
  std::mt19937_64 gen(0x6c1f7edUL);
  bool kernels_ok = true;
  for (int pt = 0; pt < rep.sample_points && kernels_ok; ++pt) {
    std::map<Coord, std::complex<double>> point;
    point[Coord::time()] = {symmetric_unit(gen), 0.0};
    for (int r = 0; r <= ch.k; ++r)
      for (int i = 1; i <= ch.m; ++i) {
        std::complex<double> v(symmetric_unit(gen), symmetric_unit(gen));
        point[Coord::z(r, i)] = v;
        point[Coord::zbar(r, i)] = std::conj(v);
      }
    Eigen::MatrixXcd M(n, n);
    for (int row = 0; row < n; ++row)
      for (int col = 0; col < n; ++col) {
        Expr e = cs.phi.entry(coords[static_cast<size_t>(row)], coords[static_cast<size_t>(col)]);
        M(row, col) = e.is_zero() ? std::complex<double>(0.0, 0.0) : eval_numeric(e, point);
      }
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(M);
    lu.setThreshold(1e-8);
    if (lu.rank() != n - 1) {
      kernels_ok = false;
      break;
    }
    Eigen::MatrixXcd K = lu.kernel();
    Eigen::VectorXcd xi_v(n);
    for (int row = 0; row < n; ++row)
      xi_v(row) = eval_numeric(cs.xi.component(coords[static_cast<size_t>(row)]), point);
    double scale = K.col(0).cwiseAbs().maxCoeff() * xi_v.cwiseAbs().maxCoeff() + 1.0;
    for (int a = 0; a < n && kernels_ok; ++a)
      for (int b = a + 1; b < n; ++b) {
        std::complex<double> cross = K(a, 0) * xi_v(b) - K(b, 0) * xi_v(a);
        if (std::abs(cross) > 1e-8 * scale) {
          kernels_ok = false;
          break;
        }
      }
  }
  rep.kernel_dimension_one = kernels_ok;
  return rep;
}

}  // namespace liftham
