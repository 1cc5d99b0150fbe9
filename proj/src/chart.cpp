#include "liftham/chart.hpp"

#include <utility>

#include "liftham/errors.hpp"

namespace liftham {

CoordSystem::CoordSystem(int m_, int k_) : m(m_), k(k_) {
  if (m < 1 || k < 0)
    throw ChartMismatch("chart requires m >= 1 and k >= 0, got m=" + std::to_string(m_) +
                        ", k=" + std::to_string(k_));
}

std::vector<Coord> CoordSystem::enumerate() const {
  std::vector<Coord> out;
  out.reserve(static_cast<size_t>(coordinate_count()));
  out.push_back(Coord::time());
  for (int r = 0; r <= k; ++r)
    for (int i = 1; i <= m; ++i) {
      out.push_back(Coord::z(r, i));
      out.push_back(Coord::zbar(r, i));
    }
  return out;
}

std::vector<Coord> CoordSystem::fiber_coordinates() const {
  std::vector<Coord> out = enumerate();
  out.erase(out.begin());
  return out;
}

bool CoordSystem::contains(const Coord& c) const {
  if (c.is_time()) return true;
  return c.level >= 0 && c.level <= k && c.index >= 1 && c.index <= m;
}

namespace {

// shared validation for component maps: on-chart keys, on-chart free
// coordinates, zeros dropped
std::map<Coord, Expr> checked_components(const CoordSystem& chart, std::map<Coord, Expr> comp,
                                         const char* what) {
  for (auto it = comp.begin(); it != comp.end();) {
    if (!chart.contains(it->first))
      throw ChartMismatch(std::string(what) + " component on '" + it->first.name() +
                          "' lies outside the chart");
    for (const Coord& c : free_coordinates(it->second))
      if (!chart.contains(c))
        throw ChartMismatch(std::string(what) + " component on '" + it->first.name() +
                            "' uses off-chart coordinate '" + c.name() + "'");
    if (it->second.is_zero())
      it = comp.erase(it);
    else
      ++it;
  }
  return comp;
}

void check_on_chart(const CoordSystem& chart, const Expr& coeff, const Coord& a, const Coord& b,
                    const char* what) {
  if (!chart.contains(a) || !chart.contains(b))
    throw ChartMismatch(std::string(what) + " entry (" + a.name() + ", " + b.name() +
                        ") lies outside the chart");
  for (const Coord& c : free_coordinates(coeff))
    if (!chart.contains(c))
      throw ChartMismatch(std::string(what) + " entry (" + a.name() + ", " + b.name() +
                          ") uses off-chart coordinate '" + c.name() + "'");
}

void check_same_chart(const CoordSystem& a, const CoordSystem& b, const char* what) {
  if (a != b)
    throw ChartMismatch(std::string(what) + ": charts differ, (m=" + std::to_string(a.m) +
                        ",k=" + std::to_string(a.k) + ") vs (m=" + std::to_string(b.m) +
                        ",k=" + std::to_string(b.k) + ")");
}

}  // namespace

VectorField::VectorField(CoordSystem chart, std::map<Coord, Expr> components)
    : chart_(chart), comp_(checked_components(chart, std::move(components), "vector field")) {}

Expr VectorField::component(const Coord& c) const {
  if (!chart_.contains(c))
    throw ChartMismatch("vector field queried off-chart at '" + c.name() + "'");
  auto it = comp_.find(c);
  return it != comp_.end() ? it->second : Expr();
}

OneForm::OneForm(CoordSystem chart, std::map<Coord, Expr> components)
    : chart_(chart), comp_(checked_components(chart, std::move(components), "one-form")) {}

Expr OneForm::component(const Coord& c) const {
  if (!chart_.contains(c))
    throw ChartMismatch("one-form queried off-chart at '" + c.name() + "'");
  auto it = comp_.find(c);
  return it != comp_.end() ? it->second : Expr();
}

TwoForm::TwoForm(CoordSystem chart) : chart_(chart) {}

void TwoForm::add_term(const Coord& a, const Coord& b, const Expr& coeff) {
  check_on_chart(chart_, coeff, a, b, "two-form");
  int c = a.compare(b);
  if (c == 0) return;  // dx ∧ dx
  std::pair<Coord, Coord> key = c < 0 ? std::make_pair(a, b) : std::make_pair(b, a);
  Expr add = c < 0 ? coeff : -coeff;
  auto it = entries_.find(key);
  if (it == entries_.end()) {
    if (!add.is_zero()) entries_.emplace(key, add);
    return;
  }
  it->second = it->second + add;
  if (it->second.is_zero()) entries_.erase(it);
}

Expr TwoForm::coefficient(const Coord& a, const Coord& b) const {
  int c = a.compare(b);
  if (c == 0) return Expr();
  auto it = entries_.find(c < 0 ? std::make_pair(a, b) : std::make_pair(b, a));
  if (it == entries_.end()) return Expr();
  return c < 0 ? it->second : -it->second;
}

Tensor11::Tensor11(CoordSystem chart) : chart_(chart) {}

Tensor11 Tensor11::identity(const CoordSystem& chart) {
  Tensor11 t(chart);
  for (const Coord& c : chart.enumerate()) t.add_entry(c, c, Expr::integer(1));
  return t;
}

void Tensor11::add_entry(const Coord& out, const Coord& in, const Expr& coeff) {
  check_on_chart(chart_, coeff, out, in, "tensor");
  auto key = std::make_pair(out, in);
  auto it = entries_.find(key);
  if (it == entries_.end()) {
    if (!coeff.is_zero()) entries_.emplace(key, coeff);
    return;
  }
  it->second = it->second + coeff;
  if (it->second.is_zero()) entries_.erase(it);
}

Expr Tensor11::entry(const Coord& out, const Coord& in) const {
  auto it = entries_.find(std::make_pair(out, in));
  return it != entries_.end() ? it->second : Expr();
}

Expr pairing(const OneForm& w, const VectorField& Z) {
  check_same_chart(w.chart(), Z.chart(), "pairing");
  Expr acc;
  for (const auto& [c, wc] : w.components()) acc = acc + wc * Z.component(c);
  return acc;
}

OneForm differential(const Expr& f, const CoordSystem& chart) {
  std::map<Coord, Expr> comp;
  for (const Coord& c : free_coordinates(f)) {
    if (!chart.contains(c))
      throw ChartMismatch("differential of a function using off-chart coordinate '" + c.name() +
                          "'");
    comp.emplace(c, wirtinger_derivative(f, c));
  }
  return OneForm(chart, std::move(comp));
}

Expr apply_field(const VectorField& Z, const Expr& f) {
  for (const Coord& c : free_coordinates(f))
    if (!Z.chart().contains(c))
      throw ChartMismatch("field applied to a function using off-chart coordinate '" + c.name() +
                          "'");
  Expr acc;
  for (const auto& [c, zc] : Z.components()) acc = acc + zc * wirtinger_derivative(f, c);
  return acc;
}

TwoForm exterior_derivative_1(const OneForm& w) {
  TwoForm out(w.chart());
  for (const auto& [c, wc] : w.components())
    for (const Coord& a : free_coordinates(wc)) out.add_term(a, c, wirtinger_derivative(wc, a));
  return out;
}

OneForm interior_product(const VectorField& Z, const TwoForm& phi) {
  check_same_chart(Z.chart(), phi.chart(), "interior product");
  std::map<Coord, Expr> comp;
  auto bump = [&comp](const Coord& c, const Expr& e) {
    auto it = comp.find(c);
    if (it == comp.end())
      comp.emplace(c, e);
    else
      it->second = it->second + e;
  };
  for (const auto& [pair, e] : phi.entries()) {
    bump(pair.second, e * Z.component(pair.first));
    bump(pair.first, -(e * Z.component(pair.second)));
  }
  return OneForm(Z.chart(), std::move(comp));
}

VectorField apply_tensor11(const Tensor11& T, const VectorField& Z) {
  check_same_chart(T.chart(), Z.chart(), "tensor application");
  std::map<Coord, Expr> comp;
  for (const auto& [key, e] : T.entries()) {
    Expr add = e * Z.component(key.second);
    if (add.is_zero()) continue;
    auto it = comp.find(key.first);
    if (it == comp.end())
      comp.emplace(key.first, add);
    else
      it->second = it->second + add;
  }
  return VectorField(T.chart(), std::move(comp));
}

OneForm apply_tensor11(const OneForm& w, const Tensor11& T) {
  check_same_chart(w.chart(), T.chart(), "tensor application");
  std::map<Coord, Expr> comp;
  for (const auto& [key, e] : T.entries()) {
    Expr add = w.component(key.first) * e;
    if (add.is_zero()) continue;
    auto it = comp.find(key.second);
    if (it == comp.end())
      comp.emplace(key.second, add);
    else
      it->second = it->second + add;
  }
  return OneForm(w.chart(), std::move(comp));
}

}  // namespace liftham
