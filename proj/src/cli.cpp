#include "liftham/cli.hpp"

#include <json.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "liftham/errors.hpp"
#include "liftham/flow.hpp"
#include "liftham/hamilton.hpp"
#include "liftham/lifts.hpp"
#include "liftham/parser.hpp"

namespace liftham {

namespace {

using json = nlohmann::ordered_json;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

LiftKind kind_of(const std::string& name, int order) {
  if (name == "vertical") return LiftKind::vertical(order);
  if (name == "complete") return LiftKind::complete(order);
  throw EngineError("invalid_arguments", "kind must be 'vertical' or 'complete', got '" + name + "'");
}

void require_json_format(const RunSpec& spec) {
  if (spec.format == "json") return;
  if (spec.format == "csv")
    throw EngineError("invalid_arguments",
                      "command '" + spec.command + "' has tree-structured output; only --format json is available");
  throw EngineError("invalid_arguments", "format must be 'json' or 'csv', got '" + spec.format + "'");
}

std::string trimmed(const std::string& s) {
  size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

// "name=expr,name=expr" -> ordered pairs; values never contain ',' under the
// expression grammar, so a flat split is unambiguous.
std::vector<std::pair<std::string, std::string>> split_assignments(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  size_t start = 0;
  while (start <= text.size()) {
    size_t comma = text.find(',', start);
    std::string piece = text.substr(start, comma == std::string::npos ? comma : comma - start);
    if (!trimmed(piece).empty()) {
      size_t eq = piece.find('=');
      if (eq == std::string::npos)
        throw EngineError("invalid_arguments", "expected name=value, got '" + trimmed(piece) + "'");
      out.emplace_back(trimmed(piece.substr(0, eq)), trimmed(piece.substr(eq + 1)));
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

Coord coordinate_named(const std::string& name, const CoordSystem& chart) {
  Expr e = parse_expression(name, chart);
  if (e.kind() != ExprKind::Coordinate)
    throw EngineError("invalid_arguments", "expected a coordinate name, got '" + name + "'");
  return e.coordinate_ref();
}

// compute-then-write so a failed computation never leaves a file behind
void write_file(const std::string& path, const std::string& text) {
  std::ofstream ofs(path, std::ios::binary);
  if (!ofs) throw EngineError("io_error", "cannot open '" + path + "' for writing");
  ofs << text;
  ofs.flush();
  if (!ofs) {
    std::remove(path.c_str());
    throw EngineError("io_error", "failed while writing '" + path + "'");
  }
}

void emit_document(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty())
    out << text;
  else
    write_file(path, text);
}

json chart_json(const CoordSystem& chart) { return json{{"m", chart.m}, {"k", chart.k}}; }

// ---------------------------------------------------------------------------
// derive

int run_derive(const RunSpec& spec, std::ostream& out) {
  require_json_format(spec);
  if (spec.hamiltonian.empty())
    throw EngineError("invalid_arguments", "--H is required for derive");
  CoordSystem chart(spec.m, spec.k);
  LiftKind kind = kind_of(spec.kind, spec.k);
  Expr H = parse_expression(spec.hamiltonian, chart);
  EquationSet eq = emit_equations({chart, kind, H});

  json j;
  j["chart"] = chart_json(chart);
  j["kind"] = spec.kind;
  j["hamiltonian"] = to_string(H);
  j["equations"] = json::array();
  for (const auto& [c, rhs] : eq.equations)
    j["equations"].push_back(json{{"coord", c.name()}, {"rhs", to_string(rhs)}});
  j["unconstrained"] = json::array();
  for (const Coord& c : eq.unconstrained) j["unconstrained"].push_back(c.name());
  j["obstructions"] = json::array();
  for (const auto& [c, e] : eq.obstructions)
    j["obstructions"].push_back(json{{"coord", c.name()}, {"expr", to_string(e)}});
  j["annotations"] = json::object();
  for (const auto& [key, text] : eq.annotations) j["annotations"][key] = text;

  emit_document(j.dump(2) + "\n", spec.out, out);
  return 0;
}

// ---------------------------------------------------------------------------
// lift

int run_lift(const RunSpec& spec, std::ostream& out) {
  require_json_format(spec);
  CoordSystem chart(spec.m, spec.k);
  LiftKind kind = kind_of(spec.kind, spec.k);

  json j;
  j["chart"] = chart_json(chart);
  j["kind"] = spec.kind;
  j["object"] = spec.object;
  j["order"] = spec.k;

  if (spec.object == "function") {
    if (spec.expr.empty()) throw EngineError("invalid_arguments", "--expr is required for lift --object function");
    Expr f = parse_expression(spec.expr, chart);
    Expr lifted = kind.tag == LiftKind::Tag::Vertical ? vertical_lift_function(f, chart, spec.k)
                                                      : complete_lift_function(f, chart, spec.k);
    j["input"] = to_string(f);
    j["result"] = to_string(lifted);
  } else if (spec.object == "field" || spec.object == "form") {
    if (spec.components.empty())
      throw EngineError("invalid_arguments", "--components is required for lift --object " + spec.object);
    std::map<Coord, Expr> comp;
    for (const auto& [name, text] : split_assignments(spec.components)) {
      Coord c = coordinate_named(name, chart);
      if (!comp.emplace(c, parse_expression(text, chart)).second)
        throw EngineError("invalid_arguments", "component '" + name + "' given twice");
    }
    // the unit time component of the distinguished objects may be left implicit
    comp.try_emplace(Coord::time(), Expr::integer(1));
    CoordSystem base(spec.m, 0);
    json components = json::object();
    if (spec.object == "field") {
      VectorField Z(base, comp);
      VectorField lifted = kind.tag == LiftKind::Tag::Vertical
                               ? vertical_lift_vector_field(Z, chart, spec.k)
                               : complete_lift_vector_field(Z, chart, spec.k);
      for (const Coord& c : chart.enumerate()) components[c.name()] = to_string(lifted.component(c));
    } else {
      OneForm w(base, comp);
      OneForm lifted = kind.tag == LiftKind::Tag::Vertical ? vertical_lift_one_form(w, chart, spec.k)
                                                           : complete_lift_one_form(w, chart, spec.k);
      for (const Coord& c : chart.enumerate()) components[c.name()] = to_string(lifted.component(c));
    }
    j["components"] = components;
  } else {
    throw EngineError("invalid_arguments",
                      "object must be 'function', 'field' or 'form', got '" + spec.object + "'");
  }

  emit_document(j.dump(2) + "\n", spec.out, out);
  return 0;
}

// ---------------------------------------------------------------------------
// integrate

int run_integrate(const RunSpec& spec, std::ostream& out) {
  if (spec.hamiltonian.empty())
    throw EngineError("invalid_arguments", "--H is required for integrate");
  if (spec.out.empty())
    throw EngineError("invalid_arguments", "--out is required for integrate: the trajectory CSV path");
  if (!std::isfinite(spec.dt) || !std::isfinite(spec.t_start) || !std::isfinite(spec.t_end))
    throw EngineError("invalid_arguments", "dt, t-start and t-end must be finite");

  IntegratorConfig cfg;
  cfg.dt = spec.dt;
  cfg.t_start = spec.t_start;
  cfg.t_end = spec.t_end;
  if (spec.method == "rk4")
    cfg.method = Method::RK4;
  else if (spec.method == "euler")
    cfg.method = Method::Euler;
  else
    throw EngineError("invalid_arguments", "method must be 'rk4' or 'euler', got '" + spec.method + "'");

  CoordSystem chart(spec.m, spec.k);
  LiftKind kind = kind_of(spec.kind, spec.k);
  Expr H = parse_expression(spec.hamiltonian, chart);

  std::map<Coord, std::complex<double>> initial;
  for (const auto& [name, text] : split_assignments(spec.init)) {
    Coord c = coordinate_named(name, chart);
    if (c.is_time())
      throw EngineError("invalid_arguments", "the initial time is set by --t-start, not --init");
    initial[c] = eval_numeric(parse_expression(text, chart), {});
  }
  std::string missing;
  for (const Coord& c : chart.fiber_coordinates())
    if (!initial.count(c)) missing += (missing.empty() ? "" : ", ") + c.name();
  if (!missing.empty())
    throw EngineError("invalid_arguments", "--init must bind every fiber coordinate; missing: " + missing);

  HamiltonianSystem sys{chart, kind, H};
  Trajectory tr = integrate(sys, initial, cfg);

  std::ostringstream csv;
  csv << "t";
  for (const Coord& c : chart.fiber_coordinates()) csv << ",re(" << c.name() << "),im(" << c.name() << ")";
  csv << ",re(H),im(H)\n";
  for (size_t row = 0; row < tr.states.size(); ++row) {
    const auto& st = tr.states[row];
    csv << fmt17(st.at(Coord::time()).real());
    for (const Coord& c : chart.fiber_coordinates()) {
      const auto v = st.at(c);
      csv << ',' << fmt17(v.real()) << ',' << fmt17(v.imag());
    }
    csv << ',' << fmt17(tr.energies[row].real()) << ',' << fmt17(tr.energies[row].imag()) << '\n';
  }
  write_file(spec.out, csv.str());

  json j;
  j["chart"] = chart_json(chart);
  j["kind"] = spec.kind;
  j["method"] = spec.method;
  j["dt"] = spec.dt;
  j["t_start"] = spec.t_start;
  j["t_end"] = spec.t_end;
  j["steps"] = tr.states.size() - 1;
  j["energy_drift"] = tr.energy_drift;
  j["out"] = spec.out;
  json fin = json::object();
  const auto& last = tr.states.back();
  fin["t"] = last.at(Coord::time()).real();
  for (const Coord& c : chart.fiber_coordinates())
    fin[c.name()] = json{{"re", last.at(c).real()}, {"im", last.at(c).imag()}};
  j["final_state"] = fin;
  out << j.dump(2) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// check: deterministic verification of the library's structural invariants.
// Every check is seeded independently so the report is byte-stable.

struct Rng {
  std::mt19937_64 g;
  explicit Rng(uint64_t seed) : g(seed) {}
  uint64_t next() { return g(); }
  int range(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<uint64_t>(hi - lo + 1)); }
  double real01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double sym() { return 2.0 * real01() - 1.0; }
};

constexpr uint64_t kCheckSeed = 0x5eed0c1f;

// small random polynomial over the given coordinate pool
Expr random_poly(Rng& rng, const std::vector<Coord>& pool, int max_terms, int min_factors) {
  Expr acc = Expr::integer(0);
  int terms = rng.range(1, max_terms);
  for (int tidx = 0; tidx < terms; ++tidx) {
    int re = rng.range(-3, 3), im = rng.range(-3, 3);
    if (re == 0 && im == 0) re = 1;
    Expr term = Expr::constant(ComplexRational(Rational(re), Rational(im)));
    int nf = rng.range(min_factors, 2);
    for (int f = 0; f < nf; ++f) {
      Coord c = pool[static_cast<size_t>(rng.range(0, static_cast<int>(pool.size()) - 1))];
      term = term * Expr::pow(Expr::coordinate(c), rng.range(1, 2));
    }
    acc = acc + term;
  }
  return acc;
}

std::vector<Coord> pool_of(const CoordSystem& chart, bool with_t) {
  std::vector<Coord> pool;
  if (with_t) pool.push_back(Coord::time());
  for (const Coord& c : chart.fiber_coordinates()) pool.push_back(c);
  return pool;
}

// expression with reciprocal and exp atoms, for printer/parser exercises
Expr random_rich_expr(Rng& rng, const CoordSystem& chart) {
  std::vector<Coord> pool = pool_of(chart, true);
  Expr e = random_poly(rng, pool, 3, 0);
  if (rng.range(0, 2) == 0) e = e * Expr::exp(random_poly(rng, pool, 1, 1));
  if (rng.range(0, 2) == 0) {
    // q has no constant term, so q + 1 is never the zero expression
    Expr q = random_poly(rng, pool, 2, 1);
    e = e * Expr::pow(q + Expr::integer(1), -rng.range(1, 2));
  }
  return e;
}

struct CheckResult {
  std::string name;
  bool passed = true;
  std::string detail;
};

using CheckList = std::vector<CheckResult>;

void report(CheckList& out, const std::string& name, bool passed, const std::string& detail = "") {
  out.push_back({name, passed, passed ? "" : detail});
}

void check_wirtinger_independence(CheckList& out, const CoordSystem& chart) {
  Rng rng(kCheckSeed + 1);
  std::vector<Coord> zs, zbs;
  for (const Coord& c : chart.fiber_coordinates())
    (c.axis == Axis::Z ? zs : zbs).push_back(c);
  for (int trial = 0; trial < 15; ++trial) {
    Expr holo = random_poly(rng, zs, 3, 1);
    Expr anti = random_poly(rng, zbs, 3, 1);
    for (const Coord& c : zbs)
      if (!wirtinger_derivative(holo, c).is_zero())
        return report(out, "wirtinger_independence", false,
                      to_string(holo) + " has a nonzero derivative along " + c.name());
    for (const Coord& c : zs)
      if (!wirtinger_derivative(anti, c).is_zero())
        return report(out, "wirtinger_independence", false,
                      to_string(anti) + " has a nonzero derivative along " + c.name());
  }
  report(out, "wirtinger_independence", true);
}

void check_leibniz(CheckList& out, const CoordSystem& chart) {
  Rng rng(kCheckSeed + 2);
  std::vector<Coord> pool = pool_of(chart, true);
  for (int trial = 0; trial < 15; ++trial) {
    Expr f = random_poly(rng, pool, 3, 0);
    Expr g = random_poly(rng, pool, 3, 0);
    Coord c = pool[static_cast<size_t>(rng.range(0, static_cast<int>(pool.size()) - 1))];
    Expr lhs = wirtinger_derivative(f * g, c);
    Expr rhs = wirtinger_derivative(f, c) * g + f * wirtinger_derivative(g, c);
    if (!structurally_equal(lhs, rhs))
      return report(out, "leibniz_product_rule", false,
                    "failed for f=" + to_string(f) + ", g=" + to_string(g) + ", along " + c.name());
  }
  report(out, "leibniz_product_rule", true);
}

void check_mixed_partials(CheckList& out, const CoordSystem& chart) {
  Rng rng(kCheckSeed + 3);
  std::vector<Coord> pool = pool_of(chart, true);
  for (int trial = 0; trial < 15; ++trial) {
    Expr f = random_rich_expr(rng, chart);
    Coord a = pool[static_cast<size_t>(rng.range(0, static_cast<int>(pool.size()) - 1))];
    Coord b = pool[static_cast<size_t>(rng.range(0, static_cast<int>(pool.size()) - 1))];
    Expr ab = wirtinger_derivative(wirtinger_derivative(f, a), b);
    Expr ba = wirtinger_derivative(wirtinger_derivative(f, b), a);
    if (!structurally_equal(ab, ba))
      return report(out, "mixed_partials_commute", false,
                    "failed for f=" + to_string(f) + " along " + a.name() + ", " + b.name());
  }
  report(out, "mixed_partials_commute", true);
}

void check_normalization_idempotent(CheckList& out, const CoordSystem& chart) {
  Rng rng(kCheckSeed + 4);
  for (int trial = 0; trial < 15; ++trial) {
    Expr f = random_rich_expr(rng, chart);
    Expr g = normalized(f);
    if (Expr::compare(f, g) != 0 || to_string(f) != to_string(g))
      return report(out, "normalization_idempotent", false, "changed by renormalization: " + to_string(f));
  }
  report(out, "normalization_idempotent", true);
}

void check_parser_roundtrip(CheckList& out, const CoordSystem& chart) {
  Rng rng(kCheckSeed + 5);
  for (int trial = 0; trial < 25; ++trial) {
    Expr e = random_rich_expr(rng, chart);
    std::string text = to_string(e);
    Expr back = parse_expression(text, chart);
    if (!structurally_equal(back, e) || to_string(back) != text)
      return report(out, "parser_roundtrip", false, "round trip broke on: " + text);
  }
  report(out, "parser_roundtrip", true);
}

void check_fd_consistency(CheckList& out, const CoordSystem& chart) {
  Rng rng(kCheckSeed + 6);
  const double h = 1e-6;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Coord> pool = pool_of(chart, true);
    Expr f = random_poly(rng, pool, 3, 0);
    // one generic point with zb = conj(z) so real/imaginary shifts make sense
    std::map<Coord, std::complex<double>> pt;
    pt[Coord::time()] = rng.sym();
    for (const Coord& c : chart.fiber_coordinates())
      if (c.axis == Axis::Z) {
        std::complex<double> w(rng.sym(), rng.sym());
        pt[c] = w;
        pt[c.conjugate()] = std::conj(w);
      }
    auto eval_shift = [&](const Coord& c, std::complex<double> dz) {
      auto moved = pt;
      moved[c] += dz;
      moved[c.conjugate()] += std::conj(dz);
      return eval_numeric(f, moved);
    };
    for (const Coord& c : chart.fiber_coordinates()) {
      if (c.axis != Axis::Z) continue;
      std::complex<double> fz = eval_numeric(wirtinger_derivative(f, c), pt);
      std::complex<double> fzb = eval_numeric(wirtinger_derivative(f, c.conjugate()), pt);
      std::complex<double> dx = (eval_shift(c, {h, 0}) - eval_shift(c, {-h, 0})) / (2 * h);
      std::complex<double> dy = (eval_shift(c, {0, h}) - eval_shift(c, {0, -h})) / (2 * h);
      std::complex<double> ex = fz + fzb;
      std::complex<double> ey = std::complex<double>(0, 1) * (fz - fzb);
      double ok_x = std::abs(dx - ex) / std::max(1.0, std::abs(ex));
      double ok_y = std::abs(dy - ey) / std::max(1.0, std::abs(ey));
      if (ok_x > 1e-6 || ok_y > 1e-6)
        return report(out, "eval_derivative_fd_consistency", false,
                      "finite differences disagree on " + to_string(f) + " at " + c.name());
    }
    // the time direction is an ordinary real coordinate
    auto t_shift = [&](double dt) {
      auto moved = pt;
      moved[Coord::time()] += dt;
      return eval_numeric(f, moved);
    };
    std::complex<double> ft = eval_numeric(wirtinger_derivative(f, Coord::time()), pt);
    std::complex<double> fd = (t_shift(h) - t_shift(-h)) / (2 * h);
    if (std::abs(fd - ft) / std::max(1.0, std::abs(ft)) > 1e-6)
      return report(out, "eval_derivative_fd_consistency", false,
                    "finite differences disagree on " + to_string(f) + " along t");
  }
  report(out, "eval_derivative_fd_consistency", true);
}

void check_d_nilpotent(CheckList& out, const CoordSystem& chart) {
  Rng rng(kCheckSeed + 7);
  for (int trial = 0; trial < 15; ++trial) {
    Expr f = random_rich_expr(rng, chart);
    TwoForm dd = exterior_derivative_1(differential(f, chart));
    if (!dd.entries().empty())
      return report(out, "exterior_derivative_nilpotent", false, "d(df) != 0 for f=" + to_string(f));
  }
  report(out, "exterior_derivative_nilpotent", true);
}

VectorField random_field(Rng& rng, const CoordSystem& chart) {
  std::vector<Coord> pool = pool_of(chart, true);
  std::map<Coord, Expr> comp;
  comp[Coord::time()] = Expr::integer(rng.range(0, 1));
  for (const Coord& c : chart.fiber_coordinates())
    if (rng.range(0, 1)) comp[c] = random_poly(rng, pool, 2, 0);
  return VectorField(chart, comp);
}

void check_interior_alternation(CheckList& out, const CoordSystem& chart) {
  Rng rng(kCheckSeed + 8);
  for (int trial = 0; trial < 8; ++trial) {
    VectorField Z = random_field(rng, chart);
    VectorField W = random_field(rng, chart);
    std::vector<TwoForm> forms;
    forms.push_back(symplectic_form(chart, LiftKind::complete(chart.k)));
    std::vector<Coord> pool = pool_of(chart, true);
    forms.push_back(exterior_derivative_1(differential(random_poly(rng, pool, 3, 0), chart)));
    OneForm w(chart, [&] {
      std::map<Coord, Expr> c;
      for (const Coord& cc : chart.fiber_coordinates())
        if (rng.range(0, 1)) c[cc] = random_poly(rng, pool, 2, 0);
      return c;
    }());
    forms.push_back(exterior_derivative_1(w));
    for (const TwoForm& phi : forms) {
      Expr lhs = pairing(interior_product(W, phi), Z);
      Expr rhs = pairing(interior_product(Z, phi), W);
      if (!structurally_equal(lhs, -rhs))
        return report(out, "interior_product_alternation", false, "phi(W,Z) != -phi(Z,W) on a sampled 2-form");
    }
  }
  report(out, "interior_product_alternation", true);
}

void check_coordinate_tower(CheckList& out, const CoordSystem& chart) {
  Rng rng(kCheckSeed + 9);
  for (int i = 1; i <= chart.m; ++i) {
    Expr z0 = Expr::coordinate(Coord::z(0, i));
    Expr zb0 = Expr::coordinate(Coord::zbar(0, i));
    if (!structurally_equal(complete_lift_function(z0, chart, chart.k),
                            Expr::coordinate(Coord::z(chart.k, i))) ||
        !structurally_equal(complete_lift_function(zb0, chart, chart.k),
                            Expr::coordinate(Coord::zbar(chart.k, i))))
      return report(out, "complete_lift_coordinate_tower", false,
                    "complete lift of a base coordinate missed its top-level coordinate");
  }
  Expr t = Expr::coordinate(Coord::time());
  if (!structurally_equal(complete_lift_function(t, chart, chart.k), t))
    return report(out, "complete_lift_coordinate_tower", false, "complete lift of t is not t");
  CoordSystem base(chart.m, 0);
  std::vector<Coord> pool = pool_of(base, true);
  Expr f = random_poly(rng, pool, 3, 0);
  if (!structurally_equal(vertical_lift_function(f, chart, chart.k), f))
    return report(out, "complete_lift_coordinate_tower", false, "vertical lift changed " + to_string(f));
  report(out, "complete_lift_coordinate_tower", true);
}

VectorField random_strict_field(Rng& rng, const CoordSystem& base, bool with_t) {
  std::vector<Coord> pool = pool_of(base, with_t);
  std::map<Coord, Expr> comp;
  comp[Coord::time()] = Expr::integer(1);
  for (const Coord& c : base.fiber_coordinates()) comp[c] = random_poly(rng, pool, 2, 0);
  return VectorField(base, comp);
}

OneForm random_strict_form(Rng& rng, const CoordSystem& base, bool with_t) {
  std::vector<Coord> pool = pool_of(base, with_t);
  std::map<Coord, Expr> comp;
  comp[Coord::time()] = Expr::integer(1);
  for (const Coord& c : base.fiber_coordinates()) comp[c] = random_poly(rng, pool, 2, 0);
  return OneForm(base, comp);
}

// Pascal single step: level r picks up the total derivative of level r-1.
VectorField lift_field_one_step(const VectorField& W, const CoordSystem& target) {
  std::map<Coord, Expr> comp;
  comp[Coord::time()] = W.component(Coord::time());
  for (const Coord& c : target.fiber_coordinates()) {
    Expr v = W.chart().contains(c) ? W.component(c) : Expr::integer(0);
    if (c.level >= 1) {
      Coord below = c.at_level(c.level - 1);
      v = v + total_derivative_step(W.component(below), target);
    }
    comp[c] = v;
  }
  return VectorField(target, comp);
}

void check_field_single_step(CheckList& out, const CoordSystem& chart) {
  Rng rng(kCheckSeed + 10);
  int K = std::max(chart.k, 1);
  CoordSystem base(chart.m, 0);
  for (int trial = 0; trial < 8; ++trial) {
    VectorField Z = random_strict_field(rng, base, true);
    VectorField iterated = Z;
    for (int order = 1; order <= K; ++order) {
      CoordSystem target(chart.m, order);
      iterated = lift_field_one_step(iterated, target);
      VectorField closed = complete_lift_vector_field(Z, target, order);
      for (const Coord& c : target.enumerate())
        if (!structurally_equal(iterated.component(c), closed.component(c)))
          return report(out, "field_lift_single_step_consistency", false,
                        "stepwise and closed-form lifts disagree at " + c.name() + " (order " +
                            std::to_string(order) + ")");
    }
  }
  report(out, "field_lift_single_step_consistency", true);
}

void check_pairing_vertical(CheckList& out, const CoordSystem& chart) {
  Rng rng(kCheckSeed + 11);
  int K = std::max(chart.k, 1);
  CoordSystem base(chart.m, 0);
  CoordSystem target(chart.m, K);
  for (int trial = 0; trial < 8; ++trial) {
    VectorField Z = random_strict_field(rng, base, true);
    OneForm w = random_strict_form(rng, base, true);
    Expr lhs = pairing(vertical_lift_one_form(w, target, K), complete_lift_vector_field(Z, target, K));
    if (!structurally_equal(lhs, pairing(w, Z)))
      return report(out, "form_lift_pairing_vertical_exact", false,
                    "vertical/complete pairing drifted from the base pairing");
  }
  report(out, "form_lift_pairing_vertical_exact", true);
}

void check_pairing_offset(CheckList& out, const CoordSystem& chart) {
  Rng rng(kCheckSeed + 12);
  int K = std::max(chart.k, 1);
  CoordSystem base(chart.m, 0);
  CoordSystem target(chart.m, K);
  for (int trial = 0; trial < 8; ++trial) {
    VectorField Z = random_strict_field(rng, base, true);
    OneForm w = random_strict_form(rng, base, true);
    Expr lhs = pairing(complete_lift_one_form(w, target, K), complete_lift_vector_field(Z, target, K));
    Expr expected = complete_lift_function(pairing(w, Z), target, K) + Expr::integer(1);
    if (!structurally_equal(lhs, expected))
      return report(out, "form_lift_pairing_offset_complete", false,
                    "complete/complete pairing is not D^k(base pairing) + 1");
  }
  report(out, "form_lift_pairing_offset_complete", true);
}

void check_contact(CheckList& out, const CoordSystem& chart) {
  CoordSystem base(chart.m, 0);
  VectorField xi(base, {{Coord::time(), Expr::integer(1)}});
  OneForm eta(base, {{Coord::time(), Expr::integer(1)}});
  for (auto kind : {LiftKind::vertical(chart.k), LiftKind::complete(chart.k)}) {
    ContactStructure cs = build_contact_structure(xi, eta, chart, kind);
    ContactReport rep = verify_contact(cs);
    if (!rep.passed()) {
      std::string which = kind.tag == LiftKind::Tag::Vertical ? "vertical" : "complete";
      std::string detail = which + " kind:";
      if (!rep.phi_xi_zero) detail += " phi(xi)!=0";
      if (!rep.eta_phi_zero) detail += " eta.phi!=0";
      if (!rep.eta_xi_one) detail += " eta(xi)!=1";
      if (!rep.kernel_dimension_one) detail += " kernel dimension != 1";
      return report(out, "contact_normalization", false, detail);
    }
  }
  report(out, "contact_normalization", true);
}

void check_symplectic_pairs(CheckList& out, const CoordSystem& chart) {
  for (auto kind : {LiftKind::vertical(chart.k), LiftKind::complete(chart.k)}) {
    TwoForm phi = symplectic_form(chart, kind);
    int top = kind.tag == LiftKind::Tag::Vertical ? 0 : chart.k;
    size_t expected = static_cast<size_t>(chart.m) * static_cast<size_t>(top + 1);
    bool ok = phi.entries().size() == expected;
    for (int r = 0; ok && r <= top; ++r)
      for (int i = 1; ok && i <= chart.m; ++i)
        ok = structurally_equal(phi.coefficient(Coord::z(r, i), Coord::zbar(r, i)), Expr::unit_i());
    if (!ok)
      return report(out, "symplectic_pairs_unit", false,
                    "stored pairs are not exactly (z_ri, zb_ri) -> i over the covered levels");
  }
  report(out, "symplectic_pairs_unit", true);
}

void check_conjugate_symmetry(CheckList& out, const CoordSystem& chart) {
  Rng rng(kCheckSeed + 15);
  CoordSystem base(chart.m, 0);
  std::vector<Coord> pool = pool_of(base, true);
  for (int trial = 0; trial < 5; ++trial) {
    Expr p = random_poly(rng, pool, 2, 0);
    Expr H = p + conjugate_swap(p);
    for (auto kind : {LiftKind::vertical(chart.k), LiftKind::complete(chart.k)}) {
      SolvedField sol = solve_hamiltonian_field({chart, kind, H});
      for (const auto& [c, rhs] : sol.field.components()) {
        if (c.axis != Axis::Z) continue;
        if (!structurally_equal(sol.field.component(c.conjugate()), conjugate_swap(rhs)))
          return report(out, "hamilton_conjugate_symmetry", false,
                        "conjugate pair broke at " + c.name() + " for H=" + to_string(H));
      }
    }
  }
  report(out, "hamilton_conjugate_symmetry", true);
}

void check_energy_stationarity(CheckList& out, const CoordSystem& chart) {
  Rng rng(kCheckSeed + 16);
  CoordSystem base(chart.m, 0);
  std::vector<Coord> pool = pool_of(base, true);
  for (int trial = 0; trial < 5; ++trial) {
    Expr H = random_poly(rng, pool, 3, 0);
    for (auto kind : {LiftKind::vertical(chart.k), LiftKind::complete(chart.k)}) {
      SolvedField sol = solve_hamiltonian_field({chart, kind, H});
      Expr along = apply_field(sol.field, sol.lifted_hamiltonian);
      Expr dt = wirtinger_derivative(sol.lifted_hamiltonian, Coord::time());
      if (!structurally_equal(along, dt))
        return report(out, "energy_stationarity", false,
                      "dH/dt along the flow is not the explicit t-derivative for H=" + to_string(H));
    }
  }
  report(out, "energy_stationarity", true);
}

void check_integrator_drift(CheckList& out, const CoordSystem& chart) {
  Expr H = Expr::integer(0);
  for (int i = 1; i <= chart.m; ++i)
    H = H + Expr::coordinate(Coord::z(0, i)) * Expr::coordinate(Coord::zbar(0, i));
  std::map<Coord, std::complex<double>> initial;
  for (const Coord& c : chart.fiber_coordinates())
    initial[c] = std::ldexp(1.0, -c.level);  // keeps the initial energy away from 0
  IntegratorConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 1.0;
  Trajectory tr = integrate({chart, LiftKind::complete(chart.k), H}, initial, cfg);
  if (!(tr.energy_drift <= 1e-8))
    return report(out, "integrator_energy_drift", false,
                  "relative energy drift " + fmt17(tr.energy_drift) + " exceeds 1e-8");
  report(out, "integrator_energy_drift", true);
}

int run_check(const RunSpec& spec, std::ostream& out) {
  require_json_format(spec);
  CoordSystem chart(spec.m, spec.k);

  CheckList checks;
  check_wirtinger_independence(checks, chart);
  check_leibniz(checks, chart);
  check_mixed_partials(checks, chart);
  check_normalization_idempotent(checks, chart);
  check_parser_roundtrip(checks, chart);
  check_fd_consistency(checks, chart);
  check_d_nilpotent(checks, chart);
  check_interior_alternation(checks, chart);
  check_coordinate_tower(checks, chart);
  check_field_single_step(checks, chart);
  check_pairing_vertical(checks, chart);
  check_pairing_offset(checks, chart);
  check_contact(checks, chart);
  check_symplectic_pairs(checks, chart);
  check_conjugate_symmetry(checks, chart);
  check_energy_stationarity(checks, chart);
  check_integrator_drift(checks, chart);

  bool all = true;
  json arr = json::array();
  for (const CheckResult& c : checks) {
    all = all && c.passed;
    json entry{{"name", c.name}, {"passed", c.passed}};
    if (!c.passed) entry["counterexample"] = c.detail;
    arr.push_back(entry);
  }
  json j;
  j["chart"] = chart_json(chart);
  j["seed"] = kCheckSeed;
  j["checks"] = arr;
  j["passed"] = all;
  emit_document(j.dump(2) + "\n", spec.out, out);
  return all ? 0 : 1;
}

int exit_code_for(const std::string& code) {
  return code == "non_finite_state" || code == "division_by_zero" ? 2 : 1;
}

}  // namespace

int run(const RunSpec& spec, std::ostream& out, std::ostream& diag) {
  try {
    if (spec.command == "derive") return run_derive(spec, out);
    if (spec.command == "lift") return run_lift(spec, out);
    if (spec.command == "integrate") return run_integrate(spec, out);
    if (spec.command == "check") return run_check(spec, out);
    throw EngineError("invalid_arguments", "unknown command '" + spec.command + "'");
  } catch (const EngineError& e) {
    json j{{"error", e.code}, {"message", e.what()}};
    diag << j.dump(2) << '\n';
    return exit_code_for(e.code);
  }
}

}  // namespace liftham
