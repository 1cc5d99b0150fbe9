#include "liftham/expr.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "liftham/errors.hpp"

namespace liftham {

struct Expr::Node {
  ExprKind kind = ExprKind::Constant;
  ComplexRational value;   // Constant
  Coord coord;             // Coordinate
  std::vector<Expr> kids;  // Sum/Product children; [0] holds Power base / Exp argument
  long long expo = 0;      // Power
};

// All normalization machinery lives here; the public factories delegate.
struct ExprOps {
  using Node = Expr::Node;
  using NodePtr = std::shared_ptr<const Node>;

  static Expr wrap(Node n) { return Expr(std::make_shared<const Node>(std::move(n))); }
  static const Node& ref(const Expr& e) { return *e.node_; }

  static const Expr& zero() {
    static const Expr z = wrap(Node{});
    return z;
  }
  static const Expr& one() {
    static const Expr o = wrap(Node{ExprKind::Constant, ComplexRational(1), Coord{}, {}, 0});
    return o;
  }

  // ---- term decomposition -------------------------------------------------

  struct Factor {
    Expr base;      // Coordinate, Exp, or monic Sum (reciprocal only)
    long long exp;  // never 0
  };
  struct Term {
    ComplexRational coeff;
    std::vector<Factor> factors;  // sorted by Expr::compare on base, bases distinct
  };

  static Term term_of(const Expr& e) {
    const Node& n = ref(e);
    Term t;
    t.coeff = ComplexRational(1);
    switch (n.kind) {
      case ExprKind::Constant:
        t.coeff = n.value;
        break;
      case ExprKind::Coordinate:
      case ExprKind::Exp:
        t.factors.push_back({e, 1});
        break;
      case ExprKind::Power:
        t.factors.push_back({n.kids[0], n.expo});
        break;
      case ExprKind::Product:
        for (const Expr& kid : n.kids) {
          const Node& kn = ref(kid);
          if (kn.kind == ExprKind::Constant)
            t.coeff = t.coeff * kn.value;
          else if (kn.kind == ExprKind::Power)
            t.factors.push_back({kn.kids[0], kn.expo});
          else
            t.factors.push_back({kid, 1});
        }
        break;
      case ExprKind::Sum:
        // callers split sums first
        break;
    }
    return t;
  }

  static std::vector<Term> decompose(const Expr& e) {
    const Node& n = ref(e);
    std::vector<Term> out;
    if (n.kind == ExprKind::Sum) {
      out.reserve(n.kids.size());
      for (const Expr& kid : n.kids) out.push_back(term_of(kid));
    } else if (n.kind == ExprKind::Constant && n.value.is_zero()) {
      // empty
    } else {
      out.push_back(term_of(e));
    }
    return out;
  }

  static int compare_factor_lists(const std::vector<Factor>& a, const std::vector<Factor>& b) {
    size_t m = std::min(a.size(), b.size());
    for (size_t i = 0; i < m; ++i) {
      int c = Expr::compare(a[i].base, b[i].base);
      if (c != 0) return c;
      if (a[i].exp != b[i].exp) return a[i].exp > b[i].exp ? -1 : 1;  // higher power first
    }
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    return 0;
  }

  static long long degree(const Term& t) {
    long long d = 0;
    for (const Factor& f : t.factors) d += f.exp;
    return d;
  }

  // descending degree, then factor-list order, then coefficient
  static bool term_before(const Term& a, const Term& b) {
    long long da = degree(a), db = degree(b);
    if (da != db) return da > db;
    int c = compare_factor_lists(a.factors, b.factors);
    if (c != 0) return c < 0;
    return a.coeff.compare(b.coeff) < 0;
  }

  struct FactorKeyLess {
    bool operator()(const std::vector<Factor>& a, const std::vector<Factor>& b) const {
      return compare_factor_lists(a, b) < 0;
    }
  };

  static Expr expr_of_term(const Term& t) {
    if (t.factors.empty()) return Expr::constant(t.coeff);
    std::vector<Expr> kids;
    if (!t.coeff.is_one()) kids.push_back(Expr::constant(t.coeff));
    for (const Factor& f : t.factors) {
      if (f.exp == 1) {
        kids.push_back(f.base);
      } else {
        Node p;
        p.kind = ExprKind::Power;
        p.kids = {f.base};
        p.expo = f.exp;
        kids.push_back(wrap(std::move(p)));
      }
    }
    if (kids.size() == 1) return kids[0];
    Node n;
    n.kind = ExprKind::Product;
    n.kids = std::move(kids);
    return wrap(std::move(n));
  }

  static Expr build(std::vector<Term> terms) {
    std::map<std::vector<Factor>, ComplexRational, FactorKeyLess> acc;
    for (Term& t : terms) {
      auto it = acc.find(t.factors);
      if (it == acc.end())
        acc.emplace(std::move(t.factors), t.coeff);
      else
        it->second = it->second + t.coeff;
    }
    std::vector<Term> merged;
    merged.reserve(acc.size());
    for (auto& [fs, c] : acc)
      if (!c.is_zero()) merged.push_back(Term{c, fs});
    if (merged.empty()) return zero();
    std::sort(merged.begin(), merged.end(), term_before);
    if (merged.size() == 1) return expr_of_term(merged[0]);
    std::vector<Expr> kids;
    kids.reserve(merged.size());
    for (const Term& t : merged) kids.push_back(expr_of_term(t));
    Node n;
    n.kind = ExprKind::Sum;
    n.kids = std::move(kids);
    return wrap(std::move(n));
  }

  static Term mul_terms(const Term& a, const Term& b) {
    Term out;
    out.coeff = a.coeff * b.coeff;
    out.factors.reserve(a.factors.size() + b.factors.size());
    size_t i = 0, j = 0;
    while (i < a.factors.size() && j < b.factors.size()) {
      int c = Expr::compare(a.factors[i].base, b.factors[j].base);
      if (c < 0) {
        out.factors.push_back(a.factors[i++]);
      } else if (c > 0) {
        out.factors.push_back(b.factors[j++]);
      } else {
        long long e = a.factors[i].exp + b.factors[j].exp;
        if (e != 0) out.factors.push_back({a.factors[i].base, e});
        ++i;
        ++j;
      }
    }
    for (; i < a.factors.size(); ++i) out.factors.push_back(a.factors[i]);
    for (; j < b.factors.size(); ++j) out.factors.push_back(b.factors[j]);
    return out;
  }

  static Expr mul(const Expr& a, const Expr& b) {
    std::vector<Term> ta = decompose(a), tb = decompose(b);
    std::vector<Term> out;
    out.reserve(ta.size() * tb.size());
    for (const Term& x : ta)
      for (const Term& y : tb) out.push_back(mul_terms(x, y));
    return build(std::move(out));
  }

  static Expr pow_expand(const Expr& e, long long n) {  // n >= 2, multiplies out
    Expr acc = one();
    Expr base = e;
    while (n > 0) {
      if (n & 1) acc = mul(acc, base);
      if (n >>= 1) base = mul(base, base);
    }
    return acc;
  }

  static Expr pow(const Expr& a, long long n) {
    if (n == 0) return one();
    if (a.is_zero()) {
      if (n < 0) throw DivisionByZero("zero base raised to a negative power");
      return zero();
    }
    if (n == 1) return a;
    std::vector<Term> terms = decompose(a);
    if (terms.size() == 1) {
      const Term& t = terms[0];
      Term flat;
      flat.coeff = t.coeff.pow(n);
      std::vector<Expr> expanded;  // positive powers of sum bases get multiplied out
      for (const Factor& f : t.factors) {
        long long e2 = f.exp * n;
        if (ref(f.base).kind == ExprKind::Sum && e2 > 0)
          expanded.push_back(pow_expand(f.base, e2));
        else
          flat.factors.push_back({f.base, e2});
      }
      Expr out = build({flat});
      for (const Expr& x : expanded) out = mul(out, x);
      return out;
    }
    if (n >= 2) return pow_expand(a, n);
    // reciprocal of a sum: normalize the leading coefficient so equal
    // denominators share one atom
    ComplexRational lead = terms.front().coeff;
    Expr u = a;
    if (!lead.is_one()) {
      ComplexRational inv = lead.inverse();
      std::vector<Term> scaled = terms;
      for (Term& t : scaled) t.coeff = t.coeff * inv;
      u = build(std::move(scaled));
    }
    Term t;
    t.coeff = lead.pow(n);
    t.factors.push_back({u, n});
    return build({t});
  }

  // ---- printing -----------------------------------------------------------

  static std::string rat_str(const Rational& r) {
    std::ostringstream os;
    os << r;
    return os.str();
  }

  static std::string atom_str(const Expr& b) {
    const Node& n = ref(b);
    switch (n.kind) {
      case ExprKind::Coordinate:
        return n.coord.name();
      case ExprKind::Exp:
        return "exp(" + to_string(n.kids[0]) + ")";
      default:
        return "(" + to_string(b) + ")";
    }
  }

  static std::string coeff_str(const ComplexRational& c) {
    if (c.is_real()) return rat_str(c.re);
    if (c.is_imaginary()) return c.im == 1 ? "i" : rat_str(c.im) + "*i";
    Rational ai = c.im < 0 ? Rational(-c.im) : c.im;
    std::string imag = ai == 1 ? "i" : rat_str(ai) + "*i";
    return "(" + rat_str(c.re) + (c.im < 0 ? "-" : "+") + imag + ")";
  }

  // sign-extracted rendering of a single term
  static std::pair<bool, std::string> print_term(const Expr& e) {
    Term t = term_of(e);
    ComplexRational c = t.coeff;
    bool negative = false;
    if ((c.is_real() && c.re < 0) || (c.is_imaginary() && c.im < 0)) {
      negative = true;
      c = -c;
    }
    std::string num;
    if (!c.is_one()) num = coeff_str(c);
    std::string dens;
    for (const Factor& f : t.factors) {
      if (f.exp > 0) {
        if (!num.empty()) num += "*";
        num += atom_str(f.base);
        if (f.exp != 1) num += "^" + std::to_string(f.exp);
      } else {
        dens += "/" + atom_str(f.base);
        if (f.exp != -1) dens += "^" + std::to_string(-f.exp);
      }
    }
    if (num.empty()) num = "1";
    return {negative, num + dens};
  }

  static std::string to_string(const Expr& e) {
    const Node& n = ref(e);
    if (n.kind != ExprKind::Sum) {
      auto [neg, mag] = print_term(e);
      return neg ? "-" + mag : mag;
    }
    std::string s;
    bool first = true;
    for (const Expr& kid : n.kids) {
      auto [neg, mag] = print_term(kid);
      if (first) {
        s = (neg ? "-" : "") + mag;
        first = false;
      } else {
        s += (neg ? " - " : " + ") + mag;
      }
    }
    return s;
  }
};

// ---- Expr public surface ----------------------------------------------------

Expr::Expr() : node_(ExprOps::zero().node_) {}

Expr Expr::constant(ComplexRational v) {
  if (v.is_zero()) return ExprOps::zero();
  Expr::Node n;
  n.kind = ExprKind::Constant;
  n.value = std::move(v);
  return ExprOps::wrap(std::move(n));
}

Expr Expr::integer(long long n) { return constant(ComplexRational(n)); }

Expr Expr::rational(long long num, long long den) {
  if (den == 0) throw DivisionByZero("rational literal with zero denominator");
  return constant(ComplexRational(Rational(num) / Rational(den)));
}

Expr Expr::unit_i() { return constant(ComplexRational::unit_i()); }

Expr Expr::coordinate(Coord c) {
  Expr::Node n;
  n.kind = ExprKind::Coordinate;
  n.coord = c;
  return ExprOps::wrap(std::move(n));
}

Expr Expr::add(const Expr& a, const Expr& b) {
  std::vector<ExprOps::Term> terms = ExprOps::decompose(a);
  std::vector<ExprOps::Term> tb = ExprOps::decompose(b);
  terms.insert(terms.end(), tb.begin(), tb.end());
  return ExprOps::build(std::move(terms));
}

Expr Expr::neg(const Expr& a) {
  std::vector<ExprOps::Term> terms = ExprOps::decompose(a);
  for (auto& t : terms) t.coeff = -t.coeff;
  return ExprOps::build(std::move(terms));
}

Expr Expr::sub(const Expr& a, const Expr& b) { return add(a, neg(b)); }

Expr Expr::mul(const Expr& a, const Expr& b) { return ExprOps::mul(a, b); }

Expr Expr::div(const Expr& a, const Expr& b) { return ExprOps::mul(a, ExprOps::pow(b, -1)); }

Expr Expr::pow(const Expr& a, long long n) { return ExprOps::pow(a, n); }

Expr Expr::exp(const Expr& a) {
  if (a.is_zero()) return ExprOps::one();
  Expr::Node n;
  n.kind = ExprKind::Exp;
  n.kids = {a};
  return ExprOps::wrap(std::move(n));
}

ExprKind Expr::kind() const { return node_->kind; }
const ComplexRational& Expr::constant_value() const { return node_->value; }
const Coord& Expr::coordinate_ref() const { return node_->coord; }
const std::vector<Expr>& Expr::children() const { return node_->kids; }
const Expr& Expr::base() const { return node_->kids[0]; }
long long Expr::exponent() const { return node_->expo; }
const Expr& Expr::arg() const { return node_->kids[0]; }

bool Expr::is_zero() const {
  return node_->kind == ExprKind::Constant && node_->value.is_zero();
}
bool Expr::is_one() const {
  return node_->kind == ExprKind::Constant && node_->value.is_one();
}

int Expr::compare(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return 0;
  auto rank = [](ExprKind k) {
    switch (k) {
      case ExprKind::Constant: return 0;
      case ExprKind::Coordinate: return 1;
      case ExprKind::Exp: return 2;
      case ExprKind::Power: return 3;
      case ExprKind::Product: return 4;
      case ExprKind::Sum: return 5;
    }
    return 6;
  };
  const Expr::Node& na = *a.node_;
  const Expr::Node& nb = *b.node_;
  int ra = rank(na.kind), rb = rank(nb.kind);
  if (ra != rb) return ra < rb ? -1 : 1;
  switch (na.kind) {
    case ExprKind::Constant:
      return na.value.compare(nb.value);
    case ExprKind::Coordinate:
      return na.coord.compare(nb.coord);
    case ExprKind::Exp:
      return compare(na.kids[0], nb.kids[0]);
    case ExprKind::Power: {
      int c = compare(na.kids[0], nb.kids[0]);
      if (c != 0) return c;
      if (na.expo != nb.expo) return na.expo < nb.expo ? -1 : 1;
      return 0;
    }
    case ExprKind::Product:
    case ExprKind::Sum: {
      size_t m = std::min(na.kids.size(), nb.kids.size());
      for (size_t i = 0; i < m; ++i) {
        int c = compare(na.kids[i], nb.kids[i]);
        if (c != 0) return c;
      }
      if (na.kids.size() != nb.kids.size()) return na.kids.size() < nb.kids.size() ? -1 : 1;
      return 0;
    }
  }
  return 0;
}

// ---- free functions ---------------------------------------------------------

Expr wirtinger_derivative(const Expr& e, const Coord& c) {
  switch (e.kind()) {
    case ExprKind::Constant:
      return Expr();
    case ExprKind::Coordinate:
      return e.coordinate_ref() == c ? Expr::integer(1) : Expr();
    case ExprKind::Sum: {
      Expr acc;
      for (const Expr& kid : e.children()) acc = acc + wirtinger_derivative(kid, c);
      return acc;
    }
    case ExprKind::Product: {
      Expr acc;
      const auto& kids = e.children();
      for (size_t i = 0; i < kids.size(); ++i) {
        Expr piece = wirtinger_derivative(kids[i], c);
        if (piece.is_zero()) continue;
        for (size_t j = 0; j < kids.size(); ++j)
          if (j != i) piece = piece * kids[j];
        acc = acc + piece;
      }
      return acc;
    }
    case ExprKind::Power: {
      long long n = e.exponent();
      return Expr::integer(n) * Expr::pow(e.base(), n - 1) * wirtinger_derivative(e.base(), c);
    }
    case ExprKind::Exp:
      return e * wirtinger_derivative(e.arg(), c);
  }
  return Expr();
}

Expr substitute(const Expr& e, const std::map<Coord, Expr>& bindings) {
  switch (e.kind()) {
    case ExprKind::Constant:
      return e;
    case ExprKind::Coordinate: {
      auto it = bindings.find(e.coordinate_ref());
      return it != bindings.end() ? it->second : e;
    }
    case ExprKind::Sum: {
      Expr acc;
      for (const Expr& kid : e.children()) acc = acc + substitute(kid, bindings);
      return acc;
    }
    case ExprKind::Product: {
      Expr acc = Expr::integer(1);
      for (const Expr& kid : e.children()) acc = acc * substitute(kid, bindings);
      return acc;
    }
    case ExprKind::Power:
      return Expr::pow(substitute(e.base(), bindings), e.exponent());
    case ExprKind::Exp:
      return Expr::exp(substitute(e.arg(), bindings));
  }
  return e;
}

namespace {

std::complex<double> ipow(std::complex<double> v, long long n) {  // n >= 0
  std::complex<double> acc(1.0, 0.0);
  while (n > 0) {
    if (n & 1) acc *= v;
    v *= v;
    n >>= 1;
  }
  return acc;
}

}  // namespace

std::complex<double> eval_numeric(const Expr& e,
                                  const std::map<Coord, std::complex<double>>& point) {
  switch (e.kind()) {
    case ExprKind::Constant:
      return e.constant_value().to_complex();
    case ExprKind::Coordinate: {
      auto it = point.find(e.coordinate_ref());
      if (it == point.end()) throw UnboundCoordinate(e.coordinate_ref().name());
      return it->second;
    }
    case ExprKind::Sum: {
      std::complex<double> acc(0.0, 0.0);
      for (const Expr& kid : e.children()) acc += eval_numeric(kid, point);
      return acc;
    }
    case ExprKind::Product: {
      std::complex<double> acc(1.0, 0.0);
      for (const Expr& kid : e.children()) acc *= eval_numeric(kid, point);
      return acc;
    }
    case ExprKind::Power: {
      long long n = e.exponent();
      std::complex<double> w = ipow(eval_numeric(e.base(), point), n < 0 ? -n : n);
      if (n < 0) {
        if (std::abs(w) < 1e-300) throw DivisionByZero("denominator evaluated to zero");
        return std::complex<double>(1.0, 0.0) / w;
      }
      return w;
    }
    case ExprKind::Exp:
      return std::exp(eval_numeric(e.arg(), point));
  }
  return {0.0, 0.0};
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (Expr::compare(a, b) == 0) return true;
  return Expr::sub(a, b).is_zero();
}

std::string to_string(const Expr& e) { return ExprOps::to_string(e); }

namespace {

void collect_coords(const Expr& e, std::set<Coord>& out) {
  switch (e.kind()) {
    case ExprKind::Constant:
      return;
    case ExprKind::Coordinate:
      out.insert(e.coordinate_ref());
      return;
    default:
      for (const Expr& kid : e.children()) collect_coords(kid, out);
  }
}

}  // namespace

std::set<Coord> free_coordinates(const Expr& e) {
  std::set<Coord> out;
  collect_coords(e, out);
  return out;
}

Expr normalized(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Constant:
      return Expr::constant(e.constant_value());
    case ExprKind::Coordinate:
      return Expr::coordinate(e.coordinate_ref());
    case ExprKind::Sum: {
      Expr acc;
      for (const Expr& kid : e.children()) acc = acc + normalized(kid);
      return acc;
    }
    case ExprKind::Product: {
      Expr acc = Expr::integer(1);
      for (const Expr& kid : e.children()) acc = acc * normalized(kid);
      return acc;
    }
    case ExprKind::Power:
      return Expr::pow(normalized(e.base()), e.exponent());
    case ExprKind::Exp:
      return Expr::exp(normalized(e.arg()));
  }
  return e;
}

}  // namespace liftham
