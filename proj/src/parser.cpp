#include "liftham/parser.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <string>

#include "liftham/errors.hpp"

namespace liftham {

namespace {

using BigInt = boost::multiprecision::cpp_int;

struct Parser {
  const std::string& s;
  const CoordSystem& chart;
  size_t pos = 0;

  Parser(const std::string& text, const CoordSystem& ch) : s(text), chart(ch) {}

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool at_end() {
    skip_ws();
    return pos >= s.size();
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
  bool accept(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& expected) {
    skip_ws();
    std::string found = pos < s.size() ? "'" + std::string(1, s[pos]) + "'" : "end of input";
    throw ParseError(pos, expected, found);
  }

  static bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  static bool ident_cont(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  Expr parse_expr() {
    Expr acc = parse_term();
    while (true) {
      if (accept('+'))
        acc = acc + parse_term();
      else if (accept('-'))
        acc = acc - parse_term();
      else
        return acc;
    }
  }

  Expr parse_term() {
    Expr acc = parse_unary(false);
    while (true) {
      if (accept('*'))
        acc = acc * parse_unary(false);
      else if (accept('/'))
        acc = acc * parse_unary(true);  // fold /u^n into u^-n
      else
        return acc;
    }
  }

  Expr parse_unary(bool invert) {
    if (accept('-')) return -parse_unary(invert);
    return parse_power(invert);
  }

  Expr parse_power(bool invert) {
    Expr base = parse_primary();
    long long expo = 1;
    if (accept('^')) expo = parse_exponent();
    if (invert) expo = -expo;
    return expo == 1 ? base : Expr::pow(base, expo);
  }

  long long parse_exponent() {
    bool parens = accept('(');
    bool negate = accept('-');
    skip_ws();
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
      fail("an integer exponent");
    long long v = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      v = v * 10 + (s[pos] - '0');
      if (v > 1000000) throw ParseError(pos, "a smaller exponent", "more than 10^6");
      ++pos;
    }
    if (parens && !accept(')')) fail("')'");
    return negate ? -v : v;
  }

  Expr parse_primary() {
    skip_ws();
    if (pos >= s.size()) fail("a number, a name, or '('");
    char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
    if (ident_start(c)) return parse_identifier();
    if (c == '(') {
      ++pos;
      Expr inner = parse_expr();
      if (!accept(')')) fail("')'");
      return inner;
    }
    fail("a number, a name, or '('");
  }

  Expr parse_number() {
    BigInt whole = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      whole = whole * 10 + (s[pos] - '0');
      ++pos;
    }
    BigInt num = whole;
    BigInt den = 1;
    if (pos < s.size() && s[pos] == '.') {
      ++pos;
      if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
        fail("digits after the decimal point");
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
        num = num * 10 + (s[pos] - '0');
        den *= 10;
        ++pos;
      }
    }
    Rational value(num, den);
    // adjacent 'i' marks an imaginary literal
    if (pos < s.size() && s[pos] == 'i' && (pos + 1 >= s.size() || !ident_cont(s[pos + 1]))) {
      ++pos;
      return Expr::constant(ComplexRational(Rational(0), value));
    }
    return Expr::constant(ComplexRational(value));
  }

  Expr parse_identifier() {
    size_t start = pos;
    while (pos < s.size() && ident_cont(s[pos])) ++pos;
    std::string name = s.substr(start, pos - start);
    if (name == "t") return Expr::coordinate(Coord::time());
    if (name == "i") return Expr::unit_i();
    if (name == "exp") {
      if (!accept('(')) fail("'(' after exp");
      Expr inner = parse_expr();
      if (!accept(')')) fail("')'");
      return Expr::exp(inner);
    }
    return coordinate_named(name, start);
  }

  Expr coordinate_named(const std::string& name, size_t at) {
    // z<level>_<index>, zb<level>_<index>, z_<index> == z0_<index>
    size_t p = 0;
    Axis axis;
    if (p < name.size() && name[p] == 'z') {
      ++p;
      if (p < name.size() && name[p] == 'b') {
        axis = Axis::ZBar;
        ++p;
      } else {
        axis = Axis::Z;
      }
    } else {
      throw UnknownVariable(name, at, chart.m, chart.k);
    }
    long long level = 0;
    bool has_level = false;
    while (p < name.size() && std::isdigit(static_cast<unsigned char>(name[p]))) {
      has_level = true;
      level = level * 10 + (name[p] - '0');
      if (level > 1000000) throw UnknownVariable(name, at, chart.m, chart.k);
      ++p;
    }
    if (p >= name.size() || name[p] != '_') throw UnknownVariable(name, at, chart.m, chart.k);
    ++p;
    if (p >= name.size()) throw UnknownVariable(name, at, chart.m, chart.k);
    long long index = 0;
    while (p < name.size() && std::isdigit(static_cast<unsigned char>(name[p]))) {
      index = index * 10 + (name[p] - '0');
      if (index > 1000000) throw UnknownVariable(name, at, chart.m, chart.k);
      ++p;
    }
    if (p != name.size()) throw UnknownVariable(name, at, chart.m, chart.k);
    (void)has_level;  // z_<i> reads as level 0
    Coord c = axis == Axis::Z ? Coord::z(static_cast<int>(level), static_cast<int>(index))
                              : Coord::zbar(static_cast<int>(level), static_cast<int>(index));
    if (!chart.contains(c)) throw UnknownVariable(name, at, chart.m, chart.k);
    return Expr::coordinate(c);
  }
};

}  // namespace

Expr parse_expression(const std::string& text, const CoordSystem& chart) {
  Parser p(text, chart);
  Expr e = p.parse_expr();
  if (!p.at_end()) p.fail("end of input");
  return e;
}

}  // namespace liftham
