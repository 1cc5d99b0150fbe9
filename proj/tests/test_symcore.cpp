#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include "liftham/errors.hpp"
#include "liftham/expr.hpp"

using namespace liftham;

namespace {

const Coord T = Coord::time();
const Coord Z = Coord::z(0, 1);
const Coord ZB = Coord::zbar(0, 1);
const Coord Z2 = Coord::z(0, 2);

Expr ct(long long n) { return Expr::integer(n); }
Expr co(Coord c) { return Expr::coordinate(c); }

// small deterministic generator over the polynomial+exp fragment
struct Rng {
  std::uint64_t s;
  explicit Rng(std::uint64_t seed) : s(seed) {}
  std::uint64_t next() {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return s;
  }
  long long range(long long lo, long long hi) {  // inclusive
    return lo + static_cast<long long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
};

Expr random_poly(Rng& rng, const std::vector<Coord>& vars, int terms, int max_deg) {
  Expr acc;
  for (int t = 0; t < terms; ++t) {
    Expr term = Expr::constant(
        ComplexRational(Rational(rng.range(-3, 3)), Rational(rng.range(-2, 2))));
    for (const Coord& v : vars) {
      long long d = rng.range(0, max_deg);
      if (d > 0) term = term * Expr::pow(co(v), d);
    }
    acc = acc + term;
  }
  if (rng.range(0, 3) == 0) {
    size_t pick = static_cast<size_t>(rng.range(0, static_cast<long long>(vars.size()) - 1));
    acc = acc + Expr::exp(co(vars[pick]));
  }
  return acc;
}

std::complex<double> I(0.0, 1.0);

}  // namespace

TEST_CASE("wirtinger derivative treats z and zb as independent") {
  Expr f = co(Z) * co(ZB);
  CHECK(structurally_equal(wirtinger_derivative(f, Z), co(ZB)));
  CHECK(structurally_equal(wirtinger_derivative(f, ZB), co(Z)));
  CHECK(wirtinger_derivative(co(Z), ZB).is_zero());
  CHECK(wirtinger_derivative(co(ZB), Z).is_zero());
  CHECK(wirtinger_derivative(co(Z), T).is_zero());
}

TEST_CASE("derivative rules: power, product, exp, chain") {
  Expr z = co(Z);
  CHECK(structurally_equal(wirtinger_derivative(Expr::pow(z, 3), Z), ct(3) * z * z));
  Expr g = Expr::exp(z * z);
  CHECK(structurally_equal(wirtinger_derivative(g, Z), ct(2) * z * g));
  Expr h = Expr::pow(z + ct(1), -1);
  CHECK(structurally_equal(wirtinger_derivative(h, Z), -Expr::pow(z + ct(1), -2)));
}

TEST_CASE("normal form merges, cancels, and expands") {
  Expr z = co(Z);
  CHECK((z + z - ct(2) * z).is_zero());
  CHECK(Expr::mul(Expr::exp(z), Expr::pow(Expr::exp(z), -1)).is_one());
  CHECK(structurally_equal(Expr::pow(z + ct(1), 2), z * z + ct(2) * z + ct(1)));
  CHECK(Expr::pow(z, 0).is_one());
  CHECK(Expr::exp(Expr()).is_one());
  CHECK(structurally_equal(Expr::rational(1, 3) + Expr::rational(1, 6), Expr::rational(1, 2)));
  // i as an exact scalar: (1/i) z == -i z
  CHECK(structurally_equal(Expr::div(z, Expr::unit_i()), -Expr::unit_i() * z));
  CHECK_THROWS_AS(Expr::pow(Expr(), -1), DivisionByZero);
  CHECK_THROWS_AS(Expr::div(ct(1), Expr()), DivisionByZero);
}

TEST_CASE("printer renders canonical text") {
  Expr z = co(Z);
  Expr zb = co(ZB);
  CHECK(to_string(Expr()) == "0");
  CHECK(to_string(ct(1)) == "1");
  CHECK(to_string(-z) == "-z0_1");
  CHECK(to_string(Expr::unit_i()) == "i");
  CHECK(to_string(-Expr::unit_i()) == "-i");
  CHECK(to_string(Expr::rational(3, 4) * Expr::unit_i()) == "3/4*i");
  CHECK(to_string((Expr::rational(1, 2) - Expr::rational(3, 4) * Expr::unit_i()) * z) ==
        "(1/2-3/4*i)*z0_1");
  CHECK(to_string(ct(2) * z * Expr::pow(zb + ct(1), -2)) == "2*z0_1/(zb0_1 + 1)^2");
  // dividing by the expanded square keeps the expanded atom; same value numerically
  CHECK(to_string(ct(2) * z / Expr::pow(zb + ct(1), 2)) ==
        "2*z0_1/(zb0_1^2 + 2*zb0_1 + 1)");
  CHECK(to_string(Expr::div(ct(1), z + ct(1))) == "1/(z0_1 + 1)");
  CHECK(to_string(z * z + z + ct(1)) == "z0_1^2 + z0_1 + 1");
  CHECK(to_string(co(Z2) + z) == "z0_1 + z0_2");
  CHECK(to_string(co(T) + z) == "t + z0_1");
  CHECK(to_string(z - zb) == "z0_1 - zb0_1");
  CHECK(to_string(Expr::exp(-Expr::unit_i() * co(T))) == "exp(-i*t)");
}

TEST_CASE("substitution is simultaneous and renormalizes") {
  Expr z = co(Z);
  std::map<Coord, Expr> shift{{Z, z + ct(1)}};
  CHECK(structurally_equal(substitute(z * z, shift), z * z + ct(2) * z + ct(1)));
  // simultaneous: swap z <-> zb
  std::map<Coord, Expr> swap{{Z, co(ZB)}, {ZB, co(Z)}};
  Expr f = z + ct(2) * co(ZB);
  CHECK(structurally_equal(substitute(f, swap), co(ZB) + ct(2) * z));
  CHECK(structurally_equal(substitute(Expr::exp(z), shift), Expr::exp(z + ct(1))));
}

TEST_CASE("numeric evaluation") {
  Expr z = co(Z);
  Expr zb = co(ZB);
  std::map<Coord, std::complex<double>> pt{{Z, {1.0, 2.0}}, {ZB, {1.0, -2.0}}};
  CHECK(eval_numeric(z * zb, pt).real() == doctest::Approx(5.0));
  CHECK(eval_numeric(z * zb, pt).imag() == doctest::Approx(0.0));
  CHECK(std::abs(eval_numeric(Expr::exp(Expr::unit_i() * z), pt) -
                 std::exp(I * std::complex<double>(1.0, 2.0))) < 1e-12);
  CHECK_THROWS_AS(eval_numeric(co(T), pt), UnboundCoordinate);
  std::map<Coord, std::complex<double>> bad{{Z, {1.0, 0.0}}};
  CHECK_THROWS_AS(eval_numeric(Expr::div(ct(1), z - ct(1)), bad), DivisionByZero);
}

TEST_CASE("free coordinate collection") {
  Expr f = co(T) * co(Z) + Expr::exp(co(ZB));
  auto fc = free_coordinates(f);
  CHECK(fc.size() == 3);
  CHECK(fc.count(T) == 1);
  CHECK(fc.count(Z) == 1);
  CHECK(fc.count(ZB) == 1);
  CHECK(free_coordinates(ct(7)).empty());
}

TEST_CASE("randomized: linearity, Leibniz, commuting partials, idempotence") {
  Rng rng(0x5eed5eedULL);
  std::vector<Coord> vars{T, Z, ZB, Z2};
  for (int trial = 0; trial < 40; ++trial) {
    Expr f = random_poly(rng, vars, 3, 2);
    Expr g = random_poly(rng, vars, 3, 2);
    for (const Coord& v : {Z, ZB, T}) {
      CHECK(structurally_equal(wirtinger_derivative(f + g, v),
                               wirtinger_derivative(f, v) + wirtinger_derivative(g, v)));
      CHECK(structurally_equal(wirtinger_derivative(f * g, v),
                               wirtinger_derivative(f, v) * g + f * wirtinger_derivative(g, v)));
    }
    CHECK(structurally_equal(wirtinger_derivative(wirtinger_derivative(f, Z), ZB),
                             wirtinger_derivative(wirtinger_derivative(f, ZB), Z)));
    // normalization is idempotent byte-for-byte
    CHECK(Expr::compare(normalized(f), f) == 0);
    CHECK(to_string(normalized(f)) == to_string(f));
    // compare is a strict total order
    CHECK(Expr::compare(f, f) == 0);
    CHECK(Expr::compare(f, g) == -Expr::compare(g, f));
  }
}

TEST_CASE("derivative agrees with central finite differences") {
  Rng rng(0xfeedULL);
  std::vector<Coord> vars{Z, ZB};
  for (int trial = 0; trial < 10; ++trial) {
    Expr f = random_poly(rng, vars, 3, 2);
    Expr fz = wirtinger_derivative(f, Z);
    Expr fzb = wirtinger_derivative(f, ZB);
    double x = 0.3 + 0.1 * static_cast<double>(trial);
    double y = -0.2 + 0.07 * static_cast<double>(trial);
    auto at = [&](double xx, double yy) {
      std::map<Coord, std::complex<double>> pt{{Z, {xx, yy}}, {ZB, {xx, -yy}}};
      return eval_numeric(f, pt);
    };
    double h = 1e-5;
    std::complex<double> dx = (at(x + h, y) - at(x - h, y)) / (2 * h);
    std::complex<double> dy = (at(x, y + h) - at(x, y - h)) / (2 * h);
    std::map<Coord, std::complex<double>> pt{{Z, {x, y}}, {ZB, {x, -y}}};
    std::complex<double> vz = eval_numeric(fz, pt);
    std::complex<double> vzb = eval_numeric(fzb, pt);
    // d/dx = f_z + f_zb, d/dy = i (f_z - f_zb)
    CHECK(std::abs(dx - (vz + vzb)) < 1e-6);
    CHECK(std::abs(dy - I * (vz - vzb)) < 1e-6);
  }
}
