#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <string>

#include "liftham/errors.hpp"

namespace liftham {

using Rational = boost::multiprecision::cpp_rational;

// Exact complex scalar re + im*i. Kept rational until numeric evaluation so
// structural equality stays decidable.
struct ComplexRational {
  Rational re;
  Rational im;

  ComplexRational() : re(0), im(0) {}
  ComplexRational(long long n) : re(n), im(0) {}  // NOLINT: implicit by design
  explicit ComplexRational(Rational r) : re(std::move(r)), im(0) {}
  ComplexRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  static ComplexRational unit_i() { return {Rational(0), Rational(1)}; }

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_one() const { return re == 1 && im == 0; }
  bool is_real() const { return im == 0; }
  bool is_imaginary() const { return re == 0 && im != 0; }

  ComplexRational conj() const { return {re, -im}; }

  friend ComplexRational operator+(const ComplexRational& a, const ComplexRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend ComplexRational operator-(const ComplexRational& a, const ComplexRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend ComplexRational operator-(const ComplexRational& a) { return {-a.re, -a.im}; }
  friend ComplexRational operator*(const ComplexRational& a, const ComplexRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }

  ComplexRational inverse() const {
    Rational d = re * re + im * im;
    if (d == 0) throw DivisionByZero("inverse of exact zero");
    return {re / d, -im / d};
  }

  friend ComplexRational operator/(const ComplexRational& a, const ComplexRational& b) {
    return a * b.inverse();
  }

  ComplexRational pow(long long n) const {
    if (n < 0) return inverse().pow(-n);
    ComplexRational acc(1);
    ComplexRational base = *this;
    while (n > 0) {
      if (n & 1) acc = acc * base;
      base = base * base;
      n >>= 1;
    }
    return acc;
  }

  std::complex<double> to_complex() const {
    return {re.convert_to<double>(), im.convert_to<double>()};
  }

  int compare(const ComplexRational& o) const {
    if (re != o.re) return re < o.re ? -1 : 1;
    if (im != o.im) return im < o.im ? -1 : 1;
    return 0;
  }

  friend bool operator==(const ComplexRational& a, const ComplexRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const ComplexRational& a, const ComplexRational& b) { return !(a == b); }
};

}  // namespace liftham
