#pragma once

#include <string>

#include "liftham/chart.hpp"
#include "liftham/expr.hpp"

namespace liftham {

// Grammar (whitespace insensitive, no implicit multiplication):
//   expr     := term (('+'|'-') term)*
//   term     := unary (('*'|'/') unary)*
//   unary    := '-' unary | power
//   power    := primary ['^' exponent]
//   exponent := ['-'] INT | '(' ['-'] INT ')'
//   primary  := NUMBER ['i'] | IDENT | 'exp' '(' expr ')' | '(' expr ')'
// Identifiers: t, i (the imaginary unit), z<r>_<i>, zb<r>_<i>, and z_<i> as a
// shorthand for z0_<i>. Decimal literals become exact rationals. Division by
// u^n keeps the factored denominator; off-chart names raise UnknownVariable,
// other defects ParseError (position is a 0-based byte offset).
Expr parse_expression(const std::string& text, const CoordSystem& chart);

}  // namespace liftham
