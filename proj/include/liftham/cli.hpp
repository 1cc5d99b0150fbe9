#pragma once

#include <iosfwd>
#include <string>

namespace liftham {

// One fully-resolved command invocation. Field defaults double as the flag
// defaults of the binary.
struct RunSpec {
  std::string command;  // lift | derive | integrate | check

  int m = 1;
  int k = 0;
  std::string kind = "complete";  // vertical | complete

  std::string hamiltonian;  // derive, integrate: source text for H

  // lift inputs
  std::string object = "function";  // function | field | form
  std::string expr;                 // function source text
  std::string components;           // field/form: "z0_1=...,zb0_1=...[,t=1]"

  // integrate inputs
  std::string init;  // "z0_1=1+0i,zb0_1=1-0i,..." — every fiber coordinate
  double dt = 1e-2;
  double t_start = 0.0;
  double t_end = 1.0;
  std::string method = "rk4";  // rk4 | euler

  std::string out;            // integrate: trajectory CSV path (required)
  std::string format = "json";  // json | csv (csv only where output is tabular)
};

// Executes one command. The primary document goes to `out`, structured
// diagnostics ({"error": code, "message": ...}) to `diag`. Returns the
// process exit code: 0 success, 1 domain error, 2 numeric failure.
int run(const RunSpec& spec, std::ostream& out, std::ostream& diag);

}  // namespace liftham
