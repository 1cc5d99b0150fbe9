#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace liftham {

// Common base so the CLI can map every failure onto a stable exit code and a
// structured diagnostic without a catch cascade.
struct EngineError : std::runtime_error {
  EngineError(std::string code_, const std::string& msg)
      : std::runtime_error(msg), code(std::move(code_)) {}
  std::string code;
};

struct UnboundCoordinate : EngineError {
  explicit UnboundCoordinate(const std::string& coord_name)
      : EngineError("unbound_coordinate", "coordinate '" + coord_name + "' is not bound"),
        coord(coord_name) {}
  std::string coord;
};

struct DivisionByZero : EngineError {
  DivisionByZero() : EngineError("division_by_zero", "division by zero") {}
  explicit DivisionByZero(const std::string& msg) : EngineError("division_by_zero", msg) {}
};

struct ChartMismatch : EngineError {
  explicit ChartMismatch(const std::string& msg) : EngineError("chart_mismatch", msg) {}
};

struct InvalidBaseExpression : EngineError {
  explicit InvalidBaseExpression(const std::string& msg)
      : EngineError("invalid_base_expression", msg) {}
};

struct InvalidBaseField : EngineError {
  explicit InvalidBaseField(const std::string& msg) : EngineError("invalid_base_field", msg) {}
};

struct InvalidBaseForm : EngineError {
  explicit InvalidBaseForm(const std::string& msg) : EngineError("invalid_base_form", msg) {}
};

struct NotNormalized : EngineError {
  explicit NotNormalized(const std::string& pairing_value)
      : EngineError("not_normalized",
                    "form/field pairing must be the constant 1, got: " + pairing_value) {}
};

struct Underdetermined : EngineError {
  explicit Underdetermined(const std::string& entry_)
      : EngineError("underdetermined", "tensor lift entry not fixed by its action: " + entry_),
        entry(entry_) {}
  std::string entry;
};

struct NonFiniteState : EngineError {
  explicit NonFiniteState(std::size_t step_)
      : EngineError("non_finite_state",
                    "state became non-finite at step " + std::to_string(step_)),
        step(step_) {}
  std::size_t step;
};

struct ParseError : EngineError {
  ParseError(std::size_t position_, const std::string& expected_, const std::string& found_)
      : EngineError("parse_error", "parse error at position " + std::to_string(position_) +
                                       ": expected " + expected_ + ", found " + found_),
        position(position_), expected(expected_), found(found_) {}
  std::size_t position;
  std::string expected;
  std::string found;
};

struct UnknownVariable : EngineError {
  UnknownVariable(const std::string& name_, std::size_t position_, int m, int k)
      : EngineError("unknown_variable",
                    "unknown variable '" + name_ + "' at position " + std::to_string(position_) +
                        " (chart has m=" + std::to_string(m) + ", k=" + std::to_string(k) + ")"),
        name(name_), position(position_) {}
  std::string name;
  std::size_t position;
};

}  // namespace liftham
