#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "tslkit/formula.hpp"

namespace tslkit {

class Value;

struct Unit {
  friend bool operator==(Unit, Unit) { return true; }
};

struct Tuple {
  std::vector<Value> items;

  friend bool operator==(const Tuple& a, const Tuple& b) noexcept;
};

/// Dynamic value: Bool | Int | Real | Text | Tuple | Unit.
/// Equality is structural; reals compare by bit pattern.
class Value {
 public:
  using Storage = std::variant<Unit, bool, std::int64_t, double, std::string, Tuple>;

  Value() = default;
  Value(bool b) : v_(b) {}                    // NOLINT(google-explicit-constructor)
  Value(std::int64_t i) : v_(i) {}            // NOLINT(google-explicit-constructor)
  Value(int i) : v_(std::int64_t{i}) {}       // NOLINT(google-explicit-constructor)
  Value(double d) : v_(d) {}                  // NOLINT(google-explicit-constructor)
  Value(std::string s) : v_(std::move(s)) {}  // NOLINT(google-explicit-constructor)
  Value(const char* s) : v_(std::string(s)) {}  // NOLINT(google-explicit-constructor)
  Value(Tuple t) : v_(std::move(t)) {}        // NOLINT(google-explicit-constructor)
  Value(Unit u) : v_(u) {}                    // NOLINT(google-explicit-constructor)

  static Value tuple(std::vector<Value> items) { return Value(Tuple{std::move(items)}); }

  bool is_unit() const noexcept { return std::holds_alternative<Unit>(v_); }
  bool is_bool() const noexcept { return std::holds_alternative<bool>(v_); }
  bool is_int() const noexcept { return std::holds_alternative<std::int64_t>(v_); }
  bool is_real() const noexcept { return std::holds_alternative<double>(v_); }
  bool is_text() const noexcept { return std::holds_alternative<std::string>(v_); }
  bool is_tuple() const noexcept { return std::holds_alternative<Tuple>(v_); }

  // Throw TypeMismatch on the wrong alternative.
  bool as_bool() const;
  std::int64_t as_int() const;
  double as_real() const;
  const std::string& as_text() const;
  const std::vector<Value>& as_tuple() const;

  const Storage& storage() const noexcept { return v_; }
  std::string type_name() const;

  friend bool operator==(const Value& a, const Value& b) noexcept;

 private:
  Storage v_;
};

/// Literal text: `true`, `false`, integers, reals, JSON strings, `[a, b]`
/// tuples and `null` for unit.
std::string to_literal(const Value& v);
Value parse_literal(std::string_view text);

using Valuation = std::map<std::string, Value>;

using Implementation = std::function<Value(std::span<const Value>)>;

struct Binding {
  std::size_t arity = 0;
  Implementation impl;
};

/// Binds function/predicate literals to implementations and cells to initial
/// values.
class Assignment {
 public:
  Assignment& bind(const std::string& literal, std::size_t arity, Implementation impl);
  Assignment& init_cell(const std::string& cell, Value initial);
  /// Copies every binding and cell of `other` that is not already present.
  Assignment& merge(const Assignment& other);

  const Binding* find(const std::string& literal) const;
  const std::map<std::string, Binding>& bindings() const noexcept { return impls_; }
  const Valuation& cell_init() const noexcept { return cells_; }

 private:
  std::map<std::string, Binding> impls_;
  Valuation cells_;
};

/// Bottom-up evaluation of a term. Signals are looked up in `inputs`, then
/// `cells`. Throws UnboundLiteral, ArityMismatch, MissingSignal.
Value eval_term(const FunctionTerm& t, const Valuation& inputs, const Valuation& cells,
                const Assignment& a);

/// As eval_term, plus NotBoolean when the result is not a Bool.
bool eval_pred(const PredicateTerm& p, const Valuation& inputs, const Valuation& cells,
               const Assignment& a);

}  // namespace tslkit
