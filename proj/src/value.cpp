#include "tslkit/value.hpp"

#include <bit>
#include <json.hpp>

#include "tslkit/error.hpp"

namespace tslkit {

namespace {

[[noreturn]] void mismatch(const Value& v, const char* wanted) {
  throw Error(ErrorKind::TypeMismatch, std::string("expected ") + wanted + ", got " + v.type_name() +
                                           " " + to_literal(v));
}

nlohmann::json to_json(const Value& v) {
  return std::visit(
      [](const auto& x) -> nlohmann::json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Unit>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, Tuple>) {
          auto arr = nlohmann::json::array();
          for (const auto& item : x.items) arr.push_back(to_json(item));
          return arr;
        } else {
          return x;
        }
      },
      v.storage());
}

Value from_json(const nlohmann::json& j) {
  switch (j.type()) {
    case nlohmann::json::value_t::null: return Value(Unit{});
    case nlohmann::json::value_t::boolean: return Value(j.get<bool>());
    case nlohmann::json::value_t::number_integer: return Value(j.get<std::int64_t>());
    case nlohmann::json::value_t::number_unsigned: {
      auto u = j.get<std::uint64_t>();
      if (u > static_cast<std::uint64_t>(INT64_MAX)) {
        throw Error(ErrorKind::TypeMismatch, "integer literal out of range: " + j.dump());
      }
      return Value(static_cast<std::int64_t>(u));
    }
    case nlohmann::json::value_t::number_float: return Value(j.get<double>());
    case nlohmann::json::value_t::string: return Value(j.get<std::string>());
    case nlohmann::json::value_t::array: {
      std::vector<Value> items;
      for (const auto& x : j) items.push_back(from_json(x));
      return Value::tuple(std::move(items));
    }
    default:
      throw Error(ErrorKind::TypeMismatch, "unsupported value literal: " + j.dump());
  }
}

}  // namespace

bool Value::as_bool() const {
  if (!is_bool()) mismatch(*this, "Bool");
  return std::get<bool>(v_);
}

std::int64_t Value::as_int() const {
  if (!is_int()) mismatch(*this, "Int");
  return std::get<std::int64_t>(v_);
}

double Value::as_real() const {
  if (!is_real()) mismatch(*this, "Real");
  return std::get<double>(v_);
}

const std::string& Value::as_text() const {
  if (!is_text()) mismatch(*this, "Text");
  return std::get<std::string>(v_);
}

const std::vector<Value>& Value::as_tuple() const {
  if (!is_tuple()) mismatch(*this, "Tuple");
  return std::get<Tuple>(v_).items;
}

std::string Value::type_name() const {
  static const char* kNames[] = {"Unit", "Bool", "Int", "Real", "Text", "Tuple"};
  return kNames[v_.index()];
}

bool operator==(const Value& a, const Value& b) noexcept {
  if (a.v_.index() != b.v_.index()) return false;
  if (a.is_real()) {
    return std::bit_cast<std::uint64_t>(std::get<double>(a.v_)) ==
           std::bit_cast<std::uint64_t>(std::get<double>(b.v_));
  }
  return a.v_ == b.v_;
}

bool operator==(const Tuple& a, const Tuple& b) noexcept { return a.items == b.items; }

std::string to_literal(const Value& v) { return to_json(v).dump(); }

Value parse_literal(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::TypeMismatch, "malformed value literal '" + std::string(text) + "'");
  }
  return from_json(j);
}

Assignment& Assignment::bind(const std::string& literal, std::size_t arity, Implementation impl) {
  impls_[literal] = Binding{arity, std::move(impl)};
  return *this;
}

Assignment& Assignment::init_cell(const std::string& cell, Value initial) {
  cells_[cell] = std::move(initial);
  return *this;
}

Assignment& Assignment::merge(const Assignment& other) {
  for (const auto& [name, b] : other.impls_) impls_.emplace(name, b);
  for (const auto& [name, v] : other.cells_) cells_.emplace(name, v);
  return *this;
}

const Binding* Assignment::find(const std::string& literal) const {
  auto it = impls_.find(literal);
  return it == impls_.end() ? nullptr : &it->second;
}

Value eval_term(const FunctionTerm& t, const Valuation& inputs, const Valuation& cells,
                const Assignment& a) {
  if (t.is_signal()) {
    if (auto it = inputs.find(t.name()); it != inputs.end()) return it->second;
    if (auto it = cells.find(t.name()); it != cells.end()) return it->second;
    throw Error(ErrorKind::MissingSignal, "no value for signal '" + t.name() + "'");
  }
  const Binding* b = a.find(t.name());
  if (!b) throw Error(ErrorKind::UnboundLiteral, "literal '" + t.name() + "' has no implementation");
  if (b->arity != t.args().size()) {
    throw Error(ErrorKind::ArityMismatch, "literal '" + t.name() + "' has arity " +
                                              std::to_string(b->arity) + " but is applied to " +
                                              std::to_string(t.args().size()) + " argument(s)");
  }
  std::vector<Value> args;
  args.reserve(t.args().size());
  for (const auto& arg : t.args()) args.push_back(eval_term(arg, inputs, cells, a));
  return b->impl(args);
}

bool eval_pred(const PredicateTerm& p, const Valuation& inputs, const Valuation& cells,
               const Assignment& a) {
  Value v = eval_term(p.term, inputs, cells, a);
  if (!v.is_bool()) {
    throw Error(ErrorKind::NotBoolean, "'" + pretty(p.term) + "' evaluated to " + v.type_name() +
                                           " " + to_literal(v));
  }
  return v.as_bool();
}

}  // namespace tslkit
