#include "tslkit/fixtures.hpp"

#include <algorithm>
#include <stdexcept>

#include "tslkit/error.hpp"

namespace tslkit {

std::uint64_t draw_below(Rng& rng, std::uint64_t n) {
  if (n == 0) return 0;
  // rejection sampling keeps the draw unbiased
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

namespace fixtures {

namespace {

Value to_text(const Value& v) {
  if (v.is_text()) return v;
  if (v.is_int()) return Value(std::to_string(v.as_int()));
  if (v.is_bool()) return Value(v.as_bool() ? "true" : "false");
  return Value(to_literal(v));
}

bool is_event(const Value& v) {
  if (v.is_bool()) return v.as_bool();
  if (v.is_tuple()) return !v.as_tuple().empty();
  if (v.is_unit()) return false;
  throw Error(ErrorKind::TypeMismatch, "isEvent expects Bool, Tuple or Unit, got " + v.type_name());
}

Implementation int_unary(std::int64_t (*f)(std::int64_t)) {
  return [f](std::span<const Value> a) { return Value(f(a[0].as_int())); };
}

Implementation int_binary(std::int64_t (*f)(std::int64_t, std::int64_t)) {
  return [f](std::span<const Value> a) { return Value(f(a[0].as_int(), a[1].as_int())); };
}

// two's complement wrap-around instead of signed overflow
std::int64_t wrap_add(std::int64_t x, std::int64_t y) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(x) + static_cast<std::uint64_t>(y));
}

std::int64_t wrap_sub(std::int64_t x, std::int64_t y) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(x) - static_cast<std::uint64_t>(y));
}

}  // namespace

Implementation const_int(std::int64_t k) {
  return [k](std::span<const Value>) { return Value(k); };
}

Assignment standard_library() {
  Assignment a;
  a.bind("eq", 2, [](std::span<const Value> v) { return Value(v[0] == v[1]); });
  a.bind("add", 2, int_binary(wrap_add));
  a.bind("sub", 2, int_binary(wrap_sub));
  a.bind("not", 1, [](std::span<const Value> v) { return Value(!v[0].as_bool()); });
  a.bind("isEvent", 1, [](std::span<const Value> v) { return Value(is_event(v[0])); });
  a.bind("toText", 1, [](std::span<const Value> v) { return to_text(v[0]); });
  a.bind("True", 0, [](std::span<const Value>) { return Value(true); });
  a.bind("False", 0, [](std::span<const Value>) { return Value(false); });
  a.bind("zero", 0, const_int(0));
  a.bind("increment", 1, int_unary([](std::int64_t x) { return wrap_add(x, 1); }));
  a.bind("display", 1, [](std::span<const Value> v) { return to_text(v[0]); });
  a.bind("countup", 2, int_binary([](std::int64_t t, std::int64_t dt) { return t + dt; }));
  a.bind("countdown", 2,
         int_binary([](std::int64_t t, std::int64_t dt) { return std::max<std::int64_t>(t - dt, 0); }));
  a.bind("incMinutes", 1, int_unary([](std::int64_t t) { return t + 60; }));
  a.bind("incSeconds", 1, int_unary([](std::int64_t t) { return t + 1; }));
  return a;
}

Generator bool_generator() {
  return [](Rng& rng) { return Value(draw_below(rng, 2) == 1); };
}

Generator int_generator(std::int64_t lo, std::int64_t hi) {
  return [lo, hi](Rng& rng) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return Value(lo + static_cast<std::int64_t>(draw_below(rng, span)));
  };
}

Generator constant_generator(Value v) {
  return [v = std::move(v)](Rng&) { return v; };
}

const std::vector<std::string>& names() {
  static const std::vector<std::string> kNames = {"std", "button-int", "timer-int", "identity-int",
                                                  "counter-int"};
  return kNames;
}

Fixture get(std::string_view name) {
  Fixture f;
  f.name = std::string(name);
  f.assignment = standard_library();
  if (name == "std") {
    f.summary = "standard literal library, no cells";
  } else if (name == "button-int") {
    f.summary = "click button: event = isEvent, increment = +1, display = toText, count starts at 0";
    f.assignment.bind("event", 1, [](std::span<const Value> v) { return Value(is_event(v[0])); });
    f.assignment.init_cell("count", Value(0));
    f.generators["click"] = bool_generator();
  } else if (name == "timer-int") {
    f.summary = "kitchen timer over Int seconds, time starts at 0, dt = 1";
    f.assignment.init_cell("time", Value(0));
    // independent fair coins, so simultaneous presses occur on a quarter of the steps
    f.generators["btnMin"] = bool_generator();
    f.generators["btnSec"] = bool_generator();
    f.generators["btnStartStop"] = bool_generator();
    f.generators["dt"] = constant_generator(Value(1));
  } else if (name == "identity-int") {
    f.summary = "identity wire over Int inputs in [-1000, 1000]";
    f.generators["i"] = int_generator(-1000, 1000);
  } else if (name == "counter-int") {
    f.summary = "free-running counter: cell c starts at 0, increment = +1, no inputs";
    f.assignment.init_cell("c", Value(0));
  } else {
    throw std::invalid_argument("unknown fixture '" + std::string(name) + "'");
  }
  return f;
}

}  // namespace fixtures
}  // namespace tslkit
