#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "tslkit/value.hpp"

namespace tslkit {

using Rng = std::mt19937_64;
using Generator = std::function<Value(Rng&)>;

/// Uniform draw in [0, n). Uses only the engine's raw output so sequences are
/// identical across standard library implementations.
std::uint64_t draw_below(Rng& rng, std::uint64_t n);

namespace fixtures {

/// eq, add, sub, not, isEvent, toText, True, False, zero, increment, display
/// and the timer family (countup, countdown, incMinutes, incSeconds) over
/// Int seconds.
Assignment standard_library();

/// Nullary implementation returning Int k.
Implementation const_int(std::int64_t k);

Generator bool_generator();
Generator int_generator(std::int64_t lo, std::int64_t hi);
Generator constant_generator(Value v);

/// A named binding set: implementations, cell initial values and input
/// generators for randomized runs.
struct Fixture {
  std::string name;
  std::string summary;
  Assignment assignment;
  std::map<std::string, Generator> generators;
};

const std::vector<std::string>& names();

/// Throws std::invalid_argument for unknown names.
Fixture get(std::string_view name);

}  // namespace fixtures
}  // namespace tslkit
