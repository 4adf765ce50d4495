#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tslkit/cfm.hpp"
#include "tslkit/fixtures.hpp"
#include "tslkit/formula.hpp"
#include "tslkit/monitor.hpp"
#include "tslkit/value.hpp"

namespace tslkit {

/// `len` valuations over `inputs`, reproducible from `seed`. Inputs are drawn
/// in name order at every step. Throws MissingGenerator.
std::vector<Valuation> sample_inputs(const std::set<std::string>& inputs,
                                     const std::map<std::string, Generator>& gens, std::size_t len,
                                     std::uint64_t seed);

/// Seed of trace `index` in a run seeded with `seed` (splitmix64 mixing).
std::uint64_t trace_seed(std::uint64_t seed, std::size_t index);

struct CheckOptions {
  std::size_t traces = 100;
  std::size_t length = 50;
  std::uint64_t seed = 0;
  /// Worker threads; the report does not depend on this.
  unsigned jobs = 1;
};

struct ConformanceViolation {
  std::size_t trace = 0;
  std::size_t step = 0;
  Formula residual;
  /// Sampled inputs of the whole trace, enough to replay it.
  std::vector<Valuation> inputs;
};

struct Report {
  CheckOptions options;
  std::size_t sat_count = 0;
  std::size_t inconclusive_count = 0;
  std::vector<ConformanceViolation> violations;  // sorted by trace
  std::size_t steps = 0;
  /// Steps whose fired record was not exactly one term per output and cell.
  std::size_t fired_mismatches = 0;

  bool passed() const noexcept { return violations.empty() && fired_mismatches == 0; }
};

/// Simulates `m` on sampled inputs and monitors each run against `f`.
/// Errors are rethrown as StepError naming the trace and step.
Report check(const Cfm& m, const Formula& f, const Assignment& a,
             const std::map<std::string, Generator>& gens, const CheckOptions& opt);

/// Re-runs one trace standalone.
Verdict replay(const Cfm& m, const Formula& f, const Assignment& a,
               const std::vector<Valuation>& inputs);

/// JSON document; `include_inputs` adds each violating trace's inputs.
std::string report_to_json(const Report& r, bool include_inputs = true);

}  // namespace tslkit
