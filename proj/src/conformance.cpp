#include "tslkit/conformance.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <json.hpp>
#include <thread>

#include "tslkit/error.hpp"
#include "tslkit/interp.hpp"

namespace tslkit {

std::vector<Valuation> sample_inputs(const std::set<std::string>& inputs,
                                     const std::map<std::string, Generator>& gens, std::size_t len,
                                     std::uint64_t seed) {
  for (const auto& i : inputs) {
    if (!gens.count(i)) throw Error(ErrorKind::MissingGenerator, "no generator for input '" + i + "'");
  }
  Rng rng(seed);
  std::vector<Valuation> out(len);
  for (auto& step : out) {
    for (const auto& i : inputs) step[i] = gens.at(i)(rng);
  }
  return out;
}

std::uint64_t trace_seed(std::uint64_t seed, std::size_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

struct TraceOutcome {
  Verdict verdict;
  std::vector<Valuation> inputs;
  std::size_t fired_mismatches = 0;
  std::exception_ptr error;
};

std::size_t count_fired_mismatches(const Cfm& m, const FiniteTrace& trace) {
  std::size_t bad = 0;
  for (const auto& step : trace.steps) {
    std::set<std::string> sinks;
    for (const auto& [s, _] : step.fired) sinks.insert(s);
    std::set<std::string> want = m.outputs;
    want.insert(m.cells.begin(), m.cells.end());
    if (sinks != want) ++bad;
  }
  return bad;
}

}  // namespace

Report check(const Cfm& m, const Formula& f, const Assignment& a,
             const std::map<std::string, Generator>& gens, const CheckOptions& opt) {
  const Interpreter interp(m, a);
  for (const auto& i : m.inputs) {
    if (!gens.count(i)) throw Error(ErrorKind::MissingGenerator, "no generator for input '" + i + "'");
  }

  std::vector<TraceOutcome> results(opt.traces);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < opt.traces; t = next++) {
      TraceOutcome& r = results[t];
      try {
        r.inputs = sample_inputs(m.inputs, gens, opt.length, trace_seed(opt.seed, t));
        const RunResult run = interp.run(r.inputs);
        r.fired_mismatches = count_fired_mismatches(m, run.trace);
        r.verdict = monitor(f, run.trace, a);
      } catch (...) {
        r.error = std::current_exception();
      }
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(opt.jobs, static_cast<unsigned>(opt.traces)));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  Report rep;
  rep.options = opt;
  for (std::size_t t = 0; t < results.size(); ++t) {
    TraceOutcome& r = results[t];
    if (r.error) {
      try {
        std::rethrow_exception(r.error);
      } catch (const StepError& e) {
        throw StepError(e.kind(), "trace " + std::to_string(t) + ": " + e.detail(), e.step());
      } catch (const Error& e) {
        throw Error(e.kind(), "trace " + std::to_string(t) + ": " + e.detail());
      }
    }
    rep.steps += opt.length;
    rep.fired_mismatches += r.fired_mismatches;
    switch (r.verdict.kind()) {
      case Verdict::Kind::Sat: ++rep.sat_count; break;
      case Verdict::Kind::Inconclusive: ++rep.inconclusive_count; break;
      case Verdict::Kind::Viol:
        rep.violations.push_back(
            ConformanceViolation{t, r.verdict.at_step(), r.verdict.residual(), std::move(r.inputs)});
        break;
    }
  }
  return rep;
}

Verdict replay(const Cfm& m, const Formula& f, const Assignment& a,
               const std::vector<Valuation>& inputs) {
  const Interpreter interp(m, a);
  return monitor(f, interp.run(inputs).trace, a);
}

std::string report_to_json(const Report& r, bool include_inputs) {
  using nlohmann::json;
  json j;
  j["note"] = "randomized testing under one assignment and sampled inputs; not a proof of conformance";
  j["seed"] = r.options.seed;
  j["traces"] = r.options.traces;
  j["length"] = r.options.length;
  j["steps"] = r.steps;
  j["sat"] = r.sat_count;
  j["inconclusive"] = r.inconclusive_count;
  j["fired_mismatches"] = r.fired_mismatches;
  j["passed"] = r.passed();
  j["violations"] = json::array();
  for (const auto& v : r.violations) {
    json e;
    e["trace"] = v.trace;
    e["step"] = v.step;
    e["trace_seed"] = trace_seed(r.options.seed, v.trace);
    e["residual"] = pretty(resugar(v.residual));
    if (include_inputs) {
      e["inputs"] = json::array();
      for (const auto& step : v.inputs) {
        json s = json::object();
        for (const auto& [k, val] : step) s[k] = json::parse(to_literal(val));
        e["inputs"].push_back(s);
      }
    }
    j["violations"].push_back(std::move(e));
  }
  return j.dump(2) + "\n";
}

}  // namespace tslkit
