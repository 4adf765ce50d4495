// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <regex>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "tslkit/cfm.hpp"
#include "tslkit/codegen.hpp"
#include "tslkit/conformance.hpp"
#include "tslkit/error.hpp"
#include "tslkit/fixtures.hpp"
#include "tslkit/interp.hpp"
#include "tslkit/monitor.hpp"
#include "tslkit/parser.hpp"

using namespace tslkit;

namespace {

// Pinned limits and seeds.
constexpr double kParseBudgetSeconds = 1.0;
constexpr double kEquivalenceBudgetSeconds = 60.0;
constexpr std::size_t kFormulas = 500;
constexpr int kFormulaDepth = 5;
constexpr std::size_t kTracesPerFormula = 100;
constexpr std::size_t kMaxTraceLength = 20;
constexpr std::size_t kCounterSteps = 1000;
constexpr std::size_t kConformTraces = 1000;
constexpr std::size_t kConformLength = 50;
constexpr std::uint64_t kConformSeed = 20240601;
constexpr std::size_t kRandomCfms = 50;
constexpr std::size_t kMaxCfmVertices = 20;
constexpr std::size_t kOrderSteps = 100;
constexpr std::uint64_t kEquivalenceSeed = 1;
constexpr std::uint64_t kOrderSeed = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string data(const std::string& name) { return read_file(std::string(TSLKIT_DATA_DIR) + "/" + name); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int n, const char* title, const std::function<Outcome()>& body) {
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("%s [%d] %s: %s\n", o.pass ? "PASS" : "FAIL", n, title, o.detail.c_str());
  std::fflush(stdout);
}

std::string names(const std::set<std::string>& xs) {
  std::string s;
  for (const auto& x : xs) s += (s.empty() ? "" : ",") + x;
  return "{" + s + "}";
}

Outcome corpus_parse() {
  const std::string text = data("timer.tsl");
  const auto t0 = std::chrono::steady_clock::now();
  const SpecFile spec = parse_spec(text);
  const Formula f = expand(spec);
  const SignalRoles roles = classify_signals(f);
  const double secs = seconds_since(t0);

  std::size_t parametric = 0;
  for (const auto& d : spec.definitions) parametric += d.params.empty() ? 0 : 1;
  const std::size_t defs = spec.definitions.size();
  const std::size_t init_g = spec.statement_count(Section::InitiallyGuarantee);
  const std::size_t always_g = spec.statement_count(Section::AlwaysGuarantee);
  const bool ok = defs == 15 && defs - parametric == 12 && parametric == 3 && init_g == 3 &&
                  always_g == 10 && roles.cells == std::set<std::string>{"time"} &&
                  roles.outputs == std::set<std::string>{"dsp", "beep"} &&
                  roles.inputs == std::set<std::string>{"btnMin", "btnSec", "btnStartStop", "dt"} &&
                  secs < kParseBudgetSeconds;
  std::ostringstream d;
  d << defs << " definitions (" << defs - parametric << " nullary, " << parametric << " parametric), " << init_g
    << " initially + " << always_g << " always guarantees; cells " << names(roles.cells) << " outputs "
    << names(roles.outputs) << " inputs " << names(roles.inputs) << "; " << secs << " s (limit "
    << kParseBudgetSeconds << " s)";
  return {ok, d.str()};
}

Outcome operator_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  oracle::Rng rng(kEquivalenceSeed);
  const Assignment a = oracle::vocabulary();
  std::size_t desugar_mismatch = 0, duality_mismatch = 0, weak_until_mismatch = 0, runs = 0;
  std::string first;
  for (std::size_t i = 0; i < kFormulas; ++i) {
    const Formula f = oracle::random_formula(rng, kFormulaDepth);
    const Formula core = desugar(f);
    // sub-formulas for the duality and W-expansion checks
    const Formula phi = oracle::random_formula(rng, 2);
    const Formula psi = oracle::random_formula(rng, 2);
    const Formula fin = Formula::finally(phi);
    const Formula dual = Formula::negate(Formula::globally(Formula::negate(phi)));
    const Formula weak = Formula::binary(Op::WeakUntil, phi, psi);
    const Formula weak_expanded = Formula::disj(Formula::until(phi, psi), Formula::globally(phi));
    for (std::size_t k = 0; k < kTracesPerFormula; ++k) {
      const FiniteTrace tr = oracle::random_trace(rng, oracle::uniform(rng, kMaxTraceLength + 1));
      ++runs;
      const Verdict v1 = monitor(f, tr, a), v2 = monitor(core, tr, a);
      if (!v1.same_outcome(v2)) {
        if (first.empty()) first = pretty(f) + ": " + to_string(v1) + " vs " + to_string(v2);
        ++desugar_mismatch;
      }
      if (!monitor(fin, tr, a).same_outcome(monitor(dual, tr, a))) ++duality_mismatch;
      if (!monitor(weak, tr, a).same_outcome(monitor(weak_expanded, tr, a))) ++weak_until_mismatch;
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << runs << " (formula, trace) pairs; desugar mismatches " << desugar_mismatch << ", F/G duality mismatches "
    << duality_mismatch << ", W expansion mismatches " << weak_until_mismatch << "; " << secs << " s (limit "
    << kEquivalenceBudgetSeconds << " s)";
  if (!first.empty()) d << "; first: " << first;
  return {desugar_mismatch == 0 && duality_mismatch == 0 && weak_until_mismatch == 0 &&
              secs < kEquivalenceBudgetSeconds,
          d.str()};
}

Outcome cell_timing() {
  const Cfm m = read_cfm(data("counter.cfm.json"));
  const auto fx = fixtures::get("counter-int");
  const Interpreter interp(m, fx.assignment);
  const RunResult run = interp.run(std::vector<Valuation>(kCounterSteps));
  const auto expect = oracle::counter_stream(0, 1, kCounterSteps);

  // cells(t) as the interpreter threads them, and as the monitor rebuilds them
  std::vector<std::int64_t> states{interp.initial_state().cells.at("c").as_int()};
  InterpState st = interp.initial_state();
  std::size_t read_mismatch = 0;
  for (std::size_t t = 0; t < kCounterSteps; ++t) {
    const StepResult r = interp.step(st, {});
    // the output reads the cell, so it shows the value written one step earlier
    if (r.outputs.at("o").as_int() != expect[t]) ++read_mismatch;
    states.push_back(r.next.cells.at("c").as_int());
    st = r.next;
  }
  const auto stream = cell_stream(run.trace, fx.assignment);
  std::size_t stream_mismatch = 0;
  for (std::size_t t = 0; t <= kCounterSteps; ++t) {
    if (stream[t].at("c").as_int() != expect[t]) ++stream_mismatch;
  }
  const bool ok = states == expect && read_mismatch == 0 && stream_mismatch == 0 &&
                  run.final_state.cells.at("c").as_int() == static_cast<std::int64_t>(kCounterSteps);
  std::ostringstream d;
  d << "N=" << kCounterSteps << ": interpreter states " << (states == expect ? "match" : "differ")
    << " 0..N, delayed reads off by one " << read_mismatch << " time(s), monitor cell stream mismatches "
    << stream_mismatch << ", final " << run.final_state.cells.at("c").as_int();
  return {ok, d.str()};
}

Outcome validity() {
  const auto loop = validate(read_cfm(data("loop.cfm.json")));
  const auto fixed = validate(read_cfm(data("loop_with_cell.cfm.json")));
  const bool rejected = !loop.empty() && loop.front().kind == CfmViolation::Kind::CellFreeCycle;
  std::ostringstream d;
  d << "two-vertex loop: " << (loop.empty() ? "accepted" : loop.front().message) << "; with a cell: "
    << (fixed.empty() ? "valid" : fixed.front().message);
  return {rejected && loop.size() == 1 && fixed.empty(), d.str()};
}

// Shared by criteria 5 and 8.
struct ButtonRuns {
  Report good, sabotaged;
};

ButtonRuns& button_runs() {
  static ButtonRuns runs = [] {
    const Formula f = desugar(expand(parse_spec(data("button.tsl"))));
    const auto fx = fixtures::get("button-int");
    CheckOptions opt;
    opt.traces = kConformTraces;
    opt.length = kConformLength;
    opt.seed = kConformSeed;
    ButtonRuns r;
    r.good = check(read_cfm(data("button.cfm.json")), f, fx.assignment, fx.generators, opt);
    r.sabotaged = check(read_cfm(data("button_sabotaged.cfm.json")), f, fx.assignment, fx.generators, opt);
    return r;
  }();
  return runs;
}

Outcome conformance_button() {
  const auto& r = button_runs();
  std::ostringstream d;
  d << "button: " << r.good.violations.size() << " violations in " << kConformTraces << " traces x "
    << kConformLength << " steps (seed " << kConformSeed << ", " << r.good.inconclusive_count
    << " inconclusive); sabotaged mutex: " << r.sabotaged.violations.size() << " violating traces";
  return {r.good.violations.empty() && !r.sabotaged.violations.empty(), d.str()};
}

bool same_step(const StepResult& a, const StepResult& b) {
  return a.outputs == b.outputs && a.next == b.next && a.fired == b.fired;
}

Outcome order_independence() {
  oracle::Rng rng(kOrderSeed);
  std::vector<std::pair<Cfm, Assignment>> models;
  models.emplace_back(read_cfm(data("button.cfm.json")), fixtures::get("button-int").assignment);
  for (std::size_t i = 0; i < kRandomCfms; ++i) {
    Cfm m = oracle::random_valid_cfm(rng, kMaxCfmVertices);
    Assignment a = oracle::random_cfm_assignment(m);
    models.emplace_back(std::move(m), std::move(a));
  }
  std::size_t differing_orders = 0, mismatches = 0, steps = 0, invalid = 0;
  for (const auto& [m, a] : models) {
    if (!validate(m).empty() || m.vertices.size() > kMaxCfmVertices) {
      ++invalid;
      continue;
    }
    const Interpreter fwd(m, a, TieBreak::Forward), rev(m, a, TieBreak::Reverse);
    if (fwd.order() != rev.order()) ++differing_orders;
    InterpState s1 = fwd.initial_state(), s2 = rev.initial_state();
    for (std::size_t t = 0; t < kOrderSteps; ++t) {
      const Valuation in = m.inputs.count("click") ? Valuation{{"click", Value(oracle::uniform(rng, 2) == 1)}}
                                                   : oracle::random_inputs(rng, m);
      const StepResult r1 = fwd.step(s1, in), r2 = rev.step(s2, in);
      ++steps;
      if (!same_step(r1, r2)) ++mismatches;
      s1 = r1.next;
      s2 = r2.next;
    }
  }
  std::ostringstream d;
  d << models.size() << " models (" << differing_orders << " with distinct forward/reverse orders, " << invalid
    << " invalid), " << steps << " steps, " << mismatches << " mismatching steps";
  return {mismatches == 0 && invalid == 0 && steps == models.size() * kOrderSteps && differing_orders > 0,
          d.str()};
}

Outcome codegen_golden() {
  std::size_t stale = 0, unstable = 0;
  std::string stale_names;
  for (const std::string model : {"identity", "button"}) {
    const Cfm m = read_cfm(data(model + ".cfm.json"));
    for (GenStyle s : {GenStyle::Arrowized, GenStyle::Monadic, GenStyle::ApplicativeClocked}) {
      const std::string name = model + "_" + std::string(to_string(s)) + ".hs";
      const std::string first = generate(m, s), second = generate(read_cfm(write_cfm(m)), s);
      if (first != second) ++unstable;
      if (first != read_file(std::string(TSLKIT_GOLDEN_DIR) + "/" + name)) {
        ++stale;
        stale_names += " " + name;
      }
    }
  }

  // Structure of the Applicative button signature.
  const std::string sig = gen_signature(read_cfm(data("button.cfm.json")), GenStyle::ApplicativeClocked);
  std::size_t cell = 0, literal = 0, init = 0, input = 0, outputs = 0;
  std::istringstream lines(sig);
  std::string line;
  const std::regex literal_line(R"(^  [=-]> \(.* -> .*\)  -- [a-z]\w*$)");
  const std::regex result_line(R"(^  -> \((Signal domain \w+)(, Signal domain \w+)*\)  -- .*$)");
  while (std::getline(lines, line)) {
    if (line.find("-- cell implementation") != std::string::npos) ++cell;
    else if (line.find("-- initial value: ") != std::string::npos) ++init;
    else if (line.find("-- input: ") != std::string::npos) ++input;
    else if (std::regex_match(line, literal_line)) ++literal;
    else if (std::regex_match(line, result_line)) {
      for (std::size_t p = line.find("Signal domain"); p != std::string::npos; p = line.find("Signal domain", p + 1)) {
        ++outputs;
      }
    }
  }
  const bool shape = cell == 1 && literal == 3 && init == 2 && input == 1 && outputs == 2;
  std::ostringstream d;
  d << "6 golden files, " << stale << " stale" << stale_names << ", " << unstable
    << " unstable; applicative button signature: " << cell << " cell param, " << literal << " literal params, "
    << init << " initial values, " << input << " input, " << outputs << " outputs";
  return {stale == 0 && unstable == 0 && shape, d.str()};
}

Outcome exactly_one_update() {
  const auto& r = button_runs();
  const std::size_t steps = r.good.steps + r.sabotaged.steps;
  const std::size_t bad = r.good.fired_mismatches + r.sabotaged.fired_mismatches;

  const Interpreter interp(read_cfm(data("button_not_one_hot.cfm.json")), fixtures::get("button-int").assignment);
  std::string raised = "nothing";
  bool loud = false;
  for (bool click : {true, false}) {
    try {
      interp.run({Valuation{{"click", Value(click)}}});
      raised = "nothing";
      loud = false;
      break;
    } catch (const StepError& e) {
      loud = e.kind() == ErrorKind::MutexNotOneHot && e.step() == 0;
      raised = std::string(tslkit::to_string(e.kind())) + " at step " + std::to_string(e.step());
      if (!loud) break;
    }
  }
  std::ostringstream d;
  d << steps << " conformance steps, " << bad << " without exactly one update per output/cell; "
    << "not-one-hot control raised " << raised;
  return {bad == 0 && steps == 2 * kConformTraces * kConformLength && loud, d.str()};
}

}  // namespace

int main() {
  criterion(1, "corpus parse", corpus_parse);
  criterion(2, "operator equivalence", operator_equivalence);
  criterion(3, "cell timing", cell_timing);
  criterion(4, "validity", validity);
  criterion(5, "button conformance", conformance_button);
  criterion(6, "order independence", order_independence);
  criterion(7, "codegen", codegen_golden);
  criterion(8, "exactly one update", exactly_one_update);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
