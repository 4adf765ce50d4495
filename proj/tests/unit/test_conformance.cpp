#include <catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tslkit/cfm.hpp"
#include "tslkit/conformance.hpp"
#include "tslkit/error.hpp"
#include "tslkit/fixtures.hpp"
#include "tslkit/parser.hpp"

using namespace tslkit;

namespace {

std::string data(const std::string& name) {
  std::ifstream in(std::string(TSLKIT_DATA_DIR) + "/" + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Cfm model(const std::string& name) { return read_cfm(data(name)); }
Formula spec(const std::string& name) { return expand(parse_spec(data(name))); }

CheckOptions options(std::size_t traces, std::size_t length, std::uint64_t seed, unsigned jobs = 1) {
  CheckOptions o;
  o.traces = traces;
  o.length = length;
  o.seed = seed;
  o.jobs = jobs;
  return o;
}

}  // namespace

TEST_CASE("input sampling is reproducible") {
  const auto fx = fixtures::get("timer-int");
  const std::set<std::string> ins = {"btnMin", "btnSec", "btnStartStop", "dt"};
  const auto a = sample_inputs(ins, fx.generators, 30, 9);
  CHECK(a == sample_inputs(ins, fx.generators, 30, 9));
  CHECK_FALSE(a == sample_inputs(ins, fx.generators, 30, 10));
  REQUIRE(a.size() == 30);
  for (const auto& v : a) {
    CHECK(v.size() == 4);
    CHECK(v.at("dt") == Value(1));
  }
  try {
    sample_inputs({"nope"}, fx.generators, 1, 0);
    FAIL("expected MissingGenerator");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MissingGenerator);
  }
}

TEST_CASE("trace seeds differ per trace and per run") {
  std::set<std::uint64_t> seen;
  for (std::size_t i = 0; i < 1000; ++i) seen.insert(trace_seed(1, i));
  CHECK(seen.size() == 1000);
  CHECK(trace_seed(1, 0) != trace_seed(2, 0));
  CHECK(trace_seed(5, 3) == trace_seed(5, 3));
}

TEST_CASE("the button model conforms") {
  const auto fx = fixtures::get("button-int");
  const Report r = check(model("button.cfm.json"), spec("button.tsl"), fx.assignment, fx.generators,
                         options(200, 40, 3));
  CHECK(r.passed());
  CHECK(r.violations.empty());
  CHECK(r.fired_mismatches == 0);
  CHECK(r.steps == 200 * 40);
  CHECK(r.sat_count + r.inconclusive_count == 200);
}

TEST_CASE("the sabotaged button is caught and the violation replays") {
  const auto fx = fixtures::get("button-int");
  const Cfm bad = model("button_sabotaged.cfm.json");
  const Formula f = spec("button.tsl");
  const Report r = check(bad, f, fx.assignment, fx.generators, options(100, 20, 4));
  CHECK_FALSE(r.passed());
  REQUIRE_FALSE(r.violations.empty());
  for (std::size_t i = 1; i < r.violations.size(); ++i) CHECK(r.violations[i - 1].trace < r.violations[i].trace);
  for (const auto& v : r.violations) {
    REQUIRE(v.inputs.size() == 20);
    const Verdict again = replay(bad, f, fx.assignment, v.inputs);
    REQUIRE(again.is_viol());
    CHECK(again.at_step() == v.step);
  }
}

TEST_CASE("identity and timer-free models conform") {
  const auto fx = fixtures::get("identity-int");
  const Report r = check(model("identity.cfm.json"), spec("identity.tsl"), fx.assignment, fx.generators,
                         options(50, 30, 5));
  CHECK(r.passed());
}

TEST_CASE("reports do not depend on the number of workers") {
  const auto fx = fixtures::get("button-int");
  const Cfm bad = model("button_sabotaged.cfm.json");
  const Formula f = spec("button.tsl");
  const Report one = check(bad, f, fx.assignment, fx.generators, options(64, 15, 6, 1));
  const Report four = check(bad, f, fx.assignment, fx.generators, options(64, 15, 6, 4));
  CHECK(report_to_json(one, true) != "");
  REQUIRE(one.violations.size() == four.violations.size());
  for (std::size_t i = 0; i < one.violations.size(); ++i) {
    CHECK(one.violations[i].trace == four.violations[i].trace);
    CHECK(one.violations[i].step == four.violations[i].step);
    CHECK(one.violations[i].inputs == four.violations[i].inputs);
  }
  CHECK(one.sat_count == four.sat_count);
  CHECK(one.inconclusive_count == four.inconclusive_count);
  auto strip = [](std::string s) {
    auto j = nlohmann::json::parse(s);
    j.erase("note");
    return j.dump();
  };
  CHECK(strip(report_to_json(one)) == strip(report_to_json(four)));
}

TEST_CASE("run-time failures name the trace") {
  const auto fx = fixtures::get("button-int");
  try {
    check(model("button_not_one_hot.cfm.json"), spec("button.tsl"), fx.assignment, fx.generators,
          options(10, 10, 7, 3));
    FAIL("expected StepError");
  } catch (const StepError& e) {
    CHECK(e.kind() == ErrorKind::MutexNotOneHot);
    CHECK(std::string(e.what()).find("trace 0: ") != std::string::npos);
  }
}

TEST_CASE("report json") {
  const auto fx = fixtures::get("button-int");
  const Report r = check(model("button_sabotaged.cfm.json"), spec("button.tsl"), fx.assignment, fx.generators,
                         options(5, 10, 8));
  const auto j = nlohmann::json::parse(report_to_json(r));
  for (const char* k : {"seed", "traces", "length", "steps", "sat", "inconclusive", "fired_mismatches", "passed",
                        "violations"}) {
    CHECK(j.contains(k));
  }
  CHECK(j["passed"] == false);
  REQUIRE(!j["violations"].empty());
  CHECK(j["violations"][0].contains("inputs"));
  CHECK(j["violations"][0].contains("residual"));
  const auto lean = nlohmann::json::parse(report_to_json(r, false));
  CHECK_FALSE(lean["violations"][0].contains("inputs"));
}
