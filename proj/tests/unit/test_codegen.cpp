#include <catch_amalgamated.hpp>

#include <fstream>
#include <regex>
#include <sstream>

#include "oracles.hpp"
#include "tslkit/cfm.hpp"
#include "tslkit/codegen.hpp"
#include "tslkit/error.hpp"

using namespace tslkit;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Cfm model(const std::string& name) { return read_cfm(read_file(std::string(TSLKIT_DATA_DIR) + "/" + name)); }

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++n;
  return n;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

constexpr GenStyle kStyles[] = {GenStyle::Arrowized, GenStyle::Monadic, GenStyle::ApplicativeClocked};

}  // namespace

TEST_CASE("style names") {
  for (GenStyle s : kStyles) CHECK(parse_style(to_string(s)) == s);
  CHECK_FALSE(parse_style("prolog").has_value());
}

TEST_CASE("generated modules match the checked-in golden files") {
  for (const std::string name : {"identity", "button"}) {
    for (GenStyle s : kStyles) {
      const std::string file = name + "_" + std::string(to_string(s)) + ".hs";
      INFO(file);
      CHECK(generate(model(name + ".cfm.json"), s) == read_file(std::string(TSLKIT_GOLDEN_DIR) + "/" + file));
    }
  }
}

TEST_CASE("applicative button signature") {
  const std::string sig = gen_signature(model("button.cfm.json"), GenStyle::ApplicativeClocked);
  CHECK(count(sig, "-- cell implementation") == 1);
  CHECK(count(sig, "-- initial value: ") == 2);
  CHECK(count(sig, "-- input: ") == 1);
  CHECK(sig.find("-> (t0 -> t1)  -- display\n") != std::string::npos);
  CHECK(sig.find("-> (t2 -> Bool)  -- event\n") != std::string::npos);
  CHECK(sig.find("-> (t0 -> t0)  -- increment\n") != std::string::npos);
  CHECK(sig.find("-> (Signal domain t0, Signal domain t1)  -- count (cell), screen (output)\n") !=
        std::string::npos);
}

TEST_CASE("types are shared along wires") {
  // display reads the cell that increment writes, so they agree on t0
  const std::string sig = gen_signature(model("counter.cfm.json"), GenStyle::Monadic);
  CHECK(sig.find("(t0 -> t0)  -- increment") != std::string::npos);
  CHECK(sig.find("monad (signal t0, signal t0)") != std::string::npos);
}

TEST_CASE("signatures without cells or with a single result") {
  const Cfm id = model("identity.cfm.json");
  CHECK(gen_signature(id, GenStyle::Monadic).find("cell implementation") == std::string::npos);
  CHECK(gen_signature(id, GenStyle::Monadic).find("monad (signal t0)") != std::string::npos);
  CHECK(gen_signature(id, GenStyle::Arrowized).find("signalfunction t0 t0") != std::string::npos);
  CHECK(gen_signature(model("counter.cfm.json"), GenStyle::Arrowized).find("signalfunction () (t0, t0)") !=
        std::string::npos);
}

TEST_CASE("phase comments appear only for non-empty phases, in order") {
  const std::string ctl = gen_control(model("button.cfm.json"), GenStyle::Monadic);
  const auto p1 = ctl.find("-- gather values from the previous time step");
  const auto p2 = ctl.find("-- gather applications of functions and predicates");
  const auto p3 = ctl.find("-- compute control signals");
  const auto p4 = ctl.find("-- use control signals to select among applications");
  REQUIRE(p4 != std::string::npos);
  CHECK(p1 < p2);
  CHECK(p2 < p3);
  CHECK(p3 < p4);
  const std::string id = gen_control(model("identity.cfm.json"), GenStyle::Monadic);
  CHECK(id.find("-- ") == std::string::npos);
  const std::string counter = gen_control(model("counter.cfm.json"), GenStyle::Monadic);
  CHECK(counter.find("-- compute control signals") == std::string::npos);
}

TEST_CASE("helpers are emitted only when used") {
  CHECK(generate(model("identity.cfm.json"), GenStyle::Monadic).find("oneHot ::") == std::string::npos);
  CHECK(generate(model("button.cfm.json"), GenStyle::Monadic).find("oneHot ::") != std::string::npos);
  CHECK(generate(model("button.cfm.json"), GenStyle::Monadic).find("select ::") != std::string::npos);
}

TEST_CASE("generation is deterministic and refuses invalid models") {
  oracle::Rng rng(51);
  for (int i = 0; i < 30; ++i) {
    const Cfm m = oracle::random_valid_cfm(rng, 20);
    for (GenStyle s : kStyles) {
      const std::string a = generate(m, s);
      CHECK(a == generate(read_cfm(write_cfm(m)), s));
      // every wire is defined exactly once
      std::set<std::string> defined;
      for (const auto& l : lines_of(a)) {
        static const std::regex def(R"(^\s+(?:let )?(v\d+|c_\w+) (?:<-|=) )");
        std::smatch mt;
        if (std::regex_search(l, mt, def)) CHECK(defined.insert(mt[1]).second);
      }
      CHECK(defined.size() == m.vertices.size() + m.cells.size());
    }
  }
  try {
    generate(model("loop.cfm.json"), GenStyle::Monadic);
    FAIL("expected InvalidCfm");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidCfm);
  }
}

TEST_CASE("literal identifiers avoid clashes") {
  CHECK(literal_ident("display") == "display");
  CHECK(literal_ident("increment") == "increment");
  CHECK(literal_ident("where") == "lit_where");
  CHECK(literal_ident("Reset") == "lit_Reset");
  CHECK(literal_ident("v3") == "lit_v3");
  CHECK(literal_ident("c_count") == "lit_c_count");
  CHECK(literal_ident("i_x") == "lit_i_x");
  CHECK(literal_ident("select") == "lit_select");
}
