// tslkit: command-line front end.
//
// Exit status: 0 success, 1 domain failure (violation, invalid model,
// runtime error while stepping), 2 usage, I/O or parse error.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "tslkit/cfm.hpp"
#include "tslkit/codegen.hpp"
#include "tslkit/conformance.hpp"
#include "tslkit/error.hpp"
#include "tslkit/fixtures.hpp"
#include "tslkit/interp.hpp"
#include "tslkit/monitor.hpp"
#include "tslkit/parser.hpp"

using namespace tslkit;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

// Errors that mean "bad input text or arguments" rather than a domain failure.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fixtures::Fixture fixture(const std::string& name) {
  try {
    return fixtures::get(name);
  } catch (const std::invalid_argument& e) {
    std::string known;
    for (const auto& n : fixtures::names()) known += " " + n;
    throw UsageError(std::string(e.what()) + "; known:" + known);
  }
}

bool is_spec_error(ErrorKind k) {
  switch (k) {
    case ErrorKind::SyntaxError:
    case ErrorKind::UndefinedName:
    case ErrorKind::RecursiveMacro:
    case ErrorKind::WrongMacroArity:
    case ErrorKind::ArityConflict:
    case ErrorKind::RoleConflict:
    case ErrorKind::SchemaError:
    case ErrorKind::Io: return true;
    default: return false;
  }
}

json names_json(const std::set<std::string>& xs) { return json(xs); }

json roles_json(const SignalRoles& r) {
  return json{{"inputs", names_json(r.inputs)},
              {"outputs", names_json(r.outputs)},
              {"cells", names_json(r.cells)},
              {"functions", r.functions},
              {"predicates", r.predicates}};
}

std::string names_text(const std::set<std::string>& xs) {
  std::string s;
  for (const auto& x : xs) s += (s.empty() ? "" : ", ") + x;
  return "{" + s + "}";
}

std::string arities_text(const std::map<std::string, std::size_t>& xs) {
  std::string s;
  for (const auto& [k, v] : xs) s += (s.empty() ? "" : ", ") + k + "/" + std::to_string(v);
  return "{" + s + "}";
}

json valuation_json(const Valuation& v) {
  json j = json::object();
  for (const auto& [k, x] : v) j[k] = json::parse(to_literal(x));
  return j;
}

std::string valuation_text(const Valuation& v) {
  std::string s;
  for (const auto& [k, x] : v) s += (s.empty() ? "" : " ") + k + "=" + to_literal(x);
  return s.empty() ? "-" : s;
}

// --- parse ---------------------------------------------------------------------

struct ParseArgs {
  std::string file;
  bool expand = false, desugar = false, classify = false;
};

int cmd_parse(const ParseArgs& args, bool as_json) {
  const SpecFile spec = parse_spec(slurp(args.file));
  std::size_t parametric = 0;
  for (const auto& d : spec.definitions) parametric += d.params.empty() ? 0 : 1;
  const bool need_formula = args.expand || args.desugar || args.classify;
  Formula f;
  if (need_formula) f = expand(spec);
  if (args.desugar) f = desugar(f);

  if (as_json) {
    json j;
    j["definitions"] = json::array();
    for (const auto& d : spec.definitions) {
      j["definitions"].push_back({{"name", d.name}, {"params", d.params}, {"body", pretty(*d.body)}});
    }
    j["sections"] = json::object();
    for (const auto& [sec, stmts] : spec.sections) {
      auto& arr = j["sections"][std::string(to_string(sec))] = json::array();
      for (const auto& s : stmts) arr.push_back(pretty(*s));
    }
    j["counts"] = {{"definitions", spec.definitions.size()},
                   {"nullary", spec.definitions.size() - parametric},
                   {"parametric", parametric}};
    if (args.expand || args.desugar) j["formula"] = pretty(f);
    if (args.classify) j["roles"] = roles_json(classify_signals(f));
    std::cout << j.dump(2) << "\n";
    return kOk;
  }

  std::cout << "definitions: " << spec.definitions.size() << " (" << spec.definitions.size() - parametric
            << " nullary, " << parametric << " parametric)\n";
  for (const auto& [sec, stmts] : spec.sections) {
    std::cout << to_string(sec) << ": " << stmts.size() << " statement(s)\n";
  }
  if (args.expand || args.desugar) {
    std::cout << pretty(f) << "\n";
  } else if (!args.classify) {
    for (const auto& d : spec.definitions) {
      std::cout << d.name;
      for (const auto& p : d.params) std::cout << " " << p;
      std::cout << " = " << pretty(*d.body) << ";\n";
    }
    for (const auto& [sec, stmts] : spec.sections) {
      if (stmts.empty()) continue;
      std::cout << to_string(sec) << " {\n";
      for (const auto& s : stmts) std::cout << "  " << pretty(*s) << ";\n";
      std::cout << "}\n";
    }
  }
  if (args.classify) {
    const SignalRoles r = classify_signals(f);
    std::cout << "inputs: " << names_text(r.inputs) << "\n"
              << "outputs: " << names_text(r.outputs) << "\n"
              << "cells: " << names_text(r.cells) << "\n"
              << "functions: " << arities_text(r.functions) << "\n"
              << "predicates: " << arities_text(r.predicates) << "\n";
  }
  return kOk;
}

// --- monitor -------------------------------------------------------------------

int cmd_monitor(const std::string& spec_file, const std::string& trace_file, const std::string& bind,
                bool as_json) {
  const Formula f = expand(parse_spec(slurp(spec_file)));
  std::istringstream in(slurp(trace_file));
  const FiniteTrace trace = read_trace(in);
  const auto fx = fixture(bind);
  const Verdict v = monitor(f, trace, fx.assignment);
  if (as_json) {
    json j{{"verdict", v.is_sat() ? "sat" : v.is_viol() ? "viol" : "inconclusive"},
           {"steps", trace.steps.size()}};
    if (v.is_viol()) j["step"] = v.at_step();
    if (!v.is_sat()) j["residual"] = pretty(resugar(v.residual()));
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << (v.is_sat() ? "Sat" : v.is_viol() ? "Viol" : "Inconclusive");
    if (v.is_viol()) std::cout << " at step " << v.at_step();
    std::cout << " (" << trace.steps.size() << " steps)\n";
    if (v.is_viol()) std::cout << "failed obligation: " << pretty(resugar(v.residual())) << "\n";
    if (v.is_inconclusive()) std::cout << "open obligation: " << pretty(resugar(v.residual())) << "\n";
  }
  return v.is_viol() ? kFail : kOk;
}

// --- cfm -----------------------------------------------------------------------

int cmd_validate(const std::string& file, bool as_json) {
  const Cfm m = read_cfm(slurp(file));
  const auto problems = validate(m);
  if (as_json) {
    json j{{"valid", problems.empty()}, {"violations", json::array()}};
    for (const auto& p : problems) {
      json e{{"kind", std::string(to_string(p.kind))}, {"subject", p.subject}, {"message", p.message}};
      if (!p.cycle.empty()) e["cycle"] = p.cycle;
      j["violations"].push_back(std::move(e));
    }
    std::cout << j.dump(2) << "\n";
  } else if (problems.empty()) {
    std::cout << "valid: " << m.inputs.size() << " input(s), " << m.outputs.size() << " output(s), "
              << m.cells.size() << " cell(s), " << m.vertices.size() << " vertex(es)\n";
  } else {
    for (const auto& p : problems) std::cout << to_string(p.kind) << ": " << p.message << "\n";
  }
  return problems.empty() ? kOk : kFail;
}

struct SimulateArgs {
  std::string file, bind, inputs;
  bool interactive = false;
  long steps = -1;
};

std::optional<Valuation> prompt_inputs(const Cfm& m, std::size_t step) {
  Valuation v;
  for (const auto& i : m.inputs) {
    for (;;) {
      std::cout << "step " << step << " " << i << "? " << std::flush;
      std::string line;
      if (!std::getline(std::cin, line)) return std::nullopt;
      if (line == ":q" || line == "quit") return std::nullopt;
      try {
        v[i] = parse_literal(line);
        break;
      } catch (const Error& e) {
        std::cout << "  " << e.detail() << " (enter true/false, an integer, a \"string\", or :q)\n";
      }
    }
  }
  return v;
}

int cmd_simulate(const SimulateArgs& args, bool as_json) {
  const Cfm m = read_cfm(slurp(args.file));
  const auto fx = fixture(args.bind);
  const Interpreter interp(m, fx.assignment);
  const std::size_t limit = args.steps < 0 ? SIZE_MAX : static_cast<std::size_t>(args.steps);

  if (args.interactive) {
    InterpState st = interp.initial_state();
    std::cout << "cells: " << valuation_text(st.cells) << "\n";
    for (std::size_t t = 0; t < limit; ++t) {
      auto in = prompt_inputs(m, t);
      if (!in) break;
      StepResult r;
      try {
        r = interp.step(st, *in);
      } catch (const Error& e) {
        throw StepError(e.kind(), e.detail(), t);
      }
      std::cout << "  out:   " << valuation_text(r.outputs) << "\n";
      for (const auto& [sink, term] : r.fired) std::cout << "  fired: [ " << sink << " <- " << pretty(term) << " ]\n";
      std::cout << "  cells: " << valuation_text(r.next.cells) << "\n";
      st = std::move(r.next);
    }
    return kOk;
  }

  std::istringstream in(slurp(args.inputs));
  const FiniteTrace given = read_trace(in);
  std::vector<Valuation> inputs;
  for (const auto& s : given.steps) {
    if (inputs.size() >= limit) break;
    inputs.push_back(s.inputs);
  }
  const RunResult run = interp.run(inputs);
  if (as_json) {
    json j{{"steps", json::array()}, {"final_cells", valuation_json(run.final_state.cells)}};
    for (const auto& s : run.trace.steps) j["steps"].push_back(json::parse(step_to_json_line(s)));
    std::cout << j.dump(2) << "\n";
  } else {
    write_trace(std::cout, run.trace);
  }
  return kOk;
}

// --- codegen -------------------------------------------------------------------

int cmd_codegen(const std::string& file, const std::string& style_name, const std::string& out_file,
                bool as_json) {
  const auto style = parse_style(style_name);
  if (!style) throw UsageError("unknown style '" + style_name + "' (arrow, monad, applicative)");
  const Cfm m = read_cfm(slurp(file));
  const std::string text = generate(m, *style);
  if (!out_file.empty()) {
    std::ofstream out(out_file, std::ios::binary);
    if (!out || !(out << text)) throw UsageError("cannot write '" + out_file + "'");
  }
  if (as_json) {
    json j{{"style", style_name}, {"bytes", text.size()}};
    if (out_file.empty()) j["text"] = text;
    else j["file"] = out_file;
    std::cout << j.dump(2) << "\n";
  } else if (out_file.empty()) {
    std::cout << text;
  }
  return kOk;
}

// --- conform -------------------------------------------------------------------

struct ConformArgs {
  std::string file, spec, bind;
  std::size_t traces = 1000, len = 50;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

int cmd_conform(const ConformArgs& args, bool as_json) {
  const Cfm m = read_cfm(slurp(args.file));
  const Formula f = desugar(expand(parse_spec(slurp(args.spec))));
  const auto fx = fixture(args.bind);
  CheckOptions opt;
  opt.traces = args.traces;
  opt.length = args.len;
  opt.seed = args.seed;
  opt.jobs = args.jobs;
  const Report r = check(m, f, fx.assignment, fx.generators, opt);
  if (as_json) {
    std::cout << report_to_json(r);
  } else {
    std::cout << (r.passed() ? "PASS" : "FAIL") << ": " << r.violations.size() << " violating trace(s) of "
              << opt.traces << " (length " << opt.length << ", seed " << opt.seed << "); " << r.sat_count
              << " sat, " << r.inconclusive_count << " inconclusive\n";
    if (r.fired_mismatches) std::cout << r.fired_mismatches << " step(s) without exactly one update per sink\n";
    for (const auto& v : r.violations) {
      std::cout << "  trace " << v.trace << " violates at step " << v.step << ": " << pretty(resugar(v.residual)) << "\n";
    }
    std::cout << "randomized testing under one assignment; not a proof\n";
  }
  return r.passed() ? kOk : kFail;
}

std::uint64_t default_seed() {
  if (const char* s = std::getenv("TSLKIT_SEED")) {
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring malformed TSLKIT_SEED='" << s << "'\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TSL specifications, control flow models and FRP control templates"};
  app.require_subcommand(1);
  std::string format = "text";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));

  ParseArgs pa;
  auto* parse = app.add_subcommand("parse", "Parse a .tsl file and print it");
  parse->add_option("file", pa.file, "Specification")->required();
  parse->add_flag("--expand", pa.expand, "Print the expanded formula");
  parse->add_flag("--desugar", pa.desugar, "Print the expanded formula in core operators");
  parse->add_flag("--classify", pa.classify, "Report signal and literal roles");

  std::string mon_spec, mon_trace, mon_bind;
  auto* mon = app.add_subcommand("monitor", "Monitor a finite trace against a specification");
  mon->add_option("file", mon_spec, "Specification")->required();
  mon->add_option("--trace", mon_trace, "Trace file (JSON lines)")->required();
  mon->add_option("--bind", mon_bind, "Fixture binding")->required();

  auto* cfm = app.add_subcommand("cfm", "Control flow model tools");
  cfm->require_subcommand(1);
  std::string val_file;
  auto* val = cfm->add_subcommand("validate", "Check a .cfm.json file");
  val->add_option("file", val_file, "Model")->required();
  SimulateArgs sa;
  auto* sim = cfm->add_subcommand("simulate", "Run a model on inputs");
  sim->add_option("file", sa.file, "Model")->required();
  sim->add_option("--bind", sa.bind, "Fixture binding")->required();
  auto* sim_in = sim->add_option("--inputs", sa.inputs, "Trace file supplying the `in` records");
  auto* sim_i = sim->add_flag("--interactive", sa.interactive, "Prompt for inputs at every step");
  sim_in->excludes(sim_i);
  sim->add_option("--steps", sa.steps, "Stop after this many steps")->check(CLI::NonNegativeNumber);

  std::string gen_file, gen_style, gen_out;
  auto* gen = app.add_subcommand("codegen", "Emit an FRP control template");
  gen->add_option("file", gen_file, "Model")->required();
  gen->add_option("--style", gen_style, "arrow, monad or applicative")
      ->required()
      ->check(CLI::IsMember({"arrow", "monad", "applicative"}));
  gen->add_option("-o,--output", gen_out, "Output file (default: stdout)");

  ConformArgs ca;
  ca.seed = default_seed();
  auto* conf = app.add_subcommand("conform", "Randomized conformance test of a model against a spec");
  conf->add_option("file", ca.file, "Model")->required();
  conf->add_option("--spec", ca.spec, "Specification")->required();
  conf->add_option("--bind", ca.bind, "Fixture binding")->required();
  conf->add_option("--traces", ca.traces, "Number of traces")->capture_default_str();
  conf->add_option("--len", ca.len, "Trace length")->capture_default_str();
  conf->add_option("--seed", ca.seed, "Seed (default: $TSLKIT_SEED or 0)")->capture_default_str();
  conf->add_option("--jobs", ca.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();

  auto* fix = app.add_subcommand("fixtures", "List built-in fixture bindings");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  if (sim->parsed() && !sa.interactive && sa.inputs.empty()) {
    std::cerr << "cfm simulate: one of --inputs or --interactive is required\n";
    return kUsage;
  }

  const bool as_json = format == "json";
  try {
    if (parse->parsed()) return cmd_parse(pa, as_json);
    if (mon->parsed()) return cmd_monitor(mon_spec, mon_trace, mon_bind, as_json);
    if (val->parsed()) return cmd_validate(val_file, as_json);
    if (sim->parsed()) return cmd_simulate(sa, as_json);
    if (gen->parsed()) return cmd_codegen(gen_file, gen_style, gen_out, as_json);
    if (conf->parsed()) return cmd_conform(ca, as_json);
    if (fix->parsed()) {
      json j = json::array();
      for (const auto& n : fixtures::names()) {
        const auto fx = fixtures::get(n);
        if (as_json) j.push_back({{"name", n}, {"summary", fx.summary}});
        else std::cout << n << ": " << fx.summary << "\n";
      }
      if (as_json) std::cout << j.dump(2) << "\n";
      return kOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_spec_error(e.kind()) ? kUsage : kFail;
  }
  return kUsage;
}
