#include "tslkit/monitor.hpp"

#include <algorithm>
#include <istream>
#include <json.hpp>
#include <ostream>

#include "tslkit/error.hpp"
#include "tslkit/parser.hpp"

namespace tslkit {

Verdict Verdict::sat() { return Verdict(); }

Verdict Verdict::viol(std::size_t step, Formula obligation) {
  Verdict v;
  v.kind_ = Kind::Viol;
  v.step_ = step;
  v.residual_ = std::move(obligation);
  return v;
}

Verdict Verdict::inconclusive(Formula residual) {
  Verdict v;
  v.kind_ = Kind::Inconclusive;
  v.residual_ = std::move(residual);
  return v;
}

std::size_t Verdict::at_step() const {
  if (kind_ != Kind::Viol) throw std::logic_error("Verdict::at_step on a non-violation");
  return step_;
}

bool Verdict::same_outcome(const Verdict& other) const noexcept {
  if (kind_ != other.kind_) return false;
  return kind_ != Kind::Viol || step_ == other.step_;
}

std::string to_string(const Verdict& v) {
  switch (v.kind()) {
    case Verdict::Kind::Sat: return "Sat";
    case Verdict::Kind::Viol: return "Viol(" + std::to_string(v.at_step()) + ")";
    case Verdict::Kind::Inconclusive: return "Inconclusive(" + pretty(resugar(v.residual())) + ")";
  }
  return "";
}

std::vector<Valuation> cell_stream(const FiniteTrace& trace, const Assignment& a) {
  std::vector<Valuation> out;
  out.reserve(trace.steps.size() + 1);
  out.push_back(a.cell_init());
  for (std::size_t t = 0; t < trace.steps.size(); ++t) {
    const auto& step = trace.steps[t];
    const Valuation& now = out.back();
    Valuation next;
    try {
      for (const auto& [cell, _] : now) {
        auto it = step.fired.find(cell);
        if (it == step.fired.end()) {
          throw Error(ErrorKind::MissingFired, "no update fired for cell '" + cell + "'");
        }
        next[cell] = eval_term(it->second, step.inputs, now, a);
      }
    } catch (const StepError&) {
      throw;
    } catch (const Error& e) {
      throw StepError(e.kind(), e.detail(), t);
    }
    out.push_back(std::move(next));
  }
  return out;
}

std::string atom_key(const Formula& atom) { return pretty(atom); }

AtomValuation step_atoms(const Formula& f, const TraceStep& step, const Valuation& cells,
                         const Assignment& a) {
  AtomValuation out;
  for (const auto& atom : atoms_of(f)) {
    bool value;
    if (atom.op() == Op::Update) {
      const Update& u = atom.update_term();
      auto it = step.fired.find(u.sink);
      value = it != step.fired.end() && it->second == u.term;
    } else {
      value = eval_pred(atom.predicate_term(), step.inputs, cells, a);
    }
    out.emplace(atom_key(atom), value);
  }
  return out;
}

// --- simplification ----------------------------------------------------------

namespace {

Formula tt() { return Formula::constant(true); }

void flatten(const Formula& f, Op op, std::vector<Formula>& out) {
  if (f.op() == op) {
    flatten(f.lhs(), op, out);
    flatten(f.rhs(), op, out);
  } else {
    out.push_back(f);
  }
}

bool contains(const std::vector<Formula>& xs, const Formula& f) {
  return std::find(xs.begin(), xs.end(), f) != xs.end();
}

bool subset(const std::vector<Formula>& xs, const std::vector<Formula>& ys) {
  return std::all_of(xs.begin(), xs.end(), [&](const Formula& x) { return contains(ys, x); });
}

Formula mk_not(const Formula& a) {
  if (a.is_const()) return Formula::constant(!a.value());
  if (a.op() == Op::Not) return a.operand();
  return Formula::negate(a);
}

// Shared by && (unit = true, zero = false, dual = ||) and its dual.
Formula mk_lattice(Op op, const Formula& a, const Formula& b) {
  const bool is_and = op == Op::And;
  const Op dual = is_and ? Op::Or : Op::And;
  const Formula zero = Formula::constant(!is_and);
  if (a.is_const()) return a.value() == is_and ? b : zero;
  if (b.is_const()) return b.value() == is_and ? a : zero;

  // No complement rule (a && !a): it fires on some spellings of a formula
  // and not on equivalent ones, so verdicts would depend on syntax.
  std::vector<Formula> xs, ys;
  flatten(a, op, xs);
  flatten(b, op, ys);
  // idempotence
  if (subset(ys, xs)) return a;
  if (subset(xs, ys)) return b;
  // absorption: a op (a dual c) == a
  for (const auto& y : ys) {
    if (y.op() == dual) {
      std::vector<Formula> zs;
      flatten(y, dual, zs);
      for (const auto& x : xs) {
        if (contains(zs, x)) {
          std::vector<Formula> rest;
          for (const auto& yy : ys) {
            if (!(yy == y)) rest.push_back(yy);
          }
          if (rest.empty()) return a;
          Formula r = rest.front();
          for (std::size_t i = 1; i < rest.size(); ++i) r = Formula::binary(op, r, rest[i]);
          return mk_lattice(op, a, r);
        }
      }
    }
  }
  for (const auto& x : xs) {
    if (x.op() == dual) {
      std::vector<Formula> zs;
      flatten(x, dual, zs);
      for (const auto& y : ys) {
        if (contains(zs, y)) {
          std::vector<Formula> rest;
          for (const auto& xx : xs) {
            if (!(xx == x)) rest.push_back(xx);
          }
          if (rest.empty()) return b;
          Formula r = rest.front();
          for (std::size_t i = 1; i < rest.size(); ++i) r = Formula::binary(op, r, rest[i]);
          return mk_lattice(op, r, b);
        }
      }
    }
  }
  return Formula::binary(op, a, b);
}

Formula mk_and(const Formula& a, const Formula& b) { return mk_lattice(Op::And, a, b); }
Formula mk_or(const Formula& a, const Formula& b) { return mk_lattice(Op::Or, a, b); }

Formula mk_implies(const Formula& a, const Formula& b) {
  if (a.is_const()) return a.value() ? b : tt();
  if (b.is_const()) return b.value() ? tt() : mk_not(a);
  return Formula::binary(Op::Implies, a, b);
}

Formula mk_iff(const Formula& a, const Formula& b) {
  if (a.is_const()) return a.value() ? b : mk_not(b);
  if (b.is_const()) return b.value() ? a : mk_not(a);
  return Formula::binary(Op::Iff, a, b);
}

Formula mk_xor(const Formula& a, const Formula& b) {
  if (a.is_const()) return a.value() ? mk_not(b) : b;
  if (b.is_const()) return b.value() ? mk_not(a) : a;
  return Formula::binary(Op::Xor, a, b);
}

Formula mk_binary(Op op, const Formula& a, const Formula& b) {
  switch (op) {
    case Op::And: return mk_and(a, b);
    case Op::Or: return mk_or(a, b);
    case Op::Implies: return mk_implies(a, b);
    case Op::Iff: return mk_iff(a, b);
    case Op::Xor: return mk_xor(a, b);
    case Op::Until:
      if (b.is_const() || a.is_false()) return b;
      break;
    case Op::WeakUntil:
      if (b.is_true() || a.is_true()) return tt();
      if (a.is_false()) return b;
      break;
    case Op::Release:
      if (b.is_const() || a.is_true()) return b;
      break;
    default:
      break;
  }
  return Formula::binary(op, a, b);
}

Formula mk_unary(Op op, const Formula& a) {
  if (op == Op::Not) return mk_not(a);
  if (a.is_const()) return a;  // X c, F c and G c are all c
  return Formula::unary(op, a);
}

}  // namespace

Formula simplify(const Formula& f) {
  if (f.is_atom() || f.is_const()) return f;
  if (is_unary(f.op())) return mk_unary(f.op(), simplify(f.operand()));
  return mk_binary(f.op(), simplify(f.lhs()), simplify(f.rhs()));
}

Formula progress(const Formula& f, const AtomValuation& atoms) {
  switch (f.op()) {
    case Op::Const:
      return f;
    case Op::Predicate:
    case Op::Update: {
      auto it = atoms.find(atom_key(f));
      if (it == atoms.end()) throw std::logic_error("progress: no value for atom " + atom_key(f));
      return Formula::constant(it->second);
    }
    case Op::Not:
      return mk_not(progress(f.operand(), atoms));
    case Op::Next:
      return f.operand();
    case Op::And:
    case Op::Or:
    case Op::Implies:
    case Op::Iff:
    case Op::Xor:
      return mk_binary(f.op(), progress(f.lhs(), atoms), progress(f.rhs(), atoms));
    case Op::Until:
    case Op::WeakUntil:
      // a U b  ==  b || (a && X(a U b))
      return mk_or(progress(f.rhs(), atoms), mk_and(progress(f.lhs(), atoms), f));
    case Op::Release:
      // a R b  ==  b && (a || X(a R b))
      return mk_and(progress(f.rhs(), atoms), mk_or(progress(f.lhs(), atoms), f));
    case Op::Finally:
      return mk_or(progress(f.operand(), atoms), f);
    case Op::Globally:
      return mk_and(progress(f.operand(), atoms), f);
  }
  throw std::logic_error("progress: unknown operator");
}

Verdict monitor(const Formula& f, const FiniteTrace& trace, const Assignment& a) {
  // progression runs on core operators only
  Formula residual = simplify(desugar(f));
  Valuation cells = a.cell_init();
  for (std::size_t t = 0; t < trace.steps.size(); ++t) {
    const TraceStep& step = trace.steps[t];
    Formula before = residual;
    try {
      residual = progress(residual, step_atoms(residual, step, cells, a));
      if (residual.is_false()) return Verdict::viol(t, before);
      Valuation next;
      for (const auto& [cell, _] : cells) {
        auto it = step.fired.find(cell);
        if (it == step.fired.end()) {
          throw Error(ErrorKind::MissingFired, "no update fired for cell '" + cell + "'");
        }
        next[cell] = eval_term(it->second, step.inputs, cells, a);
      }
      cells = std::move(next);
    } catch (const StepError&) {
      throw;
    } catch (const Error& e) {
      throw StepError(e.kind(), e.detail(), t);
    }
  }
  if (residual.is_true()) return Verdict::sat();
  return Verdict::inconclusive(residual);
}

// --- trace files ---------------------------------------------------------------

namespace {

nlohmann::json value_json(const Value& v) { return nlohmann::json::parse(to_literal(v)); }

Valuation read_valuation(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorKind::SchemaError, where + ": expected an object");
  Valuation out;
  for (const auto& [k, v] : j.items()) out[k] = parse_literal(v.dump());
  return out;
}

}  // namespace

FiniteTrace read_trace(std::istream& in) {
  FiniteTrace trace;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(lineno);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
      throw Error(ErrorKind::SchemaError, where + ": not a JSON object");
    }
    if (!j.is_object()) throw Error(ErrorKind::SchemaError, where + ": not a JSON object");
    for (const auto& [k, _] : j.items()) {
      if (k != "in" && k != "fired" && k != "out") {
        throw Error(ErrorKind::SchemaError, where + ": unknown field '" + k + "'");
      }
    }
    if (!j.contains("in")) throw Error(ErrorKind::SchemaError, where + ": missing field 'in'");
    TraceStep step;
    step.inputs = read_valuation(j["in"], where + "/in");
    if (j.contains("out")) step.outputs = read_valuation(j["out"], where + "/out");
    if (j.contains("fired")) {
      const auto& fired = j["fired"];
      if (!fired.is_object()) throw Error(ErrorKind::SchemaError, where + "/fired: expected an object");
      for (const auto& [sink, term] : fired.items()) {
        if (!term.is_string()) {
          throw Error(ErrorKind::SchemaError, where + "/fired/" + sink + ": expected term text");
        }
        try {
          step.fired.emplace(sink, parse_term(term.get<std::string>()));
        } catch (const SyntaxError& e) {
          throw Error(ErrorKind::SchemaError, where + "/fired/" + sink + ": " + e.what());
        }
      }
    }
    trace.steps.push_back(std::move(step));
  }
  return trace;
}

std::string step_to_json_line(const TraceStep& step) {
  nlohmann::json j;
  j["in"] = nlohmann::json::object();
  for (const auto& [k, v] : step.inputs) j["in"][k] = value_json(v);
  j["fired"] = nlohmann::json::object();
  for (const auto& [k, t] : step.fired) j["fired"][k] = pretty(t);
  if (!step.outputs.empty()) {
    j["out"] = nlohmann::json::object();
    for (const auto& [k, v] : step.outputs) j["out"][k] = value_json(v);
  }
  return j.dump();
}

void write_trace(std::ostream& out, const FiniteTrace& trace) {
  for (const auto& step : trace.steps) out << step_to_json_line(step) << '\n';
}

}  // namespace tslkit
