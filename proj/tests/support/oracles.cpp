#include "oracles.hpp"

#include <algorithm>
#include <stdexcept>

#include "tslkit/fixtures.hpp"

using namespace tslkit;

namespace oracle {

std::size_t uniform(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

namespace {

FunctionTerm x() { return FunctionTerm::signal("x"); }

Formula random_atom(Rng& rng) {
  switch (uniform(rng, 4)) {
    case 0: return Formula::predicate({FunctionTerm::apply("p", {x()})});
    case 1: return Formula::predicate({FunctionTerm::apply("q", {x()})});
    case 2: return Formula::update({"o", FunctionTerm::apply("f", {x()})});
    default: return Formula::constant(uniform(rng, 2) == 1);
  }
}

}  // namespace

Formula random_formula(Rng& rng, int depth) {
  if (depth <= 0 || uniform(rng, 5) == 0) return random_atom(rng);
  static const Op kUnary[] = {Op::Not, Op::Next, Op::Finally, Op::Globally};
  static const Op kBinary[] = {Op::And,  Op::Or,    Op::Implies,   Op::Iff,
                               Op::Xor,  Op::Until, Op::WeakUntil, Op::Release};
  if (uniform(rng, 3) == 0) return Formula::unary(kUnary[uniform(rng, 4)], random_formula(rng, depth - 1));
  const Op op = kBinary[uniform(rng, 8)];
  Formula a = random_formula(rng, depth - 1);
  return Formula::binary(op, std::move(a), random_formula(rng, depth - 1));
}

FiniteTrace random_trace(Rng& rng, std::size_t len) {
  FiniteTrace t;
  for (std::size_t i = 0; i < len; ++i) {
    TraceStep s;
    s.inputs["x"] = Value(static_cast<std::int64_t>(uniform(rng, 7)) - 3);
    s.fired.emplace("o", uniform(rng, 2) ? FunctionTerm::apply("f", {x()}) : x());
    t.steps.push_back(std::move(s));
  }
  return t;
}

Assignment vocabulary() {
  Assignment a;
  a.bind("p", 1, [](std::span<const Value> v) { return Value(v[0].as_int() % 2 == 0); });
  a.bind("q", 1, [](std::span<const Value> v) { return Value(v[0].as_int() > 0); });
  a.bind("f", 1, [](std::span<const Value> v) { return Value(v[0].as_int() + 1); });
  return a;
}

bool eval_propositional(const Formula& f, const std::map<std::string, bool>& atoms) {
  switch (f.op()) {
    case Op::Const: return f.value();
    case Op::Predicate:
    case Op::Update: return atoms.at(pretty(f));
    case Op::Not: return !eval_propositional(f.operand(), atoms);
    case Op::And: return eval_propositional(f.lhs(), atoms) && eval_propositional(f.rhs(), atoms);
    case Op::Or: return eval_propositional(f.lhs(), atoms) || eval_propositional(f.rhs(), atoms);
    case Op::Implies: return !eval_propositional(f.lhs(), atoms) || eval_propositional(f.rhs(), atoms);
    case Op::Iff: return eval_propositional(f.lhs(), atoms) == eval_propositional(f.rhs(), atoms);
    case Op::Xor: return eval_propositional(f.lhs(), atoms) != eval_propositional(f.rhs(), atoms);
    default: throw std::invalid_argument("eval_propositional: temporal operator");
  }
}

std::vector<std::int64_t> counter_stream(std::int64_t init, std::int64_t delta, std::size_t steps) {
  std::vector<std::int64_t> out;
  std::int64_t v = init;
  for (std::size_t t = 0; t <= steps; ++t) {
    out.push_back(v);
    v += delta;
  }
  return out;
}

bool has_cell_free_cycle(const Cfm& m) {
  std::vector<std::string> ids;
  for (const auto& [id, _] : m.vertices) ids.push_back(id);
  const std::size_t n = ids.size();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& s : m.sources(ids[i])) {
      auto it = std::find(ids.begin(), ids.end(), s);
      if (it != ids.end()) reach[static_cast<std::size_t>(it - ids.begin())][i] = true;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (reach[i][k] && reach[k][j]) reach[i][j] = true;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (reach[i][i]) return true;
  }
  return false;
}

bool is_topological(const Cfm& m, const std::vector<std::string>& order) {
  std::map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  if (pos.size() != order.size() || order.size() != m.vertices.size()) return false;
  for (const auto& [id, _] : m.vertices) {
    if (!pos.count(id)) return false;
    for (const auto& s : m.sources(id)) {
      if (m.vertices.count(s) && pos.at(s) >= pos.at(id)) return false;
    }
  }
  return true;
}

namespace {

std::string random_id(Rng& rng, std::set<std::string>& used) {
  static const char kAlpha[] = "abcdefghijklmnopqrstuvwxyz";
  for (;;) {
    std::string s = "w";
    for (int i = 0; i < 4; ++i) s += kAlpha[uniform(rng, 26)];
    if (used.insert(s).second) return s;
  }
}

const std::string& pick(Rng& rng, const std::vector<std::string>& xs) { return xs[uniform(rng, xs.size())]; }

}  // namespace

Cfm random_graph(Rng& rng, std::size_t vertices) {
  Cfm m;
  std::set<std::string> used;
  std::vector<std::string> all;
  m.inputs.insert("in0");
  all.push_back("in0");
  const std::size_t cells = uniform(rng, 3);
  for (std::size_t i = 0; i < cells; ++i) {
    const std::string c = "cell" + std::to_string(i);
    m.cells.insert(c);
    all.push_back(c);
  }
  std::vector<std::string> vs;
  for (std::size_t i = 0; i < vertices; ++i) {
    vs.push_back(random_id(rng, used));
    all.push_back(vs.back());
  }
  for (const auto& v : vs) {
    const std::size_t arity = uniform(rng, 3);
    m.vertices.emplace(v, VertexLabel::function("f" + std::to_string(arity), arity));
    auto& srcs = m.deps[v];
    for (std::size_t k = 0; k < arity; ++k) srcs.push_back(pick(rng, all));
  }
  for (const auto& c : m.cells) m.deps[c] = {pick(rng, all)};
  m.outputs.insert("out0");
  m.deps["out0"] = {pick(rng, all)};
  return m;
}

Cfm random_valid_cfm(Rng& rng, std::size_t max_vertices) {
  Cfm m;
  std::set<std::string> used;
  std::vector<std::string> ints, bools;
  const std::size_t n_int = 1 + uniform(rng, 3), n_bool = 1 + uniform(rng, 2), n_cells = uniform(rng, 3);
  for (std::size_t i = 0; i < n_int; ++i) {
    m.inputs.insert("x" + std::to_string(i));
    ints.push_back("x" + std::to_string(i));
  }
  for (std::size_t i = 0; i < n_bool; ++i) {
    m.inputs.insert("b" + std::to_string(i));
    bools.push_back("b" + std::to_string(i));
  }
  for (std::size_t i = 0; i < n_cells; ++i) {
    m.cells.insert("c" + std::to_string(i));
    ints.push_back("c" + std::to_string(i));
  }

  auto add = [&](VertexLabel l, std::vector<std::string> srcs, bool is_bool) {
    const std::string id = random_id(rng, used);
    m.vertices.emplace(id, std::move(l));
    m.deps[id] = std::move(srcs);
    (is_bool ? bools : ints).push_back(id);
    return id;
  };

  const std::size_t target = 1 + uniform(rng, max_vertices);
  while (m.vertices.size() < target) {
    const std::size_t room = target - m.vertices.size();
    switch (uniform(rng, 9)) {
      case 0: add(VertexLabel::function("add", 2), {pick(rng, ints), pick(rng, ints)}, false); break;
      case 1: add(VertexLabel::function("sub", 2), {pick(rng, ints), pick(rng, ints)}, false); break;
      case 2: add(VertexLabel::function("increment", 1), {pick(rng, ints)}, false); break;
      case 3: add(VertexLabel::function("zero", 0), {}, false); break;
      case 4: add(VertexLabel::predicate("eq", 2), {pick(rng, ints), pick(rng, ints)}, true); break;
      case 5: add(VertexLabel::predicate("isEvent", 1), {pick(rng, bools)}, true); break;
      case 6: add(VertexLabel::logic(LogicOp::Not), {pick(rng, bools)}, true); break;
      case 7:
        add(VertexLabel::logic(uniform(rng, 2) ? LogicOp::And : LogicOp::Or),
            {pick(rng, bools), pick(rng, bools)}, true);
        break;
      default: {
        if (room < 3) break;
        const std::string p = pick(rng, bools);
        const std::string np = add(VertexLabel::logic(LogicOp::Not), {p}, true);
        // order of the controls is itself random
        std::vector<std::string> ctrl = uniform(rng, 2) ? std::vector<std::string>{p, np}
                                                       : std::vector<std::string>{np, p};
        const std::string sel = add(VertexLabel::one_hot(2), ctrl, false);
        ints.pop_back();  // the selector is not a data wire
        add(VertexLabel::mutex(2), {sel, pick(rng, ints), pick(rng, ints)}, false);
        break;
      }
    }
  }
  std::vector<std::string> data_ints;
  for (const auto& w : ints) data_ints.push_back(w);
  for (const auto& c : m.cells) m.deps[c] = {pick(rng, data_ints)};
  const std::size_t n_out = 1 + uniform(rng, 3);
  for (std::size_t i = 0; i < n_out; ++i) {
    const std::string o = "o" + std::to_string(i);
    m.outputs.insert(o);
    m.deps[o] = {uniform(rng, 2) ? pick(rng, ints) : pick(rng, bools)};
  }
  return m;
}

Valuation random_inputs(Rng& rng, const Cfm& m) {
  Valuation v;
  for (const auto& i : m.inputs) {
    if (i[0] == 'b') v[i] = Value(uniform(rng, 2) == 1);
    else v[i] = Value(static_cast<std::int64_t>(uniform(rng, 21)) - 10);
  }
  return v;
}

Assignment random_cfm_assignment(const Cfm& m) {
  Assignment a = fixtures::standard_library();
  std::int64_t k = 0;
  for (const auto& c : m.cells) a.init_cell(c, Value(k++));
  return a;
}

}  // namespace oracle
