#include "tslkit/interp.hpp"

#include <span>

#include "tslkit/error.hpp"

namespace tslkit {

Interpreter::Interpreter(Cfm m, Assignment a, TieBreak tie) : m_(std::move(m)), a_(std::move(a)) {
  const auto problems = validate(m_);
  if (!problems.empty()) {
    std::string msg = std::to_string(problems.size()) + " problem(s), first: " +
                      std::string(to_string(problems.front().kind)) + ": " + problems.front().message;
    throw Error(ErrorKind::InvalidCfm, msg);
  }
  order_ = topo_order(m_, tie);
}

InterpState Interpreter::initial_state() const {
  InterpState st;
  for (const auto& c : m_.cells) {
    auto it = a_.cell_init().find(c);
    if (it == a_.cell_init().end()) {
      throw Error(ErrorKind::MissingSignal, "no initial value for cell '" + c + "'");
    }
    st.cells[c] = it->second;
  }
  return st;
}

namespace {

struct Wires {
  const Cfm& m;
  const InterpState& st;
  const Valuation& inputs;
  std::map<std::string, Value> values;
  // Mutex id -> chosen data source
  std::map<std::string, std::string> chosen;

  const Value& read(const std::string& id) const {
    if (m.cells.count(id)) return st.cells.at(id);
    if (m.inputs.count(id)) {
      auto it = inputs.find(id);
      if (it == inputs.end()) throw Error(ErrorKind::MissingSignal, "no value for input '" + id + "'");
      return it->second;
    }
    return values.at(id);
  }

  FunctionTerm term(const std::string& id, std::map<std::string, FunctionTerm>& memo) const {
    if (m.cells.count(id) || m.inputs.count(id)) return FunctionTerm::signal(id);
    if (auto it = memo.find(id); it != memo.end()) return it->second;
    const VertexLabel& l = m.vertices.at(id);
    const auto& srcs = m.sources(id);
    FunctionTerm t;
    if (l.kind() == VertexLabel::Kind::Mutex) {
      t = term(chosen.at(id), memo);
    } else {
      std::vector<FunctionTerm> args;
      for (const auto& s : srcs) args.push_back(term(s, memo));
      std::string head;
      switch (l.kind()) {
        case VertexLabel::Kind::Logic: head = std::string(to_string(l.logic_op())); break;
        case VertexLabel::Kind::OneHot: head = "oneHot"; break;
        default: head = l.name(); break;
      }
      t = FunctionTerm::apply(head, std::move(args));
    }
    memo.emplace(id, t);
    return t;
  }
};

Value eval_vertex(const std::string& id, const VertexLabel& l, std::span<const Value> in,
                  const Assignment& a, std::string* chosen_source, const Cfm& m) {
  switch (l.kind()) {
    case VertexLabel::Kind::Function:
    case VertexLabel::Kind::Predicate: {
      const Binding* b = a.find(l.name());
      if (!b) throw Error(ErrorKind::UnboundLiteral, "literal '" + l.name() + "' has no implementation");
      if (b->arity != l.arity()) {
        throw Error(ErrorKind::ArityMismatch, "literal '" + l.name() + "' is bound with arity " +
                                                  std::to_string(b->arity) + " but vertex '" + id +
                                                  "' has arity " + std::to_string(l.arity()));
      }
      Value v = b->impl(in);
      if (l.kind() == VertexLabel::Kind::Predicate && !v.is_bool()) {
        throw Error(ErrorKind::NotBoolean, "predicate vertex '" + id + "' produced " + v.type_name());
      }
      return v;
    }
    case VertexLabel::Kind::Logic:
      switch (l.logic_op()) {
        case LogicOp::Not: return Value(!in[0].as_bool());
        case LogicOp::And: return Value(in[0].as_bool() && in[1].as_bool());
        case LogicOp::Or: return Value(in[0].as_bool() || in[1].as_bool());
      }
      break;
    case VertexLabel::Kind::OneHot: {
      std::size_t count = 0, index = 0;
      for (std::size_t i = 0; i < in.size(); ++i) {
        if (in[i].as_bool()) {
          ++count;
          index = i + 1;
        }
      }
      if (count != 1) {
        throw Error(ErrorKind::MutexNotOneHot, "vertex '" + id + "': " + std::to_string(count) + " of " +
                                                   std::to_string(in.size()) + " controls are true");
      }
      return Value(static_cast<std::int64_t>(index));
    }
    case VertexLabel::Kind::Mutex: {
      const std::int64_t sel = in[0].as_int();
      if (sel < 1 || sel > static_cast<std::int64_t>(l.k())) {
        throw Error(ErrorKind::SelectorOutOfRange, "vertex '" + id + "': selector " + std::to_string(sel) +
                                                       " outside 1.." + std::to_string(l.k()));
      }
      *chosen_source = m.sources(id)[static_cast<std::size_t>(sel)];
      return in[static_cast<std::size_t>(sel)];
    }
  }
  throw std::logic_error("eval_vertex: unknown label");
}

}  // namespace

StepResult Interpreter::step(const InterpState& st, const Valuation& inputs) const {
  Wires w{m_, st, inputs, {}, {}};
  std::vector<Value> args;
  for (const auto& id : order_) {
    const auto& srcs = m_.sources(id);
    args.clear();
    for (const auto& s : srcs) args.push_back(w.read(s));
    std::string chosen;
    Value v = eval_vertex(id, m_.vertices.at(id), args, a_, &chosen, m_);
    if (!chosen.empty()) w.chosen.emplace(id, std::move(chosen));
    w.values.emplace(id, std::move(v));
  }

  StepResult r;
  std::map<std::string, FunctionTerm> memo;
  for (const auto& o : m_.outputs) {
    const auto& src = m_.sources(o).front();
    r.outputs[o] = w.read(src);
    r.fired.emplace(o, w.term(src, memo));
  }
  for (const auto& c : m_.cells) {
    const auto& src = m_.sources(c).front();
    r.next.cells[c] = w.read(src);
    r.fired.emplace(c, w.term(src, memo));
  }
  return r;
}

RunResult Interpreter::run(const std::vector<Valuation>& inputs) const {
  RunResult out;
  InterpState st = initial_state();
  out.outputs.reserve(inputs.size());
  out.trace.steps.reserve(inputs.size());
  for (std::size_t t = 0; t < inputs.size(); ++t) {
    StepResult r;
    try {
      r = step(st, inputs[t]);
    } catch (const Error& e) {
      throw StepError(e.kind(), e.detail(), t);
    }
    out.outputs.push_back(r.outputs);
    out.trace.steps.push_back(TraceStep{inputs[t], std::move(r.fired), std::move(r.outputs)});
    st = std::move(r.next);
  }
  out.final_state = std::move(st);
  return out;
}

}  // namespace tslkit
