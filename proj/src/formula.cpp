#include "tslkit/formula.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "tslkit/error.hpp"

namespace tslkit {

bool is_identifier(const std::string& name) noexcept {
  if (name.empty() || !std::isalpha(static_cast<unsigned char>(name.front()))) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

FunctionTerm FunctionTerm::signal(std::string name) {
  FunctionTerm t;
  t.name_ = std::move(name);
  return t;
}

FunctionTerm FunctionTerm::apply(std::string literal, std::vector<FunctionTerm> args) {
  FunctionTerm t;
  t.name_ = std::move(literal);
  t.args_ = std::move(args);
  t.applied_ = true;
  return t;
}

bool is_unary(Op op) noexcept {
  return op == Op::Not || op == Op::Next || op == Op::Finally || op == Op::Globally;
}

bool is_binary(Op op) noexcept {
  switch (op) {
    case Op::And:
    case Op::Or:
    case Op::Implies:
    case Op::Iff:
    case Op::Xor:
    case Op::Until:
    case Op::WeakUntil:
    case Op::Release:
      return true;
    default:
      return false;
  }
}

bool is_core(Op op) noexcept {
  switch (op) {
    case Op::Predicate:
    case Op::Update:
    case Op::Const:
    case Op::Not:
    case Op::And:
    case Op::Next:
    case Op::Until:
      return true;
    default:
      return false;
  }
}

// Children live in a vector so that a Node never default-constructs a Formula.
struct Formula::Node {
  Op op = Op::Const;
  bool value = true;
  PredicateTerm pred;
  Update upd;
  std::vector<Formula> kids;
  std::size_t size = 1;
  std::size_t depth = 1;
};

Formula::Formula() : node_(constant(true).node_) {}

Formula Formula::predicate(PredicateTerm p) {
  auto n = std::make_shared<Node>();
  n->op = Op::Predicate;
  n->pred = std::move(p);
  return Formula(std::move(n));
}

Formula Formula::update(Update u) {
  auto n = std::make_shared<Node>();
  n->op = Op::Update;
  n->upd = std::move(u);
  return Formula(std::move(n));
}

Formula Formula::constant(bool value) {
  static const Formula t = [] {
    auto n = std::make_shared<Node>();
    n->op = Op::Const;
    n->value = true;
    return Formula(std::move(n));
  }();
  static const Formula f = [] {
    auto n = std::make_shared<Node>();
    n->op = Op::Const;
    n->value = false;
    return Formula(std::move(n));
  }();
  return value ? t : f;
}

Formula Formula::unary(Op op, Formula operand) {
  if (!is_unary(op)) throw std::invalid_argument("Formula::unary: not a unary operator");
  auto n = std::make_shared<Node>();
  n->op = op;
  n->size = operand.size() + 1;
  n->depth = operand.depth() + 1;
  n->kids.push_back(std::move(operand));
  return Formula(std::move(n));
}

Formula Formula::binary(Op op, Formula lhs, Formula rhs) {
  if (!is_binary(op)) throw std::invalid_argument("Formula::binary: not a binary operator");
  auto n = std::make_shared<Node>();
  n->op = op;
  n->size = lhs.size() + rhs.size() + 1;
  n->depth = std::max(lhs.depth(), rhs.depth()) + 1;
  n->kids.push_back(std::move(lhs));
  n->kids.push_back(std::move(rhs));
  return Formula(std::move(n));
}

Op Formula::op() const noexcept { return node_->op; }
bool Formula::is_true() const noexcept { return node_->op == Op::Const && node_->value; }
bool Formula::is_false() const noexcept { return node_->op == Op::Const && !node_->value; }
std::size_t Formula::size() const noexcept { return node_->size; }
std::size_t Formula::depth() const noexcept { return node_->depth; }

bool Formula::value() const {
  if (node_->op != Op::Const) throw std::logic_error("Formula::value on non-constant");
  return node_->value;
}

const PredicateTerm& Formula::predicate_term() const {
  if (node_->op != Op::Predicate) throw std::logic_error("Formula::predicate_term on non-predicate");
  return node_->pred;
}

const Update& Formula::update_term() const {
  if (node_->op != Op::Update) throw std::logic_error("Formula::update_term on non-update");
  return node_->upd;
}

const Formula& Formula::operand() const {
  if (!is_unary(node_->op)) throw std::logic_error("Formula::operand on non-unary");
  return node_->kids[0];
}

const Formula& Formula::lhs() const {
  if (!is_binary(node_->op)) throw std::logic_error("Formula::lhs on non-binary");
  return node_->kids[0];
}

const Formula& Formula::rhs() const {
  if (!is_binary(node_->op)) throw std::logic_error("Formula::rhs on non-binary");
  return node_->kids[1];
}

bool operator==(const Formula& a, const Formula& b) noexcept {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.op != y.op || x.size != y.size) return false;
  switch (x.op) {
    case Op::Const: return x.value == y.value;
    case Op::Predicate: return x.pred == y.pred;
    case Op::Update: return x.upd == y.upd;
    default: return x.kids == y.kids;
  }
}

// --- desugaring --------------------------------------------------------------

namespace {

Formula neg(Formula f) { return Formula::negate(std::move(f)); }
Formula conj(Formula a, Formula b) { return Formula::conj(std::move(a), std::move(b)); }

// a -> b  ==  !(a && !b)
Formula implies_core(const Formula& a, const Formula& b) { return neg(conj(a, neg(b))); }

}  // namespace

Formula desugar(const Formula& f) {
  switch (f.op()) {
    case Op::Predicate:
    case Op::Update:
    case Op::Const:
      return f;
    case Op::Not:
      return neg(desugar(f.operand()));
    case Op::Next:
      return Formula::next(desugar(f.operand()));
    case Op::And:
      return conj(desugar(f.lhs()), desugar(f.rhs()));
    case Op::Until:
      return Formula::until(desugar(f.lhs()), desugar(f.rhs()));
    case Op::Or:
      return neg(conj(neg(desugar(f.lhs())), neg(desugar(f.rhs()))));
    case Op::Implies:
      return implies_core(desugar(f.lhs()), desugar(f.rhs()));
    case Op::Iff: {
      auto a = desugar(f.lhs());
      auto b = desugar(f.rhs());
      return conj(implies_core(a, b), implies_core(b, a));
    }
    case Op::Xor: {
      auto a = desugar(f.lhs());
      auto b = desugar(f.rhs());
      return neg(conj(implies_core(a, b), implies_core(b, a)));
    }
    case Op::Finally:
      return Formula::until(Formula::constant(true), desugar(f.operand()));
    case Op::Globally:
      return neg(Formula::until(Formula::constant(true), neg(desugar(f.operand()))));
    case Op::Release: {
      auto a = desugar(f.lhs());
      auto b = desugar(f.rhs());
      return neg(Formula::until(neg(a), neg(b)));
    }
    case Op::WeakUntil: {
      auto a = desugar(f.lhs());
      auto b = desugar(f.rhs());
      return neg(Formula::until(neg(b), conj(neg(a), neg(b))));
    }
  }
  throw std::logic_error("desugar: unknown operator");
}

Formula resugar(const Formula& f) {
  if (f.is_atom() || f.is_const()) return f;
  if (f.op() == Op::Until && f.lhs().is_true()) return Formula::finally(resugar(f.rhs()));
  if (f.op() == Op::Not) {
    const Formula& g = f.operand();
    if (g.op() == Op::Until && g.lhs().is_true() && g.rhs().op() == Op::Not) {
      return Formula::globally(resugar(g.rhs().operand()));
    }
    if (g.op() == Op::And && g.rhs().op() == Op::Not) {
      if (g.lhs().op() == Op::Not) return Formula::disj(resugar(g.lhs().operand()), resugar(g.rhs().operand()));
      return Formula::binary(Op::Implies, resugar(g.lhs()), resugar(g.rhs().operand()));
    }
  }
  if (is_unary(f.op())) return Formula::unary(f.op(), resugar(f.operand()));
  return Formula::binary(f.op(), resugar(f.lhs()), resugar(f.rhs()));
}

// --- classification ----------------------------------------------------------

namespace {

struct RoleCollector {
  std::set<std::string> reads;
  std::set<std::string> writes;
  std::map<std::string, std::size_t> arity;
  std::set<std::string> predicates;
  std::set<std::string> functions;

  void literal(const std::string& name, std::size_t n) {
    auto [it, inserted] = arity.emplace(name, n);
    if (!inserted && it->second != n) {
      throw Error(ErrorKind::ArityConflict, "literal '" + name + "' used with arities " +
                                                std::to_string(it->second) + " and " +
                                                std::to_string(n));
    }
  }

  void term(const FunctionTerm& t) {
    if (t.is_signal()) {
      reads.insert(t.name());
      return;
    }
    literal(t.name(), t.args().size());
    functions.insert(t.name());
    for (const auto& a : t.args()) term(a);
  }

  void formula(const Formula& f) {
    switch (f.op()) {
      case Op::Const:
        return;
      case Op::Predicate: {
        const auto& t = f.predicate_term().term;
        if (t.is_signal()) {
          reads.insert(t.name());
        } else {
          literal(t.name(), t.args().size());
          predicates.insert(t.name());
          for (const auto& a : t.args()) term(a);
        }
        return;
      }
      case Op::Update:
        writes.insert(f.update_term().sink);
        term(f.update_term().term);
        return;
      default:
        if (is_unary(f.op())) {
          formula(f.operand());
        } else {
          formula(f.lhs());
          formula(f.rhs());
        }
    }
  }
};

}  // namespace

SignalRoles classify_signals(const Formula& f) {
  RoleCollector c;
  c.formula(f);

  SignalRoles roles;
  for (const auto& s : c.writes) {
    (c.reads.count(s) ? roles.cells : roles.outputs).insert(s);
  }
  for (const auto& s : c.reads) {
    if (!c.writes.count(s)) roles.inputs.insert(s);
  }
  for (const auto& [name, n] : c.arity) {
    if (c.reads.count(name) || c.writes.count(name)) {
      throw Error(ErrorKind::RoleConflict,
                  "'" + name + "' is used both as a signal and as a literal");
    }
    if (c.predicates.count(name)) roles.predicates.emplace(name, n);
    if (c.functions.count(name)) roles.functions.emplace(name, n);
  }
  return roles;
}

std::vector<Formula> atoms_of(const Formula& f) {
  std::vector<Formula> out;
  auto visit = [&out](const Formula& g, auto&& self) -> void {
    if (g.is_atom()) {
      if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(g);
    } else if (is_unary(g.op())) {
      self(g.operand(), self);
    } else if (is_binary(g.op())) {
      self(g.lhs(), self);
      self(g.rhs(), self);
    }
  };
  visit(f, visit);
  return out;
}

// --- pretty printing ---------------------------------------------------------

namespace {

// Higher binds tighter. Must agree with the parser's precedence climbing.
int level(Op op) {
  switch (op) {
    case Op::Implies:
    case Op::Iff:
    case Op::Xor:
      return 1;
    case Op::Until:
    case Op::WeakUntil:
    case Op::Release:
      return 2;
    case Op::Or:
      return 3;
    case Op::And:
      return 4;
    case Op::Not:
    case Op::Next:
    case Op::Finally:
    case Op::Globally:
      return 5;
    default:
      return 6;
  }
}

bool left_assoc(Op op) { return op == Op::And || op == Op::Or; }

const char* symbol(Op op) {
  switch (op) {
    case Op::Not: return "!";
    case Op::Next: return "X ";
    case Op::Finally: return "F ";
    case Op::Globally: return "G ";
    case Op::And: return " && ";
    case Op::Or: return " || ";
    case Op::Implies: return " -> ";
    case Op::Iff: return " <-> ";
    case Op::Xor: return " ^ ";
    case Op::Until: return " U ";
    case Op::WeakUntil: return " W ";
    case Op::Release: return " R ";
    default: return "";
  }
}

void print_term(const FunctionTerm& t, std::string& out) {
  if (t.is_signal()) {
    out += t.name();
    return;
  }
  out += t.name();
  if (t.args().empty()) {
    out += "()";
    return;
  }
  for (const auto& a : t.args()) {
    out += ' ';
    bool wrap = a.is_apply() && !a.args().empty();
    if (wrap) out += '(';
    print_term(a, out);
    if (wrap) out += ')';
  }
}

void print(const Formula& f, int min_level, std::string& out) {
  const int lv = level(f.op());
  const bool wrap = lv < min_level;
  if (wrap) out += '(';
  switch (f.op()) {
    case Op::Const:
      out += f.value() ? "true" : "false";
      break;
    case Op::Predicate:
      print_term(f.predicate_term().term, out);
      break;
    case Op::Update:
      out += pretty(f.update_term());
      break;
    default:
      if (is_unary(f.op())) {
        out += symbol(f.op());
        print(f.operand(), 5, out);
      } else {
        const bool la = left_assoc(f.op());
        print(f.lhs(), la ? lv : lv + 1, out);
        out += symbol(f.op());
        print(f.rhs(), la ? lv + 1 : lv, out);
      }
  }
  if (wrap) out += ')';
}

}  // namespace

std::string pretty(const FunctionTerm& t) {
  std::string out;
  print_term(t, out);
  return out;
}

std::string pretty(const Update& u) { return "[ " + u.sink + " <- " + pretty(u.term) + " ]"; }

std::string pretty(const Formula& f) {
  std::string out;
  print(f, 0, out);
  return out;
}

}  // namespace tslkit
