#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace tslkit {

/// True for names of the form `[a-zA-Z][a-zA-Z0-9_]*`.
bool is_identifier(const std::string& name) noexcept;

/// A function term: either a signal read (input or cell) or a literal applied
/// to argument terms. Constants are applications with no arguments.
class FunctionTerm {
 public:
  static FunctionTerm signal(std::string name);
  static FunctionTerm apply(std::string literal, std::vector<FunctionTerm> args = {});

  bool is_signal() const noexcept { return !applied_; }
  bool is_apply() const noexcept { return applied_; }
  const std::string& name() const noexcept { return name_; }
  const std::vector<FunctionTerm>& args() const noexcept { return args_; }

  friend bool operator==(const FunctionTerm&, const FunctionTerm&) = default;

 private:
  std::string name_;
  std::vector<FunctionTerm> args_;
  bool applied_ = false;
};

/// A term in Boolean position. An applied literal is a predicate; a bare
/// signal is read directly as a Boolean.
struct PredicateTerm {
  FunctionTerm term;

  friend bool operator==(const PredicateTerm&, const PredicateTerm&) = default;
};

/// `[ sink <- term ]`
struct Update {
  std::string sink;
  FunctionTerm term;

  friend bool operator==(const Update&, const Update&) = default;
};

enum class Op {
  Predicate,
  Update,
  Const,
  Not,
  And,
  Or,
  Implies,
  Iff,
  Xor,
  Next,
  Until,
  WeakUntil,
  Release,
  Finally,
  Globally,
};

bool is_unary(Op op) noexcept;
bool is_binary(Op op) noexcept;
/// Ops that survive desugaring.
bool is_core(Op op) noexcept;

/// Immutable TSL formula. Copies share structure; equality is structural.
class Formula {
 public:
  Formula();  // `true`

  static Formula predicate(PredicateTerm p);
  static Formula update(Update u);
  static Formula constant(bool value);
  static Formula unary(Op op, Formula operand);
  static Formula binary(Op op, Formula lhs, Formula rhs);

  static Formula negate(Formula f) { return unary(Op::Not, std::move(f)); }
  static Formula conj(Formula a, Formula b) { return binary(Op::And, std::move(a), std::move(b)); }
  static Formula disj(Formula a, Formula b) { return binary(Op::Or, std::move(a), std::move(b)); }
  static Formula next(Formula f) { return unary(Op::Next, std::move(f)); }
  static Formula until(Formula a, Formula b) { return binary(Op::Until, std::move(a), std::move(b)); }
  static Formula globally(Formula f) { return unary(Op::Globally, std::move(f)); }
  static Formula finally(Formula f) { return unary(Op::Finally, std::move(f)); }

  Op op() const noexcept;
  bool is_atom() const noexcept { return op() == Op::Predicate || op() == Op::Update; }
  bool is_const() const noexcept { return op() == Op::Const; }
  bool is_true() const noexcept;
  bool is_false() const noexcept;

  // Accessors; each is only valid for the matching op.
  bool value() const;
  const PredicateTerm& predicate_term() const;
  const Update& update_term() const;
  const Formula& operand() const;  // unary
  const Formula& lhs() const;      // binary
  const Formula& rhs() const;      // binary

  /// Node count.
  std::size_t size() const noexcept;
  std::size_t depth() const noexcept;

  friend bool operator==(const Formula& a, const Formula& b) noexcept;

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Rewrites every derived operator into Not/And/Next/Until.
Formula desugar(const Formula& f);

/// Display form of a core formula: folds `true U a` to F a, `!(true U !a)`
/// to G a, `!(!a && !b)` to a || b and `!(a && !b)` to a -> b.
/// desugar(resugar(f)) == f for every core f.
Formula resugar(const Formula& f);

/// The signal and literal roles implied by a formula.
struct SignalRoles {
  std::set<std::string> inputs;
  std::set<std::string> outputs;
  std::set<std::string> cells;
  std::map<std::string, std::size_t> functions;   // literal -> arity
  std::map<std::string, std::size_t> predicates;  // literal -> arity
};

/// Throws ArityConflict when a literal is used with two arities and
/// RoleConflict when a name is used both as a signal and as a literal.
SignalRoles classify_signals(const Formula& f);

/// Collects every atom (predicate or update literal) in first-occurrence order,
/// without duplicates.
std::vector<Formula> atoms_of(const Formula& f);

std::string pretty(const FunctionTerm& t);
std::string pretty(const Update& u);
/// Concrete syntax accepted by parse_formula; parse_formula(pretty(f)) == f.
std::string pretty(const Formula& f);

}  // namespace tslkit
