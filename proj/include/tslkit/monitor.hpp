#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "tslkit/formula.hpp"
#include "tslkit/value.hpp"

namespace tslkit {

/// One time step: the input valuation and the update fired for every output
/// and cell. `outputs` is only filled by simulation and is ignored by the
/// monitor.
struct TraceStep {
  Valuation inputs;
  std::map<std::string, FunctionTerm> fired;
  Valuation outputs;
};

struct FiniteTrace {
  std::vector<TraceStep> steps;
};

class Verdict {
 public:
  enum class Kind { Sat, Viol, Inconclusive };

  static Verdict sat();
  /// `obligation` is the residual that the violating step falsified.
  static Verdict viol(std::size_t step, Formula obligation);
  static Verdict inconclusive(Formula residual);

  Kind kind() const noexcept { return kind_; }
  bool is_sat() const noexcept { return kind_ == Kind::Sat; }
  bool is_viol() const noexcept { return kind_ == Kind::Viol; }
  bool is_inconclusive() const noexcept { return kind_ == Kind::Inconclusive; }
  std::size_t at_step() const;
  /// Inconclusive: the open obligation. Viol: the obligation that failed.
  const Formula& residual() const noexcept { return residual_; }

  /// Same kind and, for violations, same step. Residuals are not compared.
  bool same_outcome(const Verdict& other) const noexcept;

 private:
  Kind kind_ = Kind::Sat;
  std::size_t step_ = 0;
  Formula residual_;
};

std::string to_string(const Verdict& v);

/// cells[0] = initial values; cells[t + 1][c] = value of the term fired into
/// c at step t, evaluated on inputs[t] and cells[t]. Returns steps + 1
/// valuations. Cells are the keys of `a.cell_init()`.
std::vector<Valuation> cell_stream(const FiniteTrace& trace, const Assignment& a);

/// Atom truth values keyed by the atom's pretty-printed text.
using AtomValuation = std::map<std::string, bool>;

std::string atom_key(const Formula& atom);

/// Truth of every atom in `f` at one step. Update atoms are true iff the
/// sink fired exactly that term; predicates are evaluated.
AtomValuation step_atoms(const Formula& f, const TraceStep& step, const Valuation& cells,
                         const Assignment& a);

/// Sound Boolean rewriting: constant folding, double negation, idempotence,
/// absorption and constant temporal operands. Complements (a && !a) are
/// deliberately left alone so that equivalent spellings resolve alike.
Formula simplify(const Formula& f);

/// One-step progression; the result is the obligation for the rest of the
/// trace. Every atom of `f` must be present in `atoms`.
Formula progress(const Formula& f, const AtomValuation& atoms);

/// Desugars `f`, then folds progression over the trace. Residuals in the
/// verdict are therefore core formulas. Errors are rethrown as StepError.
Verdict monitor(const Formula& f, const FiniteTrace& trace, const Assignment& a);

/// Line-delimited trace records, one JSON object per step:
///   {"in": {"x": 1, "b": true}, "fired": {"o": "f x"}, "out": {"o": 2}}
/// `fired` and `out` are optional on input. Blank lines are skipped.
FiniteTrace read_trace(std::istream& in);
void write_trace(std::ostream& out, const FiniteTrace& trace);
std::string step_to_json_line(const TraceStep& step);

}  // namespace tslkit
