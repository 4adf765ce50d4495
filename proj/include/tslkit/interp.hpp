#pragma once

#include <map>
#include <string>
#include <vector>

#include "tslkit/cfm.hpp"
#include "tslkit/formula.hpp"
#include "tslkit/monitor.hpp"
#include "tslkit/value.hpp"

namespace tslkit {

struct InterpState {
  Valuation cells;

  friend bool operator==(const InterpState&, const InterpState&) = default;
};

struct StepResult {
  Valuation outputs;
  InterpState next;
  /// One term per output and cell.
  std::map<std::string, FunctionTerm> fired;
};

struct RunResult {
  std::vector<Valuation> outputs;
  /// inputs, fired and outputs per step
  FiniteTrace trace;
  InterpState final_state;
};

/// Steps a CFM. Construction validates the model (InvalidCfm) and fixes the
/// evaluation order.
class Interpreter {
 public:
  Interpreter(Cfm m, Assignment a, TieBreak tie = TieBreak::Forward);

  const Cfm& model() const noexcept { return m_; }
  const Assignment& assignment() const noexcept { return a_; }
  const std::vector<std::string>& order() const noexcept { return order_; }

  /// Cell values from the assignment. Throws MissingSignal for a cell
  /// without an initial value.
  InterpState initial_state() const;

  /// Cell reads see `st`; outputs see this step's wires. Throws
  /// MutexNotOneHot, SelectorOutOfRange, MissingSignal and evaluation errors.
  StepResult step(const InterpState& st, const Valuation& inputs) const;

  /// Folds step from the initial state. The first failure is rethrown as a
  /// StepError carrying its step index.
  RunResult run(const std::vector<Valuation>& inputs) const;

 private:
  Cfm m_;
  Assignment a_;
  std::vector<std::string> order_;
};

}  // namespace tslkit
