#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace tslkit {

enum class LogicOp { And, Or, Not };

std::string_view to_string(LogicOp op) noexcept;

/// The label l(v) of a vertex.
class VertexLabel {
 public:
  enum class Kind { Function, Predicate, Logic, OneHot, Mutex };

  static VertexLabel function(std::string name, std::size_t arity);
  static VertexLabel predicate(std::string name, std::size_t arity);
  static VertexLabel logic(LogicOp op);
  /// k Boolean controls -> Int index in 1..k.
  static VertexLabel one_hot(std::size_t k);
  /// Selector (index 0) plus k data inputs.
  static VertexLabel mutex(std::size_t k);

  Kind kind() const noexcept { return kind_; }
  /// Literal name for functions and predicates.
  const std::string& name() const noexcept { return name_; }
  LogicOp logic_op() const noexcept { return op_; }
  /// k for OneHot and Mutex.
  std::size_t k() const noexcept { return k_; }
  /// Number of sources the vertex must have.
  std::size_t arity() const noexcept;

  friend bool operator==(const VertexLabel&, const VertexLabel&) = default;

 private:
  Kind kind_ = Kind::Function;
  std::string name_;
  LogicOp op_ = LogicOp::Not;
  std::size_t k_ = 0;
};

std::string describe(const VertexLabel& l);

/// (I, O, C, V, l, delta). `deps` maps every output, cell and vertex to its
/// ordered sources.
struct Cfm {
  std::set<std::string> inputs;
  std::set<std::string> outputs;
  std::set<std::string> cells;
  std::map<std::string, VertexLabel> vertices;
  std::map<std::string, std::vector<std::string>> deps;

  const std::vector<std::string>& sources(const std::string& sink) const;

  friend bool operator==(const Cfm&, const Cfm&) = default;
};

struct CfmViolation {
  enum class Kind {
    ArityMismatch,
    MultipleWriters,
    MissingWriter,
    DanglingReference,
    CellFreeCycle,
    NameClash,
  };

  Kind kind;
  std::string subject;
  std::string message;
  /// CellFreeCycle only: x0 <- x1 <- ... <- x0, first element repeated at the end.
  std::vector<std::string> cycle;
};

std::string_view to_string(CfmViolation::Kind kind) noexcept;

/// Every structural problem, in a deterministic order. Empty means valid.
std::vector<CfmViolation> validate(const Cfm& m);

enum class TieBreak { Forward, Reverse };

/// Vertices ordered so that each follows its vertex sources. Ready vertices
/// are taken smallest id first (Forward) or largest first (Reverse).
/// Throws CycleDetected.
std::vector<std::string> topo_order(const Cfm& m, TieBreak tie = TieBreak::Forward);

/// JSON document:
///   {"v": 1, "inputs": [..], "outputs": [..], "cells": [..],
///    "vertices": {"id": {"kind": "function", "name": "f", "arity": 1}, ..},
///    "deps": {"sink": ["src", ..], ..}}
/// Vertex kinds: function/predicate (name, arity), logic (op), onehot (k),
/// mutex (k). Throws SchemaError naming the offending path.
Cfm read_cfm(std::string_view text);
std::string write_cfm(const Cfm& m);

}  // namespace tslkit
