#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "tslkit/formula.hpp"

namespace tslkit {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Untyped surface syntax. Whether a name is a signal, a literal or a macro
/// call is only decided at expansion time.
struct Expr {
  enum class Kind {
    Name,      // x
    Constant,  // f()
    Apply,     // f a b  (name = head, args = arguments)
    Update,    // [ name <- args[0] ]
    Bool,      // true / false
    Unary,     // op args[0]
    Binary,    // args[0] op args[1]
  };

  Kind kind = Kind::Bool;
  std::string name;
  std::vector<ExprPtr> args;
  Op op = Op::Const;
  bool value = true;
  std::size_t line = 0;
  std::size_t column = 0;
};

std::string pretty(const Expr& e);

struct Definition {
  std::string name;
  std::vector<std::string> params;
  ExprPtr body;
  std::size_t line = 0;
  std::size_t column = 0;
};

enum class Section { InitiallyAssume, AlwaysAssume, InitiallyGuarantee, AlwaysGuarantee };

std::string_view to_string(Section s) noexcept;

struct SpecFile {
  std::vector<Definition> definitions;
  std::map<Section, std::vector<ExprPtr>> sections;

  const Definition* find(const std::string& name) const;
  std::size_t statement_count(Section s) const;
};

/// Parses the plain-text specification format. Throws SyntaxError (with
/// kind SyntaxError or RecursiveMacro) on malformed input.
SpecFile parse_spec(std::string_view text);

/// Expands every macro call inside `e` using the definitions of `spec`.
ExprPtr expand_macros(const SpecFile& spec, const ExprPtr& e);

/// Expands all sections into one closed formula:
///   (A_init && G A_always) -> (G_init && G G_always)
/// with empty parts omitted. Throws WrongMacroArity, UndefinedName and
/// ArityConflict.
Formula expand(const SpecFile& spec);

/// Typed views of an expanded expression.
Formula to_formula(const Expr& e);
FunctionTerm to_term(const Expr& e);

/// Parses a single formula (no macro environment). A trailing `;` is allowed.
Formula parse_formula(std::string_view text);
FunctionTerm parse_term(std::string_view text);

}  // namespace tslkit
