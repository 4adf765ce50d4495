#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "tslkit/cfm.hpp"

namespace tslkit {

enum class GenStyle { Arrowized, Monadic, ApplicativeClocked };

/// "arrow", "monad", "applicative".
std::string_view to_string(GenStyle s) noexcept;
std::optional<GenStyle> parse_style(std::string_view name) noexcept;

/// Type signature of the control block, ending in a newline.
/// Parameter order: constraint, cell implementation (only with cells),
/// literals (alphabetical), cell initial values, output initial values
/// (Applicative only), inputs; result = cells then outputs.
std::string gen_signature(const Cfm& m, GenStyle s);

/// Equation for the control block: cell reads, applications, control
/// signals and selections in forward topological order, then the return.
std::string gen_control(const Cfm& m, GenStyle s);

/// Complete module text: pragmas, signature, control and any helpers used.
/// Throws InvalidCfm for models that fail validation.
std::string generate(const Cfm& m, GenStyle s);

/// Haskell identifier used for a literal: the literal itself unless it
/// clashes with a keyword, a Prelude name used by the template, or a
/// generated wire name; then `lit_<name>`.
std::string literal_ident(const std::string& literal);

}  // namespace tslkit
