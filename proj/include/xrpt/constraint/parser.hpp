#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "xrpt/constraint/constraint.hpp"
#include "xrpt/constraint/linear_expr.hpp"
#include "xrpt/constraint/var_table.hpp"

namespace xrpt {

/// Named integer constants visible to the parser (e.g. input label names).
using SymbolConstants = std::map<std::string, std::int64_t, std::less<>>;

/// Textual constraint syntax:
///
///   formula    := disjunct ('||' disjunct)*
///   disjunct   := unary ('&&' unary)*
///   unary      := '!' unary | '(' formula ')' | comparison | 'true' | 'false' | boolvar
///   comparison := sum relop sum         relop: = == != < <= > >=
///   sum        := product (('+' | '-') product)*
///   product    := factor ('*' factor)*  (at most one non-constant factor)
///   factor     := integer | identifier | 'true' | 'false' | '-' factor | '(' sum ')'
///
/// A bare identifier used as a formula is sugar for `v = 1` and is only
/// accepted for variables whose domain is {0, 1}. Inside arithmetic, `true`
/// and `false` read as 1 and 0. Identifiers resolve to variables first, then
/// to `constants`.
Constraint parse_constraint(std::string_view text, const VarTable& vars, const SymbolConstants* constants = nullptr);
LinearExpr parse_linear_expr(std::string_view text, const VarTable& vars, const SymbolConstants* constants = nullptr);

}  // namespace xrpt
