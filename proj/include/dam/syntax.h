#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "dam/formula.h"

namespace dam {

struct ParseOptions {
  // When set, the left side of every binding and every coalition member
  // must be one of these names (ArityError otherwise).
  std::optional<std::set<std::string>> seller_names;
};

// Concrete syntax:
//
//   formula := iff
//   iff     := imp ('<->' imp)*
//   imp     := or ('->' imp)?                    right associative
//   or      := and ('|' and)*
//   and     := unary ('&' unary)*
//   unary   := '!' unary | '[]' unary | '<>' unary
//            | '[' binding (',' binding)* ']' unary
//            | '<' binding (',' binding)* '>' unary
//            | '[<' names? '>]' unary | '<[' names? ']>' unary
//            | atom
//   binding := ident ':' (ident | 'skip')
//   atom    := ident | 'true' | 'false' | 'wins' '(' subject ')'
//            | sum cmp sum | '(' formula ')'
//   sum     := term (('+' | '-') term)*
//   term    := '-'? number ('*' util)? | '-'? util
//   util    := 'ut' '[' subject ']'
//   subject := ident | '@self'
//   number  := digits ('/' digits)?
//   cmp     := '>=' | '<=' | '>' | '<' | '='
//
// `true`, `false`, `skip`, `wins` and `ut` are reserved.

// Keeps every sugar form as written. Throws SyntaxError or ArityError.
Formula parse_surface(std::string_view src, const ParseOptions& options = {});
// parse_surface followed by desugar.
Formula parse_formula(std::string_view src, const ParseOptions& options = {});

// Every binary connective is parenthesised (chains of one associative
// connective share a single pair). parse_formula(format_formula(f)) equals
// desugar(f), so core formulas round-trip exactly.
std::string format_formula(const Formula& f);

}  // namespace dam
