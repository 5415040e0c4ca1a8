#pragma once

#include <string_view>
#include <vector>

#include "sprefql/error.hpp"
#include "sprefql/sprefql_ast.hpp"

namespace sprefql {

/// Parses a SPREFQL query: a SPARQL SELECT whose solution modifiers may carry
///
///   PREFER VarList TO VarList IF ParetoPref
///
/// between HAVING and ORDER BY. `PRIOR TO` binds tighter than `AND`; both
/// associate to the right; parentheses group. Throws SyntaxError,
/// UnsupportedFeature, or IllFormedPrefer when validate() reports anything.
QueryAst parse_sprefql(std::string_view text);

/// As parse_sprefql, without the well-formedness check.
QueryAst parse_sprefql_unchecked(std::string_view text);

/// Parses only a preference body (`( ... ) AND ( ... ) PRIOR TO ...`).
PreferenceExpr parse_preference_body(std::string_view text, const PrefixMap& prefixes = {});

/// Well-formedness diagnostics of the PREFER clause; empty iff well-formed.
///
/// Conditions: `projection` (PREFER needs a SELECT with an explicit variable
/// list), `arity` (both lists as long as the projection), `distinct` (no
/// variable repeated across the two lists), `free-variable` (a basic
/// preference mentions, outside EXISTS patterns, a variable not in either
/// list). Reusing projection names inside the PREFER lists is legal.
std::vector<Diagnostic> validate(const QueryAst& q);

/// The query base with the PREFER clause dropped.
inline const SparqlQuery& query_base(const QueryAst& q) { return q.base; }

}  // namespace sprefql
