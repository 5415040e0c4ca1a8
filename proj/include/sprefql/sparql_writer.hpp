#pragma once

#include <string>

#include "sprefql/sprefql_ast.hpp"

namespace sprefql {

/// Term in query syntax. IRIs use a prefixed name when one of `prefixes`
/// covers them with a plain local part; numeric and boolean literals in
/// canonical token form are written bare.
std::string format_term(const RdfTerm& t, const PrefixMap& prefixes = {});

/// Expression with the fewest parentheses that reparse to the same tree.
std::string serialize_expression(const Expression& e, const PrefixMap& prefixes = {});

/// A Constraint as it follows FILTER / HAVING: calls and EXISTS bare,
/// anything else bracketed.
std::string serialize_constraint(const Expression& e, const PrefixMap& prefixes = {});

std::string serialize_group(const GroupPattern& g, const PrefixMap& prefixes = {}, int indent = 0);

/// Plain SPARQL text of a query.
std::string serialize_sparql(const SparqlQuery& q);

std::string serialize_preference(const PreferenceExpr& p, const PrefixMap& prefixes = {});

/// SPREFQL text: the base query with its PREFER clause restored in place.
std::string serialize_sprefql(const QueryAst& q);

}  // namespace sprefql
