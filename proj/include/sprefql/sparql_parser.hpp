#pragma once

#include <string_view>

#include "sprefql/sparql_ast.hpp"

namespace sprefql {

/// Parses a query in the supported SPARQL 1.1 subset: PREFIX, SELECT/ASK,
/// basic graph patterns, FILTER, VALUES, EXISTS/NOT EXISTS, DISTINCT,
/// GROUP BY/HAVING (parsed only), ORDER BY, LIMIT, OFFSET.
///
/// Throws SyntaxError (1-based line:column) on malformed text and
/// UnsupportedFeature naming the construct for OPTIONAL, UNION, property
/// paths, subqueries and other constructs outside the subset. A PREFER
/// clause is a syntax error here; see parse_sprefql.
SparqlQuery parse_sparql(std::string_view text);

/// Parses a standalone expression, e.g. `?a > 3 && bound(?b)`.
Expression parse_expression(std::string_view text, const PrefixMap& prefixes = {});

}  // namespace sprefql
