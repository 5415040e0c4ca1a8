#pragma once

#include <vector>

#include "sprefql/sprefql_ast.hpp"

namespace sprefql {

/// Exchanges each left[i] with right[i].
Expression swap_sides(const Expression& e, const std::vector<Variable>& left,
                      const std::vector<Variable>& right);

/// (P ∧ ¬swap(Q)) ∨ (Q ∧ ¬swap(P)), simplified.
Expression unfold_pareto(const Expression& p, const Expression& q, const std::vector<Variable>& left,
                         const std::vector<Variable>& right);

/// P ∨ (¬P ∧ ¬swap(P) ∧ Q), simplified.
Expression unfold_prioritized(const Expression& p, const Expression& q, const std::vector<Variable>& left,
                              const std::vector<Variable>& right);

/// A whole preference body as one constraint, compositions unfolded
/// bottom-up.
Expression unfold(const PreferenceExpr& body, const std::vector<Variable>& left,
                  const std::vector<Variable>& right);

/// Boolean constant folding and double-negation removal. Only subexpressions
/// whose value is always a boolean or an error are touched, so the result
/// evaluates identically.
Expression simplify(const Expression& e);

struct RewriteResult {
  SparqlQuery query;
  VariableMap fresh;  // original name -> introduced name
};

/// Standard SPARQL equivalent of a SPREFQL query:
///
///   SELECT X WHERE { P FILTER NOT EXISTS { P' FILTER C' } } + base modifiers
///
/// P' is P with X renamed to the left PREFER list and every other variable
/// renamed to a fresh one; C' is the unfolded body with the right list
/// renamed to X. Left-list names that already occur in the base are replaced
/// by fresh names in both P' and C', as are other variables of C' that would
/// be captured. Fresh names are `<name>_tmp`, `<name>_tmp2`, ... avoiding every
/// variable of the query. Without a PREFER clause the base is returned as is.
/// Throws IllFormedPrefer for ill-formed input and UnsupportedFeature when
/// the base uses GROUP BY / HAVING.
RewriteResult rewrite(const QueryAst& q);

}  // namespace sprefql
