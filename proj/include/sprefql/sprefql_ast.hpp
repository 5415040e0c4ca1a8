#pragma once

#include <optional>
#include <vector>

#include "sprefql/sparql_ast.hpp"

namespace sprefql {

/// Body of a PREFER clause: a basic preference (one SPARQL constraint) or a
/// Pareto (`AND`) / prioritized (`PRIOR TO`) composition of two bodies.
struct PreferenceExpr {
  enum class Kind : std::uint8_t { Simple, Pareto, Prioritized };

  Kind kind = Kind::Simple;
  Expression constraint;                // Simple only
  std::vector<PreferenceExpr> operands;  // exactly two for compositions

  static PreferenceExpr simple(Expression c) {
    PreferenceExpr p;
    p.constraint = std::move(c);
    return p;
  }
  static PreferenceExpr pareto(PreferenceExpr lhs, PreferenceExpr rhs) {
    return compose(Kind::Pareto, std::move(lhs), std::move(rhs));
  }
  static PreferenceExpr prioritized(PreferenceExpr lhs, PreferenceExpr rhs) {
    return compose(Kind::Prioritized, std::move(lhs), std::move(rhs));
  }

  const PreferenceExpr& lhs() const { return operands.at(0); }
  const PreferenceExpr& rhs() const { return operands.at(1); }

  /// No EXISTS / NOT EXISTS anywhere in the body.
  bool intrinsic() const;

  bool operator==(const PreferenceExpr&) const = default;

 private:
  static PreferenceExpr compose(Kind k, PreferenceExpr lhs, PreferenceExpr rhs) {
    PreferenceExpr p;
    p.kind = k;
    p.operands.push_back(std::move(lhs));
    p.operands.push_back(std::move(rhs));
    return p;
  }
};

/// `PREFER left TO right IF body`. The i-th variable of each list stands for
/// the i-th projected variable of the query base.
struct PreferClause {
  std::vector<Variable> left;
  std::vector<Variable> right;
  PreferenceExpr body;

  bool operator==(const PreferClause&) const = default;
};

/// A parsed SPREFQL query: the query base plus an optional preference.
struct QueryAst {
  SparqlQuery base;
  std::optional<PreferClause> prefer;

  bool operator==(const QueryAst&) const = default;
};

}  // namespace sprefql
