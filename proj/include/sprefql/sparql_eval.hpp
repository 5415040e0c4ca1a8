#pragma once

#include <functional>
#include <optional>

#include "sprefql/dataset.hpp"
#include "sprefql/sparql_ast.hpp"

namespace sprefql {

/// Read-only variable lookup for expression evaluation. Lets callers evaluate a
/// constraint over a composite view (e.g. a pair of mappings) without building
/// a merged Mapping.
class Bindings {
 public:
  virtual ~Bindings() = default;
  /// Bound term or nullptr.
  virtual const RdfTerm* find(const Variable& v) const = 0;
  /// All bindings as one mapping; seeds EXISTS patterns.
  virtual Mapping materialize() const = 0;
};

class MappingBindings final : public Bindings {
 public:
  explicit MappingBindings(const Mapping& m) : m_(m) {}
  const RdfTerm* find(const Variable& v) const override { return m_.get(v); }
  Mapping materialize() const override { return m_; }

 private:
  const Mapping& m_;
};

/// Value of an expression: a term, or nullopt on a SPARQL type error
/// (including unbound variables).
std::optional<RdfTerm> evaluate(const Expression& e, const Bindings& b, const Dataset& ds);

/// Effective boolean value; nullopt on error. FILTER keeps a solution only
/// when this is `true`.
std::optional<bool> effective_boolean(const Expression& e, const Bindings& b, const Dataset& ds);

/// Streams the solutions of a group pattern, each extending `seed`
/// (substitution semantics for EXISTS). The callback returns false to stop.
/// Returns false iff stopped early.
bool for_each_solution(const Dataset& ds, const GroupPattern& g, const Mapping& seed,
                       const std::function<bool(const Mapping&)>& emit);

/// Evaluates a SELECT query. GROUP BY / HAVING raise UnsupportedFeature.
/// Order of operations: pattern, ORDER BY, projection, DISTINCT, OFFSET, LIMIT.
SolutionSeq eval_select(const Dataset& ds, const SparqlQuery& q);

/// Evaluates an ASK query (true iff the pattern has a solution).
bool eval_ask(const Dataset& ds, const SparqlQuery& q);

/// Stable sort by ORDER BY conditions.
void sort_solutions(std::vector<Mapping>& rows, const std::vector<OrderCondition>& order,
                    const Dataset& ds);

/// Applies OFFSET then LIMIT in place.
void slice_solutions(std::vector<Mapping>& rows, std::optional<std::uint64_t> offset,
                     std::optional<std::uint64_t> limit);

/// Projection variables of a SELECT (explicit list, or in-scope order for *).
std::vector<Variable> projected_variables(const SparqlQuery& q);

}  // namespace sprefql
