#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "sprefql/backend.hpp"
#include "sprefql/sprefql_ast.hpp"

namespace sprefql {

struct PreferenceOptions {
  /// Evaluate every basic preference with an ASK probe, even when the body
  /// has no graph pattern and could be evaluated in process.
  bool force_ask = false;
  /// Memoize basic-preference outcomes per (node, pair of projected rows).
  bool cache_probes = false;
};

/// The binary relation `a ≻ b` induced by a PREFER clause over solutions of
/// the query base.
///
/// A basic preference C holds for (a, b) iff
///   ASK { FILTER C VALUES (L L') { (a(X) b(X)) } }
/// is true, X being the projection, L / L' the two PREFER lists (unbound
/// cells become UNDEF). Compositions:
///   P AND Q       : (P(a,b) ∧ ¬Q(b,a)) ∨ (Q(a,b) ∧ ¬P(b,a))
///   P PRIOR TO Q  : P(a,b) ∨ (¬P(a,b) ∧ ¬P(b,a) ∧ Q(a,b))
///
/// Thread-safe when the backend is.
class PreferenceRelation {
 public:
  PreferenceRelation(PreferClause clause, std::vector<Variable> projection,
                     std::shared_ptr<Backend> backend, PrefixMap prefixes = {},
                     PreferenceOptions options = {});

  /// True iff `a` is preferred over `b`. Counts one pair comparison.
  bool prefers(const Mapping& a, const Mapping& b) const;

  /// Basic-preference evaluations not answered by the cache.
  std::uint64_t ask_probes() const { return probes_.load(std::memory_order_relaxed); }
  /// Calls to prefers().
  std::uint64_t pair_comparisons() const { return pairs_.load(std::memory_order_relaxed); }
  void reset_counters() const;

  bool concurrency_safe() const { return backend_->concurrency_safe(); }
  const PreferClause& clause() const { return clause_; }
  const std::vector<Variable>& projection() const { return projection_; }

  /// The ASK query probing basic preference `c` on (a, b).
  SparqlQuery probe_query(const Expression& c, const Mapping& a, const Mapping& b) const;

 private:
  bool eval(const PreferenceExpr& p, const Mapping& a, const Mapping& b) const;
  bool basic(const PreferenceExpr& p, const Mapping& a, const Mapping& b) const;
  std::string cache_key(const PreferenceExpr& p, const Mapping& a, const Mapping& b) const;

  PreferClause clause_;
  std::vector<Variable> projection_;
  std::shared_ptr<Backend> backend_;
  PrefixMap prefixes_;
  PreferenceOptions options_;

  mutable std::atomic<std::uint64_t> probes_{0};
  mutable std::atomic<std::uint64_t> pairs_{0};
  mutable std::mutex cache_mutex_;
  mutable std::unordered_map<std::string, bool> cache_;
};

}  // namespace sprefql
