#include "sprefql/preference.hpp"

#include "sprefql/error.hpp"
#include "sprefql/sparql_eval.hpp"
#include "sprefql/turtle.hpp"

namespace sprefql {

namespace {

// L_i -> a(X_i), L'_i -> b(X_i), without materializing a merged mapping.
class PairBindings final : public Bindings {
 public:
  PairBindings(const PreferClause& c, const std::vector<Variable>& x, const Mapping& a, const Mapping& b)
      : c_(c), x_(x), a_(a), b_(b) {}

  const RdfTerm* find(const Variable& v) const override {
    for (std::size_t i = 0; i < x_.size(); ++i) {
      if (c_.left[i] == v) return a_.get(x_[i]);
      if (c_.right[i] == v) return b_.get(x_[i]);
    }
    return nullptr;
  }

  Mapping materialize() const override {
    Mapping m;
    for (std::size_t i = 0; i < x_.size(); ++i) {
      if (const auto* t = a_.get(x_[i])) m.set(c_.left[i], *t);
      if (const auto* t = b_.get(x_[i])) m.set(c_.right[i], *t);
    }
    return m;
  }

 private:
  const PreferClause& c_;
  const std::vector<Variable>& x_;
  const Mapping& a_;
  const Mapping& b_;
};

const Dataset& empty_dataset() {
  static const Dataset ds;
  return ds;
}

}  // namespace

PreferenceRelation::PreferenceRelation(PreferClause clause, std::vector<Variable> projection,
                                       std::shared_ptr<Backend> backend, PrefixMap prefixes,
                                       PreferenceOptions options)
    : clause_(std::move(clause)),
      projection_(std::move(projection)),
      backend_(std::move(backend)),
      prefixes_(std::move(prefixes)),
      options_(options) {
  if (clause_.left.size() != projection_.size() || clause_.right.size() != projection_.size()) {
    throw ContractViolation("PREFER lists must match the projection length");
  }
  if (!backend_) throw ContractViolation("PreferenceRelation needs a backend");
}

void PreferenceRelation::reset_counters() const {
  probes_.store(0, std::memory_order_relaxed);
  pairs_.store(0, std::memory_order_relaxed);
}

bool PreferenceRelation::prefers(const Mapping& a, const Mapping& b) const {
  pairs_.fetch_add(1, std::memory_order_relaxed);
  return eval(clause_.body, a, b);
}

bool PreferenceRelation::eval(const PreferenceExpr& p, const Mapping& a, const Mapping& b) const {
  using PK = PreferenceExpr::Kind;
  switch (p.kind) {
    case PK::Simple: return basic(p, a, b);
    case PK::Pareto: {
      const auto& l = p.lhs();
      const auto& r = p.rhs();
      return (eval(l, a, b) && !eval(r, b, a)) || (eval(r, a, b) && !eval(l, b, a));
    }
    case PK::Prioritized: {
      const auto& l = p.lhs();
      if (eval(l, a, b)) return true;
      return !eval(l, b, a) && eval(p.rhs(), a, b);
    }
  }
  return false;
}

SparqlQuery PreferenceRelation::probe_query(const Expression& c, const Mapping& a, const Mapping& b) const {
  SparqlQuery q;
  q.form = QueryForm::Ask;
  q.prefixes = prefixes_;
  ValuesBlock vb;
  vb.variables = clause_.left;
  vb.variables.insert(vb.variables.end(), clause_.right.begin(), clause_.right.end());
  std::vector<std::optional<RdfTerm>> row;
  for (const auto& x : projection_) {
    const RdfTerm* t = a.get(x);
    row.push_back(t ? std::optional<RdfTerm>(*t) : std::nullopt);
  }
  for (const auto& x : projection_) {
    const RdfTerm* t = b.get(x);
    row.push_back(t ? std::optional<RdfTerm>(*t) : std::nullopt);
  }
  vb.rows.push_back(std::move(row));
  q.where.elements.emplace_back(Filter{c});
  q.where.elements.emplace_back(std::move(vb));
  return q;
}

std::string PreferenceRelation::cache_key(const PreferenceExpr& p, const Mapping& a, const Mapping& b) const {
  std::string key = std::to_string(reinterpret_cast<std::uintptr_t>(&p));
  for (const Mapping* m : {&a, &b}) {
    for (const auto& x : projection_) {
      key += '\x1f';
      if (const RdfTerm* t = m->get(x)) key += ntriples_term(*t);
    }
    key += '\x1e';
  }
  return key;
}

bool PreferenceRelation::basic(const PreferenceExpr& p, const Mapping& a, const Mapping& b) const {
  std::string key;
  if (options_.cache_probes) {
    key = cache_key(p, a, b);
    std::lock_guard lock(cache_mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  probes_.fetch_add(1, std::memory_order_relaxed);
  bool result = false;
  if (!options_.force_ask && !mentions_pattern(p.constraint)) {
    PairBindings view(clause_, projection_, a, b);
    result = effective_boolean(p.constraint, view, empty_dataset()) == true;
  } else {
    result = backend_->ask(probe_query(p.constraint, a, b));
  }
  if (options_.cache_probes) {
    std::lock_guard lock(cache_mutex_);
    cache_.emplace(std::move(key), result);
  }
  return result;
}

}  // namespace sprefql
