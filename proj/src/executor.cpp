#include "sprefql/executor.hpp"

#include <random>

#include "sprefql/error.hpp"
#include "sprefql/rewriter.hpp"
#include "sprefql/sparql_eval.hpp"
#include "sprefql/sprefql.hpp"

namespace sprefql {

const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::NestedLoop: return "nl";
    case Strategy::BlockNestedLoop: return "bnl";
    case Strategy::Rewrite: return "rewrite";
    case Strategy::BaseOnly: return "base-only";
  }
  return "?";
}

std::optional<Strategy> parse_strategy(std::string_view name) {
  for (auto s : {Strategy::NestedLoop, Strategy::BlockNestedLoop, Strategy::Rewrite, Strategy::BaseOnly}) {
    if (name == strategy_name(s)) return s;
  }
  return std::nullopt;
}

void seeded_shuffle(std::vector<Mapping>& rows, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = rows.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(rows[i - 1], rows[j]);
  }
}

std::vector<Mapping> winnow_input(const QueryAst& q, Backend& backend, std::optional<std::uint64_t> seed_order) {
  SparqlQuery base = q.base;
  base.order_by.clear();
  base.limit.reset();
  base.offset.reset();
  std::vector<Mapping> rows = backend.select(base).rows;
  if (seed_order) seeded_shuffle(rows, *seed_order);
  return rows;
}

ExecResult execute(const QueryAst& q, const std::shared_ptr<Backend>& backend, const ExecOptions& options) {
  ExecResult out;
  if (options.strategy == Strategy::BaseOnly || !q.prefer) {
    out.solutions = backend->select(q.base);
    return out;
  }
  if (auto diags = validate(q); !diags.empty()) throw IllFormedPrefer(std::move(diags));
  if (options.strategy == Strategy::Rewrite) {
    out.solutions = backend->select(rewrite(q).query);
    return out;
  }

  std::vector<Mapping> rows = winnow_input(q, *backend, options.seed_order);
  out.base_rows = rows.size();
  PreferenceRelation rel(*q.prefer, q.base.projection, backend, q.base.prefixes, options.preference);
  WinnowResult w;
  if (options.strategy == Strategy::NestedLoop) {
    w = winnow_nl(rows, rel, options.threads);
  } else {
    w = winnow_bnl(rows, rel, options.window);
  }
  out.stats = w.stats;
  const Dataset none;
  sort_solutions(w.rows, q.base.order_by, none);
  slice_solutions(w.rows, q.base.offset, q.base.limit);
  out.solutions.variables = projected_variables(q.base);
  out.solutions.rows = std::move(w.rows);
  return out;
}

SpoReport lint_spo(const QueryAst& q, const std::shared_ptr<Backend>& backend, const SpoOptions& options,
                   const PreferenceOptions& pref) {
  if (!q.prefer) return {};
  if (auto diags = validate(q); !diags.empty()) throw IllFormedPrefer(std::move(diags));
  std::vector<Mapping> rows = winnow_input(q, *backend);
  if (rows.size() > options.max_items) {
    throw SizeLimitError("SPO check limited to " + std::to_string(options.max_items) + " solutions, got " +
                         std::to_string(rows.size()));
  }
  PreferenceRelation rel(*q.prefer, q.base.projection, backend, q.base.prefixes, pref);
  return check_spo(rows, rel, options);
}

}  // namespace sprefql
