#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "sprefql/backend.hpp"
#include "sprefql/spo.hpp"
#include "sprefql/sprefql_ast.hpp"
#include "sprefql/winnow.hpp"

namespace sprefql {

enum class Strategy : std::uint8_t { NestedLoop, BlockNestedLoop, Rewrite, BaseOnly };

const char* strategy_name(Strategy s);
std::optional<Strategy> parse_strategy(std::string_view name);

struct ExecOptions {
  Strategy strategy = Strategy::NestedLoop;
  /// BNL window in binding sets; 0 = unlimited.
  std::size_t window = 0;
  /// Shuffle the base solutions with this seed before winnow.
  std::optional<std::uint64_t> seed_order;
  /// NL outer-loop threads; 1 = serial.
  int threads = 1;
  PreferenceOptions preference;
};

struct ExecResult {
  SolutionSeq solutions;
  WinnowStats stats;
  std::size_t base_rows = 0;  // winnow input size (0 for rewrite / base-only)
};

/// Runs a parsed query. NL and BNL evaluate the base without ORDER BY /
/// LIMIT / OFFSET, winnow the solutions, then sort and slice. Rewrite sends
/// the NOT EXISTS form to the backend; base-only drops the PREFER clause.
ExecResult execute(const QueryAst& q, const std::shared_ptr<Backend>& backend, const ExecOptions& options);

/// Base solutions in winnow input order (modifiers stripped, optional
/// shuffle applied).
std::vector<Mapping> winnow_input(const QueryAst& q, Backend& backend,
                                  std::optional<std::uint64_t> seed_order = std::nullopt);

/// Extensional SPO check of the query's preference over its base solutions.
SpoReport lint_spo(const QueryAst& q, const std::shared_ptr<Backend>& backend,
                   const SpoOptions& options = {}, const PreferenceOptions& pref = {});

/// Fisher–Yates with mt19937_64, reduced by modulo: the permutation depends
/// only on the seed, not on the standard library.
void seeded_shuffle(std::vector<Mapping>& rows, std::uint64_t seed);

}  // namespace sprefql
