#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "sprefql/preference.hpp"

namespace sprefql {

/// `prefers(i, j)`: item i is preferred over item j.
using IndexRelation = std::function<bool(std::size_t, std::size_t)>;

struct WinnowStats {
  std::uint64_t pair_comparisons = 0;
  std::uint64_t ask_probes = 0;
  std::size_t max_window_bindsets = 0;  // BNL only
  std::size_t max_window_bindings = 0;  // BNL only: sum of mapping sizes
  std::size_t passes = 0;               // BNL only
};

struct WinnowResult {
  std::vector<Mapping> rows;
  WinnowStats stats;
};

/// Nested-loop winnow: keeps i unless some j (i itself included) is preferred
/// over it. Stops scanning i at its first dominator. Output in input order.
std::vector<std::size_t> nl_kernel(std::size_t n, const IndexRelation& prefers);

/// The same scan with the outer loop split across OpenMP threads. The
/// relation must be safe to call concurrently. Falls back to nl_kernel when
/// built without OpenMP or when `threads` is 1.
std::vector<std::size_t> nl_kernel_parallel(std::size_t n, const IndexRelation& prefers, int threads = 0);

struct BnlTrace {
  std::size_t max_window = 0;
  std::size_t max_window_weight = 0;
  std::size_t passes = 0;
};

/// Block-nested-loop winnow with a window of `capacity` items (0 = unlimited)
/// and an overflow list. Exact for strict partial orders. `weight` (may be empty)
/// gives the per-item size used for the window-weight statistic. Output is
/// sorted by input index.
std::vector<std::size_t> bnl_kernel(std::size_t n, const IndexRelation& prefers, std::size_t capacity,
                                    const std::vector<std::size_t>& weight = {}, BnlTrace* trace = nullptr);

/// Winnow over solution mappings. `threads` > 1 parallelizes the NL scan when
/// the relation's backend is thread-safe.
WinnowResult winnow_nl(const std::vector<Mapping>& rows, const PreferenceRelation& rel, int threads = 1);
WinnowResult winnow_bnl(const std::vector<Mapping>& rows, const PreferenceRelation& rel,
                        std::size_t window_capacity);

}  // namespace sprefql
