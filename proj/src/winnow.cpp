#include "sprefql/winnow.hpp"

#include <algorithm>
#include <atomic>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif


namespace sprefql {

std::vector<std::size_t> nl_kernel(std::size_t n, const IndexRelation& prefers) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < n && !dominated; ++j) dominated = prefers(j, i);
    if (!dominated) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> nl_kernel_parallel(std::size_t n, const IndexRelation& prefers, int threads) {
#ifdef _OPENMP
  if (threads <= 0) threads = omp_get_max_threads();
  if (threads == 1 || n < 2) return nl_kernel(n, prefers);
  std::vector<char> keep(n, 0);
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 8) num_threads(threads)
  for (std::int64_t ii = 0; ii < count; ++ii) {
    if (failed.load(std::memory_order_relaxed)) continue;
    const auto i = static_cast<std::size_t>(ii);
    try {
      bool dominated = false;
      for (std::size_t j = 0; j < n && !dominated; ++j) dominated = prefers(j, i);
      keep[i] = dominated ? 0 : 1;
    } catch (...) {
#pragma omp critical(sprefql_nl_failure)
      if (!failure) failure = std::current_exception();
      failed.store(true);
    }
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (keep[i]) out.push_back(i);
  }
  return out;
#else
  (void)threads;
  return nl_kernel(n, prefers);
#endif
}

std::vector<std::size_t> bnl_kernel(std::size_t n, const IndexRelation& prefers, std::size_t capacity,
                                    const std::vector<std::size_t>& weight, BnlTrace* trace) {
  if (capacity == 0) capacity = std::max<std::size_t>(n, 1);
  struct Entry {
    std::size_t item;
    std::size_t stamp;  // overflow writes of its pass when it entered the window
    std::size_t pass;
  };
  auto w_of = [&](std::size_t i) { return weight.empty() ? std::size_t{1} : weight[i]; };

  BnlTrace local;
  std::vector<Entry> window;
  std::vector<std::size_t> out;
  std::vector<std::size_t> input(n);
  for (std::size_t i = 0; i < n; ++i) input[i] = i;

  auto note_window = [&] {
    local.max_window = std::max(local.max_window, window.size());
    std::size_t total = 0;
    for (const auto& e : window) total += w_of(e.item);
    local.max_window_weight = std::max(local.max_window_weight, total);
  };
  // Window entries from earlier passes whose stamp is <= pos have now been
  // compared with every remaining item.
  auto flush = [&](std::size_t pass, std::size_t pos) {
    auto it = std::stable_partition(window.begin(), window.end(), [&](const Entry& e) {
      return !(e.pass < pass && e.stamp <= pos);
    });
    for (auto e = it; e != window.end(); ++e) out.push_back(e->item);
    window.erase(it, window.end());
  };

  for (std::size_t pass = 1;; ++pass) {
    local.passes = pass;
    std::vector<std::size_t> overflow;
    for (std::size_t pos = 0; pos < input.size(); ++pos) {
      flush(pass, pos);
      const std::size_t c = input[pos];
      bool dominated = false;
      for (std::size_t k = 0; k < window.size();) {
        if (prefers(window[k].item, c)) {
          dominated = true;
          break;
        }
        if (prefers(c, window[k].item)) {
          window.erase(window.begin() + static_cast<std::ptrdiff_t>(k));
        } else {
          ++k;
        }
      }
      if (dominated) continue;
      if (window.size() < capacity) {
        window.push_back({c, overflow.size(), pass});
        note_window();
      } else {
        overflow.push_back(c);
      }
    }
    flush(pass, input.size());
    if (overflow.empty()) {
      for (const auto& e : window) out.push_back(e.item);
      break;
    }
    input = std::move(overflow);
  }
  std::sort(out.begin(), out.end());
  if (trace != nullptr) *trace = local;
  return out;
}

namespace {

WinnowResult collect(const std::vector<Mapping>& rows, const std::vector<std::size_t>& keep,
                     const PreferenceRelation& rel, std::uint64_t pairs0, std::uint64_t probes0) {
  WinnowResult r;
  r.rows.reserve(keep.size());
  for (auto i : keep) r.rows.push_back(rows[i]);
  r.stats.pair_comparisons = rel.pair_comparisons() - pairs0;
  r.stats.ask_probes = rel.ask_probes() - probes0;
  return r;
}

}  // namespace

WinnowResult winnow_nl(const std::vector<Mapping>& rows, const PreferenceRelation& rel, int threads) {
  const auto pairs0 = rel.pair_comparisons();
  const auto probes0 = rel.ask_probes();
  IndexRelation f = [&](std::size_t i, std::size_t j) { return rel.prefers(rows[i], rows[j]); };
  const bool parallel = threads != 1 && rel.concurrency_safe();
  auto keep = parallel ? nl_kernel_parallel(rows.size(), f, threads) : nl_kernel(rows.size(), f);
  return collect(rows, keep, rel, pairs0, probes0);
}

WinnowResult winnow_bnl(const std::vector<Mapping>& rows, const PreferenceRelation& rel,
                        std::size_t window_capacity) {
  const auto pairs0 = rel.pair_comparisons();
  const auto probes0 = rel.ask_probes();
  IndexRelation f = [&](std::size_t i, std::size_t j) { return rel.prefers(rows[i], rows[j]); };
  std::vector<std::size_t> weight(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) weight[i] = rows[i].size();
  BnlTrace trace;
  auto keep = bnl_kernel(rows.size(), f, window_capacity, weight, &trace);
  WinnowResult r = collect(rows, keep, rel, pairs0, probes0);
  r.stats.max_window_bindsets = trace.max_window;
  r.stats.max_window_bindings = trace.max_window_weight;
  r.stats.passes = trace.passes;
  return r;
}

}  // namespace sprefql
