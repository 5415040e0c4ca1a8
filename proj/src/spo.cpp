#include "sprefql/spo.hpp"

#include <algorithm>
#include <bit>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sprefql/error.hpp"

namespace sprefql {

namespace {

int resolve_threads(int threads) {
#ifdef _OPENMP
  return threads <= 0 ? omp_get_max_threads() : threads;
#else
  (void)threads;
  return 1;
#endif
}

// Transitivity counterexamples with first element x, in (y, z) order.
void transitivity_row(const RelationMatrix& m, std::size_t x, std::size_t cap,
                      std::vector<SpoViolation>& out) {
  const std::size_t words = m.words();
  const std::uint64_t* rx = m.row(x);
  for (std::size_t wy = 0; wy < words; ++wy) {
    for (std::uint64_t by = rx[wy]; by != 0; by &= by - 1) {
      const std::size_t y = wy * 64 + static_cast<std::size_t>(std::countr_zero(by));
      const std::uint64_t* ry = m.row(y);
      for (std::size_t wz = 0; wz < words; ++wz) {
        for (std::uint64_t missing = ry[wz] & ~rx[wz]; missing != 0; missing &= missing - 1) {
          const std::size_t z = wz * 64 + static_cast<std::size_t>(std::countr_zero(missing));
          out.push_back({SpoViolation::Axiom::Transitivity, {x, y, z}});
          if (cap != 0 && out.size() >= cap) return;
        }
      }
    }
  }
}

}  // namespace

std::string SpoViolation::describe() const {
  auto item = [](std::size_t i) { return "#" + std::to_string(i); };
  switch (axiom) {
    case Axiom::Irreflexivity: return "irreflexivity: " + item(witness[0]) + " is preferred over itself";
    case Axiom::Asymmetry:
      return "asymmetry: " + item(witness[0]) + " and " + item(witness[1]) +
             " are each preferred over the other";
    case Axiom::Transitivity:
      return "transitivity: " + item(witness[0]) + " over " + item(witness[1]) + " and " +
             item(witness[1]) + " over " + item(witness[2]) + ", but not " + item(witness[0]) +
             " over " + item(witness[2]);
  }
  return {};
}

RelationMatrix::RelationMatrix(std::size_t n, const IndexRelation& prefers, int threads)
    : n_(n), words_((n + 63) / 64), bits_(n * words_, 0) {
  const int t = resolve_threads(threads);
  if (t <= 1) {
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        if (prefers(x, y)) bits_[x * words_ + y / 64] |= std::uint64_t{1} << (y % 64);
      }
    }
    return;
  }
  std::exception_ptr failure;
  const auto count = static_cast<std::int64_t>(n);
  // Each thread owns whole rows, so the bit updates never race.
#pragma omp parallel for schedule(dynamic, 4) num_threads(t)
  for (std::int64_t xi = 0; xi < count; ++xi) {
    const auto x = static_cast<std::size_t>(xi);
    try {
      for (std::size_t y = 0; y < n; ++y) {
        if (prefers(x, y)) bits_[x * words_ + y / 64] |= std::uint64_t{1} << (y % 64);
      }
    } catch (...) {
#pragma omp critical(sprefql_matrix_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

SpoReport check_spo(const RelationMatrix& m, const SpoOptions& options) {
  const std::size_t n = m.size();
  const std::size_t cap = options.max_violations;
  SpoReport report;
  report.items = n;
  auto& out = report.violations;
  auto full = [&] { return cap != 0 && out.size() >= cap; };

  for (std::size_t x = 0; x < n && !full(); ++x) {
    if (m.at(x, x)) out.push_back({SpoViolation::Axiom::Irreflexivity, {x}});
  }
  for (std::size_t x = 0; x < n && !full(); ++x) {
    for (std::size_t y = x + 1; y < n && !full(); ++y) {
      if (m.at(x, y) && m.at(y, x)) out.push_back({SpoViolation::Axiom::Asymmetry, {x, y}});
    }
  }
  if (full()) return report;

  const int t = resolve_threads(options.threads);
  const std::size_t room = cap == 0 ? 0 : cap - out.size();
  std::vector<std::vector<SpoViolation>> per_row(n);
  if (t <= 1) {
    std::size_t found = 0;
    for (std::size_t x = 0; x < n && (room == 0 || found < room); ++x) {
      transitivity_row(m, x, room == 0 ? 0 : room - found, per_row[x]);
      found += per_row[x].size();
    }
  } else {
    const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 8) num_threads(t)
    for (std::int64_t xi = 0; xi < count; ++xi) {
      transitivity_row(m, static_cast<std::size_t>(xi), room, per_row[static_cast<std::size_t>(xi)]);
    }
  }
  for (auto& row : per_row) {
    for (auto& v : row) {
      if (full()) break;
      out.push_back(std::move(v));
    }
  }
  return report;
}

SpoReport check_spo(std::size_t n, const IndexRelation& prefers, const SpoOptions& options) {
  if (n > options.max_items) {
    throw SizeLimitError("SPO check limited to " + std::to_string(options.max_items) + " items, got " +
                         std::to_string(n));
  }
  return check_spo(RelationMatrix(n, prefers, options.threads), options);
}

SpoReport check_spo(const std::vector<Mapping>& rows, const PreferenceRelation& rel, const SpoOptions& options) {
  SpoOptions o = options;
  if (!rel.concurrency_safe()) o.threads = 1;
  return check_spo(
      rows.size(), [&](std::size_t i, std::size_t j) { return rel.prefers(rows[i], rows[j]); }, o);
}

}  // namespace sprefql
