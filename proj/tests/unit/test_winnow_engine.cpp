#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

#include "fixtures.hpp"
#include "sprefql/error.hpp"
#include "sprefql/executor.hpp"
#include "sprefql/spo.hpp"
#include "sprefql/winnow.hpp"

using namespace sprefql;

namespace {

using Matrix = std::vector<std::vector<char>>;

IndexRelation from(const Matrix& m) {
  return [&m](std::size_t i, std::size_t j) { return m[i][j] != 0; };
}

std::vector<std::size_t> oracle_winnow(const Matrix& m) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < m.size(); ++j) {
    bool dominated = false;
    for (std::size_t i = 0; i < m.size(); ++i) dominated = dominated || m[i][j];
    if (!dominated) out.push_back(j);
  }
  return out;
}

// Random strict partial order: transitive closure of a random DAG over a
// random topological order.
Matrix random_spo(std::mt19937_64& rng, std::size_t n, double density) {
  std::vector<std::size_t> topo(n);
  std::iota(topo.begin(), topo.end(), 0);
  std::shuffle(topo.begin(), topo.end(), rng);
  std::bernoulli_distribution edge(density);
  Matrix m(n, std::vector<char>(n, 0));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) m[topo[a]][topo[b]] = edge(rng);
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!m[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j) m[i][j] = m[i][j] || m[k][j];
    }
  }
  return m;
}

Matrix random_relation(std::mt19937_64& rng, std::size_t n, double density) {
  std::bernoulli_distribution edge(density);
  Matrix m(n, std::vector<char>(n, 0));
  for (auto& row : m) {
    for (auto& c : row) c = edge(rng);
  }
  return m;
}

bool oracle_spo(const Matrix& m) {
  const std::size_t n = m.size();
  for (std::size_t a = 0; a < n; ++a) {
    if (m[a][a]) return false;
    for (std::size_t b = 0; b < n; ++b) {
      if (m[a][b] && m[b][a]) return false;
      for (std::size_t c = 0; c < n; ++c) {
        if (m[a][b] && m[b][c] && !m[a][c]) return false;
      }
    }
  }
  return true;
}

}  // namespace

TEST_CASE("NL kernel matches the definition on arbitrary relations") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    const Matrix m = random_relation(rng, 1 + rng() % 40, 0.05 * static_cast<double>(rng() % 8));
    CHECK(nl_kernel(m.size(), from(m)) == oracle_winnow(m));
  }
}

TEST_CASE("parallel NL matches the serial scan") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 50; ++i) {
    const Matrix m = random_relation(rng, 1 + rng() % 300, 0.01 * static_cast<double>(rng() % 10));
    const auto serial = nl_kernel(m.size(), from(m));
    CHECK(nl_kernel_parallel(m.size(), from(m), 4) == serial);
    CHECK(nl_kernel_parallel(m.size(), from(m), 0) == serial);
    CHECK(nl_kernel_parallel(m.size(), from(m), 1) == serial);
  }
}

TEST_CASE("parallel NL rethrows relation errors") {
  const IndexRelation bad = [](std::size_t i, std::size_t) -> bool {
    if (i == 37) throw std::runtime_error("probe failed");
    return false;
  };
  CHECK_THROWS_AS(nl_kernel_parallel(100, bad, 4), std::runtime_error);
  CHECK_THROWS_AS(nl_kernel(100, bad), std::runtime_error);
}

TEST_CASE("property: BNL equals NL on strict partial orders for every window and order") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 300; ++i) {
    const std::size_t n = 1 + rng() % 60;
    const Matrix m = random_spo(rng, n, 0.02 * static_cast<double>(rng() % 10));
    REQUIRE(oracle_spo(m));
    const auto expected = oracle_winnow(m);
    for (std::size_t w : {std::size_t{1}, std::size_t{2}, std::size_t{5}, n, std::size_t{0}}) {
      CAPTURE(n);
      CAPTURE(w);
      BnlTrace trace;
      CHECK(bnl_kernel(n, from(m), w, {}, &trace) == expected);
      if (w != 0) CHECK(trace.max_window <= w);
    }
  }
}

TEST_CASE("BNL with a one-item window needs several passes") {
  // Five pairwise incomparable items.
  const Matrix m(5, std::vector<char>(5, 0));
  BnlTrace trace;
  CHECK(bnl_kernel(5, from(m), 1, {}, &trace) == std::vector<std::size_t>{0, 1, 2, 3, 4});
  CHECK(trace.passes == 5);
  CHECK(trace.max_window == 1);
  BnlTrace unlimited;
  bnl_kernel(5, from(m), 0, {2, 2, 2, 2, 2}, &unlimited);
  CHECK(unlimited.passes == 1);
  CHECK(unlimited.max_window == 5);
  CHECK(unlimited.max_window_weight == 10);
}

TEST_CASE("BNL is order dependent on a non-transitive chain") {
  // a > b > c with a, c incomparable (sequel links m1 -> m2 -> m3).
  Matrix m(3, std::vector<char>(3, 0));
  m[0][1] = 1;
  m[1][2] = 1;
  CHECK(nl_kernel(3, from(m)) == std::vector<std::size_t>{0});
  CHECK(bnl_kernel(3, from(m), 0) == std::vector<std::size_t>{0, 2});
  // Reversed input: c, b, a. b evicts c before a evicts b.
  Matrix r(3, std::vector<char>(3, 0));
  r[2][1] = 1;
  r[1][0] = 1;
  CHECK(bnl_kernel(3, from(r), 0) == std::vector<std::size_t>{2});
}

TEST_CASE("SPO checker agrees with a brute-force oracle") {
  std::mt19937_64 rng(4);
  int violations = 0;
  for (int i = 0; i < 300; ++i) {
    const std::size_t n = 1 + rng() % 30;
    const Matrix m = (i % 2) ? random_spo(rng, n, 0.3) : random_relation(rng, n, 0.01 * static_cast<double>(rng() % 8));
    const SpoReport r = check_spo(n, from(m));
    CHECK(r.items == n);
    CHECK(r.ok() == oracle_spo(m));
    violations += !r.ok();
    for (const auto& v : r.violations) {
      const auto& w = v.witness;
      switch (v.axiom) {
        case SpoViolation::Axiom::Irreflexivity: CHECK(m[w[0]][w[0]]); break;
        case SpoViolation::Axiom::Asymmetry:
          CHECK(w[0] < w[1]);
          CHECK((m[w[0]][w[1]] && m[w[1]][w[0]]));
          break;
        case SpoViolation::Axiom::Transitivity:
          CHECK((m[w[0]][w[1]] && m[w[1]][w[2]] && !m[w[0]][w[2]]));
          break;
      }
    }
  }
  CHECK(violations > 50);
}

TEST_CASE("parallel SPO check reports exactly the serial violations") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 40; ++i) {
    const std::size_t n = 50 + rng() % 250;
    const Matrix m = random_relation(rng, n, 0.002 * static_cast<double>(rng() % 10));
    SpoOptions serial;
    serial.max_violations = 0;
    SpoOptions parallel = serial;
    parallel.threads = 4;
    CHECK(check_spo(n, from(m), serial).violations == check_spo(n, from(m), parallel).violations);
    serial.max_violations = parallel.max_violations = 7;
    const auto capped = check_spo(n, from(m), parallel);
    CHECK(capped.violations.size() <= 7);
    CHECK(capped.violations == check_spo(n, from(m), serial).violations);
  }
}

TEST_CASE("relation matrix stores every bit") {
  std::mt19937_64 rng(6);
  const Matrix m = random_relation(rng, 130, 0.3);
  const RelationMatrix serial(130, from(m), 1);
  const RelationMatrix parallel(130, from(m), 4);
  for (std::size_t i = 0; i < 130; ++i) {
    for (std::size_t j = 0; j < 130; ++j) {
      CHECK(serial.at(i, j) == (m[i][j] != 0));
      CHECK(parallel.at(i, j) == (m[i][j] != 0));
    }
  }
}

TEST_CASE("SPO check refuses inputs over the cap") {
  SpoOptions o;
  o.max_items = 10;
  CHECK_THROWS_AS(check_spo(11, [](std::size_t, std::size_t) { return false; }, o), SizeLimitError);
  CHECK(check_spo(10, [](std::size_t, std::size_t) { return false; }, o).ok());
}

TEST_CASE("violation descriptions name the axiom") {
  CHECK(SpoViolation{SpoViolation::Axiom::Irreflexivity, {3}}.describe().starts_with("irreflexivity"));
  CHECK(SpoViolation{SpoViolation::Axiom::Asymmetry, {1, 2}}.describe().starts_with("asymmetry"));
  CHECK(SpoViolation{SpoViolation::Axiom::Transitivity, {0, 1, 2}}.describe().starts_with("transitivity"));
}

TEST_CASE("winnow over solutions reports counters") {
  const QueryAst q = test::load_query("queries/table1-longest.rq");
  const auto backend = test::local(test::table1());
  const auto rows = winnow_input(q, *backend);
  const PreferenceRelation rel(*q.prefer, q.base.projection, backend, q.base.prefixes);

  const WinnowResult nl = winnow_nl(rows, rel);
  CHECK(test::column(nl.rows, "title") ==
        std::set<std::string>{"Star Wars Ep.VI: Return of the Jedi", "Die Hard"});
  CHECK(nl.stats.pair_comparisons > 0);
  CHECK(nl.stats.ask_probes == nl.stats.pair_comparisons);

  const WinnowResult bnl = winnow_bnl(rows, rel, 0);
  CHECK(test::column(bnl.rows, "title") == test::column(nl.rows, "title"));
  CHECK(bnl.stats.max_window_bindsets >= 2);
  CHECK(bnl.stats.max_window_bindings == 3 * bnl.stats.max_window_bindsets);
  CHECK(bnl.stats.passes == 1);

  const WinnowResult threaded = winnow_nl(rows, rel, 4);
  CHECK(threaded.rows == nl.rows);
  CHECK(threaded.stats.pair_comparisons == nl.stats.pair_comparisons);
}

TEST_CASE("lint flags the sequel preference and passes the longest-per-genre query") {
  const auto backend = test::local(test::table1());
  CHECK(lint_spo(test::load_query("queries/table1-longest.rq"), backend).ok());
  const SpoReport r = lint_spo(test::load_query("queries/table1-sequel.rq"), backend);
  REQUIRE_FALSE(r.ok());
  CHECK(r.violations.front().axiom == SpoViolation::Axiom::Transitivity);
  SpoOptions tiny;
  tiny.max_items = 3;
  CHECK_THROWS_AS(lint_spo(test::load_query("queries/table1-sequel.rq"), backend, tiny), SizeLimitError);
}

TEST_CASE("seeded shuffle is a deterministic permutation") {
  std::vector<Mapping> rows;
  for (int i = 0; i < 20; ++i) rows.push_back(Mapping{{Variable("i"), RdfTerm::integer(i)}});
  auto a = rows, b = rows;
  seeded_shuffle(a, 42);
  seeded_shuffle(b, 42);
  CHECK(a == b);
  CHECK(a != rows);
  std::sort(a.begin(), a.end());
  std::sort(rows.begin(), rows.end());
  CHECK(a == rows);
}
