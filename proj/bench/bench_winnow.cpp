// Serial vs OpenMP winnow kernels.
//
//   bench_winnow --benchmark_filter=NL
//
// The relation is an in-memory pareto dominance over random (runtime, year)
// pairs, so the numbers measure the scans themselves rather than probe cost.
// BM_WinnowTable1 runs the full preference path over a generated graph.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "sprefql/backend.hpp"
#include "sprefql/executor.hpp"
#include "sprefql/moviegen.hpp"
#include "sprefql/spo.hpp"
#include "sprefql/sprefql.hpp"
#include "sprefql/winnow.hpp"

using namespace sprefql;

namespace {

struct Point {
  int runtime;
  int year;
};

std::vector<Point> points(std::size_t n) {
  std::mt19937_64 rng(n);
  std::uniform_int_distribution<int> runtime(80, 180), year(1970, 2020);
  std::vector<Point> out(n);
  for (auto& p : out) p = {runtime(rng), year(rng)};
  return out;
}

IndexRelation dominance(const std::vector<Point>& pts) {
  return [&pts](std::size_t i, std::size_t j) {
    const Point& a = pts[i];
    const Point& b = pts[j];
    return a.runtime >= b.runtime && a.year >= b.year && (a.runtime > b.runtime || a.year > b.year);
  };
}

void BM_NL(benchmark::State& state) {
  const auto pts = points(static_cast<std::size_t>(state.range(0)));
  const int threads = static_cast<int>(state.range(1));
  const auto rel = dominance(pts);
  for (auto _ : state) {
    auto w = threads == 1 ? nl_kernel(pts.size(), rel) : nl_kernel_parallel(pts.size(), rel, threads);
    benchmark::DoNotOptimize(w);
  }
  state.SetComplexityN(state.range(0));
}

void BM_BNL(benchmark::State& state) {
  const auto pts = points(static_cast<std::size_t>(state.range(0)));
  const auto rel = dominance(pts);
  for (auto _ : state) {
    auto w = bnl_kernel(pts.size(), rel, static_cast<std::size_t>(state.range(1)));
    benchmark::DoNotOptimize(w);
  }
}

void BM_RelationMatrix(benchmark::State& state) {
  const auto pts = points(static_cast<std::size_t>(state.range(0)));
  const auto rel = dominance(pts);
  for (auto _ : state) {
    RelationMatrix m(pts.size(), rel, static_cast<int>(state.range(1)));
    benchmark::DoNotOptimize(m);
  }
}

void BM_CheckSpo(benchmark::State& state) {
  const auto pts = points(static_cast<std::size_t>(state.range(0)));
  const auto rel = dominance(pts);
  SpoOptions o;
  o.threads = static_cast<int>(state.range(1));
  for (auto _ : state) {
    auto r = check_spo(pts.size(), rel, o);
    benchmark::DoNotOptimize(r);
  }
}

void BM_WinnowQuery(benchmark::State& state) {
  MovieGenOptions g;
  g.films = static_cast<std::size_t>(state.range(0));
  const auto backend = std::make_shared<LocalBackend>(std::make_shared<const Dataset>(generate_movies(g)));
  const QueryAst q = parse_sprefql(
      "PREFIX : <http://example.org/movies#>\n"
      "SELECT ?title ?runtime ?year WHERE { ?s a :film ; :title ?title ; :runtime ?runtime ; :year ?year }\n"
      "PREFER (?t1 ?r1 ?y1) TO (?t2 ?r2 ?y2) IF (?r1 > ?r2) AND (?y1 > ?y2)");
  ExecOptions o;
  o.strategy = static_cast<Strategy>(state.range(1));
  for (auto _ : state) {
    auto r = execute(q, backend, o);
    benchmark::DoNotOptimize(r);
  }
  state.SetLabel(strategy_name(o.strategy));
}

}  // namespace

BENCHMARK(BM_NL)->ArgsProduct({{1000, 4000, 16000}, {1, 2, 4, 8}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BNL)->ArgsProduct({{1000, 4000, 16000}, {16, 0}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RelationMatrix)->ArgsProduct({{500, 1000}, {1, 4}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CheckSpo)->ArgsProduct({{200, 400}, {1, 4}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WinnowQuery)
    ->ArgsProduct({{200, 800},
                   {static_cast<int>(Strategy::NestedLoop), static_cast<int>(Strategy::BlockNestedLoop),
                    static_cast<int>(Strategy::Rewrite)}})
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
