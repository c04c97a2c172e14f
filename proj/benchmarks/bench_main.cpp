#include <benchmark/benchmark.h>

#include "cegest/catalogue.hpp"
#include "cegest/ceg.hpp"
#include "cegest/estimators.hpp"
#include "cegest/oracle.hpp"
#include "cegest/workload.hpp"

using namespace cegest;

namespace {

const LabeledGraph& graph() {
  static const LabeledGraph g = correlated_graph({});
  return g;
}

QueryGraph query(const char* text) { return parse_query(text); }

const char* kPath = "a -L0-> b\nb -L1-> c\nc -L2-> d\n";
const char* kCycle = "a -L0-> b\nb -L1-> c\nc -L2-> d\nd -L3-> a\n";
const char* kStar = "a -L0-> b\na -L1-> c\na -L2-> d\ne -L3-> a\n";

void BM_CountHom(benchmark::State& state, const char* text) {
  const auto q = query(text);
  for (auto _ : state) benchmark::DoNotOptimize(count_hom(graph(), q));
}
BENCHMARK_CAPTURE(BM_CountHom, path3, kPath)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_CountHom, cycle4, kCycle)->Unit(benchmark::kMillisecond);

void BM_Catalogue(benchmark::State& state) {
  const auto q = query(kCycle);
  CatalogueConfig cc;
  cc.h = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_catalogue(graph(), {q}, cc));
}
BENCHMARK(BM_Catalogue)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_CegOAggregate(benchmark::State& state) {
  const auto q = query(kStar);
  const auto cat = build_catalogue(graph(), {q}, {});
  for (auto _ : state) {
    const auto ceg = build_ceg_o(q, cat);
    benchmark::DoNotOptimize(estimate_all_optimistic(ceg));
  }
}
BENCHMARK(BM_CegOAggregate);

void BM_Molp(benchmark::State& state) {
  const auto q = query(kStar);
  const auto cat = build_catalogue(graph(), {q}, {});
  for (auto _ : state) benchmark::DoNotOptimize(estimate_molp(q, cat));
}
BENCHMARK(BM_Molp);

}  // namespace
