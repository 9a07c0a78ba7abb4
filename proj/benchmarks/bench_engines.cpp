#include <benchmark/benchmark.h>

#include "fptmc/eval.hpp"
#include "fptmc/fagin.hpp"
#include "fptmc/generate.hpp"
#include "fptmc/hom.hpp"
#include "fptmc/parser.hpp"
#include "fptmc/sigma1.hpp"
#include "fptmc/treewidth.hpp"

using namespace fptmc;

namespace {

Graph fixed_random_graph(std::size_t n, double p) {
  Rng rng(n * 7919 + 1);
  return random_graph(n, p, rng);
}

void BM_SolveHomPath(benchmark::State& state) {
  Structure a = fixed_random_graph(std::size_t(state.range(0)), 0.02).structure();
  Structure b = path_graph(11).structure();
  for (auto _ : state) benchmark::DoNotOptimize(solve_hom(a, b));
}
BENCHMARK(BM_SolveHomPath)->Arg(50)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_SolveHomGrid(benchmark::State& state) {
  Structure a = fixed_random_graph(40, 0.2).structure();
  Structure b = grid_graph(std::size_t(state.range(0)), 3).structure();
  for (auto _ : state) benchmark::DoNotOptimize(solve_hom(a, b));
}
BENCHMARK(BM_SolveHomGrid)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_CheckPhiVertexCover(benchmark::State& state) {
  Structure g = cycle_graph(std::size_t(state.range(0))).structure();
  FaginProblem p = fagin_normalize(phi_vc(), fagin_set_variable());
  std::size_t k = std::size_t(state.range(0)) / 2;
  for (auto _ : state) benchmark::DoNotOptimize(check_phi(g, p, k));
}
BENCHMARK(BM_CheckPhiVertexCover)->Arg(6)->Arg(10)->Arg(14)->Unit(benchmark::kMillisecond);

void BM_ColorCodingPath(benchmark::State& state) {
  Structure a = fixed_random_graph(30, 0.15).structure();
  std::size_t k = std::size_t(state.range(0));
  Structure pattern = path_graph(k).structure();
  for (auto _ : state) benchmark::DoNotOptimize(solve_emb(a, pattern));
}
BENCHMARK(BM_ColorCodingPath)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_ColorCodingRandomized(benchmark::State& state) {
  Structure a = fixed_random_graph(60, 0.1).structure();
  Structure pattern = path_graph(std::size_t(state.range(0))).structure();
  Sigma1Options o;
  o.hash.mode = HashMode::Randomized;
  o.hash.epsilon = 1e-3;
  for (auto _ : state) benchmark::DoNotOptimize(solve_emb(a, pattern, o));
}
BENCHMARK(BM_ColorCodingRandomized)->Arg(3)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_HeuristicTd(benchmark::State& state) {
  Graph g = fixed_random_graph(std::size_t(state.range(0)), 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(heuristic_td(g));
}
BENCHMARK(BM_HeuristicTd)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_EvalNaiveTriangle(benchmark::State& state) {
  Structure a = fixed_random_graph(std::size_t(state.range(0)), 0.1).structure();
  Formula f = parse_formula("EX x. EX y. EX z. E(x,y) & E(y,z) & E(x,z)");
  for (auto _ : state) benchmark::DoNotOptimize(eval_naive(a, f));
}
BENCHMARK(BM_EvalNaiveTriangle)->Arg(20)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
