#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "analogy/evaluation.hpp"
#include "analogy/solver.hpp"
#include "analogy/synthetic.hpp"
#include "analogy/vector_store.hpp"

namespace {

using namespace analogy;

VectorStore random_store(std::size_t vocab, std::size_t dim,
                         std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<std::string> words;
  words.reserve(vocab);
  std::vector<double> rows(vocab * dim);
  for (std::size_t i = 0; i < vocab; ++i)
    words.push_back("w" + std::to_string(i));
  for (double& x : rows)
    x = static_cast<double>(gen() >> 11) * 0x1.0p-53 - 0.5;
  return VectorStore::from_rows(words, rows, dim, true, "bench");
}

void BM_ScoreAll(benchmark::State& state) {
  const auto vocab = static_cast<std::size_t>(state.range(0));
  const auto dim = static_cast<std::size_t>(state.range(1));
  const VectorStore store = random_store(vocab, dim, 7);
  std::vector<float> query(store.row(0).begin(), store.row(0).end());
  std::vector<float> out(store.size());
  for (auto _ : state) {
    store.score_all(query, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(vocab * dim));
}
BENCHMARK(BM_ScoreAll)->Args({10000, 100})->Args({50000, 300});

void BM_ScoreMany4(benchmark::State& state) {
  const auto vocab = static_cast<std::size_t>(state.range(0));
  const auto dim = static_cast<std::size_t>(state.range(1));
  const VectorStore store = random_store(vocab, dim, 7);
  std::vector<float> queries;
  for (std::int32_t r = 0; r < 4; ++r)
    queries.insert(queries.end(), store.row(r).begin(), store.row(r).end());
  std::vector<float> out(4 * store.size());
  for (auto _ : state) {
    store.score_many(queries, 4, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * 4 *
                          static_cast<std::int64_t>(vocab * dim));
}
BENCHMARK(BM_ScoreMany4)->Args({10000, 100})->Args({50000, 300});

void BM_SolveAdd(benchmark::State& state) {
  const VectorStore store = random_store(10000, 100, 7);
  AnalogyProblem problem{"w1", "w2", "w3", "w4", "bench"};
  const MethodSpec spec = method_spec(Method::Add);
  for (auto _ : state) {
    SolveResult result = solve(store, problem, spec);
    benchmark::DoNotOptimize(result.prediction);
  }
}
BENCHMARK(BM_SolveAdd);

void BM_Evaluate(benchmark::State& state) {
  SynthSpec spec;
  spec.vocab = 10000;
  spec.dim = 100;
  spec.seed = 11;
  PlantedRelation rel;
  rel.name = "rel";
  rel.offset.assign(spec.dim, 0.0);
  rel.offset[0] = 1.0;
  rel.neighbor_gap = 1.0;
  rel.pairs = 24;  // 552 problems
  spec.relations.push_back(rel);
  const SyntheticSpace space = generate_space(spec);
  std::vector<MethodSpec> methods;
  for (Method m : default_methods()) methods.push_back(method_spec(m));

  const auto threads = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    EvaluationResult result =
        evaluate(space.store, space.problems, methods, threads);
    benchmark::DoNotOptimize(result.totals.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(space.problems.size()) *
                          static_cast<std::int64_t>(methods.size()));
}
BENCHMARK(BM_Evaluate)->Arg(1)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
