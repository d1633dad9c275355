#include <benchmark/benchmark.h>

#include "sidesign/debruijn.hpp"
#include "sidesign/design.hpp"
#include "sidesign/fisher.hpp"
#include "sidesign/markov.hpp"

namespace {

using namespace sidesign;

std::vector<double> levels(int c) {
  std::vector<double> out;
  for (int i = 0; i < c; ++i) out.push_back(static_cast<double>(i) - 0.5 * (c - 1));
  return out;
}

void BM_PrimeCycleBasis(benchmark::State& state) {
  const Alphabet alphabet(levels(static_cast<int>(state.range(0))));
  const auto memory = static_cast<std::size_t>(state.range(1));
  std::size_t count = 0;
  for (auto _ : state) {
    const CycleBasis basis = prime_cycle_basis(alphabet, memory);
    count = basis.size();
    benchmark::DoNotOptimize(count);
  }
  state.counters["cycles"] = static_cast<double>(count);
}
BENCHMARK(BM_PrimeCycleBasis)->Args({2, 2})->Args({3, 2})->Args({2, 4})->Args({3, 3})->Args({2, 5})->Args({2, 6})->Args({4, 3})
    ->Unit(benchmark::kMillisecond);

void BM_MonteCarloInfo(benchmark::State& state) {
  const CycleBasis basis = prime_cycle_basis(Alphabet({-1.0, 1.0}), static_cast<std::size_t>(state.range(0)));
  const ModelSpec model =
      ModelSpec::output_error(Eigen::Vector4d(4.86e-3, 4.75e-3, -1.84, 0.94), 1e-4, 1000);
  for (auto _ : state) {
    auto matrices = basis_info_matrices(model, basis, 5000, InfoMethod::kMonteCarlo,
                                        static_cast<std::size_t>(state.range(1)));
    benchmark::DoNotOptimize(matrices);
  }
}
BENCHMARK(BM_MonteCarloInfo)->Args({2, 1})->Args({4, 1})->Args({4, 4})->Unit(benchmark::kMillisecond);

void BM_Optimize(benchmark::State& state) {
  const CycleBasis basis = prime_cycle_basis(Alphabet(levels(static_cast<int>(state.range(0)))), 2);
  const ModelSpec model = ModelSpec::nonlinear_fir(Eigen::Vector4d::Ones(), 1.0);
  const auto matrices = basis_info_matrices(model, basis);
  for (auto _ : state) {
    DesignResult r = optimize(matrices, Criterion::kD);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_Optimize)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_GenerateSequence(benchmark::State& state) {
  const CycleBasis basis = prime_cycle_basis(Alphabet(levels(3)), 2);
  const DesignWeights w = DesignWeights::uniform(static_cast<Eigen::Index>(basis.size()));
  const auto pi = assemble_stationary(w, basis);
  const auto a = build_transition_matrix(w, basis);
  for (auto _ : state) {
    Signal s = generate_sequence(basis.graph, a, pi, static_cast<std::size_t>(state.range(0)), 1);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_GenerateSequence)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
