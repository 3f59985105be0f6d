#include "bosonic/fock.hpp"

#include <benchmark/benchmark.h>

namespace {

void BM_DisplacementMatrix(benchmark::State& state) {
  const int cutoff = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(bosonic::displacement_matrix_1mode(0.4, -0.7, cutoff));
  }
  state.SetComplexityN(cutoff);
}
BENCHMARK(BM_DisplacementMatrix)->RangeMultiplier(2)->Range(8, 64)->Complexity(benchmark::oNSquared);

void BM_CharOfOperator(benchmark::State& state) {
  const int cutoff = static_cast<int>(state.range(0));
  bosonic::RealVector s(2);
  s << 0.5, 0.1;
  const bosonic::FockOperator rho = bosonic::coherent_state_fock(s, cutoff);
  bosonic::PhasePoint xi(2);
  xi << 0.3, -0.2;
  for (auto _ : state) benchmark::DoNotOptimize(bosonic::char_of_operator(rho, xi));
}
BENCHMARK(BM_CharOfOperator)->Arg(15)->Arg(30);

}  // namespace
