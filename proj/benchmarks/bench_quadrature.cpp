#include "bosonic/dilation.hpp"
#include "bosonic/fock.hpp"

#include <benchmark/benchmark.h>

namespace {

void BM_ReconstructVacuum(benchmark::State& state) {
  const int cutoff = static_cast<int>(state.range(0));
  const bosonic::CharFn chi = bosonic::CharFn::vacuum(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bosonic::operator_from_char(chi, bosonic::QuadratureGrid{8.0, 0.05}, cutoff));
  }
}
BENCHMARK(BM_ReconstructVacuum)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

// Two-mode squeezed ancilla of the fixed-unitary construction: separable terms.
void BM_ReconstructSqueezedAncilla(benchmark::State& state) {
  const auto d = bosonic::approx_fixed_unitary(bosonic::identity_channel(1), 0.2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bosonic::operator_from_char(d.ancilla, bosonic::QuadratureGrid{8.0, 0.05}, 20));
  }
}
BENCHMARK(BM_ReconstructSqueezedAncilla)->Unit(benchmark::kMillisecond);

}  // namespace
