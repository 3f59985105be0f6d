#include "bosonic/char_fn.hpp"
#include "bosonic/phase_space.hpp"

#include <benchmark/benchmark.h>

namespace {

void BM_GramMatrix(benchmark::State& state) {
  const int points = static_cast<int>(state.range(0));
  bosonic::RealVector s(2);
  s << 1.0, 0.0;
  const bosonic::CharFn f = bosonic::CharFn::cosine(s);
  bosonic::Sampler sampler;
  sampler.points_per_set = points;
  const auto pts = sampler.point_set(1, 2);
  const bosonic::RealMatrix A = bosonic::omega(1);
  for (auto _ : state) benchmark::DoNotOptimize(bosonic::gram_matrix(f, A, pts));
}
BENCHMARK(BM_GramMatrix)->RangeMultiplier(2)->Range(8, 128);

void BM_PositivityCertificate(benchmark::State& state) {
  const bosonic::CharFn f = bosonic::CharFn::vacuum(2);
  const bosonic::RealMatrix A = bosonic::omega(2);
  for (auto _ : state) benchmark::DoNotOptimize(bosonic::check_a_positive(f, A, bosonic::Sampler{}));
}
BENCHMARK(BM_PositivityCertificate)->Unit(benchmark::kMillisecond);

}  // namespace
