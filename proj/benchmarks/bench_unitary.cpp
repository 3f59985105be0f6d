#include "bosonic/dilation.hpp"
#include "bosonic/fock.hpp"
#include "bosonic/gaussian_unitary.hpp"
#include "bosonic/phase_space.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

namespace {

bosonic::RealMatrix beam_splitter(double t) {
  const bosonic::RealMatrix I = bosonic::RealMatrix::Identity(2, 2);
  return bosonic::symplectic_complete(std::cos(t) * I, std::sin(t) * I).S;
}

void BM_GaussianUnitaryBuild(benchmark::State& state) {
  const int cutoff = static_cast<int>(state.range(0));
  const bosonic::RealMatrix S = beam_splitter(0.4);
  for (auto _ : state) benchmark::DoNotOptimize(bosonic::GaussianUnitary(S, cutoff));
}
BENCHMARK(BM_GaussianUnitaryBuild)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_GaussianUnitaryApply(benchmark::State& state) {
  const int cutoff = static_cast<int>(state.range(0));
  const bosonic::GaussianUnitary U(beam_splitter(0.4), cutoff);
  bosonic::ComplexVector psi = bosonic::ComplexVector::Zero(static_cast<Eigen::Index>(U.dim()));
  psi(1) = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(U.apply(psi));
}
BENCHMARK(BM_GaussianUnitaryApply)->Arg(8)->Arg(16)->Arg(32);

void BM_StinespringAmplifier(benchmark::State& state) {
  const auto d = bosonic::exact_dilation(bosonic::amplifier(2.0));
  bosonic::StinespringOptions opt;
  opt.cutoff = 15;
  const auto rho = bosonic::FockOperator::projector(1, 15, {0});
  for (auto _ : state) benchmark::DoNotOptimize(bosonic::stinespring_apply(d, rho, opt));
}
BENCHMARK(BM_StinespringAmplifier)->Unit(benchmark::kMillisecond);

}  // namespace
