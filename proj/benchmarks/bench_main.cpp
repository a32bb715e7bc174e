// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "hexwave/bloch.hpp"
#include "hexwave/envelope.hpp"
#include "hexwave/wave.hpp"

using namespace hexwave;

static void BM_BlochSolve(benchmark::State& state) {
  const PeriodicMatrixField A = make_honeycomb_scalar_weight(0.1);
  const PlaneWaveBasis basis(A.lattice(), static_cast<int>(state.range(0)));
  const BlochProblem p{A, A.lattice().K, basis};
  for (auto _ : state) benchmark::DoNotOptimize(solve_bands(p, 8));
}
BENCHMARK(BM_BlochSolve)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

static void BM_DiracStep(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  EnvelopeField f = EnvelopeField::square(200.0, N);
  f.fill([](const Vec2& X) { return CVec2(std::exp(-X.squaredNorm()), 0.0); });
  const DiracStepper stepper(f.grid, {1.0, 1.0, CurvedWallKappa{10.0, 1.0}}, 0.05);
  for (auto _ : state) stepper.advance(f, 1);
}
BENCHMARK(BM_DiracStep)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

static void BM_WaveStep(benchmark::State& state) {
  const PeriodicMatrixField A = make_honeycomb_scalar_weight(0.1);
  const PeriodicMatrixField B = make_sigma2_weight(1.0, CosineProfile::three_cosine());
  const int P = static_cast<int>(state.range(0));
  const int n = 8;
  const CompositeWeight w(A, B, ConstantKappa{1.0}, 0.1);
  const WaveOperator op(supercell_grid(A.lattice(), P, n), evaluate_weight_on_grid(w, P, n));
  ComplexGrid psi(op.grid().size());
  for (std::size_t i = 0; i < psi.size(); ++i) psi[i] = std::exp(-(op.grid().point(i) - Vec2(P, 0.0)).squaredNorm());
  const Leapfrog lf(op, 0.5 * op.dt_max());
  WaveState s = lf.start(psi, ComplexGrid(psi.size(), 0.0));
  for (auto _ : state) lf.advance(s, 1, 1.0);
}
BENCHMARK(BM_WaveStep)->Arg(30)->Arg(60)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
