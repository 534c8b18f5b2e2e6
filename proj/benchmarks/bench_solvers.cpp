// SPDX-License-Identifier: Apache-2.0

// Costs of the three inner kernels: the principal eigenpair, one
// semi-implicit PDE step, and a 2D preconditioned CG solve.

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "epithreshold/elliptic_operator.hpp"
#include "epithreshold/linear_solve.hpp"
#include "epithreshold/sir_pde.hpp"
#include "epithreshold/spectral.hpp"

namespace {

using namespace epithreshold;

Scenario bump_scenario(std::vector<int> cells) {
  ScenarioSpec spec;
  spec.domain.cells = cells;
  spec.domain.lengths.assign(cells.size(), 1.0);
  spec.alpha = GaussBumpCoefficient{0.5, 1.2, {0.5, 0.5}, 0.1};
  spec.i0 = CosineCoefficient{1e-2, 1e-2, 1.0, 0.0};
  spec.d_i.x = ConstantCoefficient{0.05};
  return Scenario::realize(spec);
}

void BM_PrincipalEigenpair1D(benchmark::State& state) {
  const Scenario sc = bump_scenario({static_cast<int>(state.range(0))});
  const auto op = EllipticOperator::assemble(sc.d_i, sc.threshold_potential());
  for (auto _ : state) benchmark::DoNotOptimize(principal_eigenpair(op).lambda1);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PrincipalEigenpair1D)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

void BM_PrincipalEigenpair2D(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Scenario sc = bump_scenario({n, n});
  const auto op = EllipticOperator::assemble(sc.d_i, sc.threshold_potential());
  for (auto _ : state) benchmark::DoNotOptimize(principal_eigenpair(op).lambda1);
}
BENCHMARK(BM_PrincipalEigenpair2D)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_PdeStep(benchmark::State& state) {
  std::vector<int> cells{static_cast<int>(state.range(0))};
  if (state.range(1) == 2) cells.push_back(cells[0]);
  const Scenario sc = bump_scenario(cells);
  const SirStepper stepper(sc, 1e-3);
  PdeState s = PdeState::initial(sc);
  for (auto _ : state) {
    s = stepper.step(s);
    benchmark::DoNotOptimize(s.s[0]);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(sc.grid.size()));
}
BENCHMARK(BM_PdeStep)->Args({256, 1})->Args({4096, 1})->Args({32, 2})->Args({128, 2});

void BM_ConjugateGradient2D(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid g = Grid::build({{1.0, 1.0}, {n, n}});
  const auto op = EllipticOperator::assemble(DiffusionSpec::constant(g, 1.0), ScalarField(g, 0.0));
  // Implicit diffusion step matrix: Id + dt L.
  const FaceMatrix m = op.matrix().affine(1.0, 1e-2, {});
  const auto rhs = ScalarField::from_function(g, [](double x, double y) {
    return 1.0 + std::cos(std::numbers::pi * x) * std::cos(2.0 * std::numbers::pi * y);
  });
  int iterations = 0;
  for (auto _ : state) {
    ScalarField x(g, 0.0);
    iterations = solve_spd(m, rhs.values(), x.values()).iterations;
    benchmark::DoNotOptimize(x[0]);
  }
  state.counters["cg_iterations"] = iterations;
}
BENCHMARK(BM_ConjugateGradient2D)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
