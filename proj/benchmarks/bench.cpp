#include <benchmark/benchmark.h>

#include <complex>

#include "vwl/lab.hpp"
#include "vwl/rough.hpp"
#include "vwl/solver.hpp"
#include "vwl/spectral.hpp"

using namespace vwl;

namespace {

SmoothPart affine_speed() {
  SmoothPart s;
  s.family = SmoothFamily::Affine;
  s.c0 = 1.0;
  s.c1 = 0.5;
  return s;
}

void BM_solve_mode(benchmark::State& state) {
  ModeProblem p;
  p.beta = static_cast<double>(state.range(0));
  p.a = CoefficientView::exact(affine_speed());
  p.v0 = 1.0;
  p.grid = TimeGrid{0.0, 1.0, 1000};
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_mode(p));
  }
}
BENCHMARK(BM_solve_mode)->Arg(1)->Arg(32)->Arg(256);

void BM_mollify_jump(benchmark::State& state) {
  RoughCoefficient a;
  a.smooth.c0 = 1.0;
  a.jumps.push_back({0.5, 1.0});
  a.claimed_floor = 1.0;
  a.declared_order = 1;
  const Mollifier psi = make_mollifier(MollifierShape::Bump, 1e-10);
  const TimeGrid grid{0.0, 1.0, static_cast<int>(state.range(0))};
  for (auto _ : state) {
    benchmark::DoNotOptimize(mollify(a, psi, 0.01, grid, 1));
  }
}
BENCHMARK(BM_mollify_jump)->Arg(1000)->Arg(4000);

void BM_sobolev_norm(benchmark::State& state) {
  const SpectralModel model =
      build_model(SpectralFamily::Power, static_cast<int>(state.range(0)), 2.0);
  ModeField u;
  for (int m = 0; m < model.size(); ++m) {
    u.coeff.push_back(std::complex<double>(1.0 / (1.0 + m), 0.5 / (1.0 + m)));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(sobolev_norm(u, model, 1.5));
  }
}
BENCHMARK(BM_sobolev_norm)->Arg(16)->Arg(256);

void BM_regularized_net(benchmark::State& state) {
  ScenarioProblem p;
  p.a.smooth = affine_speed();
  p.a.claimed_floor = 1.0;
  p.model = build_model(SpectralFamily::Power, 8, 2.0);
  p.u0.kind = ModeFieldDescriptor::Kind::ExpDecay;
  p.u0.rate = 1.0;
  p.jobs = static_cast<int>(state.range(0));
  const Mollifier psi = make_mollifier(MollifierShape::Bump, 1e-10);
  const auto eps = geometric_eps_net(2.0, 2, 6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_regularized_net(p, psi, {}, eps, 1));
  }
}
BENCHMARK(BM_regularized_net)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
