// Throughput of the inner kernels: field step, deposits, particle push, L stencil.
#include <benchmark/benchmark.h>

#include <random>

#include "rvm/characteristics.hpp"
#include "rvm/deposit.hpp"
#include "rvm/limitfields.hpp"
#include "rvm/maxwell.hpp"

using namespace rvm;

namespace {

std::vector<Vec3> positions(std::size_t n, double r, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-r, r);
  std::vector<Vec3> x(n);
  for (auto& v : x) v = {u(rng), u(rng), u(rng)};
  return x;
}

void BM_StepFields(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const GridGeometry g(n, 4.0);
  FieldGrid f(g, 0.5 * g.dx());
  for (std::size_t k = 0; k < g.size(); ++k) f.E.x[k] = std::sin(0.01 * static_cast<double>(k));
  const StaggeredVector j(g.size());
  for (auto _ : state) step_fields(f, j);
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g.size()));
}
BENCHMARK(BM_StepFields)->Arg(32)->Arg(64);

void BM_DepositRho(benchmark::State& state) {
  const GridGeometry g(64, 4.0);
  const auto x = positions(static_cast<std::size_t>(state.range(0)), 2.0, 1);
  const std::vector<double> q(x.size(), 1e-5);
  std::vector<double> rho(g.size());
  for (auto _ : state) {
    std::fill(rho.begin(), rho.end(), 0.0);
    deposit_rho(x, q, g, rho);
    benchmark::DoNotOptimize(rho.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DepositRho)->Arg(1 << 16)->Arg(1 << 18);

void BM_DepositCurrent(benchmark::State& state) {
  const GridGeometry g(64, 4.0);
  const double dt = 0.5 * g.dx();
  const auto x0 = positions(static_cast<std::size_t>(state.range(0)), 2.0, 2);
  auto x1 = x0;
  for (auto& v : x1) v = v + Vec3{0.3 * dt, -0.2 * dt, 0.1 * dt};
  const std::vector<double> q(x0.size(), 1e-5);
  StaggeredVector j(g.size());
  for (auto _ : state) {
    deposit_current(x0, x1, q, g, dt, j);
    benchmark::DoNotOptimize(j.x.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DepositCurrent)->Arg(1 << 16)->Arg(1 << 18);

void BM_BorisPush(benchmark::State& state) {
  const SpeciesSpec s;
  const FieldSampler F = [](double, const Vec3& x) { return FieldSample{{0.1 * x.y, 0.0, 0.05}, {0.0, 0.0, 0.3}}; };
  TrajectoryState st{{0.1, 0.2, 0.3}, {0.3, -0.2, 0.1}, 0.0};
  for (auto _ : state) {
    st = push(st, s, F, 0.01);
    benchmark::DoNotOptimize(st);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_BorisPush);

void BM_ApplyL(benchmark::State& state) {
  const double gamma = 0.75;
  MomentumGridFunction u(elliptic_lattice(gamma, gamma / static_cast<double>(state.range(0))), 1, GridTag::psi);
  for (std::size_t k = 0; k < u.data.size(); ++k) u.data[k] = std::cos(0.001 * static_cast<double>(k));
  for (auto _ : state) benchmark::DoNotOptimize(apply_L(u));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(u.data.size()));
}
BENCHMARK(BM_ApplyL)->Arg(16)->Arg(32);

void BM_SolveDirichlet(benchmark::State& state) {
  const double gamma = 0.75;
  EllipticProblem pb;
  pb.gamma = gamma;
  pb.source = MomentumGridFunction(elliptic_lattice(gamma, gamma / static_cast<double>(state.range(0))), 1, GridTag::psi);
  std::fill(pb.source.data.begin(), pb.source.data.end(), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_dirichlet(pb));
}
BENCHMARK(BM_SolveDirichlet)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
