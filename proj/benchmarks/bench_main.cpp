// Microbenchmarks for the hot paths: PSD projection, one full ADMM solve at
// preset scale, dual polynomial evaluation, and the STFT.

#include <benchmark/benchmark.h>

#include <random>

#include "asttf/ast_solver.hpp"
#include "asttf/baselines.hpp"
#include "asttf/localization.hpp"
#include "asttf/signal.hpp"
#include "asttf/toeplitz.hpp"

namespace {

Eigen::MatrixXcd random_hermitian(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXcd a(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) a(i, j) = std::complex<double>(g(rng), g(rng));
  return (a + a.adjoint()).eval() / 2.0;
}

void bm_psd_project(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Eigen::MatrixXcd a = random_hermitian(n, 7);
  for (auto _ : state) benchmark::DoNotOptimize(asttf::psd_project(a));
}
BENCHMARK(bm_psd_project)->Arg(33)->Arg(65);

void bm_admm_solve(benchmark::State& state) {
  const int iters = static_cast<int>(state.range(0));
  const asttf::Signal s = asttf::generate_test_signal(1024.0, 1024);
  const asttf::ComplexSignal y = asttf::analytic_signal(s);
  const asttf::FramePlan plan = asttf::make_frame_plan(1024, 64, 32, 1.0 / 6.0);
  asttf::AstProblem problem{y, plan, 1.0, 1.0};
  asttf::AdmmParams params;
  params.max_iters = iters;
  params.tol_primal = 1e-300;  // unreachable: run exactly `iters` iterations
  params.tol_dual = 1e-300;
  for (auto _ : state) benchmark::DoNotOptimize(asttf::admm_solve(problem, params));
}
BENCHMARK(bm_admm_solve)->Arg(10)->Unit(benchmark::kMillisecond);

void bm_dual_polynomial(benchmark::State& state) {
  std::mt19937 rng(11);
  std::normal_distribution<double> g;
  Eigen::VectorXcd z(64);
  for (auto& v : z) v = std::complex<double>(g(rng), g(rng));
  asttf::DualWindow dw{z, 1.0};
  for (auto _ : state)
    benchmark::DoNotOptimize(asttf::dual_polynomial(dw, 64));
}
BENCHMARK(bm_dual_polynomial);

void bm_stft(benchmark::State& state) {
  const asttf::Signal s = asttf::generate_test_signal(1024.0, 1024);
  const asttf::ComplexSignal y = asttf::analytic_signal(s);
  const asttf::FramePlan plan = asttf::make_frame_plan(1024, 64, 32, 1.0 / 6.0);
  for (auto _ : state) benchmark::DoNotOptimize(asttf::stft(y, plan, 256));
}
BENCHMARK(bm_stft);

}  // namespace

BENCHMARK_MAIN();
