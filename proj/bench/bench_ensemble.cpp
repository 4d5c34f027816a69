// Serial reference path (jobs = 1) against the OpenMP path for the two
// ensemble-heavy kernels: bilinear-constant estimation and ISS certification.
#include <benchmark/benchmark.h>

#include "issl/certify/iss.hpp"
#include "issl/models/burgers.hpp"

namespace {

issl::Exec exec_for(const benchmark::State& state) { return issl::Exec{static_cast<int>(state.range(0))}; }

void BM_EstimateK(benchmark::State& state) {
  const issl::BurgersH1 m(64);
  const issl::Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(issl::estimate_bilinear_K(m, 0.5, 512, rng, exec_for(state)));
}

void BM_CertifyIss(benchmark::State& state) {
  const issl::BurgersH1 m(64);
  const issl::Rng rng(1);
  issl::IssOptions o;
  o.K = 0.2;
  o.keep_runs = false;
  o.exec = exec_for(state);
  for (auto _ : state) benchmark::DoNotOptimize(issl::certify_iss(m, 1.0, 0.05, 16, 1.0, 1e-3, rng, o).nu);
}

}  // namespace

// Argument: worker threads (1 = serial reference, 0 = all cores).
BENCHMARK(BM_EstimateK)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CertifyIss)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
