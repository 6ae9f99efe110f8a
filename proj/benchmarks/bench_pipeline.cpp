#include <benchmark/benchmark.h>

#include "rtmwcs/harness.hpp"
#include "rtmwcs/recovery.hpp"

using namespace rtmwcs;

namespace {

struct Fixture {
  GridConfig grid;
  MultibandSignal sig;
  ChipSet chips;
  MeasurementMatrix phi;
  std::vector<Acquisition> acqs;
};

Fixture make_fixture(double f_nyq, int slices, int periods, int runs) {
  ExperimentConfig cfg = profile_config("desk");
  cfg.f_nyq = f_nyq;
  cfg.slices = slices;
  cfg.periods = periods;
  if (cfg.t_max > GridConfig(f_nyq, slices, periods).record_duration_s()) {
    cfg.t_min = 0.1 * GridConfig(f_nyq, slices, periods).record_duration_s();
    cfg.t_max = 0.8 * GridConfig(f_nyq, slices, periods).record_duration_s();
  }
  const GridConfig grid = cfg.grid();
  Rng rng(7);
  auto bands = draw_bands(cfg, 3, rng);
  auto sig = generate_multiband(grid, bands);
  auto chips = generate_chips(grid, runs, 11);
  auto phi = build_phi(chips);
  auto acqs = acquire_run(sig, chips, 13);
  return Fixture{grid, std::move(sig), std::move(chips), std::move(phi),
                 std::move(acqs)};
}

void BM_Acquire(benchmark::State& state) {
  const auto fx = make_fixture(2.5e9, 197, 512, 1);
  for (auto _ : state) {
    auto acq = acquire(fx.sig, fx.chips.rows.row(0), 3.1e-10);
    benchmark::DoNotOptimize(acq.samples.data());
  }
}
BENCHMARK(BM_Acquire)->Unit(benchmark::kMillisecond);

void BM_SpectralSystem(benchmark::State& state) {
  const auto fx = make_fixture(2.5e9, 197, 512, 20);
  for (auto _ : state) {
    auto sys = build_spectral_system(fx.acqs, fx.phi, fx.grid);
    benchmark::DoNotOptimize(sys.z.data());
  }
}
BENCHMARK(BM_SpectralSystem)->Unit(benchmark::kMillisecond);

void BM_SupportPursuit(benchmark::State& state) {
  const auto fx = make_fixture(2.5e9, 197, 512, 20);
  const auto sys = build_spectral_system(fx.acqs, fx.phi, fx.grid);
  const auto cov = covariance(sys);
  for (auto _ : state) {
    auto support = somp_support(cov, fx.phi, 12, 1e-3);
    benchmark::DoNotOptimize(support.indices.data());
  }
}
BENCHMARK(BM_SupportPursuit)->Unit(benchmark::kMillisecond);

void BM_Reconstruct(benchmark::State& state) {
  const int runs = static_cast<int>(state.range(0));
  const auto fx = make_fixture(2.5e9, 197, 512, runs);
  RecoveryOptions opts;
  opts.max_bands = 12;
  for (auto _ : state) {
    auto result = reconstruct(fx.acqs, fx.phi, fx.grid, opts, &fx.sig.samples);
    benchmark::DoNotOptimize(result.x_hat.data());
  }
}
BENCHMARK(BM_Reconstruct)->Arg(12)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_ReconstructToy(benchmark::State& state) {
  const auto fx = make_fixture(1.0e9, 17, 64, 8);
  RecoveryOptions opts;
  opts.max_bands = 6;
  for (auto _ : state) {
    auto result = reconstruct(fx.acqs, fx.phi, fx.grid, opts, &fx.sig.samples);
    benchmark::DoNotOptimize(result.x_hat.data());
  }
}
BENCHMARK(BM_ReconstructToy)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
