// Microbenchmarks for the hot paths: the scalar denoiser kernels, the data
// prox (both routes), full solver iterations, and the SSIM pass.

#include <benchmark/benchmark.h>

#include "pnp/image.hpp"
#include "pnp/kernel.hpp"
#include "pnp/measurement.hpp"
#include "pnp/metrics.hpp"
#include "pnp/prior.hpp"
#include "pnp/rng.hpp"
#include "pnp/solver.hpp"

namespace {

pnp::ImageBuffer random_image(int h, int w, pnp::Rng& rng, double lo = -1.0, double hi = 2.0) {
  pnp::ImageBuffer img(h, w, 1);
  for (double& v : img.data) v = lo + (hi - lo) * rng.uniform01();
  return img;
}

pnp::AnalyticPrior bench_gmm() {
  return pnp::AnalyticPrior::mixture({{0.2, -2.0, 0.3}, {0.5, 0.0, 1.0}, {0.3, 1.5, 0.6}});
}

void BM_DenoiseGaussian(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  pnp::Rng rng(1);
  const pnp::ImageBuffer v = random_image(n, n, rng);
  const pnp::Denoiser d{pnp::AnalyticPrior::gaussian(0.0, 1.0), pnp::Denoiser::Role::target};
  for (auto _ : state) {
    benchmark::DoNotOptimize(pnp::mmse_denoise(d, v, 0.5));
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_DenoiseGaussian)->Arg(64)->Arg(256);

void BM_DenoiseMixture(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  pnp::Rng rng(2);
  const pnp::ImageBuffer v = random_image(n, n, rng);
  const pnp::Denoiser d{bench_gmm(), pnp::Denoiser::Role::target};
  for (auto _ : state) {
    benchmark::DoNotOptimize(pnp::mmse_denoise(d, v, 0.5));
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_DenoiseMixture)->Arg(64)->Arg(256);

void BM_ProxFft(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int scale = 2;
  pnp::Rng rng(3);
  pnp::MeasurementModel m;
  m.kernel = pnp::gaussian_kernel(1.2, 1.2);
  m.scale = scale;
  const pnp::ImageBuffer v = random_image(n, n, rng);
  const pnp::ImageBuffer y = random_image(n / scale, n / scale, rng, 0.0, 1.0);
  pnp::ProxSolverConfig cfg;
  cfg.method = pnp::ProxSolverConfig::Method::closed_form_fft;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pnp::prox_data(m, y, v, 1.0, cfg));
  }
}
BENCHMARK(BM_ProxFft)->Arg(64)->Arg(128);

void BM_ProxCg(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int scale = 2;
  pnp::Rng rng(4);
  pnp::MeasurementModel m;
  m.kernel = pnp::gaussian_kernel(1.2, 1.2);
  m.scale = scale;
  const pnp::ImageBuffer v = random_image(n, n, rng);
  const pnp::ImageBuffer y = random_image(n / scale, n / scale, rng, 0.0, 1.0);
  pnp::ProxSolverConfig cfg;
  cfg.method = pnp::ProxSolverConfig::Method::conjugate_gradient;
  cfg.cg_tol = 1e-8;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pnp::prox_data(m, y, v, 1.0, cfg));
  }
}
BENCHMARK(BM_ProxCg)->Arg(64);

void BM_SolverIteration(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  pnp::Rng rng(5);
  pnp::MeasurementModel m;
  m.kernel = pnp::dirac_kernel();
  m.scale = 1;
  m.noise_sigma = 0.05;
  const pnp::ImageBuffer gt = random_image(n, n, rng, -2.0, 2.0);
  pnp::Rng noise(6);
  const pnp::ImageBuffer y = pnp::add(gt, pnp::gaussian_noise(n, n, 1, 0.05, noise));
  const pnp::Denoiser d{pnp::AnalyticPrior::gaussian(0.0, 1.0), pnp::Denoiser::Role::target};
  pnp::SolverConfig cfg;
  cfg.gamma = 1.0;
  cfg.iterations = 10;
  cfg.mode = pnp::SolverConfig::Mode::theory;
  cfg.schedule = pnp::SigmaSchedule::constant_level(0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pnp::run(m, y, d, nullptr, cfg, &gt));
  }
  state.SetItemsProcessed(state.iterations() * 10);
}
BENCHMARK(BM_SolverIteration)->Arg(32)->Arg(64);

void BM_Ssim(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  pnp::Rng rng(7);
  const pnp::ImageBuffer a = random_image(n, n, rng, 0.0, 1.0);
  const pnp::ImageBuffer b = random_image(n, n, rng, 0.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pnp::ssim(a, b));
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_Ssim)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
