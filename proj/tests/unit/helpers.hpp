#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>

#include "pnp/image.hpp"
#include "pnp/kernel.hpp"
#include "pnp/measurement.hpp"
#include "pnp/prior.hpp"
#include "pnp/regularizer.hpp"
#include "pnp/rng.hpp"
#include "pnp/solver.hpp"

namespace testutil {

inline pnp::ImageBuffer random_image(int h, int w, int c, pnp::Rng& rng, double lo = 0.0,
                                     double hi = 1.0) {
  pnp::ImageBuffer img(h, w, c);
  for (auto& v : img.data) v = lo + (hi - lo) * rng.uniform01();
  return img;
}

inline double max_abs_diff(const pnp::ImageBuffer& a, const pnp::ImageBuffer& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i)
    worst = std::max(worst, std::fabs(a.data[i] - b.data[i]));
  return worst;
}

// The 16x16 reference instance shared by the solver-level suites: identity
// measurement with noise 0.05, target prior N(0,1), constant sigma 0.5 and
// gamma 1, which sits exactly at the gamma*L = 1/4 stability edge (L = 1/4).
struct Canonical {
  pnp::MeasurementModel m;
  pnp::ImageBuffer gt, y;
  pnp::Denoiser target;
  pnp::SolverConfig cfg;
  double L = 0.0;
};

inline Canonical canonical_instance(std::uint64_t seed = 7, int iterations = 200) {
  Canonical c;
  c.m.kernel = pnp::dirac_kernel();
  c.m.scale = 1;
  c.m.noise_sigma = 0.05;
  c.gt = pnp::ImageBuffer(16, 16, 1);
  pnp::Rng rg(pnp::derive_seed(seed, 0));
  for (auto& v : c.gt.data) v = rg.normal();  // a draw from the N(0,1) prior
  pnp::Rng ry(pnp::derive_seed(seed, 1));
  c.y = pnp::add(c.gt, pnp::gaussian_noise(16, 16, 1, c.m.noise_sigma, ry));
  c.target.prior = pnp::AnalyticPrior::gaussian(0.0, 1.0);
  c.cfg.gamma = 1.0;
  c.cfg.iterations = iterations;
  c.cfg.schedule = pnp::SigmaSchedule::constant_level(0.5);
  c.cfg.mode = pnp::SolverConfig::Mode::theory;
  pnp::RegularizerContext ctx{c.target, c.cfg.gamma, 0.5};
  c.L = pnp::lipschitz_L(ctx);
  return c;
}

// Unit vector along all-ones, the fixed displacement direction used by the
// perturbed-run tests.
inline pnp::ImageBuffer ones_direction(int h, int w, int c = 1) {
  pnp::ImageBuffer d(h, w, c, 1.0);
  const double inv = 1.0 / std::sqrt(static_cast<double>(d.size()));
  for (auto& v : d.data) v *= inv;
  return d;
}

// Per-suite scratch directory under the build tree's temp space.
inline std::filesystem::path scratch_dir(const char* leaf) {
  namespace fs = std::filesystem;
  fs::path d = fs::temp_directory_path() / "pnp_unit" / leaf;
  fs::create_directories(d);
  return d;
}

}  // namespace testutil
