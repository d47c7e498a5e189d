#pragma once

#include <vector>

#include "pnp/image.hpp"

namespace pnp {

struct PriorComponent {
  double weight = 1.0;
  double mean = 0.0;
  double variance = 1.0;
};

// Per-pixel i.i.d. prior: a single Gaussian or a Gaussian mixture. Everything
// downstream (denoiser, its inverse, the implicit regularizer, Lipschitz
// constants) is exactly computable because the prior is separable and the
// Gaussian-smoothed mixture stays a mixture with variances inflated by
// sigma^2.
struct AnalyticPrior {
  enum class Kind { gaussian, gmm };
  Kind kind = Kind::gaussian;
  std::vector<PriorComponent> components{PriorComponent{}};

  static AnalyticPrior gaussian(double mean, double variance);
  static AnalyticPrior mixture(std::vector<PriorComponent> comps);

  // weights positive and renormalized to exact unit sum; variances > 0;
  // gaussian kind has exactly one component
  void validate();
};

struct Denoiser {
  enum class Role { target, mismatched };
  AnalyticPrior prior;
  Role role = Role::target;
};

// Scalar (per-pixel) kernels. sigma > 0 throughout.
// Posterior mean E[x | v] under the prior and N(0, sigma^2) noise.
double denoise_scalar(const AnalyticPrior& p, double v, double sigma);
// dD/dv; strictly positive (the denoiser Jacobian is positive definite).
double denoise_deriv_scalar(const AnalyticPrior& p, double v, double sigma);
// log of the noise-smoothed prior density at u.
double log_noisy_density_scalar(const AnalyticPrior& p, double u, double sigma);
// first and second derivatives of -log smoothed density (the score route).
double grad_h_sigma_scalar(const AnalyticPrior& p, double u, double sigma);
double curv_h_sigma_scalar(const AnalyticPrior& p, double u, double sigma);
// Solves denoise(u) = x by damped Newton; tolerance 1e-12 on the residual,
// 200-iteration cap, then RangeError (x numerically outside the range).
double invert_denoiser_scalar(const AnalyticPrior& p, double x, double sigma);

// Buffer wrappers, elementwise over all samples.
ImageBuffer mmse_denoise(const Denoiser& d, const ImageBuffer& v, double sigma);
// Sum over samples of the log smoothed density (log of the joint density).
double log_noisy_density(const Denoiser& d, const ImageBuffer& u, double sigma);
ImageBuffer grad_h_sigma(const Denoiser& d, const ImageBuffer& u, double sigma);
ImageBuffer invert_denoiser(const Denoiser& d, const ImageBuffer& x, double sigma);

// Max-norm residual between the posterior-mean and score-based denoiser
// routes; identically zero in exact arithmetic.
double tweedie_check(const Denoiser& d, const ImageBuffer& u, double sigma);

// ||Dhat(v) - D(v)||_2, the realized per-input denoiser mismatch.
double denoiser_distance(const Denoiser& target, const Denoiser& mismatched,
                         const ImageBuffer& v, double sigma);

}  // namespace pnp
