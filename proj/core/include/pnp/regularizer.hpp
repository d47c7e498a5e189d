#pragma once

#include "pnp/image.hpp"
#include "pnp/prior.hpp"

namespace pnp {

// Binds a denoiser to the (gamma, sigma) pair that defines its implicit
// regularizer h: the function whose prox with step gamma is exactly the MMSE
// denoiser on its range. Fixed per solver run.
struct RegularizerContext {
  Denoiser denoiser;
  double gamma = 1.0;
  double sigma = 0.5;

  void validate() const;
};

// h is +infinity off the denoiser range; finite results carry the value.
struct HValue {
  double value = 0.0;
  bool finite = true;
};

// h(x) = -(1/2 gamma)||x - u||^2 + (sigma^2/gamma) * (-log p_noisy(u)) with
// u the denoiser preimage of x, summed over samples.
HValue implicit_h(const RegularizerContext& ctx, const ImageBuffer& x);
double implicit_h_scalar(const RegularizerContext& ctx, double x);  // throws RangeError off-range

// gradient of h: (preimage(x) - x) / gamma
ImageBuffer grad_implicit_h(const RegularizerContext& ctx, const ImageBuffer& x);
double grad_implicit_h_scalar(const RegularizerContext& ctx, double x);

// Lipschitz constant of grad h over the denoiser range. Exact for the
// Gaussian prior (sigma^2 / (gamma tau^2)); mixtures get a sampled
// finite-difference sup over range points of [lo, hi], times a 1.5 safety
// factor so theorem checks never run with an underestimate.
double lipschitz_L(const RegularizerContext& ctx, double lo = -3.0, double hi = 4.0,
                   int n_samples = 512);

}  // namespace pnp
