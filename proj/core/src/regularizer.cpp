#include "pnp/regularizer.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "pnp/errors.hpp"

namespace pnp {

void RegularizerContext::validate() const {
  if (!(gamma > 0.0)) throw std::invalid_argument("regularizer gamma must be > 0");
  if (!(sigma > 0.0)) throw std::invalid_argument("regularizer sigma must be > 0");
}

double implicit_h_scalar(const RegularizerContext& ctx, double x) {
  const double u = invert_denoiser_scalar(ctx.denoiser.prior, x, ctx.sigma);
  const double d = x - u;
  const double hs = -log_noisy_density_scalar(ctx.denoiser.prior, u, ctx.sigma);
  return -0.5 * d * d / ctx.gamma + ctx.sigma * ctx.sigma / ctx.gamma * hs;
}

HValue implicit_h(const RegularizerContext& ctx, const ImageBuffer& x) {
  ctx.validate();
  double sum = 0.0;
  try {
    for (double v : x.data) sum += implicit_h_scalar(ctx, v);
  } catch (const RangeError&) {
    return HValue{std::numeric_limits<double>::infinity(), false};
  }
  return HValue{sum, true};
}

double grad_implicit_h_scalar(const RegularizerContext& ctx, double x) {
  const double u = invert_denoiser_scalar(ctx.denoiser.prior, x, ctx.sigma);
  return (u - x) / ctx.gamma;
}

ImageBuffer grad_implicit_h(const RegularizerContext& ctx, const ImageBuffer& x) {
  ctx.validate();
  ImageBuffer out = x;
  for (double& v : out.data) v = grad_implicit_h_scalar(ctx, v);
  return out;
}

double lipschitz_L(const RegularizerContext& ctx, double lo, double hi, int n_samples) {
  ctx.validate();
  const AnalyticPrior& p = ctx.denoiser.prior;
  if (p.components.size() == 1)
    return ctx.sigma * ctx.sigma / (ctx.gamma * p.components[0].variance);
  if (n_samples < 1) throw std::invalid_argument("lipschitz_L: n_samples must be >= 1");
  // sample the range by pushing a grid of inputs through the denoiser, then
  // finite-difference grad h there
  const double eps = 1e-5;
  double sup = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const double u = n_samples == 1 ? lo : lo + (hi - lo) * i / (n_samples - 1);
    const double x = denoise_scalar(p, u, ctx.sigma);
    const double d = (grad_implicit_h_scalar(ctx, x + eps) - grad_implicit_h_scalar(ctx, x - eps)) /
                     (2.0 * eps);
    sup = std::max(sup, std::fabs(d));
  }
  return 1.5 * sup;
}

}  // namespace pnp
