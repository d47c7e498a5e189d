#include "pnp/prior.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "pnp/errors.hpp"

namespace pnp {

AnalyticPrior AnalyticPrior::gaussian(double mean, double variance) {
  AnalyticPrior p;
  p.kind = Kind::gaussian;
  p.components = {PriorComponent{1.0, mean, variance}};
  p.validate();
  return p;
}

AnalyticPrior AnalyticPrior::mixture(std::vector<PriorComponent> comps) {
  AnalyticPrior p;
  p.kind = Kind::gmm;
  p.components = std::move(comps);
  p.validate();
  return p;
}

void AnalyticPrior::validate() {
  if (components.empty()) throw std::invalid_argument("prior needs at least one component");
  if (kind == Kind::gaussian && components.size() != 1)
    throw std::invalid_argument("gaussian prior must have exactly one component");
  double sum = 0.0;
  for (const auto& c : components) {
    if (!(c.weight > 0.0)) throw std::invalid_argument("prior weights must be positive");
    if (!(c.variance > 0.0)) throw std::invalid_argument("prior variances must be positive");
    if (!std::isfinite(c.mean)) throw std::invalid_argument("prior mean must be finite");
    sum += c.weight;
  }
  if (std::fabs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("prior weights must sum to 1 (got " + std::to_string(sum) + ")");
  for (auto& c : components) c.weight /= sum;
}

namespace {

constexpr double kLogTwoPi = 1.8378770664093454836;  // log(2*pi)

struct MixtureEval {
  // log-sum-exp factored responsibilities: resp[i] = exp(a_i - a_max),
  // with a_i = log w_i + log N(u; mu_i, tau_i^2 + sigma^2)
  double a_max;
  double r0;  // sum of resp
  std::vector<double> resp;
};

MixtureEval eval_mixture(const AnalyticPrior& p, double u, double sigma) {
  MixtureEval e;
  e.resp.resize(p.components.size());
  e.a_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.components.size(); ++i) {
    const auto& c = p.components[i];
    const double v = c.variance + sigma * sigma;
    const double d = u - c.mean;
    e.resp[i] = std::log(c.weight) - 0.5 * (kLogTwoPi + std::log(v)) - 0.5 * d * d / v;
    e.a_max = std::max(e.a_max, e.resp[i]);
  }
  e.r0 = 0.0;
  for (double& a : e.resp) {
    a = std::exp(a - e.a_max);
    e.r0 += a;
  }
  return e;
}

void check_sigma(double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");
}

}  // namespace

double denoise_scalar(const AnalyticPrior& p, double v, double sigma) {
  check_sigma(sigma);
  const double s2 = sigma * sigma;
  if (p.components.size() == 1) {
    const auto& c = p.components[0];
    return (c.variance * v + s2 * c.mean) / (c.variance + s2);
  }
  // posterior mean: responsibilities times per-component posterior means
  const MixtureEval e = eval_mixture(p, v, sigma);
  double num = 0.0;
  for (std::size_t i = 0; i < p.components.size(); ++i) {
    const auto& c = p.components[i];
    num += e.resp[i] * (c.variance * v + s2 * c.mean) / (c.variance + s2);
  }
  return num / e.r0;
}

double denoise_deriv_scalar(const AnalyticPrior& p, double v, double sigma) {
  return 1.0 - sigma * sigma * curv_h_sigma_scalar(p, v, sigma);
}

double log_noisy_density_scalar(const AnalyticPrior& p, double u, double sigma) {
  check_sigma(sigma);
  const MixtureEval e = eval_mixture(p, u, sigma);
  return e.a_max + std::log(e.r0);
}

double grad_h_sigma_scalar(const AnalyticPrior& p, double u, double sigma) {
  check_sigma(sigma);
  const MixtureEval e = eval_mixture(p, u, sigma);
  double s1 = 0.0;
  for (std::size_t i = 0; i < p.components.size(); ++i) {
    const auto& c = p.components[i];
    s1 += e.resp[i] * (c.mean - u) / (c.variance + sigma * sigma);
  }
  // d/du of -log p_u = -(p_u'/p_u)
  return -s1 / e.r0;
}

double curv_h_sigma_scalar(const AnalyticPrior& p, double u, double sigma) {
  check_sigma(sigma);
  const MixtureEval e = eval_mixture(p, u, sigma);
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < p.components.size(); ++i) {
    const auto& c = p.components[i];
    const double v = c.variance + sigma * sigma;
    const double t = (u - c.mean) / v;
    s1 += e.resp[i] * (-t);
    s2 += e.resp[i] * (t * t - 1.0 / v);
  }
  const double g = s1 / e.r0;       // (log p)'
  const double h = s2 / e.r0;       // p'' / p
  return -(h - g * g);              // -(log p)''
}

double invert_denoiser_scalar(const AnalyticPrior& p, double x, double sigma) {
  check_sigma(sigma);
  const double s2 = sigma * sigma;
  if (p.components.size() == 1) {
    const auto& c = p.components[0];
    return ((c.variance + s2) * x - s2 * c.mean) / c.variance;
  }
  // Damped Newton on the strictly increasing map u -> denoise(u). The
  // derivative is positive everywhere, so undamped Newton can only fail by
  // overshoot; halving the step restores monotone residual decrease.
  double u = x;
  double f = denoise_scalar(p, u, sigma) - x;
  for (int it = 0; it < 200; ++it) {
    if (std::fabs(f) <= 1e-12) return u;
    const double d = denoise_deriv_scalar(p, u, sigma);
    double step = f / d;
    double u_new = u - step;
    double f_new = denoise_scalar(p, u_new, sigma) - x;
    int halvings = 0;
    while (std::fabs(f_new) > std::fabs(f) && halvings < 60) {
      step *= 0.5;
      u_new = u - step;
      f_new = denoise_scalar(p, u_new, sigma) - x;
      ++halvings;
    }
    u = u_new;
    f = f_new;
  }
  if (std::fabs(f) <= 1e-12) return u;
  throw RangeError("denoiser inversion stalled at residual " + std::to_string(f) +
                   "; input likely outside the denoiser range");
}

ImageBuffer mmse_denoise(const Denoiser& d, const ImageBuffer& v, double sigma) {
  check_sigma(sigma);
  ImageBuffer out = v;
  for (double& x : out.data) x = denoise_scalar(d.prior, x, sigma);
  return out;
}

double log_noisy_density(const Denoiser& d, const ImageBuffer& u, double sigma) {
  double s = 0.0;
  for (double x : u.data) s += log_noisy_density_scalar(d.prior, x, sigma);
  return s;
}

ImageBuffer grad_h_sigma(const Denoiser& d, const ImageBuffer& u, double sigma) {
  ImageBuffer out = u;
  for (double& x : out.data) x = grad_h_sigma_scalar(d.prior, x, sigma);
  return out;
}

ImageBuffer invert_denoiser(const Denoiser& d, const ImageBuffer& x, double sigma) {
  ImageBuffer out = x;
  for (double& v : out.data) v = invert_denoiser_scalar(d.prior, v, sigma);
  return out;
}

double tweedie_check(const Denoiser& d, const ImageBuffer& u, double sigma) {
  const double s2 = sigma * sigma;
  double worst = 0.0;
  for (double x : u.data) {
    const double lhs = denoise_scalar(d.prior, x, sigma);
    const double rhs = x - s2 * grad_h_sigma_scalar(d.prior, x, sigma);
    worst = std::max(worst, std::fabs(lhs - rhs));
  }
  return worst;
}

double denoiser_distance(const Denoiser& target, const Denoiser& mismatched,
                         const ImageBuffer& v, double sigma) {
  return l2_norm(sub(mmse_denoise(mismatched, v, sigma), mmse_denoise(target, v, sigma)));
}

}  // namespace pnp
