#include "pnp/adaptation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pnp/regularizer.hpp"

namespace pnp {

void AdaptationPath::validate() const {
  if (alphas.empty()) throw std::invalid_argument("adaptation path needs at least one alpha");
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (alphas[i] < 0.0 || alphas[i] > 1.0)
      throw std::invalid_argument("adaptation alphas must lie in [0, 1]");
    if (i > 0 && alphas[i] <= alphas[i - 1])
      throw std::invalid_argument("adaptation alphas must be strictly increasing");
  }
}

namespace {

// split the heaviest component in halves until the mixture has n components;
// the represented distribution is unchanged
AnalyticPrior pad_to(const AnalyticPrior& p, std::size_t n) {
  AnalyticPrior out = p;
  while (out.components.size() < n) {
    auto it = std::max_element(out.components.begin(), out.components.end(),
                               [](const PriorComponent& a, const PriorComponent& b) {
                                 return a.weight < b.weight;
                               });
    PriorComponent half = *it;
    half.weight *= 0.5;
    it->weight *= 0.5;
    out.components.push_back(half);
  }
  if (out.components.size() > 1) out.kind = AnalyticPrior::Kind::gmm;
  return out;
}

}  // namespace

AnalyticPrior interpolate_prior(const AnalyticPrior& source, const AnalyticPrior& target,
                                double alpha) {
  if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("alpha must lie in [0, 1]");
  if (alpha == 0.0) return source;
  if (alpha == 1.0) return target;
  const std::size_t n = std::max(source.components.size(), target.components.size());
  const AnalyticPrior s = pad_to(source, n);
  const AnalyticPrior t = pad_to(target, n);
  if (s.components.size() != t.components.size())
    throw std::invalid_argument("priors remain incompatible after padding");

  AnalyticPrior out = s;
  double wsum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& cs = s.components[i];
    const auto& ct = t.components[i];
    auto& c = out.components[i];
    c.weight = (1.0 - alpha) * cs.weight + alpha * ct.weight;
    c.mean = (1.0 - alpha) * cs.mean + alpha * ct.mean;
    c.variance = std::exp((1.0 - alpha) * std::log(cs.variance) + alpha * std::log(ct.variance));
    wsum += c.weight;
  }
  for (auto& c : out.components) c.weight /= wsum;
  out.kind = n == 1 ? AnalyticPrior::Kind::gaussian : AnalyticPrior::Kind::gmm;
  out.validate();
  return out;
}

DeltaSchedule DeltaSchedule::summable(double c, double p) {
  if (c < 0.0) throw std::invalid_argument("delta schedule: c must be >= 0");
  if (!(p > 1.0)) throw std::invalid_argument("summable delta schedule needs p > 1");
  return DeltaSchedule{Kind::summable, c, p};
}

DeltaSchedule DeltaSchedule::non_summable(double c, double p) {
  if (c < 0.0) throw std::invalid_argument("delta schedule: c must be >= 0");
  if (p > 1.0) throw std::invalid_argument("non-summable delta schedule needs p <= 1");
  return DeltaSchedule{Kind::non_summable, c, p};
}

DeltaSchedule DeltaSchedule::constant(double c) {
  if (c < 0.0) throw std::invalid_argument("delta schedule: c must be >= 0");
  return DeltaSchedule{Kind::constant, c, 0.0};
}

double DeltaSchedule::at(int k) const {
  if (k < 1) throw std::invalid_argument("delta schedule index starts at 1");
  if (kind == Kind::constant) return c;
  return c / std::pow(static_cast<double>(k), p);
}

PerturbedZStep::PerturbedZStep(Denoiser target, DeltaSchedule schedule, ImageBuffer direction)
    : target_(std::move(target)), schedule_(schedule), direction_(std::move(direction)) {
  const double n = l2_norm(direction_);
  if (std::fabs(n - 1.0) > 1e-9)
    throw std::invalid_argument("perturbation direction must have unit norm, got " +
                                std::to_string(n));
}

ImageBuffer PerturbedZStep::apply(const ImageBuffer& v, double sigma, int k) const {
  ImageBuffer z = mmse_denoise(target_, v, sigma);
  const double d = schedule_.at(k);
  for (std::size_t i = 0; i < z.data.size(); ++i) z.data[i] += d * direction_.data[i];
  return z;
}

ImageBuffer PerturbedZStep::dual_init(const ImageBuffer& z0, double sigma, double gamma) const {
  RegularizerContext ctx{target_, gamma, sigma};
  return scaled(grad_implicit_h(ctx, z0), gamma);
}

}  // namespace pnp
