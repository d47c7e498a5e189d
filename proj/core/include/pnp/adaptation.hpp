#pragma once

#include <vector>

#include "pnp/prior.hpp"
#include "pnp/solver.hpp"

namespace pnp {

// Parameter-space stand-in for adapting a denoiser toward the target domain:
// alpha = 0 is the mismatched source prior, alpha = 1 the target.
struct AdaptationPath {
  AnalyticPrior source;
  AnalyticPrior target;
  std::vector<double> alphas;

  // alphas strictly increasing within [0, 1]
  void validate() const;
};

// Componentwise interpolation: linear in means and log-variances, linear in
// weights with renormalization. Mixtures of unequal size are first padded by
// splitting the heaviest component (distribution-preserving). alpha = 0 / 1
// return the endpoints unchanged.
AnalyticPrior interpolate_prior(const AnalyticPrior& source, const AnalyticPrior& target,
                                double alpha);

// delta_k target values for perturbed runs: c / k^p, with p > 1 the summable
// regime, p <= 1 non-summable, and p = 0 (constant) pinned separately.
struct DeltaSchedule {
  enum class Kind { summable, non_summable, constant };
  Kind kind = Kind::constant;
  double c = 0.0;
  double p = 0.0;

  static DeltaSchedule summable(double c, double p);      // requires p > 1
  static DeltaSchedule non_summable(double c, double p);  // requires p <= 1
  static DeltaSchedule constant(double c);

  double at(int k) const;
};

// z-step that displaces the target denoiser output by exactly delta_k along a
// fixed unit direction, so the realized mismatch equals the schedule value
// bit-for-bit and runs stay deterministic.
class PerturbedZStep : public ZStep {
 public:
  PerturbedZStep(Denoiser target, DeltaSchedule schedule, ImageBuffer direction);
  ImageBuffer apply(const ImageBuffer& v, double sigma, int k) const override;
  ImageBuffer dual_init(const ImageBuffer& z0, double sigma, double gamma) const override;

 private:
  Denoiser target_;
  DeltaSchedule schedule_;
  ImageBuffer direction_;
};

}  // namespace pnp
