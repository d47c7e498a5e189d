#pragma once

#include <memory>

#include "pnp/image.hpp"
#include "pnp/measurement.hpp"
#include "pnp/prior.hpp"
#include "pnp/trace.hpp"

namespace pnp {

struct SigmaSchedule {
  enum class Kind { constant, log_decay };
  Kind kind = Kind::constant;
  double sigma = 0.5;         // constant level
  double sigma_start = 0.1;   // log_decay endpoints
  double sigma_end = 0.01;

  static SigmaSchedule constant_level(double s);
  static SigmaSchedule log_decay(double start, double end);
};

// Geometric interpolation between the endpoints; k=1 and k=total return the
// endpoints bit-exactly (the pow form would not).
double sigma_at(const SigmaSchedule& sched, int k, int total);

struct SolverConfig {
  enum class Mode { theory, experiment };

  double gamma = 1.0;
  // 0 picks the mode default: 200 in theory mode, 15 in experiment mode
  int iterations = 0;
  SigmaSchedule schedule{};
  Mode mode = Mode::theory;
  // in mismatched/perturbed runs, also evaluate the target denoiser at every
  // v^k to record the realized mismatch delta_k
  bool record_parallel_target = false;
  // retain x/z/v iterate history (needed by the iterate-radius estimate)
  bool keep_iterates = false;
  ProxSolverConfig prox{};
};

// z-step hook. A plain denoiser is the usual case; the adaptation module
// injects an iteration-indexed perturbation through the same interface.
class ZStep {
 public:
  virtual ~ZStep() = default;
  virtual ImageBuffer apply(const ImageBuffer& v, double sigma, int k) const = 0;
  // gamma * (gradient of this step's regularizer) at z0. Theory mode uses it
  // to initialize the dual variable so the per-iteration descent inequalities
  // hold from k = 1, not just k >= 2.
  virtual ImageBuffer dual_init(const ImageBuffer& z0, double sigma, double gamma) const = 0;
};

class DenoiserZStep : public ZStep {
 public:
  explicit DenoiserZStep(Denoiser d) : d_(std::move(d)) {}
  ImageBuffer apply(const ImageBuffer& v, double sigma, int k) const override;
  ImageBuffer dual_init(const ImageBuffer& z0, double sigma, double gamma) const override;
  const Denoiser& denoiser() const { return d_; }

 private:
  Denoiser d_;
};

// ADMM iteration: x <- prox of the data term at (z - s); z <- denoiser at
// (x + s); s <- s + x - z. Deterministic given its inputs. The trace's phi
// and gradient columns are always computed with the *target* regularizer,
// which is the objective the bounds speak about, whatever runs the z-step.
//
// theory mode: constant sigma required, gamma <= 1/(4L) asserted, dual
// initialized as gamma * grad h(z0). experiment mode: s0 = 0 and any schedule.
// z0 is scale^2 * adjoint(y) (the rescale restores the mean lost by
// zero-insertion), reducing to z0 = y for identity measurements.
SolverTrace run(const MeasurementModel& m, const ImageBuffer& y, const Denoiser& target,
                const ZStep& zstep, const SolverConfig& cfg,
                const ImageBuffer* ground_truth = nullptr);

// Convenience entry: mismatched == nullptr runs the target denoiser.
SolverTrace run(const MeasurementModel& m, const ImageBuffer& y, const Denoiser& target,
                const Denoiser* mismatched, const SolverConfig& cfg,
                const ImageBuffer* ground_truth = nullptr);

int effective_iterations(const SolverConfig& cfg);

}  // namespace pnp
