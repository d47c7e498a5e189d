#include "pnp/solver.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "pnp/diagnostics.hpp"
#include "pnp/errors.hpp"
#include "pnp/metrics.hpp"
#include "pnp/regularizer.hpp"

namespace pnp {

SigmaSchedule SigmaSchedule::constant_level(double s) {
  if (!(s > 0.0)) throw std::invalid_argument("sigma must be > 0");
  SigmaSchedule out;
  out.kind = Kind::constant;
  out.sigma = s;
  return out;
}

SigmaSchedule SigmaSchedule::log_decay(double start, double end) {
  if (!(start > 0.0) || !(end > 0.0)) throw std::invalid_argument("sigma endpoints must be > 0");
  SigmaSchedule out;
  out.kind = Kind::log_decay;
  out.sigma_start = start;
  out.sigma_end = end;
  return out;
}

double sigma_at(const SigmaSchedule& sched, int k, int total) {
  if (k < 1 || k > total) throw std::invalid_argument("sigma_at: k out of range");
  if (sched.kind == SigmaSchedule::Kind::constant) return sched.sigma;
  if (k == 1 || total == 1) return sched.sigma_start;
  if (k == total) return sched.sigma_end;
  const double t = static_cast<double>(k - 1) / static_cast<double>(total - 1);
  return sched.sigma_start * std::pow(sched.sigma_end / sched.sigma_start, t);
}

int effective_iterations(const SolverConfig& cfg) {
  if (cfg.iterations > 0) return cfg.iterations;
  return cfg.mode == SolverConfig::Mode::theory ? 200 : 15;
}

ImageBuffer DenoiserZStep::apply(const ImageBuffer& v, double sigma, int) const {
  return mmse_denoise(d_, v, sigma);
}

ImageBuffer DenoiserZStep::dual_init(const ImageBuffer& z0, double sigma, double gamma) const {
  RegularizerContext ctx{d_, gamma, sigma};
  return scaled(grad_implicit_h(ctx, z0), gamma);
}

SolverTrace run(const MeasurementModel& m, const ImageBuffer& y, const Denoiser& target,
                const ZStep& zstep, const SolverConfig& cfg, const ImageBuffer* ground_truth) {
  if (!(cfg.gamma > 0.0)) throw std::invalid_argument("run: gamma must be > 0");
  const int total = effective_iterations(cfg);
  if (total < 1) throw std::invalid_argument("run: iterations must be >= 1");
  const bool theory = cfg.mode == SolverConfig::Mode::theory;
  if (theory && cfg.schedule.kind != SigmaSchedule::Kind::constant)
    throw std::invalid_argument("run: theory mode requires a constant sigma schedule");

  const double sigma1 = sigma_at(cfg.schedule, 1, total);
  if (theory) {
    // the convergence guarantees need gamma <= 1/(4L) for the target
    // regularizer; reject configurations outside that regime up front
    RegularizerContext tctx{target, cfg.gamma, sigma1};
    const double L = lipschitz_L(tctx);
    if (cfg.gamma * L > 0.25 * (1.0 + 1e-9))
      throw std::invalid_argument("run: theory mode needs gamma <= 1/(4L); gamma*L = " +
                                  std::to_string(cfg.gamma * L));
  }

  SolverTrace trace;
  trace.has_delta = cfg.record_parallel_target;
  ImageBuffer z = scaled(adjoint(m, y), static_cast<double>(m.scale) * m.scale);
  ImageBuffer s = theory ? zstep.dual_init(z, sigma1, cfg.gamma)
                         : ImageBuffer(z.height, z.width, z.channels, 0.0);

  {
    // phi at the initial point with the convention x^0 := z^0: the coupling
    // terms vanish and phi0 = g(z0) + h(z0)
    RegularizerContext tctx{target, cfg.gamma, sigma1};
    const HValue h0 = implicit_h(tctx, z);
    trace.phi0 = h0.finite ? data_fidelity(m, y, z) + h0.value
                           : std::numeric_limits<double>::infinity();
  }
  if (cfg.keep_iterates) trace.z_iters.push_back(z);

  const bool can_ssim = ground_truth && ground_truth->height >= 11 && ground_truth->width >= 11;
  ImageBuffer x;
  for (int k = 1; k <= total; ++k) {
    const double sig = sigma_at(cfg.schedule, k, total);
    x = prox_data(m, y, sub(z, s), cfg.gamma, cfg.prox);
    const ImageBuffer v = add(x, s);
    const ImageBuffer z_prev = z;
    z = zstep.apply(v, sig, k);
    const ImageBuffer s_prev = s;
    s = add(s, sub(x, z));
    if (!all_finite(x) || !all_finite(z) || !all_finite(s))
      throw SolveError("run: non-finite iterate at iteration " + std::to_string(k));

    TraceRow row;
    row.iter = k;
    row.sigma_k = sig;
    row.z_step_norm = l2_norm(sub(z, z_prev));
    row.xz_gap = l2_norm(sub(x, z));
    row.s_step_norm = l2_norm(sub(s, s_prev));
    if (cfg.record_parallel_target)
      row.delta_k = l2_norm(sub(z, mmse_denoise(target, v, sig)));

    RegularizerContext tctx{target, cfg.gamma, sig};
    row.phi = augmented_lagrangian(m, y, tctx, x, z, s, cfg.gamma);
    const HValue hx = implicit_h(tctx, x);
    row.f_at_x = hx.finite ? data_fidelity(m, y, x) + hx.value
                           : std::numeric_limits<double>::infinity();
    row.grad_f_norm = l2_norm(grad_f(m, y, tctx, x));

    if (ground_truth) {
      row.psnr = psnr(x, *ground_truth);
      row.psnr_paper_formula = psnr_paper_formula(x, *ground_truth);
      row.ssim = can_ssim ? ssim(x, *ground_truth) : std::numeric_limits<double>::quiet_NaN();
    } else {
      row.psnr = std::numeric_limits<double>::quiet_NaN();
      row.psnr_paper_formula = std::numeric_limits<double>::quiet_NaN();
      row.ssim = std::numeric_limits<double>::quiet_NaN();
    }
    trace.rows.push_back(row);

    if (cfg.keep_iterates) {
      trace.z_iters.push_back(z);
      trace.x_iters.push_back(x);
      trace.v_iters.push_back(v);
    }
  }
  trace.x_hat = x;
  trace.z_final = z;
  return trace;
}

SolverTrace run(const MeasurementModel& m, const ImageBuffer& y, const Denoiser& target,
                const Denoiser* mismatched, const SolverConfig& cfg,
                const ImageBuffer* ground_truth) {
  if (mismatched) {
    DenoiserZStep step(*mismatched);
    return run(m, y, target, step, cfg, ground_truth);
  }
  DenoiserZStep step(target);
  return run(m, y, target, step, cfg, ground_truth);
}

}  // namespace pnp
