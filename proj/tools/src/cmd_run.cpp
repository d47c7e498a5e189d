#include "pnpcli/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>

#include "artifacts.hpp"
#include "pnp/adaptation.hpp"
#include "pnp/csv.hpp"
#include "pnp/pnm.hpp"
#include "pnp/solver.hpp"
#include "pnpcli/experiment.hpp"

namespace pnpcli {

namespace fs = std::filesystem;

namespace detail {

namespace {

pnp::ImageBuffer unit_direction(const pnp::ImageBuffer& like) {
  const double n = static_cast<double>(like.size());
  return pnp::ImageBuffer(like.height, like.width, like.channels, 1.0 / std::sqrt(n));
}

SingleRun timed_run(const pnp::MeasurementModel& m, const pnp::ImageBuffer& y,
                    const pnp::Denoiser& target, const pnp::ZStep& zstep,
                    const pnp::SolverConfig& cfg, const pnp::ImageBuffer* gt,
                    std::string label) {
  const auto t0 = std::chrono::steady_clock::now();
  SingleRun r;
  r.trace = pnp::run(m, y, target, zstep, cfg, gt);
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.zstep_label = std::move(label);
  return r;
}

}  // namespace

SingleRun execute_single(const ExperimentSpec& spec, const Problem& prob,
                         const pnp::SolverConfig& cfg) {
  const pnp::ImageBuffer* gt = prob.ground_truth ? &*prob.ground_truth : nullptr;
  pnp::SolverConfig c = cfg;
  if (spec.delta) {
    c.record_parallel_target = true;
    pnp::PerturbedZStep z(prob.target, *spec.delta, unit_direction(*prob.ground_truth));
    return timed_run(prob.model, prob.y, prob.target, z, c, gt, "perturbed");
  }
  if (prob.mismatched) {
    c.record_parallel_target = true;
    pnp::DenoiserZStep z(*prob.mismatched);
    return timed_run(prob.model, prob.y, prob.target, z, c, gt, "mismatched");
  }
  pnp::DenoiserZStep z(prob.target);
  return timed_run(prob.model, prob.y, prob.target, z, c, gt, "target");
}

SingleRun execute_with_denoiser(const ExperimentSpec& spec, const Problem& prob,
                                const pnp::SolverConfig& cfg, const pnp::Denoiser& zstep_denoiser,
                                const std::string& label) {
  (void)spec;
  const pnp::ImageBuffer* gt = prob.ground_truth ? &*prob.ground_truth : nullptr;
  pnp::SolverConfig c = cfg;
  c.record_parallel_target = true;
  pnp::DenoiserZStep z(zstep_denoiser);
  return timed_run(prob.model, prob.y, prob.target, z, c, gt, label);
}

double capped_db(double v) { return v > 99.0 ? 99.0 : v; }

void write_run_artifacts(const std::string& dir, const ExperimentSpec& spec,
                         const SingleRun& run, std::uint64_t seed) {
  fs::create_directories(dir);
  pnp::write_trace_csv((fs::path(dir) / "trace.csv").string(), run.trace);

  const char* image_name = run.trace.x_hat.channels == 3 ? "x_hat.ppm" : "x_hat.pgm";
  pnp::write_image((fs::path(dir) / image_name).string(), run.trace.x_hat, 16);

  std::ofstream out(fs::path(dir) / "summary.txt", std::ios::binary);
  out << "pnpadmm run summary\n";
  out << "seed: " << seed << "\n";
  out << "z_step: " << run.zstep_label << "\n";
  out << "gamma: " << pnp::format_g17(spec.solver.gamma) << "\n";
  out << "iterations: " << run.trace.rows.size() << "\n";
  if (!run.trace.rows.empty()) {
    const pnp::TraceRow& last = run.trace.rows.back();
    out << "final_phi: " << pnp::format_g17(last.phi) << "\n";
    out << "final_grad_f_norm: " << pnp::format_g17(last.grad_f_norm) << "\n";
    out << "final_psnr: " << pnp::format_g17(capped_db(last.psnr)) << "\n";
    out << "final_psnr_paper_formula: " << pnp::format_g17(capped_db(last.psnr_paper_formula))
        << "\n";
    out << "final_ssim: " << pnp::format_g17(last.ssim) << "\n";
  }
  out << "wall_time_seconds: " << run.wall_seconds << "\n";
  out << "--- config ---\n";
  out << spec.config_text;
  if (!spec.config_text.empty() && spec.config_text.back() != '\n') out << "\n";
}

}  // namespace detail

namespace {

std::string alpha_label(double alpha) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", alpha);
  return buf;
}

int run_adaptation(const ExperimentSpec& spec, const Problem& prob, const std::string& out_dir,
                   std::uint64_t seed) {
  pnp::CsvTable table;
  table.header = {"alpha", "psnr", "psnr_paper_formula", "ssim"};
  for (double alpha : *spec.adaptation_alphas) {
    pnp::AnalyticPrior prior = pnp::interpolate_prior(*spec.mismatched, spec.target, alpha);
    const auto role =
        alpha == 1.0 ? pnp::Denoiser::Role::target : pnp::Denoiser::Role::mismatched;
    pnp::Denoiser d{prior, role};
    detail::SingleRun run = detail::execute_with_denoiser(spec, prob, spec.solver, d,
                                                          "alpha=" + alpha_label(alpha));
    const std::string sub = (fs::path(out_dir) / ("alpha_" + alpha_label(alpha))).string();
    detail::write_run_artifacts(sub, spec, run, seed);
    const pnp::TraceRow& last = run.trace.rows.back();
    table.rows.push_back({pnp::format_g17(alpha), pnp::format_g17(detail::capped_db(last.psnr)),
                          pnp::format_g17(detail::capped_db(last.psnr_paper_formula)),
                          pnp::format_g17(last.ssim)});
  }
  pnp::write_csv((fs::path(out_dir) / "adaptation.csv").string(), table);
  return 0;
}

}  // namespace

int cmd_run(const RunArgs& args) {
  ExperimentSpec spec = load_experiment(args.config_path);
  const std::uint64_t seed = args.seed.value_or(spec.seed);
  const std::string out_dir = resolve_out_dir(args.out_dir, &spec);
  fs::create_directories(out_dir);
  Problem prob = build_problem(spec, seed);

  if (spec.adaptation_alphas) return run_adaptation(spec, prob, out_dir, seed);

  detail::SingleRun run = detail::execute_single(spec, prob, spec.solver);
  detail::write_run_artifacts(out_dir, spec, run, seed);
  return 0;
}

}  // namespace pnpcli
