#include "pnpcli/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "pnp/adaptation.hpp"
#include "pnp/diagnostics.hpp"
#include "pnp/kernel.hpp"
#include "pnp/measurement.hpp"
#include "pnp/metrics.hpp"
#include "pnp/prior.hpp"
#include "pnp/regularizer.hpp"
#include "pnp/rng.hpp"
#include "pnp/solver.hpp"
#include "pnp/trace.hpp"
#include "pnpcli/experiment.hpp"

namespace pnpcli {

namespace {

using pnp::AnalyticPrior;
using pnp::Denoiser;
using pnp::ImageBuffer;
using pnp::MeasurementModel;
using pnp::SolverConfig;
using pnp::SolverTrace;

void push(std::vector<CheckResult>& out, std::string suite, std::string name, double value,
          double threshold, bool pass, std::string detail = "") {
  out.push_back({std::move(suite), std::move(name), value, threshold, pass, std::move(detail)});
}

// value <= threshold convention
void push_le(std::vector<CheckResult>& out, std::string suite, std::string name, double value,
             double threshold, std::string detail = "") {
  const bool ok = std::isfinite(value) && value <= threshold;
  push(out, std::move(suite), std::move(name), value, threshold, ok, std::move(detail));
}

AnalyticPrior gmm_example() {
  return AnalyticPrior::mixture({{0.3, -1.0, 0.5}, {0.7, 2.0, 1.5}});
}

AnalyticPrior gmm_three() {
  return AnalyticPrior::mixture({{0.2, -2.0, 0.3}, {0.5, 0.0, 1.0}, {0.3, 1.5, 0.6}});
}

ImageBuffer random_image(int h, int w, int c, pnp::Rng& rng, double lo = 0.0, double hi = 1.0) {
  ImageBuffer img(h, w, c);
  for (double& v : img.data) v = lo + (hi - lo) * rng.uniform01();
  return img;
}

// The shared test problem: unit-variance zero-mean Gaussian prior, identity
// measurement, sigma = 0.5, gamma = 1. Then gamma * L = sigma^2 / tau^2 =
// 1/4 exactly, the boundary the theorems allow.
struct Canonical {
  ExperimentSpec spec;
  Problem prob;
  double L = 0.0;
  double gamma = 1.0;
};

Canonical make_canonical(std::uint64_t seed, int iterations, double mismatch_dmu) {
  Canonical c;
  c.spec.synthetic = true;
  c.spec.height = 16;
  c.spec.width = 16;
  c.spec.channels = 1;
  c.spec.noise_sigma = 0.05;
  c.spec.model.kernel = pnp::dirac_kernel();
  c.spec.model.scale = 1;
  c.spec.model.noise_sigma = c.spec.noise_sigma;
  c.spec.target = AnalyticPrior::gaussian(0.0, 1.0);
  if (mismatch_dmu != 0.0) {
    c.spec.mismatched = AnalyticPrior::gaussian(mismatch_dmu, 1.0);
  }
  c.spec.solver.gamma = 1.0;
  c.spec.solver.iterations = iterations;
  c.spec.solver.schedule = pnp::SigmaSchedule::constant_level(0.5);
  c.spec.solver.mode = SolverConfig::Mode::theory;
  c.prob = build_problem(c.spec, seed);
  pnp::RegularizerContext ctx{c.prob.target, c.spec.solver.gamma, 0.5};
  c.L = pnp::lipschitz_L(ctx);
  c.gamma = c.spec.solver.gamma;
  return c;
}

double max_descent_violation(const pnp::DescentReport& r) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& row : r.rows) worst = std::max(worst, row.lhs - row.rhs);
  return worst;
}

double max_lower_violation(const pnp::LowerBoundReport& r) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& row : r.rows) worst = std::max(worst, row.bound - row.phi);
  return worst;
}

double max_bound_violation(const pnp::BoundReport& r) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& row : r.per_t) {
    worst = std::max(worst, std::max(row.lhs_min, row.lhs_mean) - row.rhs);
  }
  return worst;
}

std::vector<CheckResult> suite_tweedie(const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  const std::vector<std::pair<std::string, AnalyticPrior>> priors = {
      {"gaussian", AnalyticPrior::gaussian(0.0, 1.0)},
      {"gmm2", gmm_example()},
      {"gmm3", gmm_three()},
  };
  const double sigmas[] = {1e-3, 0.05, 0.5, 1.0, 2.0};
  pnp::Rng rng(pnp::derive_seed(opt.seed, 100));
  for (const auto& [label, prior] : priors) {
    double worst = 0.0;
    int n = 0;
    for (double sigma : sigmas) {
      for (int i = 0; i < 48; ++i) {
        const double u = -6.0 + 12.0 * rng.uniform01();
        const double direct = pnp::denoise_scalar(prior, u, sigma);
        const double score = u - sigma * sigma * pnp::grad_h_sigma_scalar(prior, u, sigma);
        worst = std::max(worst, std::abs(direct - score));
        ++n;
      }
    }
    push_le(out, "tweedie", "residual-" + label, worst, 1e-9,
            "max |D(u) - (u - s^2 grad h_s(u))| over " + std::to_string(n) + " probes");
  }
  Denoiser d{gmm_example(), Denoiser::Role::target};
  ImageBuffer u = random_image(8, 8, 1, rng, -4.0, 5.0);
  push_le(out, "tweedie", "residual-buffer", pnp::tweedie_check(d, u, 0.8), 1e-9,
          "buffer route on an 8x8 field");
  return out;
}

std::vector<CheckResult> suite_prox_identity(const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  pnp::Rng rng(pnp::derive_seed(opt.seed, 101));
  const std::vector<std::pair<std::string, AnalyticPrior>> priors = {
      {"gaussian", AnalyticPrior::gaussian(0.3, 0.8)},
      {"gmm", gmm_example()},
  };
  // gamma * h is gamma-free, so prox_{gamma h} = D holds for every gamma;
  // evaluate the objective with gamma = 1.
  for (const auto& [label, prior] : priors) {
    double worst = 0.0;
    for (int trial = 0; trial < 4; ++trial) {
      const double sigma = 0.3 + 0.9 * rng.uniform01();
      const double u = -2.0 + 5.0 * rng.uniform01();
      const double xstar = pnp::denoise_scalar(prior, u, sigma);
      pnp::RegularizerContext ctx{Denoiser{prior, Denoiser::Role::target}, 1.0, sigma};
      const double step = 1e-4;
      double best_y = xstar, best_f = std::numeric_limits<double>::infinity();
      for (int i = -300; i <= 300; ++i) {
        const double y = xstar + i * step;
        const double f = 0.5 * (y - u) * (y - u) + pnp::implicit_h_scalar(ctx, y);
        if (f < best_f) {
          best_f = f;
          best_y = y;
        }
      }
      worst = std::max(worst, std::abs(best_y - xstar));
    }
    push_le(out, "prox-identity", "grid-argmin-" + label, worst, 2e-4,
            "denoiser output vs brute-force prox argmin, grid step 1e-4");
  }
  return out;
}

std::vector<CheckResult> suite_adjoint(const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  pnp::Rng rng(pnp::derive_seed(opt.seed, 102));
  const std::vector<std::pair<std::string, pnp::Kernel>> kernels = {
      {"dirac", pnp::dirac_kernel()},
      {"iso0.7", pnp::gaussian_kernel(0.7, 0.7)},
      {"iso1.6", pnp::gaussian_kernel(1.6, 1.6)},
      {"aniso2.0x0.5", pnp::gaussian_kernel(2.0, 0.5, 0.0)},
      {"aniso0.6x1.8r45", pnp::gaussian_kernel(0.6, 1.8, 45.0)},
  };
  double worst = 0.0;
  int cases = 0;
  for (const auto& [label, kernel] : kernels) {
    for (int scale : {1, 2, 4}) {
      MeasurementModel m{kernel, scale, 0.0};
      ImageBuffer x = random_image(16, 16, 1, rng, -1.0, 1.0);
      ImageBuffer yr = random_image(16 / scale, 16 / scale, 1, rng, -1.0, 1.0);
      const double lhs = pnp::dot(pnp::forward(m, x), yr);
      const double rhs = pnp::dot(x, pnp::adjoint(m, yr));
      worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
      ++cases;
    }
  }
  push_le(out, "adjoint", "dot-product", worst, 1e-12,
          "max rel gap |<Ax,y> - <x,Aty>| over " + std::to_string(cases) + " kernel/scale cases");
  MeasurementModel m3{pnp::gaussian_kernel(1.2, 1.2), 2, 0.0};
  ImageBuffer x3 = random_image(8, 8, 3, rng, -1.0, 1.0);
  ImageBuffer y3 = random_image(4, 4, 3, rng, -1.0, 1.0);
  const double lhs3 = pnp::dot(pnp::forward(m3, x3), y3);
  const double rhs3 = pnp::dot(x3, pnp::adjoint(m3, y3));
  push_le(out, "adjoint", "dot-product-3ch", std::abs(lhs3 - rhs3) / std::max(1.0, std::abs(lhs3)),
          1e-12, "3-channel case");
  return out;
}

std::vector<CheckResult> suite_prox_oracle(const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  pnp::Rng rng(pnp::derive_seed(opt.seed, 103));
  double worst_gap = 0.0, worst_opt = 0.0;
  int cases = 0;
  for (const auto& kernel :
       {pnp::gaussian_kernel(1.2, 1.2), pnp::gaussian_kernel(2.0, 0.5, 0.0)}) {
    for (int scale : {1, 2, 4}) {
      for (double gamma : {0.25, 1.0}) {
        MeasurementModel m{kernel, scale, 0.0};
        ImageBuffer v = random_image(16, 16, 1, rng);
        ImageBuffer y = random_image(16 / scale, 16 / scale, 1, rng);
        pnp::ProxSolverConfig fft_cfg;
        pnp::ProxSolverConfig cg_cfg;
        cg_cfg.method = pnp::ProxSolverConfig::Method::conjugate_gradient;
        cg_cfg.cg_tol = 1e-12;
        ImageBuffer xf = pnp::prox_data(m, y, v, gamma, fft_cfg);
        ImageBuffer xc = pnp::prox_data(m, y, v, gamma, cg_cfg);
        const double gap =
            pnp::l2_norm(pnp::sub(xf, xc)) / std::max(1.0, pnp::l2_norm(xc));
        worst_gap = std::max(worst_gap, gap);
        // stationarity of the prox objective: x - v + gamma At(Ax - y) = 0
        ImageBuffer resid = pnp::add(pnp::sub(xf, v),
                                     pnp::scaled(pnp::grad_data_fidelity(m, y, xf), gamma));
        worst_opt = std::max(worst_opt, pnp::linf_norm(resid));
        ++cases;
      }
    }
  }
  push_le(out, "prox-oracle", "fft-vs-cg", worst_gap, 1e-8,
          "max rel l2 gap over " + std::to_string(cases) + " cases, cg tol 1e-12");
  push_le(out, "prox-oracle", "stationarity", worst_opt, 1e-10,
          "max |x - v + gamma At(Ax-y)| for the closed form");
  return out;
}

std::vector<CheckResult> suite_lemma_descent(const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  const double dmu = opt.mismatched ? 1.0 : 0.0;
  Canonical c = make_canonical(opt.seed, 200, dmu);
  SolverConfig cfg = c.spec.solver;
  cfg.keep_iterates = true;
  cfg.record_parallel_target = opt.mismatched;
  const Denoiser* mm = c.prob.mismatched ? &*c.prob.mismatched : nullptr;
  SolverTrace trace =
      pnp::run(c.prob.model, c.prob.y, c.prob.target, mm, cfg,
               c.prob.ground_truth ? &*c.prob.ground_truth : nullptr);
  double R = 0.0;
  if (opt.mismatched) {
    R = pnp::estimate_R(trace, trace.z_final);
    const double n = static_cast<double>(trace.z_final.size());
    const double per_pixel = 0.25 * 1.0 / (1.0 + 0.25);  // sigma^2 dmu / (tau^2 + sigma^2)
    double worst = 0.0;
    for (const auto& row : trace.rows) {
      worst = std::max(worst, std::abs(row.delta_k / std::sqrt(n) - per_pixel));
    }
    push_le(out, "lemma-descent", "delta-closed-form", worst, 1e-12,
            "recorded per-pixel mismatch vs sigma^2 dmu / (tau^2 + sigma^2)");
  }
  auto desc = pnp::check_lemma_descent(trace, c.L, c.gamma, R, opt.mismatched);
  push(out, "lemma-descent", opt.mismatched ? "descent-mismatched" : "descent-exact",
       max_descent_violation(desc), 0.0, desc.all_ok,
       "max phi^k minus allowed level over 200 iterations");
  auto low = pnp::check_lemma_lower_bound(trace, c.L, c.gamma, R, opt.mismatched);
  push(out, "lemma-descent", opt.mismatched ? "lower-bound-mismatched" : "lower-bound-exact",
       max_lower_violation(low), 0.0, low.all_ok, "phi^k stays above g(x^k) + h(x^k) - slack");
  return out;
}

std::vector<CheckResult> suite_theorem(const VerifyOptions& opt, pnp::TheoremKind which) {
  std::vector<CheckResult> out;
  const bool mismatched = which == pnp::TheoremKind::thm1;
  const double dmu = mismatched ? 1.0 : 0.0;
  const char* suite = mismatched ? "theorem1" : "theorem2";

  Canonical c = make_canonical(opt.seed, 200, dmu);
  SolverConfig cfg = c.spec.solver;
  cfg.record_parallel_target = mismatched;
  const Denoiser* mm = c.prob.mismatched ? &*c.prob.mismatched : nullptr;
  SolverTrace trace = pnp::run(c.prob.model, c.prob.y, c.prob.target, mm, cfg, nullptr);

  // phi* and the iterate radius come from a long reference run of the same
  // trajectory (identical inputs, so the short run is a prefix of it).
  SolverConfig ref_cfg = cfg;
  ref_cfg.iterations = 2000;
  ref_cfg.keep_iterates = mismatched;
  SolverTrace ref = pnp::run(c.prob.model, c.prob.y, c.prob.target, mm, ref_cfg, nullptr);
  double phi_star = ref.phi0;
  for (const auto& row : ref.rows) phi_star = std::min(phi_star, row.phi);
  const double R = mismatched ? pnp::estimate_R(ref, ref.z_final) : 0.0;

  auto constants = pnp::theorem_constants(c.L, c.gamma, R);
  auto report = pnp::check_theorem(trace, constants, which, phi_star);
  push(out, suite, "prefix-bound", max_bound_violation(report), 0.0, report.all_ok,
       "min and mean ||grad f||^2 against the sublinear bound at every prefix");
  std::ostringstream note;
  note << "L=" << c.L << " gamma=" << c.gamma << " R=" << R << " phi0=" << report.phi0
       << " phi*=" << phi_star;
  push(out, suite, "constants-positive",
       -(std::min(std::min(constants.A1, constants.A2), std::min(constants.B, constants.C))), 0.0,
       constants.A1 > 0 && constants.A2 > 0 && constants.B > 0 && constants.C > 0, note.str());
  return out;
}

std::vector<CheckResult> suite_remark1(const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  Canonical c = make_canonical(opt.seed, 500, 0.0);
  const int n = c.spec.height * c.spec.width * c.spec.channels;
  ImageBuffer dir(c.spec.height, c.spec.width, c.spec.channels,
                  1.0 / std::sqrt(static_cast<double>(n)));

  SolverConfig cfg = c.spec.solver;
  cfg.record_parallel_target = true;

  pnp::PerturbedZStep summable(c.prob.target, pnp::DeltaSchedule::summable(0.5, 2.0), dir);
  SolverTrace ts = pnp::run(c.prob.model, c.prob.y, c.prob.target, summable, cfg, nullptr);
  const auto& last = ts.rows.back();
  push_le(out, "remark1", "z-step-vanishes", last.z_step_norm, 1e-6,
          "||z^k - z^{k-1}|| at k=500, delta_k = 0.5/k^2");
  push_le(out, "remark1", "xz-gap-vanishes", last.xz_gap, 1e-6, "||x^k - z^k|| at k=500");
  push_le(out, "remark1", "s-step-vanishes", last.s_step_norm, 1e-6,
          "||s^k - s^{k-1}|| at k=500");
  double worst_ident = 0.0;
  for (const auto& row : ts.rows) {
    worst_ident = std::max(worst_ident, std::abs(row.s_step_norm - row.xz_gap));
  }
  push_le(out, "remark1", "dual-step-identity", worst_ident, 1e-12,
          "||s^k - s^{k-1}|| equals ||x^k - z^k|| at every k");
  double min_grad = std::numeric_limits<double>::infinity();
  for (const auto& row : ts.rows) min_grad = std::min(min_grad, row.grad_f_norm);
  push_le(out, "remark1", "summable-grad-vanishes", min_grad, 1e-4,
          "min_k ||grad f(x^k)|| under the summable schedule");

  pnp::PerturbedZStep flat(c.prob.target, pnp::DeltaSchedule::constant(0.5), dir);
  SolverTrace tc = pnp::run(c.prob.model, c.prob.y, c.prob.target, flat, cfg, nullptr);
  double tail_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = tc.rows.size() - 100; i < tc.rows.size(); ++i) {
    tail_min = std::min(tail_min, tc.rows[i].grad_f_norm);
  }
  push(out, "remark1", "constant-delta-plateaus", tail_min, 1e-3, tail_min > 1e-3,
       "min ||grad f|| over the last 100 of 500 iterations, delta_k = 0.5");
  return out;
}

std::vector<CheckResult> suite_metrics(const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  pnp::Rng rng(pnp::derive_seed(opt.seed, 104));
  ImageBuffer a = random_image(12, 12, 1, rng);
  push(out, "metrics", "psnr-identical-inf", pnp::psnr(a, a), 0.0, std::isinf(pnp::psnr(a, a)),
       "psnr of identical images is +inf (serialized as the 99 dB cap)");
  ImageBuffer zeros(4, 4, 1, 0.0);
  ImageBuffer tenth(4, 4, 1, 0.1);
  push_le(out, "metrics", "psnr-known-value", std::abs(pnp::psnr(zeros, tenth) - 20.0), 1e-12,
          "constant 0.1 error, rmse 0.1, 20 log10(1/rmse) = 20");
  ImageBuffer unit(4, 4, 1, 0.0);
  unit.at(0, 0) = 0.1;
  push_le(out, "metrics", "psnr-paper-formula",
          std::abs(pnp::psnr_paper_formula(zeros, unit) - 20.0), 1e-12,
          "||a-b||_2 = 0.1, 20 log10(1/||a-b||) = 20");
  push_le(out, "metrics", "ssim-identical", std::abs(pnp::ssim(a, a) - 1.0), 1e-12, "");
  ImageBuffer b = a;
  for (double& v : b.data) v = std::clamp(v + 0.05 * (rng.uniform01() - 0.5), 0.0, 1.0);
  const double s = pnp::ssim(a, b);
  push(out, "metrics", "ssim-degrades", s, 1.0, s < 1.0 && s > -1.0,
       "perturbed image scores inside (-1, 1)");

  // CSV round trip at full precision
  SolverTrace t;
  t.phi0 = 0.0;
  pnp::TraceRow r{};
  r.iter = 1;
  r.sigma_k = 0.1;
  r.phi = 3.141592653589793;
  r.grad_f_norm = 1e-300;
  r.delta_k = 1.0 / 3.0;
  r.z_step_norm = 6.02214076e23;
  r.xz_gap = -0.0;
  r.s_step_norm = 5e-324;
  r.psnr = 20.0;
  r.psnr_paper_formula = 19.5;
  r.ssim = 0.999999999999;
  t.rows.push_back(r);
  const auto path = std::filesystem::temp_directory_path() /
                    ("pnp_verify_roundtrip_" + std::to_string(opt.seed) + ".csv");
  pnp::write_trace_csv(path.string(), t);
  const std::vector<pnp::TraceRow> back = pnp::read_trace_csv(path.string());
  std::filesystem::remove(path);
  int mismatches = 0;
  auto same = [](double x, double y) { return std::memcmp(&x, &y, sizeof x) == 0; };
  const pnp::TraceRow& q = back.at(0);
  const double lhs[] = {r.sigma_k, r.phi,    r.grad_f_norm,       r.delta_k, r.z_step_norm,
                        r.xz_gap,  r.s_step_norm, r.psnr, r.psnr_paper_formula, r.ssim};
  const double rhs[] = {q.sigma_k, q.phi,    q.grad_f_norm,       q.delta_k, q.z_step_norm,
                        q.xz_gap,  q.s_step_norm, q.psnr, q.psnr_paper_formula, q.ssim};
  for (int i = 0; i < 10; ++i) {
    if (!same(lhs[i], rhs[i])) ++mismatches;
  }
  push_le(out, "metrics", "csv-round-trip", mismatches, 0.0,
          "trace row survives write/read bit-exactly");
  return out;
}

}  // namespace

const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names = {
      "tweedie", "prox-identity", "lemma-descent", "theorem1", "theorem2",
      "remark1", "adjoint",       "prox-oracle",   "metrics"};
  return names;
}

std::vector<CheckResult> run_verify_suite(const std::string& suite, const VerifyOptions& opt) {
  if (suite == "tweedie") return suite_tweedie(opt);
  if (suite == "prox-identity") return suite_prox_identity(opt);
  if (suite == "lemma-descent") return suite_lemma_descent(opt);
  if (suite == "theorem1") return suite_theorem(opt, pnp::TheoremKind::thm1);
  if (suite == "theorem2") return suite_theorem(opt, pnp::TheoremKind::thm2);
  if (suite == "remark1") return suite_remark1(opt);
  if (suite == "adjoint") return suite_adjoint(opt);
  if (suite == "prox-oracle") return suite_prox_oracle(opt);
  if (suite == "metrics") return suite_metrics(opt);
  throw std::invalid_argument("unknown verify suite `" + suite + "`");
}

}  // namespace pnpcli

#include <cstdio>
#include <fstream>

#include "json.hpp"
#include "pnpcli/commands.hpp"

namespace pnpcli {

namespace {

// JSON has no inf/nan literals; stringify those so the log stays parseable
nlohmann::json json_number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

int cmd_verify(const VerifyArgs& args) {
  std::vector<std::string> suites;
  if (args.suite == "all") {
    suites = verify_suite_names();
  } else {
    suites.push_back(args.suite);
  }
  const VerifyOptions opt{args.mismatched, args.seed};

  const std::string out_dir = resolve_out_dir(args.out_dir, nullptr);
  std::filesystem::create_directories(out_dir);
  std::ofstream log(std::filesystem::path(out_dir) / "verify.jsonl", std::ios::binary);

  int passed = 0, total = 0;
  for (const std::string& suite : suites) {
    for (const CheckResult& c : run_verify_suite(suite, opt)) {
      ++total;
      if (c.pass) ++passed;
      std::printf("[%s] %s/%s  value=%.6g threshold=%.6g%s%s\n", c.pass ? "PASS" : "FAIL",
                  c.suite.c_str(), c.name.c_str(), c.value, c.threshold,
                  c.detail.empty() ? "" : "  ", c.detail.c_str());
      nlohmann::json j;
      j["suite"] = c.suite;
      j["check"] = c.name;
      j["value"] = json_number(c.value);
      j["threshold"] = json_number(c.threshold);
      j["pass"] = c.pass;
      j["mismatched"] = args.mismatched;
      j["seed"] = args.seed;
      if (!c.detail.empty()) j["detail"] = c.detail;
      log << j.dump() << "\n";
    }
  }
  std::printf("verify: %d/%d checks passed\n", passed, total);
  return passed == total ? 0 : 1;
}

}  // namespace pnpcli
