#include "pnp/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pnp/csv.hpp"

namespace pnp {

double augmented_lagrangian(const MeasurementModel& m, const ImageBuffer& y,
                            const RegularizerContext& hctx, const ImageBuffer& x,
                            const ImageBuffer& z, const ImageBuffer& s, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("augmented_lagrangian: gamma must be > 0");
  const HValue hz = implicit_h(hctx, z);
  if (!hz.finite) return std::numeric_limits<double>::infinity();
  const ImageBuffer d = sub(x, z);
  return data_fidelity(m, y, x) + hz.value + dot(s, d) / gamma + 0.5 * dot(d, d) / gamma;
}

ImageBuffer grad_f(const MeasurementModel& m, const ImageBuffer& y,
                   const RegularizerContext& hctx, const ImageBuffer& x) {
  return add(grad_data_fidelity(m, y, x), grad_implicit_h(hctx, x));
}

TheoremConstants theorem_constants(double L, double gamma, double R) {
  if (!(L > 0.0) || !(gamma > 0.0)) throw std::invalid_argument("theorem_constants: L, gamma > 0");
  if (R < 0.0) throw std::invalid_argument("theorem_constants: R must be >= 0");
  const double gl = gamma * L;
  if (gl > 0.25 * (1.0 + 1e-9))
    throw std::invalid_argument("theorem_constants: requires gamma <= 1/(4L), got gamma*L = " +
                                std::to_string(gl));
  TheoremConstants c;
  c.L = L;
  c.gamma = gamma;
  c.R = R;
  const double one_p = 1.0 + gl * gl;          // 1 + gamma^2 L^2
  const double den1 = 1.0 - 2.0 * gl - 2.0 * gl * gl;
  const double den2 = 1.0 - gl - 2.0 * gl * gl;
  c.A1 = 4.0 * one_p * one_p / (gamma * den1);
  c.A2 = (3.0 + 16.0 * R) * one_p / (2.0 * gamma * gamma * den1) +
         2.0 * (1.0 / gamma + L) * (1.0 / gamma + L);
  c.B = 2.0 * gamma / den2;
  c.C = c.B * one_p / (gamma * gamma);
  return c;
}

DescentReport check_lemma_descent(const SolverTrace& trace, double L, double gamma, double R,
                                  bool mismatched, double rel_tol) {
  if (mismatched && !trace.has_delta)
    throw std::invalid_argument(
        "check_lemma_descent: mismatched check needs delta_k recorded (record_parallel_target)");
  const double gl = gamma * L;
  const double coef = mismatched ? (1.0 - 2.0 * gl - 2.0 * gl * gl) / (2.0 * gamma)
                                 : (1.0 - gl - 2.0 * gl * gl) / (2.0 * gamma);
  DescentReport rep;
  double phi_prev = trace.phi0;
  for (const auto& row : trace.rows) {
    DescentReport::Row r;
    r.k = row.iter;
    r.lhs = row.phi;
    r.rhs = phi_prev - coef * row.z_step_norm * row.z_step_norm;
    if (mismatched)
      r.rhs += 3.0 / (8.0 * gamma) * row.delta_k * row.delta_k + 2.0 * R / gamma * row.delta_k;
    r.ok = r.lhs <= r.rhs + rel_tol * (1.0 + std::fabs(r.lhs));
    rep.all_ok = rep.all_ok && r.ok;
    rep.rows.push_back(r);
    phi_prev = row.phi;
  }
  return rep;
}

LowerBoundReport check_lemma_lower_bound(const SolverTrace& trace, double L, double gamma,
                                         double R, bool mismatched, double rel_tol) {
  if (mismatched && !trace.has_delta)
    throw std::invalid_argument(
        "check_lemma_lower_bound: mismatched check needs delta_k recorded");
  LowerBoundReport rep;
  for (const auto& row : trace.rows) {
    LowerBoundReport::Row r;
    r.k = row.iter;
    r.phi = row.phi;
    r.bound = row.f_at_x;
    if (mismatched) r.bound -= 2.0 * (1.0 + gamma * L) * R * L * row.delta_k;
    r.ok = r.phi >= r.bound - rel_tol * (1.0 + std::fabs(r.phi));
    rep.all_ok = rep.all_ok && r.ok;
    rep.rows.push_back(r);
  }
  return rep;
}

BoundReport check_theorem(const SolverTrace& trace, const TheoremConstants& c, TheoremKind which,
                          double phi_star, double rel_tol) {
  if (which == TheoremKind::thm1 && !trace.has_delta)
    throw std::invalid_argument(
        "check_theorem: theorem 1 needs delta_k recorded (record_parallel_target)");
  BoundReport rep;
  rep.L = c.L;
  rep.gamma = c.gamma;
  rep.R = c.R;
  rep.A1 = c.A1;
  rep.A2 = c.A2;
  rep.C = c.C;
  rep.phi0 = trace.phi0;
  rep.phi_star = phi_star;
  const double gap = trace.phi0 - phi_star;

  double min_sq = std::numeric_limits<double>::infinity();
  double sum_sq = 0.0;
  double sum_eps = 0.0;
  double prev_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < trace.rows.size(); ++i) {
    const auto& row = trace.rows[i];
    const double g2 = row.grad_f_norm * row.grad_f_norm;
    min_sq = std::min(min_sq, g2);
    sum_sq += g2;
    sum_eps += std::max(row.delta_k, row.delta_k * row.delta_k);
    const int t = static_cast<int>(i) + 1;

    BoundReport::Row r;
    r.t = t;
    r.lhs_min = min_sq;
    r.lhs_mean = sum_sq / t;
    r.eps_bar = sum_eps / t;
    r.rhs = which == TheoremKind::thm1 ? c.A1 / t * gap + c.A2 * r.eps_bar : c.C / t * gap;
    const double slack = rel_tol * (1.0 + std::fabs(r.rhs));
    r.satisfied = r.lhs_min <= r.rhs + slack && r.lhs_mean <= r.rhs + slack;
    rep.all_ok = rep.all_ok && r.satisfied;
    rep.per_t.push_back(r);

    if (min_sq > prev_min)
      throw std::logic_error("check_theorem: prefix minimum increased");  // unreachable by construction
    prev_min = min_sq;
  }
  return rep;
}

void write_bound_report_csv(const std::string& path, const BoundReport& report) {
  CsvTable t;
  t.header = {"t", "lhs_min", "lhs_mean", "rhs", "satisfied", "eps_bar"};
  for (const auto& r : report.per_t)
    t.rows.push_back({std::to_string(r.t), format_g17(r.lhs_min), format_g17(r.lhs_mean),
                      format_g17(r.rhs), r.satisfied ? "1" : "0", format_g17(r.eps_bar)});
  write_csv(path, t);
}

double estimate_R(const SolverTrace& trace, const ImageBuffer& z_star) {
  if (trace.z_iters.empty())
    throw std::invalid_argument("estimate_R: trace was recorded without keep_iterates");
  double worst = 0.0;
  for (const auto& z : trace.z_iters) worst = std::max(worst, l2_norm(sub(z, z_star)));
  return 1.1 * worst;
}

}  // namespace pnp
