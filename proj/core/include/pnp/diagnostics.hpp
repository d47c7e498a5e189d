#pragma once

#include <string>
#include <vector>

#include "pnp/image.hpp"
#include "pnp/measurement.hpp"
#include "pnp/regularizer.hpp"
#include "pnp/trace.hpp"

namespace pnp {

// phi(x, z, s) = g(x) + h(z) + (1/gamma) <s, x - z> + (1/(2 gamma)) ||x-z||^2.
// +infinity when z is outside the denoiser range (h infinite there).
double augmented_lagrangian(const MeasurementModel& m, const ImageBuffer& y,
                            const RegularizerContext& hctx, const ImageBuffer& x,
                            const ImageBuffer& z, const ImageBuffer& s, double gamma);

// gradient of f = g + h at x
ImageBuffer grad_f(const MeasurementModel& m, const ImageBuffer& y,
                   const RegularizerContext& hctx, const ImageBuffer& x);

// Constants of the sublinear stationarity bounds. Requires gamma <= 1/(4L),
// which makes every denominator positive.
struct TheoremConstants {
  double L = 0.0;
  double gamma = 0.0;
  double R = 0.0;
  double A1 = 0.0;  // 4 (1 + g^2 L^2)^2 / (g (1 - 2gL - 2 g^2 L^2))
  double A2 = 0.0;  // (3 + 16R)(1 + g^2 L^2) / (2 g^2 (1 - 2gL - 2g^2L^2)) + 2 (1/g + L)^2
  double B = 0.0;   // 2 g / (1 - gL - 2 g^2 L^2)
  double C = 0.0;   // B (1 + g^2 L^2) / g^2
};
TheoremConstants theorem_constants(double L, double gamma, double R);

// Per-iteration sufficient-descent audit of the augmented Lagrangian.
// Exact runs must shrink phi by (1 - gL - 2g^2L^2)/(2g) * ||z^k - z^{k-1}||^2;
// mismatched runs get the weaker coefficient (1 - 2gL - 2g^2L^2)/(2g) plus the
// slack (3/(8g)) delta_k^2 + (2R/g) delta_k. Tolerance is relative.
struct DescentReport {
  struct Row {
    int k = 0;
    double lhs = 0.0;  // phi^k
    double rhs = 0.0;  // phi^{k-1} - decrement + slack
    bool ok = false;
  };
  std::vector<Row> rows;
  bool all_ok = true;
};
DescentReport check_lemma_descent(const SolverTrace& trace, double L, double gamma, double R,
                                  bool mismatched, double rel_tol = 1e-9);

// phi^k must stay above g(x^k) + h(x^k), minus 2(1 + gL) R L delta_k on
// mismatched runs.
struct LowerBoundReport {
  struct Row {
    int k = 0;
    double phi = 0.0;
    double bound = 0.0;
    bool ok = false;
  };
  std::vector<Row> rows;
  bool all_ok = true;
};
LowerBoundReport check_lemma_lower_bound(const SolverTrace& trace, double L, double gamma,
                                         double R, bool mismatched, double rel_tol = 1e-9);

// Prefix bounds on the gradient of f along the trace:
//   thm1:  min/mean_{k<=t} ||grad f(x^k)||^2 <= (A1/t)(phi0 - phi*) + A2 eps_bar_t
//   thm2:  same lhs <= (C/t)(phi0 - phi*)
// eps_k = max(delta_k, delta_k^2) and eps_bar_t is its running mean.
// Both the min and the mean are checked; min over prefixes is non-increasing
// by construction and asserted to be so.
enum class TheoremKind { thm1, thm2 };
struct BoundReport {
  double L = 0.0, gamma = 0.0, R = 0.0;
  double A1 = 0.0, A2 = 0.0, C = 0.0;
  double phi0 = 0.0, phi_star = 0.0;
  struct Row {
    int t = 0;
    double lhs_min = 0.0;
    double lhs_mean = 0.0;
    double rhs = 0.0;
    bool satisfied = false;
    double eps_bar = 0.0;
  };
  std::vector<Row> per_t;
  bool all_ok = true;
};
BoundReport check_theorem(const SolverTrace& trace, const TheoremConstants& c, TheoremKind which,
                          double phi_star, double rel_tol = 1e-9);

// CSV columns: t, lhs_min, lhs_mean, rhs, satisfied, eps_bar
void write_bound_report_csv(const std::string& path, const BoundReport& report);

// Iterate-radius estimate: 1.1 * max_k ||z^k - z*||, z^0 included.
// Needs a trace recorded with keep_iterates.
double estimate_R(const SolverTrace& trace, const ImageBuffer& z_star);

}  // namespace pnp
