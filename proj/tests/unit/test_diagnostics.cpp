#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <stdexcept>
#include <vector>

#include "helpers.hpp"
#include "oracles.hpp"
#include "pnp/csv.hpp"
#include "pnp/diagnostics.hpp"
#include "pnp/measurement.hpp"
#include "pnp/solver.hpp"

using pnp::ImageBuffer;
using pnp::RegularizerContext;
using pnp::SolverTrace;

namespace {

RegularizerContext gaussian_ctx(double mu, double tau2, double gamma, double sigma) {
  pnp::Denoiser d;
  d.prior = pnp::AnalyticPrior::gaussian(mu, tau2);
  return RegularizerContext{d, gamma, sigma};
}

pnp::MeasurementModel identity_model(double nu = 0.0) {
  pnp::MeasurementModel m;
  m.kernel = pnp::dirac_kernel();
  m.scale = 1;
  m.noise_sigma = nu;
  return m;
}

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("coupling terms vanish at x = z") {
  const auto m = identity_model();
  const RegularizerContext ctx = gaussian_ctx(0.0, 1.0, 1.0, 0.5);
  pnp::Rng rng(401);
  const ImageBuffer y = testutil::random_image(6, 6, 1, rng);
  const ImageBuffer x = testutil::random_image(6, 6, 1, rng, -0.5, 0.5);
  const ImageBuffer s = testutil::random_image(6, 6, 1, rng, -1.0, 1.0);
  const double phi = pnp::augmented_lagrangian(m, y, ctx, x, x, s, 1.0);
  const pnp::HValue h = pnp::implicit_h(ctx, x);
  REQUIRE(h.finite);
  CHECK(phi == doctest::Approx(pnp::data_fidelity(m, y, x) + h.value).epsilon(1e-12));
}

TEST_CASE("zero dual gives the quadratic penalty form") {
  const auto m = identity_model();
  const RegularizerContext ctx = gaussian_ctx(0.2, 0.8, 0.7, 0.4);
  pnp::Rng rng(402);
  const ImageBuffer y = testutil::random_image(5, 5, 1, rng);
  const ImageBuffer z = testutil::random_image(5, 5, 1, rng, -0.3, 0.9);
  const ImageBuffer d = testutil::random_image(5, 5, 1, rng, -0.2, 0.2);
  const ImageBuffer x = pnp::add(z, d);
  const ImageBuffer s0(5, 5, 1, 0.0);
  const double gamma = 0.7;
  const double phi = pnp::augmented_lagrangian(m, y, ctx, x, z, s0, gamma);
  const pnp::HValue hz = pnp::implicit_h(ctx, z);
  REQUIRE(hz.finite);
  const double want = pnp::data_fidelity(m, y, x) + hz.value +
                      0.5 * pnp::dot(d, d) / gamma;
  CHECK(phi == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("scalar instance matches an independently assembled expression") {
  // one pixel, identity measurement: every term is elementary arithmetic
  const double mu = 0.1, tau2 = 1.2, sigma = 0.5, gamma = 0.8;
  const double yv = 0.9, xv = 0.4, zv = 0.6, sv = -0.2;
  const auto m = identity_model();
  const RegularizerContext ctx = gaussian_ctx(mu, tau2, gamma, sigma);
  ImageBuffer y(1, 1, 1, yv), x(1, 1, 1, xv), z(1, 1, 1, zv), s(1, 1, 1, sv);

  const double s2 = sigma * sigma;
  const double u = ((tau2 + s2) * zv - s2 * mu) / tau2;
  const double var = tau2 + s2;
  const double h = -(zv - u) * (zv - u) / (2.0 * gamma) +
                   s2 / gamma * (0.5 * std::log(2.0 * oracles::kPi * var) +
                                 (u - mu) * (u - mu) / (2.0 * var));
  const double want = 0.5 * (xv - yv) * (xv - yv) + h + sv * (xv - zv) / gamma +
                      (xv - zv) * (xv - zv) / (2.0 * gamma);
  CHECK(pnp::augmented_lagrangian(m, y, ctx, x, z, s, gamma) ==
        doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("grad_f is the sum of the two module gradients and matches finite differences") {
  const auto m = identity_model();
  const RegularizerContext ctx = gaussian_ctx(0.0, 1.0, 1.0, 0.5);
  // two-pixel affine closed form: grad = (x - y) + (sigma^2/(gamma tau^2)) (x - mu_post)
  // where the regularizer part is (u(x) - x)/gamma with affine u
  ImageBuffer y(1, 2), x(1, 2);
  y.data = {0.3, -0.1};
  x.data = {0.25, 0.4};
  const ImageBuffer g = pnp::grad_f(m, y, ctx, x);
  for (int i = 0; i < 2; ++i) {
    const double u = 1.25 * x.data[i];  // preimage for mu=0, tau^2=1, sigma=0.5
    const double want = (x.data[i] - y.data[i]) + (u - x.data[i]) / 1.0;
    CHECK(g.data[i] == doctest::Approx(want).epsilon(1e-12));
  }

  // finite differences of g + h along the axes
  for (int i = 0; i < 2; ++i) {
    const double h = 1e-6;
    auto f_at = [&](double t) {
      ImageBuffer p = x;
      p.data[static_cast<std::size_t>(i)] = t;
      const pnp::HValue hv = pnp::implicit_h(ctx, p);
      REQUIRE(hv.finite);
      return pnp::data_fidelity(m, y, p) + hv.value;
    };
    const double fd = (f_at(x.data[i] + h) - f_at(x.data[i] - h)) / (2.0 * h);
    CHECK(std::fabs(fd - g.data[i]) <= 1e-5 * (1.0 + std::fabs(g.data[i])));
  }
}

TEST_CASE("theorem constants at the worked point") {
  const pnp::TheoremConstants c = pnp::theorem_constants(1.0, 0.25, 1.0);
  // A1 = 4 (1.0625)^2 / (0.25 * 0.375)
  CHECK(c.A1 == doctest::Approx(4.0 * 1.0625 * 1.0625 / (0.25 * 0.375)).epsilon(1e-15));
  CHECK(c.A1 == doctest::Approx(48.1666666666667).epsilon(1e-10));
  // A2 = 19 * 1.0625 / (2 * 0.0625 * 0.375) + 2 * 25
  CHECK(c.A2 == doctest::Approx(19.0 * 1.0625 / (2.0 * 0.0625 * 0.375) + 50.0).epsilon(1e-15));
  CHECK(c.A2 == doctest::Approx(480.666666666667).epsilon(1e-10));
  CHECK(c.B == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(c.C == doctest::Approx(13.6).epsilon(1e-15));
}

TEST_CASE("theorem constants are positive across the admissible region and reject outside it") {
  for (double L : {0.1, 0.5, 1.0, 3.0})
    for (double frac : {0.1, 0.5, 0.99}) {
      const double gamma = frac * 0.25 / L;
      const pnp::TheoremConstants c = pnp::theorem_constants(L, gamma, 2.0);
      CHECK(c.A1 > 0.0);
      CHECK(c.A2 > 0.0);
      CHECK(c.B > 0.0);
      CHECK(c.C > 0.0);
    }
  CHECK_THROWS_AS((void)pnp::theorem_constants(1.0, 0.3, 1.0), std::invalid_argument);
  CHECK_THROWS_AS((void)pnp::theorem_constants(1.0, 0.25, -1.0), std::invalid_argument);
  CHECK_THROWS_AS((void)pnp::theorem_constants(0.0, 0.25, 1.0), std::invalid_argument);
}

TEST_CASE("descent audit accepts an exact canonical run and reports the documented rows") {
  auto c = testutil::canonical_instance(7, 100);
  const SolverTrace t = pnp::run(c.m, c.y, c.target, nullptr, c.cfg, &c.gt);
  const pnp::DescentReport rep = pnp::check_lemma_descent(t, c.L, c.cfg.gamma, 0.0, false);
  CHECK(rep.all_ok);
  REQUIRE(rep.rows.size() == 100);
  // the first row compares against phi0, later rows chain phi^{k-1}
  const double coef = (1.0 - 0.25 - 2.0 * 0.0625) / 2.0;
  CHECK(rep.rows[0].rhs ==
        doctest::Approx(t.phi0 - coef * t.rows[0].z_step_norm * t.rows[0].z_step_norm)
            .epsilon(1e-12));
  CHECK(rep.rows[5].lhs == t.rows[5].phi);
}

TEST_CASE("mismatched audit with zero mismatch differs from the exact audit only by the weaker coefficient") {
  auto c = testutil::canonical_instance(7, 60);
  c.cfg.record_parallel_target = true;
  const SolverTrace t = pnp::run(c.m, c.y, c.target, nullptr, c.cfg, &c.gt);
  for (const auto& row : t.rows) REQUIRE(row.delta_k == 0.0);
  const double R = 3.0;  // must be irrelevant once delta is identically zero
  const pnp::DescentReport exact = pnp::check_lemma_descent(t, c.L, c.cfg.gamma, R, false);
  const pnp::DescentReport slack = pnp::check_lemma_descent(t, c.L, c.cfg.gamma, R, true);
  CHECK(exact.all_ok);
  CHECK(slack.all_ok);
  REQUIRE(exact.rows.size() == slack.rows.size());
  for (std::size_t i = 0; i < exact.rows.size(); ++i) {
    // rhs gap is exactly (L/2) ||z-step||^2: no delta slack remains. The gap
    // is compared absolutely because both rhs values are O(phi) while the
    // gap itself shrinks with the squared step size.
    const double gap = (c.L / 2.0) * t.rows[i].z_step_norm * t.rows[i].z_step_norm;
    CHECK(std::fabs((slack.rows[i].rhs - exact.rows[i].rhs) - gap) <=
          1e-11 * (1.0 + std::fabs(exact.rows[i].rhs)));
  }
}

TEST_CASE("mismatched audits require a recorded delta column") {
  auto c = testutil::canonical_instance(7, 10);
  const SolverTrace t = pnp::run(c.m, c.y, c.target, nullptr, c.cfg, &c.gt);
  CHECK_FALSE(t.has_delta);
  CHECK_THROWS_AS((void)pnp::check_lemma_descent(t, c.L, 1.0, 1.0, true),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)pnp::check_lemma_lower_bound(t, c.L, 1.0, 1.0, true),
                  std::invalid_argument);
  const pnp::TheoremConstants tc = pnp::theorem_constants(c.L, 1.0, 1.0);
  CHECK_THROWS_AS((void)pnp::check_theorem(t, tc, pnp::TheoremKind::thm1, t.phi0),
                  std::invalid_argument);
  CHECK_NOTHROW((void)pnp::check_theorem(t, tc, pnp::TheoremKind::thm2, t.phi0 - 1.0));
}

TEST_CASE("lower bound holds on exact runs") {
  auto c = testutil::canonical_instance(41, 80);
  const SolverTrace t = pnp::run(c.m, c.y, c.target, nullptr, c.cfg, &c.gt);
  const pnp::LowerBoundReport rep = pnp::check_lemma_lower_bound(t, c.L, c.cfg.gamma, 0.0, false);
  CHECK(rep.all_ok);
  for (const auto& row : rep.rows) CHECK(row.phi >= row.bound - 1e-9 * (1.0 + std::fabs(row.phi)));
}

TEST_CASE("eps_bar follows the max(delta, delta^2) definition") {
  // hand-built trace with delta = (0.5, 0.5, 2): eps = (0.5, 0.5, 4),
  // running means (0.5, 0.5, 5/3)
  SolverTrace t;
  t.has_delta = true;
  t.phi0 = 10.0;
  for (int k = 1; k <= 3; ++k) {
    pnp::TraceRow r;
    r.iter = k;
    r.delta_k = (k == 3) ? 2.0 : 0.5;
    r.grad_f_norm = 0.1;
    r.phi = 10.0 - k;
    t.rows.push_back(r);
  }
  const pnp::TheoremConstants c = pnp::theorem_constants(1.0, 0.25, 1.0);
  const pnp::BoundReport rep = pnp::check_theorem(t, c, pnp::TheoremKind::thm1, 1.0);
  REQUIRE(rep.per_t.size() == 3);
  CHECK(rep.per_t[0].eps_bar == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(rep.per_t[1].eps_bar == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(rep.per_t[2].eps_bar == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
  // rhs assembles A1/t * gap + A2 * eps_bar
  CHECK(rep.per_t[2].rhs ==
        doctest::Approx(c.A1 / 3.0 * (10.0 - 1.0) + c.A2 * 5.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("prefix minimum of the gradient is non-increasing and both lhs flavors are reported") {
  auto c = testutil::canonical_instance(43, 50);
  const SolverTrace t = pnp::run(c.m, c.y, c.target, nullptr, c.cfg, &c.gt);
  const pnp::TheoremConstants tc = pnp::theorem_constants(c.L, c.cfg.gamma, 1.0);
  double phi_star = t.phi0;
  for (const auto& r : t.rows) phi_star = std::min(phi_star, r.phi);
  const pnp::BoundReport rep = pnp::check_theorem(t, tc, pnp::TheoremKind::thm2, phi_star);
  CHECK(rep.all_ok);
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& row : rep.per_t) {
    CHECK(row.lhs_min <= prev + 1e-300);
    prev = row.lhs_min;
    CHECK(row.lhs_min <= row.lhs_mean * (1.0 + 1e-12));
  }
}

TEST_CASE("bound report CSV round trips through the generic reader") {
  auto c = testutil::canonical_instance(47, 10);
  const SolverTrace t = pnp::run(c.m, c.y, c.target, nullptr, c.cfg, &c.gt);
  const pnp::TheoremConstants tc = pnp::theorem_constants(c.L, c.cfg.gamma, 1.0);
  const pnp::BoundReport rep = pnp::check_theorem(t, tc, pnp::TheoremKind::thm2, t.phi0 - 5.0);
  const auto p = testutil::scratch_dir("diag") / "bound.csv";
  pnp::write_bound_report_csv(p.string(), rep);
  const pnp::CsvTable table = pnp::read_csv(p.string());
  REQUIRE(table.header ==
          std::vector<std::string>{"t", "lhs_min", "lhs_mean", "rhs", "satisfied", "eps_bar"});
  REQUIRE(table.rows.size() == rep.per_t.size());
  CHECK(pnp::parse_csv_double(table.rows[3][1]) == rep.per_t[3].lhs_min);
  CHECK(table.rows[0][4] == (rep.per_t[0].satisfied ? "1" : "0"));
}

TEST_CASE("estimate_R needs kept iterates and scales the worst excursion") {
  auto c = testutil::canonical_instance(53, 30);
  const SolverTrace bare = pnp::run(c.m, c.y, c.target, nullptr, c.cfg, &c.gt);
  CHECK_THROWS_AS((void)pnp::estimate_R(bare, bare.z_final), std::invalid_argument);

  c.cfg.keep_iterates = true;
  const SolverTrace kept = pnp::run(c.m, c.y, c.target, nullptr, c.cfg, &c.gt);
  const double R = pnp::estimate_R(kept, kept.z_final);
  double worst = 0.0;
  for (const auto& z : kept.z_iters)
    worst = std::max(worst, pnp::l2_norm(pnp::sub(z, kept.z_final)));
  CHECK(R == doctest::Approx(1.1 * worst).epsilon(1e-15));
  CHECK(R >= 0.0);

  // a trace whose iterates all sit at z* reports zero
  SolverTrace fixed;
  fixed.z_iters.assign(4, kept.z_final);
  CHECK(pnp::estimate_R(fixed, kept.z_final) == 0.0);
}

TEST_CASE("R estimates are stable across seeds") {
  auto a = testutil::canonical_instance(59, 120);
  a.cfg.keep_iterates = true;
  const SolverTrace ta = pnp::run(a.m, a.y, a.target, nullptr, a.cfg, &a.gt);
  auto b = testutil::canonical_instance(60, 120);
  b.cfg.keep_iterates = true;
  const SolverTrace tb = pnp::run(b.m, b.y, b.target, nullptr, b.cfg, &b.gt);
  const double Ra = pnp::estimate_R(ta, ta.z_final);
  const double Rb = pnp::estimate_R(tb, tb.z_final);
  CHECK(std::fabs(Ra - Rb) <= 0.2 * std::max(Ra, Rb));
}

}  // TEST_SUITE
