#include "pnp/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace pnp {

namespace {
void require_same_shape(const ImageBuffer& a, const ImageBuffer& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("metric inputs must share shape");
}
}  // namespace

double psnr(const ImageBuffer& a, const ImageBuffer& b) {
  require_same_shape(a, b);
  double se = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const double d = a.data[i] - b.data[i];
    se += d * d;
  }
  if (se == 0.0) return std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(1.0 / std::sqrt(se / static_cast<double>(a.data.size())));
}

double psnr_paper_formula(const ImageBuffer& a, const ImageBuffer& b) {
  require_same_shape(a, b);
  double se = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const double d = a.data[i] - b.data[i];
    se += d * d;
  }
  if (se == 0.0) return std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(1.0 / std::sqrt(se));
}

double ssim(const ImageBuffer& a, const ImageBuffer& b) {
  require_same_shape(a, b);
  constexpr int kWin = 11;
  constexpr double kWinSigma = 1.5;
  constexpr double kC1 = 0.01 * 0.01;  // (K1 * range)^2
  constexpr double kC2 = 0.03 * 0.03;  // (K2 * range)^2
  if (a.height < kWin || a.width < kWin)
    throw std::invalid_argument("ssim needs images at least 11x11");

  // normalized 11x11 Gaussian window
  double w[kWin][kWin];
  double wsum = 0.0;
  for (int i = 0; i < kWin; ++i)
    for (int j = 0; j < kWin; ++j) {
      const double dy = i - kWin / 2, dx = j - kWin / 2;
      w[i][j] = std::exp(-(dx * dx + dy * dy) / (2.0 * kWinSigma * kWinSigma));
      wsum += w[i][j];
    }
  for (auto& row : w)
    for (double& v : row) v /= wsum;

  double total = 0.0;
  long count = 0;
  for (int ch = 0; ch < a.channels; ++ch)
    for (int r = 0; r + kWin <= a.height; ++r)
      for (int c = 0; c + kWin <= a.width; ++c) {
        double mx = 0.0, my = 0.0;
        for (int i = 0; i < kWin; ++i)
          for (int j = 0; j < kWin; ++j) {
            mx += w[i][j] * a.at(r + i, c + j, ch);
            my += w[i][j] * b.at(r + i, c + j, ch);
          }
        double vx = 0.0, vy = 0.0, cov = 0.0;
        for (int i = 0; i < kWin; ++i)
          for (int j = 0; j < kWin; ++j) {
            const double dx = a.at(r + i, c + j, ch) - mx;
            const double dy = b.at(r + i, c + j, ch) - my;
            vx += w[i][j] * dx * dx;
            vy += w[i][j] * dy * dy;
            cov += w[i][j] * dx * dy;
          }
        const double num = (2.0 * mx * my + kC1) * (2.0 * cov + kC2);
        const double den = (mx * mx + my * my + kC1) * (vx + vy + kC2);
        total += num / den;
        ++count;
      }
  return total / static_cast<double>(count);
}

}  // namespace pnp
