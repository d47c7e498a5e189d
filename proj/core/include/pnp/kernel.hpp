#pragma once

#include <string>
#include <vector>

namespace pnp {

// Blur PSF with odd side lengths, entries summing to 1. Center is
// (rows/2, cols/2).
struct Kernel {
  int rows = 1;
  int cols = 1;
  std::vector<double> w{1.0};

  double at(int r, int c) const { return w[static_cast<std::size_t>(r) * cols + c]; }
  bool is_dirac() const;
};

Kernel dirac_kernel();

// Sampled bivariate Gaussian, std devs (sx, sy) along axes rotated by
// angle_deg, normalized to unit sum. radius < 0 picks ceil(4*max(sx,sy)).
Kernel gaussian_kernel(double sx, double sy, double angle_deg = 0.0, int radius = -1);

// Plain-text format: one kernel row per line, whitespace-separated reals.
// The loader validates odd dimensions and renormalizes to unit sum.
Kernel load_kernel(const std::string& path);
void save_kernel(const std::string& path, const Kernel& k);

// Throws std::invalid_argument on even dimensions, non-finite entries, or
// a non-positive sum; normalizes in place otherwise.
void normalize_kernel(Kernel& k);

}  // namespace pnp
