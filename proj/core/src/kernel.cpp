#include "pnp/kernel.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "pnp/csv.hpp"
#include "pnp/errors.hpp"

namespace pnp {

bool Kernel::is_dirac() const {
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      const double expect = (r == rows / 2 && c == cols / 2) ? 1.0 : 0.0;
      if (at(r, c) != expect) return false;
    }
  return true;
}

Kernel dirac_kernel() { return Kernel{}; }

void normalize_kernel(Kernel& k) {
  if (k.rows % 2 == 0 || k.cols % 2 == 0)
    throw std::invalid_argument("kernel side lengths must be odd");
  if (k.w.size() != static_cast<std::size_t>(k.rows) * k.cols)
    throw std::invalid_argument("kernel size mismatch");
  double sum = 0.0;
  for (double v : k.w) {
    if (!std::isfinite(v)) throw std::invalid_argument("kernel has non-finite entries");
    sum += v;
  }
  if (!(sum > 0.0)) throw std::invalid_argument("kernel sum must be positive");
  for (double& v : k.w) v /= sum;
}

Kernel gaussian_kernel(double sx, double sy, double angle_deg, int radius) {
  if (!(sx > 0.0) || !(sy > 0.0)) throw std::invalid_argument("gaussian_kernel: stds must be > 0");
  if (radius < 0) radius = static_cast<int>(std::ceil(4.0 * std::max(sx, sy)));
  const int n = 2 * radius + 1;
  Kernel k;
  k.rows = k.cols = n;
  k.w.assign(static_cast<std::size_t>(n) * n, 0.0);
  const double th = angle_deg * std::numbers::pi / 180.0;
  const double ct = std::cos(th), st = std::sin(th);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const double y = r - radius, x = c - radius;
      // coordinates in the rotated frame where the Gaussian is axis-aligned
      const double u = ct * x + st * y;
      const double v = -st * x + ct * y;
      k.w[static_cast<std::size_t>(r) * n + c] =
          std::exp(-0.5 * (u * u / (sx * sx) + v * v / (sy * sy)));
    }
  normalize_kernel(k);
  return k;
}

Kernel load_kernel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(IoError::Kind::file_access, "cannot open kernel file " + path);
  Kernel k;
  k.w.clear();
  k.rows = 0;
  k.cols = -1;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<double> row;
    std::string tok;
    while (ls >> tok) {
      if (tok[0] == '#') break;
      row.push_back(parse_csv_double(tok));
    }
    if (row.empty()) continue;
    if (k.cols < 0) k.cols = static_cast<int>(row.size());
    if (static_cast<int>(row.size()) != k.cols)
      throw IoError(IoError::Kind::malformed_header,
                    path + ": ragged kernel row " + std::to_string(k.rows + 1));
    k.w.insert(k.w.end(), row.begin(), row.end());
    ++k.rows;
  }
  if (k.rows == 0) throw IoError(IoError::Kind::malformed_header, path + ": empty kernel file");
  try {
    normalize_kernel(k);
  } catch (const std::invalid_argument& e) {
    throw IoError(IoError::Kind::malformed_header, path + ": " + e.what());
  }
  return k;
}

void save_kernel(const std::string& path, const Kernel& k) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(IoError::Kind::file_access, "cannot create " + path);
  for (int r = 0; r < k.rows; ++r) {
    for (int c = 0; c < k.cols; ++c) out << (c ? " " : "") << format_g17(k.at(r, c));
    out << "\n";
  }
}

}  // namespace pnp
