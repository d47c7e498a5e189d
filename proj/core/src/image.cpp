#include "pnp/image.hpp"

#include <cmath>
#include <stdexcept>

namespace pnp {

namespace {
void require_same_shape(const ImageBuffer& a, const ImageBuffer& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("image shape mismatch");
}
}  // namespace

ImageBuffer add(const ImageBuffer& a, const ImageBuffer& b) {
  require_same_shape(a, b);
  ImageBuffer r = a;
  for (std::size_t i = 0; i < r.data.size(); ++i) r.data[i] += b.data[i];
  return r;
}

ImageBuffer sub(const ImageBuffer& a, const ImageBuffer& b) {
  require_same_shape(a, b);
  ImageBuffer r = a;
  for (std::size_t i = 0; i < r.data.size(); ++i) r.data[i] -= b.data[i];
  return r;
}

ImageBuffer scaled(const ImageBuffer& a, double s) {
  ImageBuffer r = a;
  for (double& v : r.data) v *= s;
  return r;
}

ImageBuffer constant_like(const ImageBuffer& a, double v) {
  ImageBuffer r = a;
  for (double& x : r.data) x = v;
  return r;
}

double dot(const ImageBuffer& a, const ImageBuffer& b) {
  require_same_shape(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) s += a.data[i] * b.data[i];
  return s;
}

double l2_norm(const ImageBuffer& a) {
  double s = 0.0;
  for (double v : a.data) s += v * v;
  return std::sqrt(s);
}

double linf_norm(const ImageBuffer& a) {
  double m = 0.0;
  for (double v : a.data) m = std::max(m, std::fabs(v));
  return m;
}

bool all_finite(const ImageBuffer& a) {
  for (double v : a.data)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace pnp
