#pragma once

#include <cstddef>
#include <vector>

namespace pnp {

// Dense H x W x C image, row-major, channel-interleaved, 64-bit intensities.
// Nominal range is [0,1] but nothing inside the solver clamps; only file
// export does. C is 1 (gray) or 3 (rgb).
struct ImageBuffer {
  int height = 0;
  int width = 0;
  int channels = 1;
  std::vector<double> data;

  ImageBuffer() = default;
  ImageBuffer(int h, int w, int c = 1, double fill = 0.0)
      : height(h), width(w), channels(c),
        data(static_cast<std::size_t>(h) * w * c, fill) {}

  double& at(int r, int c, int ch = 0) {
    return data[(static_cast<std::size_t>(r) * width + c) * channels + ch];
  }
  double at(int r, int c, int ch = 0) const {
    return data[(static_cast<std::size_t>(r) * width + c) * channels + ch];
  }

  std::size_t size() const { return data.size(); }
  bool same_shape(const ImageBuffer& o) const {
    return height == o.height && width == o.width && channels == o.channels;
  }
};

// Elementwise helpers. Two-argument forms require equal shapes and throw
// std::invalid_argument otherwise.
ImageBuffer add(const ImageBuffer& a, const ImageBuffer& b);
ImageBuffer sub(const ImageBuffer& a, const ImageBuffer& b);
ImageBuffer scaled(const ImageBuffer& a, double s);
ImageBuffer constant_like(const ImageBuffer& a, double v);

double dot(const ImageBuffer& a, const ImageBuffer& b);
double l2_norm(const ImageBuffer& a);
double linf_norm(const ImageBuffer& a);

bool all_finite(const ImageBuffer& a);

}  // namespace pnp
