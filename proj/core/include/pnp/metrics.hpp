#pragma once

#include "pnp/image.hpp"

namespace pnp {

// 20*log10(1 / rmse) over all samples; +infinity for identical images
// (serializers cap that to 99 dB).
double psnr(const ImageBuffer& a, const ImageBuffer& b);

// The un-normalized variant 20*log10(1 / ||a - b||_2); emitted alongside the
// standard one so both conventions are on record.
double psnr_paper_formula(const ImageBuffer& a, const ImageBuffer& b);

// Mean local SSIM, 11x11 Gaussian window (std 1.5), K1=0.01, K2=0.03,
// dynamic range 1. Windows are evaluated where they fit entirely inside the
// image, so both dimensions must be >= 11. Channels average.
double ssim(const ImageBuffer& a, const ImageBuffer& b);

}  // namespace pnp
