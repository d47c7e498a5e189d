#pragma once

#include <string>

#include "pnp/image.hpp"

namespace pnp {

// Binary PGM (P5) / PPM (P6) reader and writer, 8- and 16-bit.
// Intensities map as v / maxval on read; writing clamps to [0,1] and rounds.
// Failures raise IoError with a kind distinguishing unsupported magic,
// malformed header, and truncated payload.
ImageBuffer read_image(const std::string& path);

// bits is 8 or 16; channels pick PGM (1) vs PPM (3)
void write_image(const std::string& path, const ImageBuffer& img, int bits = 8);

}  // namespace pnp
