#pragma once

#include <complex>
#include <vector>

namespace pnp {

// In-place 2-D complex DFT of an h x w row-major array.
// Forward is unnormalized; inverse divides by h*w, so ifft2(fft2(a)) == a
// up to rounding. Plan creation is serialized internally (the planner is not
// thread-safe); concurrent transforms are fine.
void fft2(std::vector<std::complex<double>>& a, int h, int w, bool inverse);

}  // namespace pnp
