#include "pnp/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace pnp {

namespace {
std::mutex planner_mutex;
}

void fft2(std::vector<std::complex<double>>& a, int h, int w, bool inverse) {
  if (a.size() != static_cast<std::size_t>(h) * w)
    throw std::invalid_argument("fft2: size mismatch");
  auto* p = reinterpret_cast<fftw_complex*>(a.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex);
    plan = fftw_plan_dft_2d(h, w, p, p, inverse ? FFTW_BACKWARD : FFTW_FORWARD, FFTW_ESTIMATE);
  }
  if (!plan) throw std::runtime_error("fft2: planner failed");
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex);
    fftw_destroy_plan(plan);
  }
  if (inverse) {
    const double scale = 1.0 / (static_cast<double>(h) * w);
    for (auto& z : a) z *= scale;
  }
}

}  // namespace pnp
