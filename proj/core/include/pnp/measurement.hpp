#pragma once

#include <functional>

#include "pnp/image.hpp"
#include "pnp/kernel.hpp"

namespace pnp {

// y = S H x + e: circular blur H, s-fold decimation S keeping the top-left
// sample of each s x s block, noise level noise_sigma. Defines the quadratic
// data term 0.5 * ||SHx - y||^2.
struct MeasurementModel {
  Kernel kernel;
  int scale = 1;
  double noise_sigma = 0.0;
};

// Circular convolution then decimation. Spatial-domain loops; this is the
// reference semantics everything else is checked against.
ImageBuffer forward(const MeasurementModel& m, const ImageBuffer& x);

// Zero-insertion upsampling then circular correlation; the exact adjoint of
// forward under the Euclidean inner product.
ImageBuffer adjoint(const MeasurementModel& m, const ImageBuffer& y);

double data_fidelity(const MeasurementModel& m, const ImageBuffer& y, const ImageBuffer& x);
ImageBuffer grad_data_fidelity(const MeasurementModel& m, const ImageBuffer& y,
                               const ImageBuffer& x);

struct ProxSolverConfig {
  enum class Method { closed_form_fft, conjugate_gradient };
  Method method = Method::closed_form_fft;
  double cg_tol = 1e-12;  // relative residual
  int cg_max_iter = 500;
};

// argmin_x 0.5*||x - v||^2 + gamma * 0.5*||SHx - y||^2, i.e. the solution of
// (I + gamma AtA) x = v + gamma At y with A = SH.
//
// closed_form_fft inverts via the Woodbury identity: AAt is diagonal in the
// low-resolution Fourier basis with eigenvalues (1/s^2) * sum of |khat|^2
// over the s^2 aliased frequencies, so the whole solve is pointwise there.
// conjugate_gradient solves the same normal equations using only the
// spatial-domain operators above; it shares no code with the FFT path and
// serves as its oracle.
ImageBuffer prox_data(const MeasurementModel& m, const ImageBuffer& y, const ImageBuffer& v,
                      double gamma, const ProxSolverConfig& cfg = {});

// Extension hook for non-quadratic data terms: minimizes
// 0.5*||x - v||^2 + gamma * g(x) by gradient descent with backtracking, given
// only g's gradient. Stops when the prox-objective gradient norm falls below
// tol * (1 + ||v||).
ImageBuffer prox_gradient_descent(const std::function<ImageBuffer(const ImageBuffer&)>& grad_g,
                                  const ImageBuffer& v, double gamma, double tol = 1e-10,
                                  int max_iter = 100000);

}  // namespace pnp
