#pragma once

#include <string>
#include <vector>

#include "pnp/image.hpp"

namespace pnp {

// One solver iteration. The first eleven fields are the CSV contract, in
// column order; f_at_x (objective g+h at x^k) stays internal for the
// lower-bound audits.
struct TraceRow {
  int iter = 0;
  double sigma_k = 0.0;
  double phi = 0.0;
  double grad_f_norm = 0.0;
  double delta_k = 0.0;
  double z_step_norm = 0.0;
  double xz_gap = 0.0;
  double s_step_norm = 0.0;
  double psnr = 0.0;
  double psnr_paper_formula = 0.0;
  double ssim = 0.0;
  double f_at_x = 0.0;
};

struct SolverTrace {
  std::vector<TraceRow> rows;
  double phi0 = 0.0;  // value at the initial point (x^0 := z^0)
  // true when delta_k was actually measured (record_parallel_target); the
  // mismatched bound checks refuse traces where the column is just zeros
  bool has_delta = false;
  ImageBuffer x_hat;  // final x iterate
  ImageBuffer z_final;
  // populated when SolverConfig.keep_iterates is set; z_iters[0] is z^0
  std::vector<ImageBuffer> z_iters;
  std::vector<ImageBuffer> x_iters;
  std::vector<ImageBuffer> v_iters;  // denoiser inputs x^k + s^{k-1}
};

extern const char* const kTraceCsvHeader;

// Doubles are serialized with 17 significant digits; dB metric values above
// the 99 dB sentinel (including +inf on exact recovery) are capped to 99 at
// this boundary.
void write_trace_csv(const std::string& path, const SolverTrace& trace);

// Reads back the eleven CSV columns (f_at_x and iterate history are not
// serialized). Values round-trip bit-exactly.
std::vector<TraceRow> read_trace_csv(const std::string& path);

}  // namespace pnp
