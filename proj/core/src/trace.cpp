#include "pnp/trace.hpp"

#include <cmath>

#include "pnp/csv.hpp"
#include "pnp/errors.hpp"

namespace pnp {

const char* const kTraceCsvHeader =
    "iter,sigma_k,phi,grad_f_norm,delta_k,z_step_norm,xz_gap,s_step_norm,psnr,"
    "psnr_paper_formula,ssim";

namespace {
double cap_db(double v) { return v > 99.0 ? 99.0 : v; }
}  // namespace

void write_trace_csv(const std::string& path, const SolverTrace& trace) {
  CsvTable t;
  t.header = split_csv_line(kTraceCsvHeader);
  t.rows.reserve(trace.rows.size());
  for (const auto& r : trace.rows) {
    t.rows.push_back({std::to_string(r.iter), format_g17(r.sigma_k), format_g17(r.phi),
                      format_g17(r.grad_f_norm), format_g17(r.delta_k),
                      format_g17(r.z_step_norm), format_g17(r.xz_gap),
                      format_g17(r.s_step_norm), format_g17(cap_db(r.psnr)),
                      format_g17(cap_db(r.psnr_paper_formula)), format_g17(r.ssim)});
  }
  write_csv(path, t);
}

std::vector<TraceRow> read_trace_csv(const std::string& path) {
  const CsvTable t = read_csv(path);
  if (t.header != split_csv_line(kTraceCsvHeader))
    throw IoError(IoError::Kind::malformed_header, path + ": unexpected trace header");
  std::vector<TraceRow> rows;
  rows.reserve(t.rows.size());
  for (const auto& f : t.rows) {
    if (f.size() != 11)
      throw IoError(IoError::Kind::malformed_header, path + ": bad trace column count");
    TraceRow r;
    r.iter = static_cast<int>(parse_csv_double(f[0]));
    r.sigma_k = parse_csv_double(f[1]);
    r.phi = parse_csv_double(f[2]);
    r.grad_f_norm = parse_csv_double(f[3]);
    r.delta_k = parse_csv_double(f[4]);
    r.z_step_norm = parse_csv_double(f[5]);
    r.xz_gap = parse_csv_double(f[6]);
    r.s_step_norm = parse_csv_double(f[7]);
    r.psnr = parse_csv_double(f[8]);
    r.psnr_paper_formula = parse_csv_double(f[9]);
    r.ssim = parse_csv_double(f[10]);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace pnp
