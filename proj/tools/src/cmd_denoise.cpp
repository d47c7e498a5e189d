#include "pnpcli/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "artifacts.hpp"
#include "pnp/csv.hpp"
#include "pnp/metrics.hpp"
#include "pnp/pnm.hpp"
#include "pnp/prior.hpp"
#include "pnpcli/experiment.hpp"

namespace pnpcli {

namespace fs = std::filesystem;

// One standalone posterior-mean denoising pass. Everything comes from the
// config: [problem] image, [solver] sigma, [prior_target], and optionally
// [denoise] reference for PSNR reporting.
int cmd_denoise(const DenoiseArgs& args) {
  Config cfg = Config::parse_file(args.config_path);
  const fs::path base = fs::path(args.config_path).parent_path();

  const ConfigSection& problem = cfg.require("problem");
  const std::string image_rel = problem.get_string("image");
  const std::string image_path = (base / image_rel).string();

  double sigma = 0.5;
  if (const ConfigSection* s = cfg.find("solver")) sigma = s->get_double_or("sigma", sigma);
  if (sigma <= 0.0) {
    throw ConfigError("sigma must be positive", cfg.require("solver").line, "solver.sigma");
  }

  pnp::AnalyticPrior prior = parse_prior(cfg.require("prior_target"));
  pnp::Denoiser d{prior, pnp::Denoiser::Role::target};

  std::string reference_path;
  if (const ConfigSection* dn = cfg.find("denoise")) {
    reference_path = dn->get_string_or("reference", "");
    if (!reference_path.empty()) reference_path = (base / reference_path).string();
  }

  ExperimentSpec out_spec;
  if (const ConfigSection* o = cfg.find("output")) {
    out_spec.out_dir = o->get_string_or("dir", "");
    if (!out_spec.out_dir.empty()) {
      out_spec.out_dir = (base / out_spec.out_dir).lexically_normal().string();
    }
  }
  const std::string out_dir = resolve_out_dir(args.out_dir, &out_spec);
  fs::create_directories(out_dir);

  pnp::ImageBuffer input = pnp::read_image(image_path);
  pnp::ImageBuffer denoised = pnp::mmse_denoise(d, input, sigma);

  const char* image_name = denoised.channels == 3 ? "denoised.ppm" : "denoised.pgm";
  pnp::write_image((fs::path(out_dir) / image_name).string(), denoised, 16);

  std::ofstream report(fs::path(out_dir) / "denoise.txt", std::ios::binary);
  report << "pnpadmm denoise summary\n";
  report << "image: " << image_rel << "\n";
  report << "sigma: " << pnp::format_g17(sigma) << "\n";
  std::printf("denoised %s at sigma=%g -> %s\n", image_rel.c_str(), sigma, image_name);
  if (!reference_path.empty()) {
    pnp::ImageBuffer ref = pnp::read_image(reference_path);
    const double in_db = detail::capped_db(pnp::psnr(input, ref));
    const double out_db = detail::capped_db(pnp::psnr(denoised, ref));
    report << "input_psnr: " << pnp::format_g17(in_db) << "\n";
    report << "output_psnr: " << pnp::format_g17(out_db) << "\n";
    std::printf("input_psnr: %.4f dB\noutput_psnr: %.4f dB\n", in_db, out_db);
  }
  return 0;
}

}  // namespace pnpcli
