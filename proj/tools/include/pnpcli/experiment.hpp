#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "pnp/adaptation.hpp"
#include "pnp/image.hpp"
#include "pnp/measurement.hpp"
#include "pnp/prior.hpp"
#include "pnp/solver.hpp"
#include "pnpcli/config.hpp"

namespace pnpcli {

// Typed view of a config file. Paths are resolved relative to the config
// file's directory.
struct ExperimentSpec {
  // [problem]: either synthetic (ground truth drawn from the target prior)
  // or an image file
  bool synthetic = true;
  std::string image_path;
  int height = 64, width = 64, channels = 1;
  double noise_sigma = 0.0;
  std::uint64_t seed = 1;

  pnp::MeasurementModel model;

  pnp::AnalyticPrior target;
  std::optional<pnp::AnalyticPrior> mismatched;
  std::optional<std::vector<double>> adaptation_alphas;  // needs mismatched as source
  std::optional<pnp::DeltaSchedule> delta;

  pnp::SolverConfig solver;

  std::string out_dir;  // from [output] dir; may be empty
  std::string config_text;  // raw file contents, echoed into summaries
};

ExperimentSpec load_experiment(const std::string& path);

// Prior parsing shared with cmd_denoise: `kind = gaussian|gmm` plus repeated
// `component = weight mean variance` lines.
pnp::AnalyticPrior parse_prior(const ConfigSection& sec);

// Realized instance: measurement generated from an ExperimentSpec and a seed.
struct Problem {
  pnp::MeasurementModel model;
  pnp::ImageBuffer y;
  std::optional<pnp::ImageBuffer> ground_truth;
  pnp::Denoiser target;
  std::optional<pnp::Denoiser> mismatched;
};

Problem build_problem(const ExperimentSpec& spec, std::uint64_t seed);

// Output directory resolution: --out flag, then [output] dir, then the
// PNPADMM_OUT_DIR environment variable, then "./out".
std::string resolve_out_dir(const std::string& flag_value, const ExperimentSpec* spec);

}  // namespace pnpcli
