#pragma once

// Shared between cmd_run and cmd_sweep: one solver execution plus the
// artifact set it writes (trace.csv, x_hat image, summary.txt).

#include <cstdint>
#include <string>

#include "pnp/solver.hpp"
#include "pnp/trace.hpp"
#include "pnpcli/experiment.hpp"

namespace pnpcli::detail {

struct SingleRun {
  pnp::SolverTrace trace;
  double wall_seconds = 0.0;
  std::string zstep_label;  // target / mismatched / perturbed / alpha=<v>
};

// Runs the solver once. The z-step follows the ExperimentSpec: a delta
// schedule wins, then a mismatched prior, then the target denoiser.
SingleRun execute_single(const ExperimentSpec& spec, const Problem& prob,
                         const pnp::SolverConfig& cfg);

// As above with an explicit denoiser driving the z-step (adaptation path).
SingleRun execute_with_denoiser(const ExperimentSpec& spec, const Problem& prob,
                                const pnp::SolverConfig& cfg, const pnp::Denoiser& zstep_denoiser,
                                const std::string& label);

void write_run_artifacts(const std::string& dir, const ExperimentSpec& spec,
                         const SingleRun& run, std::uint64_t seed);

// dB value as serialized: capped at the 99 sentinel
double capped_db(double v);

}  // namespace pnpcli::detail
