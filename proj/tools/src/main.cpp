#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "pnp/errors.hpp"
#include "pnpcli/commands.hpp"
#include "pnpcli/config.hpp"

// Exit codes: 0 ok, 1 verification failure, 2 usage/config/IO error.
int main(int argc, char** argv) {
  CLI::App app{"PnP-ADMM restoration solver and theory verification toolkit"};
  app.require_subcommand(1);

  pnpcli::RunArgs run_args;
  std::uint64_t seed_flag = 0;
  CLI::App* run = app.add_subcommand("run", "solve one configured problem, write artifacts");
  run->add_option("--config", run_args.config_path, "experiment config file")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--out", run_args.out_dir,
                  "output directory (default: config [output] dir, then $PNPADMM_OUT_DIR, then ./out)");
  CLI::Option* run_seed = run->add_option("--seed", seed_flag, "override the config seed");

  pnpcli::VerifyArgs verify_args;
  CLI::App* verify = app.add_subcommand("verify", "run an invariant battery");
  verify->add_option("--suite", verify_args.suite,
                     "tweedie | prox-identity | lemma-descent | theorem1 | theorem2 | remark1 | "
                     "adjoint | prox-oracle | metrics | all");
  verify->add_flag("--mismatched", verify_args.mismatched,
                   "check the mismatched-denoiser variants of the lemma batteries");
  verify->add_option("--seed", verify_args.seed, "seed for the battery instances");
  verify->add_option("--out", verify_args.out_dir, "directory for verify.jsonl");

  pnpcli::SweepArgs sweep_args;
  std::uint64_t sweep_seed_flag = 0;
  CLI::App* sweep = app.add_subcommand("sweep", "grid of runs over sigma_optim and/or gamma");
  sweep->add_option("--config", sweep_args.config_path, "experiment config with a [sweep] section")
      ->required()
      ->check(CLI::ExistingFile);
  sweep->add_option("--out", sweep_args.out_dir, "output directory");
  CLI::Option* sweep_seed = sweep->add_option("--seed", sweep_seed_flag, "override the config seed");
  sweep->add_option("--workers", sweep_args.workers, "worker threads (0 = hardware concurrency)");

  pnpcli::DenoiseArgs denoise_args;
  CLI::App* denoise =
      app.add_subcommand("denoise", "single posterior-mean denoising pass on an image");
  denoise->add_option("--config", denoise_args.config_path,
                      "config with [problem] image, [prior_target], [solver] sigma")
      ->required()
      ->check(CLI::ExistingFile);
  denoise->add_option("--out", denoise_args.out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) {
      if (*run_seed) run_args.seed = seed_flag;
      return pnpcli::cmd_run(run_args);
    }
    if (*verify) return pnpcli::cmd_verify(verify_args);
    if (*sweep) {
      if (*sweep_seed) sweep_args.seed = sweep_seed_flag;
      return pnpcli::cmd_sweep(sweep_args);
    }
    if (*denoise) return pnpcli::cmd_denoise(denoise_args);
  } catch (const pnpcli::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const pnp::IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
