#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace pnpcli {

// Subcommand entry points. All return process exit codes: 0 ok, 1
// verification failure, anything else is signalled by throwing (the driver
// maps exceptions to exit code 2).

struct RunArgs {
  std::string config_path;
  std::string out_dir;                 // --out override; empty defers to config/env
  std::optional<std::uint64_t> seed;   // --seed override
};
int cmd_run(const RunArgs& args);

struct VerifyArgs {
  std::string suite = "all";
  bool mismatched = false;
  std::uint64_t seed = 7;
  std::string out_dir;
};
int cmd_verify(const VerifyArgs& args);

struct SweepArgs {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  int workers = 0;  // 0 = hardware concurrency
};
int cmd_sweep(const SweepArgs& args);

struct DenoiseArgs {
  std::string config_path;
  std::string out_dir;
};
int cmd_denoise(const DenoiseArgs& args);

}  // namespace pnpcli
