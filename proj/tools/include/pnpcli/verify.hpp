#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pnpcli {

// One named inequality from a verification battery. `pass` is the verdict;
// value/threshold give the measured margin so logs stay diagnosable.
struct CheckResult {
  std::string suite;
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string detail;
};

struct VerifyOptions {
  bool mismatched = false;
  std::uint64_t seed = 7;
};

// Suites: tweedie, prox-identity, lemma-descent, theorem1, theorem2,
// remark1, adjoint, prox-oracle, metrics.
const std::vector<std::string>& verify_suite_names();

// Throws std::invalid_argument for an unknown suite name.
std::vector<CheckResult> run_verify_suite(const std::string& suite, const VerifyOptions& opt);

}  // namespace pnpcli
