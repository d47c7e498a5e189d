#pragma once

#include <stdexcept>
#include <string>

namespace pnp {

// Image file I/O failure. The kind distinguishes the three header/payload
// conditions callers are expected to report differently.
class IoError : public std::runtime_error {
 public:
  enum class Kind { unsupported_magic, malformed_header, truncated_payload, file_access };

  IoError(Kind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Denoiser inversion did not converge: the requested point is (numerically)
// outside the denoiser range, where the implicit regularizer is infinite.
class RangeError : public std::runtime_error {
 public:
  explicit RangeError(const std::string& msg) : std::runtime_error(msg) {}
};

// Iterative solve failure (CG out of iterations, NaN in an iterate, ...).
class SolveError : public std::runtime_error {
 public:
  explicit SolveError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace pnp
