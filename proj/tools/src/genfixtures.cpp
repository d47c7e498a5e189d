// Regenerates the committed fixture corpus: blur kernels, deterministic test
// images, nothing else. Usage: pnp_genfixtures [fixtures_dir]

#include <cstdio>
#include <filesystem>
#include <string>

#include "pnp/image.hpp"
#include "pnp/kernel.hpp"
#include "pnp/measurement.hpp"
#include "pnp/pnm.hpp"
#include "pnp/rng.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
  const fs::path root = argc > 1 ? argv[1] : "fixtures";
  fs::create_directories(root / "kernels");
  fs::create_directories(root / "images");

  struct { const char* name; double sx, sy, angle; } kernels[] = {
      {"iso_0.7.txt", 0.7, 0.7, 0.0},
      {"iso_1.2.txt", 1.2, 1.2, 0.0},
      {"iso_1.6.txt", 1.6, 1.6, 0.0},
      {"iso_2.0.txt", 2.0, 2.0, 0.0},
      {"aniso_2.0x0.5_r0.txt", 2.0, 0.5, 0.0},
      {"aniso_0.6x1.8_r45.txt", 0.6, 1.8, 45.0},
      {"aniso_3.0x1.0_r90.txt", 3.0, 1.0, 90.0},
      {"aniso_2.5x0.8_r135.txt", 2.5, 0.8, 135.0},
  };
  for (const auto& k : kernels) {
    pnp::save_kernel((root / "kernels" / k.name).string(),
                     pnp::gaussian_kernel(k.sx, k.sy, k.angle));
    std::printf("wrote kernels/%s\n", k.name);
  }

  const int n = 32;

  pnp::ImageBuffer gradient(n, n, 1);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      gradient.at(r, c) = static_cast<double>(r + c) / (2.0 * (n - 1));
    }
  }
  pnp::write_image((root / "images" / "gradient.pgm").string(), gradient, 16);
  std::printf("wrote images/gradient.pgm\n");

  pnp::ImageBuffer checker(n, n, 1);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      checker.at(r, c) = ((r / 4 + c / 4) % 2 == 0) ? 0.25 : 0.75;
    }
  }
  pnp::MeasurementModel blur{pnp::gaussian_kernel(1.2, 1.2), 1, 0.0};
  pnp::write_image((root / "images" / "checker.pgm").string(), pnp::forward(blur, checker), 16);
  std::printf("wrote images/checker.pgm\n");

  pnp::Rng rng(12345);
  pnp::ImageBuffer noise(n, n, 1);
  for (double& v : noise.data) v = 0.2 + 0.6 * rng.uniform01();
  pnp::write_image((root / "images" / "noise.pgm").string(), noise, 16);
  std::printf("wrote images/noise.pgm\n");

  return 0;
}
