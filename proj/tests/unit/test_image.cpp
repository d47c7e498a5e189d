#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "pnp/image.hpp"

using pnp::ImageBuffer;

TEST_SUITE("image") {

TEST_CASE("row-major channel-interleaved layout") {
  ImageBuffer img(2, 3, 2);
  CHECK(img.size() == 12);
  img.at(1, 2, 1) = 7.0;
  CHECK(img.data[(1 * 3 + 2) * 2 + 1] == 7.0);
  img.at(0, 1) = -2.5;
  CHECK(img.data[2] == -2.5);
  const ImageBuffer& cref = img;
  CHECK(cref.at(1, 2, 1) == 7.0);
}

TEST_CASE("constructor fill and constant_like") {
  ImageBuffer a(4, 5, 3, 0.25);
  for (double v : a.data) CHECK(v == 0.25);
  ImageBuffer b = pnp::constant_like(a, -1.0);
  CHECK(b.same_shape(a));
  for (double v : b.data) CHECK(v == -1.0);
}

TEST_CASE("elementwise arithmetic") {
  ImageBuffer a(1, 3);
  ImageBuffer b(1, 3);
  a.data = {1.0, -2.0, 0.5};
  b.data = {0.25, 2.0, -0.5};
  const ImageBuffer s = pnp::add(a, b);
  CHECK(s.data[0] == 1.25);
  CHECK(s.data[1] == 0.0);
  CHECK(s.data[2] == 0.0);
  const ImageBuffer d = pnp::sub(a, b);
  CHECK(d.data[0] == 0.75);
  CHECK(d.data[1] == -4.0);
  CHECK(d.data[2] == 1.0);
  const ImageBuffer t = pnp::scaled(a, -2.0);
  CHECK(t.data[0] == -2.0);
  CHECK(t.data[1] == 4.0);
  CHECK(t.data[2] == -1.0);
}

TEST_CASE("norms and inner product") {
  ImageBuffer a(1, 4);
  a.data = {3.0, 0.0, -4.0, 0.0};
  CHECK(pnp::l2_norm(a) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(pnp::linf_norm(a) == 4.0);
  ImageBuffer b(1, 4);
  b.data = {1.0, 10.0, 1.0, -7.0};
  CHECK(pnp::dot(a, b) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(pnp::dot(a, b) == pnp::dot(b, a));
}

TEST_CASE("shape mismatch is rejected") {
  ImageBuffer a(2, 2), b(2, 3), c(2, 2, 3);
  CHECK_THROWS_AS((void)pnp::add(a, b), std::invalid_argument);
  CHECK_THROWS_AS((void)pnp::sub(a, c), std::invalid_argument);
  CHECK_THROWS_AS((void)pnp::dot(a, b), std::invalid_argument);
}

TEST_CASE("all_finite flags NaN and infinity") {
  ImageBuffer a(2, 2, 1, 1.0);
  CHECK(pnp::all_finite(a));
  a.data[3] = std::numeric_limits<double>::quiet_NaN();
  CHECK_FALSE(pnp::all_finite(a));
  a.data[3] = std::numeric_limits<double>::infinity();
  CHECK_FALSE(pnp::all_finite(a));
}

}  // TEST_SUITE
