#include <doctest.h>

#include <cmath>

#include "heteraug/filters.hpp"
#include "heteraug/rng.hpp"
#include "test_util.hpp"

using namespace heteraug;

TEST_CASE("reflect_index mirrors symmetrically") {
  CHECK(reflect_index(0, 5) == 0);
  CHECK(reflect_index(-1, 5) == 0);
  CHECK(reflect_index(-2, 5) == 1);
  CHECK(reflect_index(5, 5) == 4);
  CHECK(reflect_index(6, 5) == 3);
  CHECK(reflect_index(0, 1) == 0);
  CHECK(reflect_index(-3, 1) == 0);
  CHECK(reflect_index(9, 1) == 0);
}

TEST_CASE("kernels are normalized") {
  double disk_sum = 0.0;
  for (const KernelTap& t : disk_kernel(4)) disk_sum += t.weight;
  CHECK(disk_sum == doctest::Approx(1.0).epsilon(1e-6));

  for (int length : {1, 5, 9, 25}) {
    for (double angle : {0.0, 37.0, 90.0, 145.0}) {
      double sum = 0.0;
      for (const KernelTap& t : line_kernel(length, angle)) sum += t.weight;
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
    }
  }
}

TEST_CASE("horizontal line kernel stays on one row") {
  for (const KernelTap& t : line_kernel(7, 0.0)) CHECK(t.dy == 0);
  for (const KernelTap& t : line_kernel(7, 90.0)) CHECK(t.dx == 0);
}

TEST_CASE("normalized kernels preserve constant planes") {
  Plane p = Plane::zeros(8, 9);
  for (float& v : p.data) v = 0.37f;

  const Plane blurred = gaussian_blur(p, 2.5);
  for (float v : blurred.data) CHECK(v == doctest::Approx(0.37f).epsilon(1e-5));

  const Plane disked = convolve(p, disk_kernel(3));
  for (float v : disked.data) CHECK(v == doctest::Approx(0.37f).epsilon(1e-5));
}

TEST_CASE("identity tap is an identity") {
  RngStream rng(3);
  const Image img = heteraug::testing::random_image(6, 6, rng);
  const Image out = convolve(img, {{0, 0, 1.0f}});
  CHECK(max_abs_diff(img, out) == 0.0f);
}

TEST_CASE("gaussian blur on image preserves channel means (reflect padding)") {
  RngStream rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    const Image img = heteraug::testing::random_image(64, 64, rng);
    const Image out = gaussian_blur(img, 1.5);
    for (int c = 0; c < 3; ++c) {
      double before = 0, after = 0;
      for (size_t i = c; i < img.data.size(); i += 3) {
        before += img.data[i];
        after += out.data[i];
      }
      CHECK(std::fabs(before - after) / double(img.pixel_count()) < 1e-3);
    }
  }
}
