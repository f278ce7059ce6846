#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "heteraug/rng.hpp"

using namespace heteraug;

TEST_CASE("same derivation path gives identical draws") {
  RngStream a = derive_rng(7, {"img0", "gauss", 1});
  RngStream b = derive_rng(7, {"img0", "gauss", 1});
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("derive_rng matches chained child calls") {
  RngStream a = derive_rng(7, {"img0", 3});
  RngStream b = RngStream(7).child("img0").child(uint64_t(3));
  for (int i = 0; i < 20; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different labels and seeds give different streams") {
  CHECK(derive_rng(7, {"img0"}).next_u64() != derive_rng(7, {"img1"}).next_u64());
  CHECK(derive_rng(7, {}).next_u64() != derive_rng(8, {}).next_u64());
  CHECK(derive_rng(7, {"x"}).next_u64() != derive_rng(7, {uint64_t(0)}).next_u64());
}

TEST_CASE("no first-draw collisions over 10^4 distinct labels") {
  std::set<uint64_t> seen;
  for (uint64_t i = 0; i < 10000; ++i)
    seen.insert(derive_rng(7, {"img", i}).next_u64());
  CHECK(seen.size() == 10000);
}

TEST_CASE("sibling streams are unaffected by each other") {
  RngStream parent(42);
  RngStream a1 = parent.child("a");
  std::vector<uint64_t> before;
  for (int i = 0; i < 10; ++i) before.push_back(a1.next_u64());

  RngStream b = parent.child("b");
  for (int i = 0; i < 5; ++i) b.next_u64();
  RngStream a2 = parent.child("a");
  for (int i = 0; i < 10; ++i) CHECK(a2.next_u64() == before[i]);
}

TEST_CASE("uniform ranges") {
  RngStream rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double v = rng.uniform(-2.0, 3.0);
    CHECK(v >= -2.0);
    CHECK(v < 3.0);
    CHECK(rng.uniform_int(7) < 7);
  }
}

TEST_CASE("normal moments") {
  RngStream rng(2);
  const int n = 20000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::fabs(mean) < 0.05);
  CHECK(std::fabs(var - 1.0) < 0.1);
}

TEST_CASE("poisson mean and edge cases") {
  RngStream rng(3);
  CHECK(rng.poisson(0.0) == 0);
  const int n = 20000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += double(rng.poisson(4.0));
  CHECK(std::fabs(sum / n - 4.0) < 0.1);
}

TEST_CASE("beta moments") {
  RngStream rng(4);
  const int n = 20000;
  double sum_uniform = 0.0, sum_skewed = 0.0;
  for (int i = 0; i < n; ++i) sum_uniform += rng.beta(1.0, 1.0);
  for (int i = 0; i < n; ++i) sum_skewed += rng.beta(2.0, 5.0);
  CHECK(std::fabs(sum_uniform / n - 0.5) < 0.02);
  CHECK(std::fabs(sum_skewed / n - 2.0 / 7.0) < 0.02);
  for (int i = 0; i < 100; ++i) {
    const double b = rng.beta(0.5, 0.5);  // shape < 1 path
    CHECK(b >= 0.0);
    CHECK(b <= 1.0);
  }
}

TEST_CASE("uniform_int is roughly uniform") {
  RngStream rng(5);
  int counts[5] = {0};
  const int n = 10000;
  for (int i = 0; i < n; ++i) ++counts[rng.uniform_int(5)];
  for (int c : counts) CHECK(std::fabs(double(c) / n - 0.2) < 0.02);
}
