#include <doctest.h>

#include <cmath>
#include <set>

#include "heteraug/chain_augment.hpp"
#include "heteraug/corruptions.hpp"
#include "heteraug/rng.hpp"
#include "test_util.hpp"

using namespace heteraug;

TEST_CASE("invert is an involution on 8-bit-backed images") {
  RngStream rng(1);
  const Image img = heteraug::testing::random_image_8bit(9, 11, rng);
  const Image twice = apply_op(apply_op(img, OpId::kInvert), OpId::kInvert);
  CHECK(max_abs_diff(img, twice) == 0.0f);

  // invert output is always on the file lattice, so a second pair of
  // inversions is exact even when the input was not
  const Image off = heteraug::testing::random_image(9, 11, rng);
  const Image once = apply_op(off, OpId::kInvert);
  CHECK(apply_op(apply_op(once, OpId::kInvert), OpId::kInvert).data == once.data);
}

TEST_CASE("invert reflects around the lattice midpoint") {
  // 0.25 quantizes to 64/255, so the reflection lands on 191/255 (0.75
  // within half a quantization step)
  const Image img = Image::constant(2, 2, 0.25f);
  const Image inverted = apply_op(img, OpId::kInvert);
  for (float v : inverted.data) {
    CHECK(v == 191.0f / 255.0f);
    CHECK(std::fabs(v - 0.75f) <= 0.5f / 255.0f);
  }
}

TEST_CASE("posterize is idempotent") {
  RngStream rng(2);
  const Image img = heteraug::testing::random_image(9, 11, rng);
  const Image once = apply_op(img, OpId::kPosterize);
  const Image twice = apply_op(once, OpId::kPosterize);
  CHECK(max_abs_diff(once, twice) == 0.0f);

  const Image one = Image::constant(1, 1, 1.0f);
  CHECK(apply_op(one, OpId::kPosterize).at(0, 0, 0) == 240.0f / 255.0f);
}

TEST_CASE("solarize leaves sub-threshold values alone") {
  const Image low = Image::constant(4, 4, 0.1f);
  CHECK(max_abs_diff(low, apply_op(low, OpId::kSolarize)) == 0.0f);

  const Image high = Image::constant(4, 4, 0.8f);
  const Image solarized = apply_op(high, OpId::kSolarize);
  for (float v : solarized.data) CHECK(v == doctest::Approx(0.2f));
}

TEST_CASE("manual chain composition: invert then solarize returns to start") {
  // 0.2 -> invert -> 0.8 >= threshold -> solarize -> 0.2
  const Image img = Image::constant(6, 6, 0.2f);
  ChainPolicy policy;
  policy.ops = {OpId::kInvert, OpId::kSolarize};
  policy.gates = {true, true};
  policy.alpha = 0.0;
  const Image out = apply_chain(img, policy);
  for (float v : out.data) CHECK(v == doctest::Approx(0.2f).epsilon(1e-6));
}

TEST_CASE("closed gates pass the image through") {
  RngStream rng(3);
  const Image img = heteraug::testing::random_image(8, 8, rng);
  ChainPolicy policy;
  policy.ops = {OpId::kInvert, OpId::kEqualize};
  policy.gates = {false, false};
  CHECK(max_abs_diff(img, apply_chain(img, policy)) == 0.0f);
}

TEST_CASE("single gated invert") {
  const Image img = Image::constant(3, 3, 64.0f / 255.0f);
  ChainPolicy policy;
  policy.ops = {OpId::kInvert};
  policy.gates = {true};
  const Image out = apply_chain(img, policy);
  for (float v : out.data) CHECK(v == 191.0f / 255.0f);
}

TEST_CASE("mix endpoints are exact") {
  RngStream rng(4);
  const Image a = heteraug::testing::random_image(7, 5, rng);
  const Image b = heteraug::testing::random_image(7, 5, rng);
  CHECK(mix(a, b, 1.0).data == a.data);
  CHECK(mix(a, b, 0.0).data == b.data);

  const Image half = mix(Image::constant(2, 2, 0.2f), Image::constant(2, 2, 0.6f), 0.5);
  for (float v : half.data) CHECK(v == doctest::Approx(0.4f));
}

TEST_CASE("mix is a convex combination pixelwise") {
  RngStream rng(5);
  const Image a = heteraug::testing::random_image(16, 16, rng);
  const Image b = heteraug::testing::random_image(16, 16, rng);
  const Image m = mix(a, b, 0.37);
  for (size_t i = 0; i < m.data.size(); ++i) {
    CHECK(m.data[i] >= std::min(a.data[i], b.data[i]) - 1e-6f);
    CHECK(m.data[i] <= std::max(a.data[i], b.data[i]) + 1e-6f);
  }
}

TEST_CASE("mix rejects mismatched shapes") {
  CHECK_THROWS_AS(mix(Image::zeros(2, 2), Image::zeros(2, 3), 0.5), std::invalid_argument);
}

TEST_CASE("sample_chain is deterministic per stream") {
  RngStream a = derive_rng(6, {"policy"});
  RngStream b = derive_rng(6, {"policy"});
  const ChainPolicy pa = sample_chain(a);
  const ChainPolicy pb = sample_chain(b);
  CHECK(pa.ops == pb.ops);
  CHECK(pa.gates == pb.gates);
  CHECK(pa.alpha == pb.alpha);
}

TEST_CASE("sampled chains have 2 distinct ops; positions and gates are fair") {
  RngStream rng(7);
  const int n = 10000;
  int first_counts[kNumChainOps] = {0};
  int gate_open = 0, gate_total = 0;
  for (int i = 0; i < n; ++i) {
    const ChainPolicy p = sample_chain(rng);
    REQUIRE(p.ops.size() == 2);
    CHECK(p.ops[0] != p.ops[1]);
    CHECK(p.alpha >= 0.0);
    CHECK(p.alpha <= 1.0);
    ++first_counts[int(p.ops[0])];
    for (bool g : p.gates) {
      gate_total += 1;
      gate_open += g ? 1 : 0;
    }
  }
  for (int c : first_counts) CHECK(std::fabs(double(c) / n - 0.2) < 0.02);
  CHECK(std::fabs(double(gate_open) / gate_total - 0.5) < 0.02);
}

TEST_CASE("ten thousand more chains stay at exactly 2 distinct ops") {
  RngStream rng(8);
  for (int i = 0; i < 100000; ++i) {
    const ChainPolicy p = sample_chain(rng);
    if (p.ops.size() != 2 || p.ops[0] == p.ops[1]) {
      REQUIRE(false);
    }
  }
  CHECK(true);
}

TEST_CASE("whole-chain gate mode opens or closes every op together") {
  ChainConfig cfg;
  cfg.gate_mode = ChainConfig::GateMode::kWholeChain;
  RngStream rng(9);
  for (int i = 0; i < 200; ++i) {
    const ChainPolicy p = sample_chain(rng, cfg);
    CHECK(p.gates[0] == p.gates[1]);
  }
}

TEST_CASE("image_aware_augment stays in range and is deterministic") {
  RngStream img_rng(10);
  for (int i = 0; i < 100; ++i) {
    const Image img = heteraug::testing::random_image(12, 12, img_rng);
    RngStream r1 = derive_rng(11, {"aug", uint64_t(i)});
    RngStream r2 = derive_rng(11, {"aug", uint64_t(i)});
    const Image a = image_aware_augment(img, r1);
    const Image b = image_aware_augment(img, r2);
    CHECK(in_range01(a));
    CHECK(a.data == b.data);
  }
}

TEST_CASE("chain ratio 0 disables augmentation") {
  ChainConfig cfg;
  cfg.ratio = 0.0;
  RngStream img_rng(12);
  const Image img = heteraug::testing::random_image(10, 10, img_rng);
  RngStream rng(13);
  for (int i = 0; i < 20; ++i)
    CHECK(image_aware_augment(img, rng, cfg).data == img.data);
}

TEST_CASE("equalize spreads a concentrated histogram") {
  // two-level image: equalization must push the levels apart
  Image img = Image::zeros(8, 8);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x)
      for (int c = 0; c < 3; ++c) img.at(y, x, c) = x < 4 ? 0.45f : 0.55f;
  const Image eq = apply_op(img, OpId::kEqualize);
  CHECK(eq.at(0, 0, 0) < 0.45f);
  CHECK(eq.at(0, 7, 0) > 0.95f);

  // constant channels stay put
  const Image flat = Image::constant(5, 5, 0.3f);
  CHECK(max_abs_diff(flat, apply_op(flat, OpId::kEqualize)) == 0.0f);
}

TEST_CASE("op set is disjoint from the corruption set") {
  std::set<std::string_view> corruption_names;
  for (CorruptionId id : all_corruptions()) corruption_names.insert(corruption_name(id));
  for (OpId op : all_chain_ops()) CHECK(corruption_names.count(op_name(op)) == 0);
  CHECK(all_chain_ops().size() == 5);
}
