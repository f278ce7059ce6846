#include <doctest.h>

#include <cmath>

#include "heteraug/metrics.hpp"
#include "heteraug/rng.hpp"
#include "oracles.hpp"

using namespace heteraug;
using heteraug::testing::brute_force_miou;

namespace {

LabelMap map_from(std::initializer_list<uint16_t> ids, int h, int w) {
  LabelMap m = LabelMap::filled(h, w, 0);
  size_t i = 0;
  for (uint16_t v : ids) m.data[i++] = v;
  return m;
}

LabelMap random_map(int h, int w, int num_classes, RngStream& rng) {
  LabelMap m = LabelMap::filled(h, w, 0);
  for (auto& v : m.data) v = uint16_t(rng.uniform_int(num_classes));
  return m;
}

}  // namespace

TEST_CASE("accumulate fills the expected cells") {
  ConfusionMatrix cm(2);
  const LabelMap gt = map_from({0, 1}, 2, 1);
  const LabelMap pred = map_from({1, 1}, 2, 1);
  accumulate(cm, pred, gt);
  CHECK(cm.at(0, 1) == 1);
  CHECK(cm.at(1, 1) == 1);
  CHECK(cm.at(0, 0) == 0);
  CHECK(cm.total() == 2);
}

TEST_CASE("perfect prediction only touches the diagonal") {
  RngStream rng(1);
  const LabelMap m = random_map(6, 6, 4, rng);
  ConfusionMatrix cm(4);
  accumulate(cm, m, m);
  for (int g = 0; g < 4; ++g)
    for (int p = 0; p < 4; ++p)
      if (g != p) CHECK(cm.at(g, p) == 0);
  CHECK(miou(cm) == 1.0);
  CHECK(mean_f1(cm) == 1.0);
}

TEST_CASE("dataset accumulation equals the sum of per-image matrices") {
  RngStream rng(2);
  ConfusionMatrix whole(3);
  ConfusionMatrix merged(3);
  for (int i = 0; i < 5; ++i) {
    const LabelMap gt = random_map(4, 5, 3, rng);
    const LabelMap pred = random_map(4, 5, 3, rng);
    accumulate(whole, pred, gt);
    ConfusionMatrix single(3);
    accumulate(single, pred, gt);
    merged.merge(single);
  }
  CHECK(whole.counts == merged.counts);
}

TEST_CASE("ignore_id skips pixels") {
  ConfusionMatrix cm(3);
  const LabelMap gt = map_from({0, 2, 1}, 3, 1);
  const LabelMap pred = map_from({0, 0, 1}, 3, 1);
  accumulate(cm, pred, gt, 2);
  CHECK(cm.total() == 2);
  CHECK(cm.at(2, 0) == 0);
}

TEST_CASE("accumulate validates inputs") {
  ConfusionMatrix cm(2);
  CHECK_THROWS_AS(
      accumulate(cm, LabelMap::filled(2, 2, 0), LabelMap::filled(2, 3, 0)),
      std::invalid_argument);
  CHECK_THROWS_AS(
      accumulate(cm, LabelMap::filled(2, 2, 7), LabelMap::filled(2, 2, 0)),
      std::out_of_range);
}

TEST_CASE("hand-computed 3-class mIoU") {
  // diag (3,2,1), counts[0][1]=1, counts[2][1]=1 -> IoU (3/4, 1/2, 1/2)
  ConfusionMatrix cm(3);
  cm.at(0, 0) = 3;
  cm.at(1, 1) = 2;
  cm.at(2, 2) = 1;
  cm.at(0, 1) = 1;
  cm.at(2, 1) = 1;
  CHECK(miou(cm) == doctest::Approx(7.0 / 12.0).epsilon(1e-12));
}

TEST_CASE("complement prediction scores zero") {
  const LabelMap gt = map_from({0, 0, 1, 1}, 2, 2);
  const LabelMap pred = map_from({1, 1, 0, 0}, 2, 2);
  ConfusionMatrix cm(2);
  accumulate(cm, pred, gt);
  CHECK(miou(cm) == 0.0);
}

TEST_CASE("mIoU matches the brute-force pixel-set oracle") {
  RngStream rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const LabelMap gt = random_map(10, 10, 4, rng);
    const LabelMap pred = random_map(10, 10, 4, rng);
    ConfusionMatrix cm(4);
    accumulate(cm, pred, gt);
    CHECK(std::fabs(miou(cm) - brute_force_miou(pred, gt, 4)) < 1e-12);
  }
}

TEST_CASE("f1 closed forms and absent-class handling") {
  // class 1: TP=2 FP=1 FN=1 -> F1 = 2/3
  ConfusionMatrix cm(2);
  cm.at(1, 1) = 2;
  cm.at(0, 1) = 1;
  cm.at(1, 0) = 1;
  cm.at(0, 0) = 5;
  CHECK(mean_f1(cm) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

  // class 2 absent from both pred and gt: flagged, contributes 0
  ConfusionMatrix cm3(3);
  cm3.at(0, 0) = 4;
  cm3.at(1, 1) = 4;
  const PerClassStats stats = per_class_stats(cm3);
  CHECK(stats.absent[2]);
  CHECK(!stats.absent[1]);
  CHECK(stats.f1[2] == 0.0);
  CHECK(mean_f1(cm3) == doctest::Approx(0.5));   // (1 + 0) / 2 without background
  CHECK(mean_f1(cm3, true) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("empty matrix is rejected") {
  ConfusionMatrix cm(3);
  CHECK_THROWS_AS(miou(cm), std::invalid_argument);
  CHECK_THROWS_AS(mean_f1(cm), std::invalid_argument);
}

TEST_CASE("aggregate_c structure") {
  MetricGrid constant;
  for (int c = 0; c < kNumCorruptions; ++c)
    for (int s = 1; s <= kNumSeverities; ++s) constant.set(CorruptionId(c), s, 0.437);
  CHECK(aggregate_c(constant) == doctest::Approx(0.437).epsilon(1e-12));

  MetricGrid one_row;
  for (int c = 0; c < kNumCorruptions; ++c)
    for (int s = 1; s <= kNumSeverities; ++s)
      one_row.set(CorruptionId(c), s, c == 3 ? 1.0 : 0.0);
  CHECK(aggregate_c(one_row) == doctest::Approx(1.0 / 16.0).epsilon(1e-12));
}

TEST_CASE("aggregate_c equals the flat mean on random grids") {
  RngStream rng(4);
  MetricGrid grid;
  double flat = 0.0;
  for (int c = 0; c < kNumCorruptions; ++c)
    for (int s = 1; s <= kNumSeverities; ++s) {
      const double v = rng.uniform();
      grid.set(CorruptionId(c), s, v);
      flat += v;
    }
  flat /= double(kNumCorruptions * kNumSeverities);
  CHECK(std::fabs(aggregate_c(grid) - flat) < 1e-12);
}

TEST_CASE("unpopulated cells are an error") {
  MetricGrid grid;
  grid.set(CorruptionId::kFog, 2, 0.5);
  CHECK_THROWS_AS(aggregate_c(grid), std::logic_error);
}

TEST_CASE("metrics are invariant under class relabeling") {
  RngStream rng(5);
  const LabelMap gt = random_map(8, 8, 4, rng);
  const LabelMap pred = random_map(8, 8, 4, rng);
  ConfusionMatrix cm(4);
  accumulate(cm, pred, gt);

  const int perm[4] = {2, 3, 1, 0};
  LabelMap gt_p = gt, pred_p = pred;
  for (auto& v : gt_p.data) v = uint16_t(perm[v]);
  for (auto& v : pred_p.data) v = uint16_t(perm[v]);
  ConfusionMatrix cm_p(4);
  accumulate(cm_p, pred_p, gt_p);

  CHECK(miou(cm) == doctest::Approx(miou(cm_p)).epsilon(1e-12));
  CHECK(mean_f1(cm, true) == doctest::Approx(mean_f1(cm_p, true)).epsilon(1e-12));
}

TEST_CASE("correcting one wrong pixel never decreases mIoU") {
  RngStream rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const LabelMap gt = random_map(6, 6, 3, rng);
    LabelMap pred = random_map(6, 6, 3, rng);

    size_t wrong = gt.data.size();
    for (size_t i = 0; i < gt.data.size(); ++i)
      if (pred.data[i] != gt.data[i]) {
        wrong = i;
        break;
      }
    if (wrong == gt.data.size()) continue;

    ConfusionMatrix before(3);
    accumulate(before, pred, gt);
    const double miou_before = miou(before);

    pred.data[wrong] = gt.data[wrong];
    ConfusionMatrix after(3);
    accumulate(after, pred, gt);
    CHECK(miou(after) >= miou_before - 1e-12);
  }
}

TEST_CASE("mIoU and F1 are 1 exactly when the matrix is diagonal") {
  ConfusionMatrix diag(3);
  diag.at(0, 0) = 5;
  diag.at(1, 1) = 2;
  diag.at(2, 2) = 9;
  CHECK(miou(diag) == 1.0);
  CHECK(mean_f1(diag, true) == 1.0);

  diag.at(0, 1) = 1;
  CHECK(miou(diag) < 1.0);
  CHECK(mean_f1(diag, true) < 1.0);
}
