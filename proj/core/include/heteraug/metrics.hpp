// Copyright 2026 The Heteraug Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "heteraug/corruptions.hpp"
#include "heteraug/image.hpp"
#include "heteraug/pipeline.hpp"

namespace heteraug {

/// counts[gt][pred], accumulated over pixels. Dataset-level: one matrix
/// per evaluation cell, merged across images before scoring.
struct ConfusionMatrix {
  int num_classes = 0;
  std::vector<uint64_t> counts;  // row-major [gt * num_classes + pred]

  explicit ConfusionMatrix(int num_classes);

  uint64_t& at(int gt, int pred) { return counts[size_t(gt) * num_classes + pred]; }
  uint64_t at(int gt, int pred) const { return counts[size_t(gt) * num_classes + pred]; }
  uint64_t total() const;
  void merge(const ConfusionMatrix& other);
};

/// Add one prediction/ground-truth pair. Pixels whose ground truth equals
/// ignore_id are skipped. Throws on dimension mismatch or out-of-range ids.
void accumulate(ConfusionMatrix& cm, const LabelMap& pred, const LabelMap& gt,
                std::optional<int> ignore_id = std::nullopt);

struct PerClassStats {
  std::vector<double> iou;      // NaN when TP+FP+FN == 0 (excluded from mIoU)
  std::vector<double> f1;       // 0/0 convention scores 0
  std::vector<bool> absent;     // class appears in neither pred nor gt
};

PerClassStats per_class_stats(const ConfusionMatrix& cm);

/// Mean IoU over classes with a nonzero union; throws on an empty matrix.
double miou(const ConfusionMatrix& cm);

/// Mean F1 over classes (background class 0 excluded by default, the ATR
/// reporting convention); absent classes contribute 0.
double mean_f1(const ConfusionMatrix& cm, bool include_background = false);

/// N_c x N_s score table for one metric; every cell must be set before
/// aggregation.
struct MetricGrid {
  std::array<std::array<double, kNumSeverities>, kNumCorruptions> scores{};
  std::array<std::array<bool, kNumSeverities>, kNumCorruptions> populated{};

  void set(CorruptionId c, int severity, double score);
  double get(CorruptionId c, int severity) const;
  bool full() const;
};

/// Corruption-averaged score: mean over corruption types of the mean over
/// severities. Equals the flat mean of all 80 cells when the grid is
/// rectangular and full. Throws if any cell is unpopulated.
double aggregate_c(const MetricGrid& grid);

/// Raised when a manifest's corruption-constants digest disagrees with
/// this build's tables; scoring such predictions would be meaningless.
struct DigestMismatchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CleanScore {
  double miou = 0.0;
  double mean_f1 = 0.0;
};

/// Everything the evaluation emits: per-cell grids for both metrics, the
/// corruption-averaged summaries, per-family means, and the optional clean
/// column.
struct Report {
  MetricGrid miou_grid;
  MetricGrid f1_grid;
  double miou_c = 0.0;
  double f1_c = 0.0;
  std::array<double, 4> family_miou{};  // indexed by CorruptionFamily
  std::array<double, 4> family_f1{};
  std::optional<CleanScore> clean;
  std::vector<std::string> notes;  // e.g. absent-class flags

  std::string to_csv() const;
  std::string to_json() const;
  std::string to_table() const;  // aligned clean | 16 corruptions | mIoU_c
};

/// Score an on-disk prediction tree laid out like the benchmark
/// (pred_dir/<corruption>/<severity>/<id>.png). Missing predictions throw
/// naming the (image, corruption, severity) triple; a digest mismatch
/// throws DigestMismatchError before any file is read. clean_pred_dir, if
/// given, holds <id>.png predictions for the uncorrupted images.
Report evaluate_benchmark(const std::filesystem::path& pred_dir, const Manifest& manifest,
                          std::optional<std::filesystem::path> clean_pred_dir = std::nullopt,
                          int threads = 0);

/// Same scoring path, with predictions produced in memory by `predict`
/// on images loaded from the manifest's tree.
Report evaluate_with_predictor(const Manifest& manifest,
                               const std::function<LabelMap(const Image&)>& predict,
                               bool include_clean = true, int threads = 0);

}  // namespace heteraug
