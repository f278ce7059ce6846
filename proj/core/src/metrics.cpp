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

#include "heteraug/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "heteraug/image_io.hpp"
#include "heteraug/parallel.hpp"

namespace heteraug {
namespace {

std::string format_score(double v, int precision = 6) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

}  // namespace

ConfusionMatrix::ConfusionMatrix(int num_classes_) : num_classes(num_classes_) {
  if (num_classes < 1)
    throw std::invalid_argument("ConfusionMatrix: num_classes must be >= 1");
  counts.assign(size_t(num_classes) * num_classes, 0);
}

uint64_t ConfusionMatrix::total() const {
  uint64_t t = 0;
  for (uint64_t v : counts) t += v;
  return t;
}

void ConfusionMatrix::merge(const ConfusionMatrix& other) {
  if (other.num_classes != num_classes)
    throw std::invalid_argument("ConfusionMatrix::merge: class count mismatch");
  for (size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
}

void accumulate(ConfusionMatrix& cm, const LabelMap& pred, const LabelMap& gt,
                std::optional<int> ignore_id) {
  if (!pred.same_shape(gt))
    throw std::invalid_argument("accumulate: pred/gt dimension mismatch");
  for (size_t i = 0; i < gt.data.size(); ++i) {
    const int g = gt.data[i];
    if (ignore_id && g == *ignore_id) continue;
    const int p = pred.data[i];
    if (g >= cm.num_classes || p >= cm.num_classes)
      throw std::out_of_range("accumulate: class id out of range");
    ++cm.at(g, p);
  }
}

PerClassStats per_class_stats(const ConfusionMatrix& cm) {
  const int k = cm.num_classes;
  PerClassStats stats;
  stats.iou.assign(k, std::nan(""));
  stats.f1.assign(k, 0.0);
  stats.absent.assign(k, false);

  for (int c = 0; c < k; ++c) {
    uint64_t tp = cm.at(c, c), fp = 0, fn = 0;
    for (int o = 0; o < k; ++o) {
      if (o == c) continue;
      fp += cm.at(o, c);
      fn += cm.at(c, o);
    }
    const uint64_t uni = tp + fp + fn;
    if (uni > 0) stats.iou[c] = double(tp) / double(uni);
    stats.absent[c] = uni == 0;

    const double precision = tp + fp > 0 ? double(tp) / double(tp + fp) : 0.0;
    const double recall = tp + fn > 0 ? double(tp) / double(tp + fn) : 0.0;
    stats.f1[c] = precision + recall > 0.0
                      ? 2.0 * precision * recall / (precision + recall)
                      : 0.0;
  }
  return stats;
}

double miou(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw std::invalid_argument("miou: empty confusion matrix");
  const PerClassStats stats = per_class_stats(cm);
  double sum = 0.0;
  int included = 0;
  for (double v : stats.iou) {
    if (!std::isnan(v)) {
      sum += v;
      ++included;
    }
  }
  return sum / included;  // included >= 1 since total() > 0
}

double mean_f1(const ConfusionMatrix& cm, bool include_background) {
  if (cm.total() == 0) throw std::invalid_argument("mean_f1: empty confusion matrix");
  const PerClassStats stats = per_class_stats(cm);
  const int start = include_background ? 0 : 1;
  if (start >= cm.num_classes)
    throw std::invalid_argument("mean_f1: no classes left after excluding background");
  double sum = 0.0;
  for (int c = start; c < cm.num_classes; ++c) sum += stats.f1[c];
  return sum / (cm.num_classes - start);
}

void MetricGrid::set(CorruptionId c, int severity, double score) {
  scores[size_t(c)][severity - 1] = score;
  populated[size_t(c)][severity - 1] = true;
}

double MetricGrid::get(CorruptionId c, int severity) const {
  if (!populated[size_t(c)][severity - 1])
    throw std::logic_error("MetricGrid: unpopulated cell");
  return scores[size_t(c)][severity - 1];
}

bool MetricGrid::full() const {
  for (const auto& row : populated)
    for (bool p : row)
      if (!p) return false;
  return true;
}

double aggregate_c(const MetricGrid& grid) {
  double outer = 0.0;
  for (int c = 0; c < kNumCorruptions; ++c) {
    double inner = 0.0;
    for (int s = 1; s <= kNumSeverities; ++s)
      inner += grid.get(CorruptionId(c), s);
    outer += inner / kNumSeverities;
  }
  return outer / kNumCorruptions;
}

namespace {

double corruption_mean(const MetricGrid& grid, CorruptionId c) {
  double sum = 0.0;
  for (int s = 1; s <= kNumSeverities; ++s) sum += grid.get(c, s);
  return sum / kNumSeverities;
}

// cells laid out flat as [corruption * kNumSeverities + (severity - 1)]
Report finalize_report(const std::vector<ConfusionMatrix>& cells,
                       std::optional<ConfusionMatrix> clean_cm) {
  Report report;
  std::vector<std::string> absent_flagged;
  for (int c = 0; c < kNumCorruptions; ++c) {
    for (int s = 1; s <= kNumSeverities; ++s) {
      const ConfusionMatrix& cm = cells[size_t(c) * kNumSeverities + (s - 1)];
      report.miou_grid.set(CorruptionId(c), s, miou(cm));
      report.f1_grid.set(CorruptionId(c), s, mean_f1(cm));
      const PerClassStats stats = per_class_stats(cm);
      for (int k = 0; k < cm.num_classes; ++k) {
        if (stats.absent[k]) {
          char buf[128];
          std::snprintf(buf, sizeof buf, "class %d absent in both pred and gt at (%s, %d)",
                        k, std::string(corruption_name(CorruptionId(c))).c_str(), s);
          absent_flagged.push_back(buf);
        }
      }
    }
  }
  report.miou_c = aggregate_c(report.miou_grid);
  report.f1_c = aggregate_c(report.f1_grid);
  for (int f = 0; f < 4; ++f) {
    double m = 0.0, f1 = 0.0;
    for (int c = 4 * f; c < 4 * (f + 1); ++c) {
      m += corruption_mean(report.miou_grid, CorruptionId(c));
      f1 += corruption_mean(report.f1_grid, CorruptionId(c));
    }
    report.family_miou[f] = m / 4.0;
    report.family_f1[f] = f1 / 4.0;
  }
  if (clean_cm) {
    report.clean = CleanScore{miou(*clean_cm), mean_f1(*clean_cm)};
  }
  // cap the note spam on tiny fixtures
  const size_t max_notes = 20;
  for (size_t i = 0; i < absent_flagged.size() && i < max_notes; ++i)
    report.notes.push_back(absent_flagged[i]);
  if (absent_flagged.size() > max_notes)
    report.notes.push_back("... " + std::to_string(absent_flagged.size() - max_notes) +
                           " more absent-class flags");
  return report;
}

void check_digest(const Manifest& manifest) {
  const std::string expected = corruption_constants_digest();
  if (manifest.constants_digest != expected)
    throw DigestMismatchError("manifest corruption-constants digest " +
                              manifest.constants_digest + " does not match this build (" +
                              expected + "); refusing to score");
}

}  // namespace

Report evaluate_benchmark(const std::filesystem::path& pred_dir, const Manifest& manifest,
                          std::optional<std::filesystem::path> clean_pred_dir,
                          int threads) {
  check_digest(manifest);
  if (!manifest.full_grid())
    throw std::invalid_argument("evaluate_benchmark: manifest does not cover the full 16x5 grid");
  if (manifest.records.empty())
    throw std::invalid_argument("evaluate_benchmark: manifest has no records");

  const int k = manifest.num_classes;
  std::vector<ConfusionMatrix> cells(kNumCorruptions * kNumSeverities, ConfusionMatrix(k));

  // ground truths load once
  std::vector<LabelMap> gts(manifest.records.size());
  for (size_t i = 0; i < manifest.records.size(); ++i)
    gts[i] = load_label(manifest.root / manifest.records[i].label_path);

  parallel_for(cells.size(), threads, [&](size_t cell) {
    const int c = int(cell) / kNumSeverities;
    const int s = int(cell) % kNumSeverities + 1;
    ConfusionMatrix& cm = cells[cell];
    for (size_t i = 0; i < manifest.records.size(); ++i) {
      const ManifestRecord& rec = manifest.records[i];
      const std::filesystem::path pred_path =
          pred_dir / std::string(corruption_name(CorruptionId(c))) / std::to_string(s) /
          (rec.id + ".png");
      if (!std::filesystem::exists(pred_path))
        throw std::runtime_error("missing prediction for (" + rec.id + ", " +
                                 std::string(corruption_name(CorruptionId(c))) + ", " +
                                 std::to_string(s) + "): " + pred_path.string());
      accumulate(cm, load_label(pred_path), gts[i]);
    }
  });

  std::optional<ConfusionMatrix> clean_cm;
  if (clean_pred_dir) {
    clean_cm.emplace(k);
    for (size_t i = 0; i < manifest.records.size(); ++i) {
      const std::filesystem::path pred_path = *clean_pred_dir / (manifest.records[i].id + ".png");
      if (!std::filesystem::exists(pred_path))
        throw std::runtime_error("missing clean prediction for " + manifest.records[i].id +
                                 ": " + pred_path.string());
      accumulate(*clean_cm, load_label(pred_path), gts[i]);
    }
  }
  return finalize_report(cells, std::move(clean_cm));
}

Report evaluate_with_predictor(const Manifest& manifest,
                               const std::function<LabelMap(const Image&)>& predict,
                               bool include_clean, int threads) {
  check_digest(manifest);
  if (!manifest.full_grid())
    throw std::invalid_argument("evaluate_with_predictor: manifest does not cover the full grid");
  if (manifest.records.empty())
    throw std::invalid_argument("evaluate_with_predictor: manifest has no records");

  const int k = manifest.num_classes;
  std::vector<LabelMap> gts(manifest.records.size());
  for (size_t i = 0; i < manifest.records.size(); ++i)
    gts[i] = load_label(manifest.root / manifest.records[i].label_path);

  std::vector<ConfusionMatrix> cells(kNumCorruptions * kNumSeverities, ConfusionMatrix(k));
  parallel_for(cells.size(), threads, [&](size_t cell) {
    const int c = int(cell) / kNumSeverities;
    const int s = int(cell) % kNumSeverities + 1;
    ConfusionMatrix& cm = cells[cell];
    for (size_t i = 0; i < manifest.records.size(); ++i) {
      const Image img =
          load_image(manifest.root / manifest.records[i].cell(CorruptionId(c), s));
      accumulate(cm, predict(img), gts[i]);
    }
  });

  std::optional<ConfusionMatrix> clean_cm;
  if (include_clean) {
    clean_cm.emplace(k);
    for (size_t i = 0; i < manifest.records.size(); ++i) {
      const Image img = load_image(manifest.root / manifest.records[i].clean_path);
      accumulate(*clean_cm, predict(img), gts[i]);
    }
  }
  return finalize_report(cells, std::move(clean_cm));
}

std::string Report::to_csv() const {
  std::ostringstream out;
  out << "corruption,severity,miou,mean_f1\n";
  if (clean) {
    out << "clean,," << format_score(clean->miou) << "," << format_score(clean->mean_f1)
        << "\n";
  }
  for (int c = 0; c < kNumCorruptions; ++c)
    for (int s = 1; s <= kNumSeverities; ++s)
      out << corruption_name(CorruptionId(c)) << "," << s << ","
          << format_score(miou_grid.get(CorruptionId(c), s)) << ","
          << format_score(f1_grid.get(CorruptionId(c), s)) << "\n";
  for (int f = 0; f < 4; ++f)
    out << "family_" << family_name(CorruptionFamily(f)) << ",,"
        << format_score(family_miou[f]) << "," << format_score(family_f1[f]) << "\n";
  out << "miou_c,," << format_score(miou_c) << ",\n";
  out << "f1_c,,," << format_score(f1_c) << "\n";
  return out.str();
}

std::string Report::to_json() const {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  if (clean) {
    j["clean"] = {{"miou", clean->miou}, {"mean_f1", clean->mean_f1}};
  }
  nlohmann::ordered_json cells = nlohmann::ordered_json::object();
  for (int c = 0; c < kNumCorruptions; ++c) {
    nlohmann::ordered_json row = nlohmann::ordered_json::object();
    for (int s = 1; s <= kNumSeverities; ++s) {
      row[std::to_string(s)] = {{"miou", miou_grid.get(CorruptionId(c), s)},
                                {"mean_f1", f1_grid.get(CorruptionId(c), s)}};
    }
    cells[std::string(corruption_name(CorruptionId(c)))] = row;
  }
  j["cells"] = cells;
  nlohmann::ordered_json families = nlohmann::ordered_json::object();
  for (int f = 0; f < 4; ++f)
    families[std::string(family_name(CorruptionFamily(f)))] = {
        {"miou", family_miou[f]}, {"mean_f1", family_f1[f]}};
  j["families"] = families;
  j["miou_c"] = miou_c;
  j["f1_c"] = f1_c;
  j["notes"] = notes;
  return j.dump(2) + "\n";
}

std::string Report::to_table() const {
  std::ostringstream out;
  out << "metric      clean  ";
  for (int c = 0; c < kNumCorruptions; ++c) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%-7.7s", std::string(corruption_name(CorruptionId(c))).c_str());
    out << buf;
  }
  out << "summary\n";

  auto row = [&](const char* label, const MetricGrid& grid, double summary,
                 std::optional<double> clean_score) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%-10s", label);
    out << buf;
    if (clean_score)
      std::snprintf(buf, sizeof buf, "%6.2f ", *clean_score * 100.0);
    else
      std::snprintf(buf, sizeof buf, "%6s ", "-");
    out << buf;
    for (int c = 0; c < kNumCorruptions; ++c) {
      std::snprintf(buf, sizeof buf, "%-7.2f", corruption_mean(grid, CorruptionId(c)) * 100.0);
      out << buf;
    }
    std::snprintf(buf, sizeof buf, "%6.2f\n", summary * 100.0);
    out << buf;
  };

  row("mIoU", miou_grid, miou_c,
      clean ? std::optional<double>(clean->miou) : std::nullopt);
  row("mF1", f1_grid, f1_c,
      clean ? std::optional<double>(clean->mean_f1) : std::nullopt);
  for (const std::string& note : notes) out << "# " << note << "\n";
  return out.str();
}

}  // namespace heteraug
