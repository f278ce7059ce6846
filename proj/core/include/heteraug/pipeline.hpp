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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "heteraug/chain_augment.hpp"
#include "heteraug/corruptions.hpp"
#include "heteraug/image.hpp"
#include "heteraug/random_net.hpp"
#include "heteraug/rng.hpp"

namespace heteraug {

/// Full augmentation configuration: the image-aware chain stage, the
/// model-aware net stage, and how the two compose.
struct HeterConfig {
  enum class Composition {
    kSequential,    // chain+mix, then the net with probability model.ratio
    kRandomSample,  // exactly one of {original, chain, net} per image
  };

  ChainConfig chain;
  ModelAugConfig model;
  Composition composition = Composition::kSequential;

  // random-sample branch ratios; must sum to 1
  double sample_chain_ratio = 0.50;
  double sample_net_ratio = 0.25;
  double sample_original_ratio = 0.25;
};

/// Training-time augmentation selector (ablation rows).
enum class AugMode { kClean, kImageAugOnly, kModelAugOnly, kHeterAug };

std::string_view aug_mode_name(AugMode mode);
std::optional<AugMode> aug_mode_from_name(std::string_view name);

/// Heterogeneous augmentation of one training image. `net` is the current
/// mini-batch network. Sequential mode runs image-aware then model-aware;
/// random-sample mode picks exactly one branch by the configured ratios.
Image heter_augment(const Image& img, RngStream& rng, const HeterConfig& cfg,
                    const RandomNet& net);

/// In-memory dataset: images/ and labels/ with matching basenames plus
/// class metadata.
struct Dataset {
  std::string name;
  int num_classes = 0;
  std::vector<std::string> class_names;
  std::vector<std::string> ids;  // sorted basenames, no extension
  std::vector<Image> images;
  std::vector<LabelMap> labels;

  size_t size() const { return ids.size(); }
};

/// Read a dataset directory (images/*.png, labels/*.png, optional
/// dataset.json with {name, num_classes, class_names}). Missing labels or
/// unreadable files throw with the offending path; absent dataset.json
/// infers num_classes from the labels.
Dataset load_dataset(const std::filesystem::path& dir);

/// Write images/, labels/ and dataset.json under dir.
void save_dataset(const Dataset& dataset, const std::filesystem::path& dir);

/// One benchmark record: where the clean image, label, and every generated
/// (corruption, severity) variant live, relative to the manifest directory.
/// Cells excluded by a build filter hold empty strings.
struct ManifestRecord {
  std::string id;
  std::string clean_path;
  std::string label_path;
  std::array<std::array<std::string, kNumSeverities>, kNumCorruptions> corrupted;

  const std::string& cell(CorruptionId c, int severity) const {
    return corrupted[size_t(c)][severity - 1];
  }
};

/// The benchmark's self-description: dataset metadata, generation seed,
/// the corruption-constants digest, and all file locations. A manifest
/// whose digest disagrees with this build's tables must not be scored.
struct Manifest {
  int schema_version = 1;
  std::string dataset_name;
  int num_classes = 0;
  std::vector<std::string> class_names;
  uint64_t master_seed = 0;
  std::string constants_digest;
  std::vector<ManifestRecord> records;

  std::filesystem::path root;  // manifest directory; not serialized

  bool full_grid() const;  // every record has all 16 x 5 cells
};

void save_manifest(const Manifest& manifest, const std::filesystem::path& path);
Manifest load_manifest(const std::filesystem::path& path);

struct BenchmarkOptions {
  std::vector<CorruptionId> corruptions;  // empty = all 16
  std::vector<int> severities;            // empty = 1..5
  std::vector<std::string> subset;        // image-id filter; empty = all
  int threads = 0;
};

/// Generate out_dir/<corruption>/<severity>/<id>.png for every selected
/// combination, copy clean images and labels once, and write
/// out_dir/manifest.json. Per-image randomness is keyed by
/// (seed, id, corruption, severity), so items are order-independent and
/// subsetting never changes bytes. out_dir must be empty or absent; a
/// partially written tree is removed on failure.
Manifest build_benchmark(const std::filesystem::path& dataset_dir,
                         const std::filesystem::path& out_dir, uint64_t seed,
                         const BenchmarkOptions& options = {});

/// Shuffled epochs of augmented (Image, LabelMap) batches. One RandomNet
/// is sampled per mini-batch (counted, for the re-sampling contract);
/// label maps pass through untouched since every augmentation here is
/// photometric.
class TrainingStream {
 public:
  struct Batch {
    std::vector<Image> images;
    std::vector<LabelMap> labels;
    std::vector<size_t> source_indices;
  };

  TrainingStream(const Dataset& dataset, const HeterConfig& cfg, AugMode mode,
                 uint64_t seed, int batch_size);

  /// Next mini-batch; rolls into a freshly shuffled epoch at the end.
  Batch next();

  size_t batches_per_epoch() const { return batches_per_epoch_; }
  size_t networks_sampled() const { return networks_sampled_; }
  size_t epochs_completed() const { return epoch_; }

 private:
  void shuffle_epoch();

  const Dataset* dataset_;
  HeterConfig cfg_;
  AugMode mode_;
  uint64_t seed_;
  int batch_size_;
  size_t batches_per_epoch_;
  std::vector<size_t> order_;
  size_t cursor_ = 0;
  size_t epoch_ = 0;
  uint64_t batch_counter_ = 0;
  size_t networks_sampled_ = 0;
};

}  // namespace heteraug
