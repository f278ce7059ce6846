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

#include "heteraug/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "heteraug/image_io.hpp"
#include "heteraug/parallel.hpp"

namespace heteraug {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string_view aug_mode_name(AugMode mode) {
  switch (mode) {
    case AugMode::kClean: return "clean";
    case AugMode::kImageAugOnly: return "imageaug";
    case AugMode::kModelAugOnly: return "modelaug";
    default: return "heteraug";
  }
}

std::optional<AugMode> aug_mode_from_name(std::string_view name) {
  for (AugMode m : {AugMode::kClean, AugMode::kImageAugOnly, AugMode::kModelAugOnly,
                    AugMode::kHeterAug})
    if (aug_mode_name(m) == name) return m;
  return std::nullopt;
}

Image heter_augment(const Image& img, RngStream& rng, const HeterConfig& cfg,
                    const RandomNet& net) {
  if (cfg.composition == HeterConfig::Composition::kSequential) {
    const Image mixed = image_aware_augment(img, rng, cfg.chain);
    return model_aware_augment(mixed, rng, net, cfg.model.ratio);
  }

  const double sum =
      cfg.sample_chain_ratio + cfg.sample_net_ratio + cfg.sample_original_ratio;
  if (std::fabs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("heter_augment: random-sample ratios must sum to 1");
  const double u = rng.uniform();
  if (u < cfg.sample_chain_ratio) {
    ChainConfig chain = cfg.chain;
    chain.ratio = 1.0;  // the branch choice already gated this image
    return image_aware_augment(img, rng, chain);
  }
  if (u < cfg.sample_chain_ratio + cfg.sample_net_ratio) return forward(net, img);
  return img;
}

namespace {

std::vector<std::string> list_png_ids(const fs::path& dir) {
  std::vector<std::string> ids;
  if (!fs::is_directory(dir)) throw std::runtime_error("missing directory: " + dir.string());
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const fs::path p = entry.path();
    if (p.extension() == ".png" || p.extension() == ".ppm") ids.push_back(p.stem().string());
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

fs::path image_file_for(const fs::path& dir, const std::string& id) {
  const fs::path png = dir / (id + ".png");
  if (fs::exists(png)) return png;
  const fs::path ppm = dir / (id + ".ppm");
  if (fs::exists(ppm)) return ppm;
  return png;  // load will fail with the .png path in the message
}

}  // namespace

Dataset load_dataset(const fs::path& dir) {
  Dataset ds;
  ds.ids = list_png_ids(dir / "images");
  if (ds.ids.empty()) throw std::runtime_error("no images found in " + (dir / "images").string());

  int max_label = 0;
  for (const std::string& id : ds.ids) {
    ds.images.push_back(load_image(image_file_for(dir / "images", id)));
    const fs::path label_path = dir / "labels" / (id + ".png");
    if (!fs::exists(label_path))
      throw std::runtime_error("missing label for image " + id + ": " + label_path.string());
    ds.labels.push_back(load_label(label_path));
    if (!ds.labels.back().same_shape(LabelMap{ds.images.back().height,
                                              ds.images.back().width, {}}))
      throw std::runtime_error("label dimensions do not match image for " + id);
    for (uint16_t v : ds.labels.back().data) max_label = std::max(max_label, int(v));
  }

  const fs::path meta_path = dir / "dataset.json";
  if (fs::exists(meta_path)) {
    std::ifstream in(meta_path);
    ordered_json j = ordered_json::parse(in);
    ds.name = j.value("name", dir.filename().string());
    ds.num_classes = j.value("num_classes", max_label + 1);
    if (j.contains("class_names"))
      ds.class_names = j["class_names"].get<std::vector<std::string>>();
  } else {
    ds.name = dir.filename().string();
    ds.num_classes = max_label + 1;
  }
  if (max_label >= ds.num_classes)
    throw std::runtime_error("label id " + std::to_string(max_label) +
                             " exceeds declared num_classes in " + dir.string());
  return ds;
}

void save_dataset(const Dataset& dataset, const fs::path& dir) {
  fs::create_directories(dir / "images");
  fs::create_directories(dir / "labels");
  for (size_t i = 0; i < dataset.size(); ++i) {
    save_image(dataset.images[i], dir / "images" / (dataset.ids[i] + ".png"));
    save_label(dataset.labels[i], dir / "labels" / (dataset.ids[i] + ".png"));
  }
  ordered_json j;
  j["name"] = dataset.name;
  j["num_classes"] = dataset.num_classes;
  j["class_names"] = dataset.class_names;
  std::ofstream out(dir / "dataset.json");
  out << j.dump(2) << "\n";
}

bool Manifest::full_grid() const {
  for (const ManifestRecord& rec : records)
    for (const auto& row : rec.corrupted)
      for (const std::string& path : row)
        if (path.empty()) return false;
  return !records.empty();
}

void save_manifest(const Manifest& manifest, const fs::path& path) {
  ordered_json j;
  j["schema_version"] = manifest.schema_version;
  j["dataset_name"] = manifest.dataset_name;
  j["num_classes"] = manifest.num_classes;
  j["class_names"] = manifest.class_names;
  j["master_seed"] = manifest.master_seed;
  j["constants_digest"] = manifest.constants_digest;
  ordered_json records = ordered_json::array();
  for (const ManifestRecord& rec : manifest.records) {
    ordered_json r;
    r["id"] = rec.id;
    r["clean"] = rec.clean_path;
    r["label"] = rec.label_path;
    ordered_json corrupted = ordered_json::object();
    for (int c = 0; c < kNumCorruptions; ++c) {
      ordered_json cells = ordered_json::object();
      for (int s = 1; s <= kNumSeverities; ++s) {
        const std::string& p = rec.corrupted[c][s - 1];
        if (!p.empty()) cells[std::to_string(s)] = p;
      }
      if (!cells.empty()) corrupted[std::string(corruption_name(CorruptionId(c)))] = cells;
    }
    r["corrupted"] = corrupted;
    records.push_back(r);
  }
  j["records"] = records;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write manifest: " + path.string());
  out << j.dump(2) << "\n";
}

Manifest load_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest: " + path.string());
  ordered_json j = ordered_json::parse(in, nullptr, true);

  Manifest m;
  m.schema_version = j.at("schema_version").get<int>();
  m.dataset_name = j.at("dataset_name").get<std::string>();
  m.num_classes = j.at("num_classes").get<int>();
  m.class_names = j.value("class_names", std::vector<std::string>{});
  m.master_seed = j.at("master_seed").get<uint64_t>();
  m.constants_digest = j.at("constants_digest").get<std::string>();
  for (const auto& r : j.at("records")) {
    ManifestRecord rec;
    rec.id = r.at("id").get<std::string>();
    rec.clean_path = r.at("clean").get<std::string>();
    rec.label_path = r.at("label").get<std::string>();
    for (const auto& [cname, cells] : r.at("corrupted").items()) {
      const auto id = corruption_from_name(cname);
      if (!id) throw std::runtime_error("manifest names unknown corruption: " + cname);
      for (const auto& [sname, p] : cells.items()) {
        const int s = std::stoi(sname);
        if (s < 1 || s > kNumSeverities)
          throw std::runtime_error("manifest names invalid severity: " + sname);
        rec.corrupted[size_t(*id)][s - 1] = p.get<std::string>();
      }
    }
    m.records.push_back(std::move(rec));
  }
  m.root = path.parent_path();
  return m;
}

Manifest build_benchmark(const fs::path& dataset_dir, const fs::path& out_dir,
                         uint64_t seed, const BenchmarkOptions& options) {
  if (fs::exists(out_dir) && !fs::is_empty(out_dir))
    throw std::runtime_error("output directory exists and is not empty: " + out_dir.string());

  Dataset ds = load_dataset(dataset_dir);

  std::vector<size_t> selected;
  for (size_t i = 0; i < ds.size(); ++i) {
    if (options.subset.empty() ||
        std::find(options.subset.begin(), options.subset.end(), ds.ids[i]) !=
            options.subset.end())
      selected.push_back(i);
  }
  if (!options.subset.empty() && selected.size() != options.subset.size())
    throw std::runtime_error("subset names ids that are not in the dataset");
  if (selected.empty()) throw std::runtime_error("no images selected");

  std::vector<CorruptionId> corruptions(options.corruptions);
  if (corruptions.empty())
    corruptions.assign(all_corruptions().begin(), all_corruptions().end());
  std::vector<int> severities(options.severities);
  if (severities.empty()) severities = {1, 2, 3, 4, 5};
  for (int s : severities) (void)Severity(s);  // validates range

  const bool existed_before = fs::exists(out_dir);
  fs::create_directories(out_dir);

  try {
    Manifest manifest;
    manifest.dataset_name = ds.name;
    manifest.num_classes = ds.num_classes;
    manifest.class_names = ds.class_names;
    manifest.master_seed = seed;
    manifest.constants_digest = corruption_constants_digest();
    manifest.root = out_dir;

    manifest.records.resize(selected.size());
    for (size_t r = 0; r < selected.size(); ++r) {
      const size_t i = selected[r];
      ManifestRecord& rec = manifest.records[r];
      rec.id = ds.ids[i];
      rec.clean_path = "clean/" + ds.ids[i] + ".png";
      rec.label_path = "labels/" + ds.ids[i] + ".png";
      save_image(ds.images[i], out_dir / rec.clean_path);
      save_label(ds.labels[i], out_dir / rec.label_path);
    }

    struct WorkItem {
      size_t record;
      size_t dataset_index;
      CorruptionId corruption;
      int severity;
    };
    std::vector<WorkItem> items;
    items.reserve(selected.size() * corruptions.size() * severities.size());
    for (size_t r = 0; r < selected.size(); ++r)
      for (CorruptionId c : corruptions)
        for (int s : severities) items.push_back({r, selected[r], c, s});

    parallel_for(items.size(), options.threads, [&](size_t w) {
      const WorkItem& item = items[w];
      const std::string& id = ds.ids[item.dataset_index];
      const std::string name(corruption_name(item.corruption));
      RngStream rng = derive_rng(seed, {id, name, item.severity});
      const Image corrupted =
          apply_corruption(ds.images[item.dataset_index], item.corruption,
                           Severity(item.severity), rng);
      const std::string rel = name + "/" + std::to_string(item.severity) + "/" + id + ".png";
      save_image(corrupted, out_dir / rel);
      manifest.records[item.record].corrupted[size_t(item.corruption)][item.severity - 1] =
          rel;
    });

    save_manifest(manifest, out_dir / "manifest.json");
    return manifest;
  } catch (...) {
    // a half-written benchmark would silently corrupt the averages
    std::error_code ec;
    if (existed_before) {
      for (const auto& entry : fs::directory_iterator(out_dir, ec))
        fs::remove_all(entry.path(), ec);
    } else {
      fs::remove_all(out_dir, ec);
    }
    throw;
  }
}

TrainingStream::TrainingStream(const Dataset& dataset, const HeterConfig& cfg,
                               AugMode mode, uint64_t seed, int batch_size)
    : dataset_(&dataset), cfg_(cfg), mode_(mode), seed_(seed), batch_size_(batch_size) {
  if (dataset.size() == 0) throw std::invalid_argument("TrainingStream: empty dataset");
  if (batch_size < 1) throw std::invalid_argument("TrainingStream: batch_size must be >= 1");
  batches_per_epoch_ = (dataset.size() + batch_size - 1) / batch_size;
  order_.resize(dataset.size());
  shuffle_epoch();
}

void TrainingStream::shuffle_epoch() {
  for (size_t i = 0; i < order_.size(); ++i) order_[i] = i;
  RngStream rng = derive_rng(seed_, {"shuffle", uint64_t(epoch_)});
  for (size_t i = order_.size(); i > 1; --i) {
    const size_t j = rng.uniform_int(i);
    std::swap(order_[i - 1], order_[j]);
  }
  cursor_ = 0;
}

TrainingStream::Batch TrainingStream::next() {
  if (cursor_ >= order_.size()) {
    ++epoch_;
    shuffle_epoch();
  }

  const bool needs_net = mode_ == AugMode::kModelAugOnly || mode_ == AugMode::kHeterAug;
  RandomNet net;
  if (needs_net) {
    RngStream net_rng = derive_rng(seed_, {"net", batch_counter_});
    net = sample_network(net_rng, cfg_.model);
    ++networks_sampled_;
  }
  ++batch_counter_;

  Batch batch;
  const size_t end = std::min(cursor_ + size_t(batch_size_), order_.size());
  for (size_t k = cursor_; k < end; ++k) {
    const size_t idx = order_[k];
    const std::string& id = dataset_->ids[idx];
    RngStream rng = derive_rng(seed_, {"aug", uint64_t(epoch_), id});

    Image img = dataset_->images[idx];
    switch (mode_) {
      case AugMode::kClean:
        break;
      case AugMode::kImageAugOnly:
        img = image_aware_augment(img, rng, cfg_.chain);
        break;
      case AugMode::kModelAugOnly:
        img = model_aware_augment(img, rng, net, cfg_.model.ratio);
        break;
      case AugMode::kHeterAug:
        img = heter_augment(img, rng, cfg_, net);
        break;
    }
    batch.images.push_back(std::move(img));
    batch.labels.push_back(dataset_->labels[idx]);  // photometric only: labels untouched
    batch.source_indices.push_back(idx);
  }
  cursor_ = end;
  return batch;
}

}  // namespace heteraug
