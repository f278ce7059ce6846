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

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "heteraug/chain_augment.hpp"
#include "heteraug/corruptions.hpp"
#include "heteraug/image_io.hpp"
#include "heteraug/metrics.hpp"
#include "heteraug/parallel.hpp"
#include "heteraug/pipeline.hpp"
#include "heteraug/random_net.hpp"
#include "heteraug/rng.hpp"
#include "heteraug/toy_seg.hpp"

namespace fs = std::filesystem;
using namespace heteraug;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;        // operational failure: rerun may help
constexpr int kExitIntegrity = 2;    // digest/config mismatch: rerun will not help

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::string valid_corruption_names() {
  std::string names;
  for (CorruptionId id : all_corruptions()) {
    if (!names.empty()) names += ", ";
    names += corruption_name(id);
  }
  return names;
}

// accepts corruption names and family names, comma separated
std::vector<CorruptionId> parse_corruptions(const std::string& arg) {
  std::vector<CorruptionId> out;
  for (const std::string& token : split_csv(arg)) {
    if (auto family = family_from_name(token)) {
      for (CorruptionId id : all_corruptions())
        if (family_of(id) == *family) out.push_back(id);
    } else if (auto id = corruption_from_name(token)) {
      out.push_back(*id);
    } else {
      throw std::runtime_error("unknown corruption '" + token +
                               "'; valid names: " + valid_corruption_names() +
                               "; families: blur, digital, noise, weather");
    }
  }
  return out;
}

std::vector<int> parse_severities(const std::string& arg) {
  std::vector<int> out;
  for (const std::string& token : split_csv(arg)) {
    const int s = std::stoi(token);
    if (s < 1 || s > kNumSeverities)
      throw std::runtime_error("severity must be in [1,5], got '" + token + "'");
    out.push_back(s);
  }
  return out;
}

void write_run_config(const fs::path& out_dir, const std::string& subcommand,
                      const ordered_json& resolved) {
  ordered_json j;
  j["tool"] = "heteraug";
  j["subcommand"] = subcommand;
  j["config"] = resolved;
  fs::create_directories(out_dir);
  std::ofstream out(out_dir / "run_config.json");
  out << j.dump(2) << "\n";
}

// ---- corrupt ----

struct CorruptArgs {
  std::string data;
  std::string out;
  uint64_t seed = 0;
  std::string subset;
  std::string corruptions;
  std::string severities;
  int threads = 0;
};

int run_corrupt(const CorruptArgs& args) {
  BenchmarkOptions options;
  options.threads = args.threads;
  if (!args.corruptions.empty()) options.corruptions = parse_corruptions(args.corruptions);
  if (!args.severities.empty()) options.severities = parse_severities(args.severities);
  if (!args.subset.empty()) options.subset = split_csv(args.subset);

  const Manifest manifest = build_benchmark(args.data, args.out, args.seed, options);

  ordered_json resolved;
  resolved["data"] = args.data;
  resolved["out"] = args.out;
  resolved["seed"] = args.seed;
  resolved["subset"] = options.subset;
  {
    std::vector<std::string> names;
    for (CorruptionId id : options.corruptions.empty()
                               ? std::vector<CorruptionId>(all_corruptions().begin(),
                                                           all_corruptions().end())
                               : options.corruptions)
      names.emplace_back(corruption_name(id));
    resolved["corruptions"] = names;
  }
  resolved["severities"] =
      options.severities.empty() ? std::vector<int>{1, 2, 3, 4, 5} : options.severities;
  resolved["threads"] = resolve_thread_count(args.threads);
  resolved["constants_digest"] = manifest.constants_digest;
  write_run_config(args.out, "corrupt", resolved);

  std::cout << "wrote " << manifest.records.size() << " records ("
            << manifest.records.size() * (options.corruptions.empty()
                                              ? kNumCorruptions
                                              : options.corruptions.size()) *
                   (options.severities.empty() ? kNumSeverities
                                               : options.severities.size())
            << " corrupted images) under " << args.out << "\n";
  return kExitOk;
}

// ---- augment ----

struct AugmentArgs {
  std::string in;
  std::string out;
  uint64_t seed = 0;
  int count = 8;
  std::string mode = "full";  // full | imageaug-only | modelaug-only
  int threads = 0;
};

Image hstack_panels(const std::vector<const Image*>& panels, int gutter = 2) {
  const int h = panels[0]->height;
  int w = gutter * (int(panels.size()) - 1);
  for (const Image* p : panels) w += p->width;
  Image out = Image::constant(h, w, 1.0f);
  int x0 = 0;
  for (const Image* p : panels) {
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < p->width; ++x)
        for (int c = 0; c < 3; ++c) out.at(y, x0 + x, c) = p->at(y, x, c);
    x0 += p->width + gutter;
  }
  return out;
}

int run_augment(const AugmentArgs& args) {
  if (args.mode != "full" && args.mode != "imageaug-only" && args.mode != "modelaug-only")
    throw std::runtime_error("unknown mode '" + args.mode +
                             "'; expected full, imageaug-only or modelaug-only");

  std::vector<std::string> ids;
  for (const auto& entry : fs::directory_iterator(args.in)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension();
    if (ext == ".png" || ext == ".ppm") ids.push_back(entry.path().stem().string());
  }
  std::sort(ids.begin(), ids.end());
  if (ids.empty()) throw std::runtime_error("no images found in " + args.in);
  if (int(ids.size()) > args.count) ids.resize(size_t(args.count));

  const ModelAugConfig model_cfg;
  const ChainConfig chain_cfg;
  fs::create_directories(args.out);

  parallel_for(ids.size(), args.threads, [&](size_t i) {
    const std::string& id = ids[i];
    fs::path src = fs::path(args.in) / (id + ".png");
    if (!fs::exists(src)) src = fs::path(args.in) / (id + ".ppm");
    const Image input = load_image(src);

    RngStream rng = derive_rng(args.seed, {id});
    RngStream chain_rng = rng.child("chain");
    RngStream net_rng = rng.child("net");

    Image aug = input, mixed = input, heter = input;
    if (args.mode != "modelaug-only") {
      const ChainPolicy policy = sample_chain(chain_rng, chain_cfg);
      aug = apply_chain(input, policy);
      mixed = mix(input, aug, policy.alpha);
    }
    if (args.mode != "imageaug-only") {
      const RandomNet net = sample_network(net_rng, model_cfg);
      heter = forward(net, mixed);
    } else {
      heter = mixed;
    }
    const Image panel = hstack_panels({&input, &aug, &mixed, &heter});
    save_image(panel, fs::path(args.out) / (id + "_panel.png"));
  });

  ordered_json resolved;
  resolved["in"] = args.in;
  resolved["out"] = args.out;
  resolved["seed"] = args.seed;
  resolved["n"] = args.count;
  resolved["mode"] = args.mode;
  write_run_config(args.out, "augment", resolved);

  std::cout << "wrote " << ids.size() << " panels under " << args.out << "\n";
  return kExitOk;
}

// ---- eval ----

struct EvalArgs {
  std::string pred;
  std::string manifest;
  std::string clean_pred;
  std::string format = "table";
  std::string out;
  int threads = 0;
};

int run_eval(const EvalArgs& args) {
  fs::path manifest_path = args.manifest;
  if (fs::is_directory(manifest_path)) manifest_path /= "manifest.json";
  const Manifest manifest = load_manifest(manifest_path);

  std::optional<fs::path> clean_dir;
  if (!args.clean_pred.empty()) clean_dir = args.clean_pred;
  const Report report = evaluate_benchmark(args.pred, manifest, clean_dir, args.threads);

  std::string body;
  if (args.format == "csv") {
    body = report.to_csv();
  } else if (args.format == "json") {
    body = report.to_json();
  } else if (args.format == "table") {
    body = report.to_table();
  } else {
    throw std::runtime_error("unknown format '" + args.format +
                             "'; expected table, csv or json");
  }

  if (args.out.empty()) {
    std::cout << body;
  } else {
    fs::create_directories(fs::path(args.out).parent_path());
    std::ofstream out(args.out);
    out << body;
    std::cout << "wrote report to " << args.out << "\n";
  }
  return kExitOk;
}

// ---- toy ----

struct ToyArgs {
  std::string out;
  uint64_t seed = 7;
  bool quick = false;
  bool ablate = false;
  int train_scenes = 500;
  int val_scenes = 100;
  int epochs = 20;
  int threads = 0;
  bool explicit_sizes = false;
};

int run_toy(const ToyArgs& args_in) {
  ToyArgs args = args_in;
  if (args.quick && !args.explicit_sizes) {
    args.train_scenes = 80;
    args.val_scenes = 24;
    args.epochs = 4;
  }

  const fs::path out_dir = args.out;
  fs::create_directories(out_dir);

  SceneSpec spec;
  std::cout << "generating " << args.train_scenes << " train / " << args.val_scenes
            << " val scenes\n";
  const Dataset train_set =
      gen_dataset(spec, args.train_scenes, derive_rng(args.seed, {"train-seed"}).next_u64(),
                  "toy-train");
  const Dataset val_set =
      gen_dataset(spec, args.val_scenes, derive_rng(args.seed, {"val-seed"}).next_u64(),
                  "toy-val");
  save_dataset(val_set, out_dir / "val_data");

  std::cout << "building corruption benchmark\n";
  BenchmarkOptions bench_options;
  bench_options.threads = args.threads;
  if (fs::exists(out_dir / "benchmark")) fs::remove_all(out_dir / "benchmark");
  const Manifest benchmark =
      build_benchmark(out_dir / "val_data", out_dir / "benchmark", args.seed, bench_options);

  std::vector<AugMode> modes = {AugMode::kClean};
  if (args.ablate) {
    modes.push_back(AugMode::kImageAugOnly);
    modes.push_back(AugMode::kModelAugOnly);
  }
  modes.push_back(AugMode::kHeterAug);

  TrainOptions train_options;
  train_options.epochs = args.epochs;
  train_options.threads = args.threads;

  struct Row {
    std::string mode;
    double clean_miou;
    double miou_c;
    double f1_c;
  };
  std::vector<Row> rows;

  for (AugMode mode : modes) {
    const std::string name(aug_mode_name(mode));
    std::cout << "training mode " << name << " (" << args.epochs << " epochs)\n";
    const ToyNet net = train(mode, train_set, args.seed, train_options);
    save_checkpoint(net, out_dir / ("toynet_" + name + ".json"));

    std::cout << "evaluating mode " << name << " on the benchmark\n";
    const Report report = robustness_eval(net, benchmark, args.threads);
    {
      std::ofstream csv(out_dir / ("report_" + name + ".csv"));
      csv << report.to_csv();
      std::ofstream json(out_dir / ("report_" + name + ".json"));
      json << report.to_json();
    }
    rows.push_back({name, report.clean ? report.clean->miou : 0.0, report.miou_c,
                    report.f1_c});
  }

  // comparison table in ablation order: clean, imageaug, modelaug, heteraug
  char buf[160];
  std::ofstream cmp(out_dir / "comparison.csv");
  cmp << "mode,clean_miou,miou_c,f1_c\n";
  std::cout << "\nmode        clean_mIoU   mIoU_c   F1_c\n";
  for (const Row& row : rows) {
    std::snprintf(buf, sizeof buf, "%s,%.6f,%.6f,%.6f\n", row.mode.c_str(),
                  row.clean_miou, row.miou_c, row.f1_c);
    cmp << buf;
    std::snprintf(buf, sizeof buf, "%-10s  %9.4f  %7.4f  %6.4f\n", row.mode.c_str(),
                  row.clean_miou, row.miou_c, row.f1_c);
    std::cout << buf;
  }

  ordered_json resolved;
  resolved["out"] = args.out;
  resolved["seed"] = args.seed;
  resolved["quick"] = args.quick;
  resolved["ablate"] = args.ablate;
  resolved["train_scenes"] = args.train_scenes;
  resolved["val_scenes"] = args.val_scenes;
  resolved["epochs"] = args.epochs;
  resolved["threads"] = resolve_thread_count(args.threads);
  resolved["constants_digest"] = benchmark.constants_digest;
  write_run_config(out_dir, "toy", resolved);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"corruption-robustness toolkit for pixel-labeled segmentation data"};
  app.name("heteraug");  // keep help output independent of the invocation path
  app.require_subcommand(1);

  CorruptArgs corrupt_args;
  CLI::App* corrupt = app.add_subcommand(
      "corrupt", "Generate the 16-corruption x 5-severity benchmark for a dataset");
  corrupt->add_option("--data", corrupt_args.data, "dataset directory (images/ + labels/)")
      ->required();
  corrupt->add_option("--out", corrupt_args.out, "output benchmark directory")->required();
  corrupt->add_option("--seed", corrupt_args.seed, "master seed")->default_val(0);
  corrupt->add_option("--subset", corrupt_args.subset,
                      "comma-separated image ids to include (default: all)");
  corrupt->add_option("--corruptions", corrupt_args.corruptions,
                      "comma-separated corruption or family names (default: all 16)");
  corrupt->add_option("--severities", corrupt_args.severities,
                      "comma-separated severity levels in 1..5 (default: all)");
  corrupt->add_option("--threads", corrupt_args.threads,
                      "worker threads (default: HETERAUG_THREADS or all cores)")
      ->default_val(0);

  AugmentArgs augment_args;
  CLI::App* augment = app.add_subcommand(
      "augment", "Render augmentation stage panels (input | chain | mix | net)");
  augment->add_option("--in", augment_args.in, "directory of input images")->required();
  augment->add_option("--out", augment_args.out, "output directory for panels")->required();
  augment->add_option("--seed", augment_args.seed, "master seed")->default_val(0);
  augment->add_option("--n", augment_args.count, "number of images to panel")
      ->default_val(8);
  augment->add_option("--mode", augment_args.mode,
                      "full, imageaug-only or modelaug-only")
      ->default_val("full");
  augment->add_option("--threads", augment_args.threads,
                      "worker threads (default: HETERAUG_THREADS or all cores)")
      ->default_val(0);

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand(
      "eval", "Score a prediction tree against a benchmark manifest");
  eval->add_option("--pred", eval_args.pred,
                   "prediction directory laid out like the benchmark")
      ->required();
  eval->add_option("--manifest", eval_args.manifest,
                   "manifest.json path or benchmark directory")
      ->required();
  eval->add_option("--clean-pred", eval_args.clean_pred,
                   "directory of predictions on the clean images");
  eval->add_option("--format", eval_args.format, "table, csv or json")
      ->default_val("table");
  eval->add_option("--out", eval_args.out, "write the report here instead of stdout");
  eval->add_option("--threads", eval_args.threads,
                   "worker threads (default: HETERAUG_THREADS or all cores)")
      ->default_val(0);

  ToyArgs toy_args;
  CLI::App* toy = app.add_subcommand(
      "toy", "End-to-end demonstrator: train with and without augmentation, compare");
  toy->add_option("--out", toy_args.out, "output directory")->required();
  toy->add_option("--seed", toy_args.seed, "master seed")->default_val(7);
  toy->add_flag("--quick", toy_args.quick, "reduced sizes and epochs for a fast smoke run");
  toy->add_flag("--ablate", toy_args.ablate,
                "also train the imageaug-only and modelaug-only rows");
  CLI::Option* opt_train =
      toy->add_option("--train-scenes", toy_args.train_scenes, "training scenes")
          ->default_val(500);
  CLI::Option* opt_val =
      toy->add_option("--val-scenes", toy_args.val_scenes, "validation scenes")
          ->default_val(100);
  CLI::Option* opt_epochs =
      toy->add_option("--epochs", toy_args.epochs, "training epochs")->default_val(20);
  toy->add_option("--threads", toy_args.threads,
                  "worker threads (default: HETERAUG_THREADS or all cores)")
      ->default_val(0);

  CLI11_PARSE(app, argc, argv);

  try {
    if (corrupt->parsed()) return run_corrupt(corrupt_args);
    if (augment->parsed()) return run_augment(augment_args);
    if (eval->parsed()) return run_eval(eval_args);
    if (toy->parsed()) {
      toy_args.explicit_sizes =
          opt_train->count() > 0 || opt_val->count() > 0 || opt_epochs->count() > 0;
      return run_toy(toy_args);
    }
  } catch (const DigestMismatchError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIntegrity;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
