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

#include <filesystem>
#include <utility>

#include "heteraug/image.hpp"
#include "heteraug/metrics.hpp"
#include "heteraug/pipeline.hpp"
#include "heteraug/random_net.hpp"
#include "heteraug/rng.hpp"

namespace heteraug {

/// Synthetic scene generator parameters: a textured background with 1-3
/// colored shapes; each shape type is its own class (0 background,
/// 1 circle, 2 rectangle, 3 triangle).
struct SceneSpec {
  int height = 64;
  int width = 64;
  int num_classes = 4;
  double color_jitter = 0.08;
  double texture_amplitude = 0.05;
  int min_shapes = 1;
  int max_shapes = 3;
  int min_size = 6;  // minimum radius / half-side, pixels
};

/// Render one scene back-to-front; the label map records each pixel's
/// topmost shape class.
std::pair<Image, LabelMap> gen_scene(const SceneSpec& spec, RngStream& rng);

/// `count` scenes with ids scene_0000... drawn from per-scene derived
/// streams.
Dataset gen_dataset(const SceneSpec& spec, int count, uint64_t seed,
                    const std::string& name);

/// Tiny per-pixel segmenter: conv3x3(3->hidden) + relu, conv3x3
/// (hidden->hidden) + relu, conv1x1(hidden->classes), per-pixel softmax.
/// Convolutions are zero-padded so output dims match input dims.
struct ToyNet {
  int hidden = 8;
  int num_classes = 4;
  std::vector<float> w1, b1;  // [(h*3)+..]x9, [h]
  std::vector<float> w2, b2;  // [(h*h)]x9, [h]
  std::vector<float> w3, b3;  // [classes*h], [classes]
};

ToyNet init_toy_net(RngStream& rng, int num_classes = 4, int hidden = 8);

/// Per-pixel class probabilities (rows sum to 1).
Tensor toy_forward(const ToyNet& net, const Image& img);

/// Argmax of toy_forward.
LabelMap toy_predict(const ToyNet& net, const Image& img);

/// Gradient buffers, same shapes as the ToyNet weights.
struct ToyGradients {
  std::vector<float> w1, b1, w2, b2, w3, b3;

  static ToyGradients zeros_like(const ToyNet& net);
  void add(const ToyGradients& other);
  void scale(double factor);
};

/// Mean pixel-wise cross entropy and its full analytic gradient via
/// backprop through all three layers.
double loss_and_grad(const ToyNet& net, const Image& img, const LabelMap& gt,
                     ToyGradients& grad);

/// Geometric train-time transform: horizontal flip and scale jitter about
/// the image center. The identical geometry is applied to the image
/// (bilinear) and the label map (nearest).
struct GeoParams {
  bool flip = false;
  double scale = 1.0;
};

GeoParams sample_geo(RngStream& rng);  // flip ~ Bernoulli(0.5), scale ~ U[0.75, 1.25]
Image apply_geo(const Image& img, const GeoParams& geo);
LabelMap apply_geo(const LabelMap& map, const GeoParams& geo);

struct TrainOptions {
  int epochs = 20;
  int batch_size = 8;
  double lr = 0.04;
  double momentum = 0.9;
  double lr_drop_fraction = 0.7;  // lr x0.1 after this fraction of epochs
  double grad_clip = 3.0;         // global-norm clip; <= 0 disables
  bool warmup = true;             // linear lr ramp over the first epoch
  bool geometric_aug = true;
  int hidden = 8;
  int threads = 0;
  HeterConfig heter;
};

/// SGD with momentum over TrainingStream batches in the given augmentation
/// mode. Deterministic given (mode, dataset, seed, options). Throws if the
/// loss stops being finite.
ToyNet train(AugMode mode, const Dataset& trainset, uint64_t seed,
             const TrainOptions& options = {});

/// mIoU over a clean dataset, for quick validation checks.
double clean_miou(const ToyNet& net, const Dataset& dataset);

/// Versioned JSON checkpoint (shape header + flat weight arrays).
void save_checkpoint(const ToyNet& net, const std::filesystem::path& path);
ToyNet load_checkpoint(const std::filesystem::path& path);

/// Forward + argmax over every benchmark cell plus the clean column,
/// scored through the shared evaluation path.
Report robustness_eval(const ToyNet& net, const Manifest& benchmark, int threads = 0);

}  // namespace heteraug
