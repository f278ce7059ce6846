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

#include <vector>

#include "heteraug/image.hpp"
#include "heteraug/rng.hpp"

namespace heteraug {

/// Planar H x W x C feature map: data[(c * height + y) * width + x].
struct Tensor {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<float> data;

  static Tensor zeros(int height, int width, int channels);

  float& at(int y, int x, int c) {
    return data[(size_t(c) * height + y) * width + x];
  }
  float at(int y, int x, int c) const {
    return data[(size_t(c) * height + y) * width + x];
  }
};

struct ModelAugConfig {
  int channels = 16;        // must be divisible by 4 (res2 scale)
  int blocks = 4;
  double beta_min = 0.375;  // per-block residual control scalar range
  double beta_max = 0.75;
  double ratio = 0.25;      // probability an image goes through the net
  double gain_min = 0.75;   // per-network init gain range
  double gain_max = 1.25;
  // target residual strength: the head is normalized against the sampled
  // trunk's probe response, so the per-pixel delta RMS lands near
  // head_scale * gain. Calibrated: 0.03 keeps a tiny downstream model
  // trainable at the default apply ratio while still perturbing visibly.
  double head_scale = 0.03;
};

/// One res2-style block: channels split into 4 groups processed
/// hierarchically (group j's conv sees group j's input plus group j-1's
/// output), fused by a 1x1 conv, added back as x + beta * F(x).
struct Res2BlockParams {
  // group_kernels[j], j = 0..2, drive groups 2..4; group 1 passes through.
  // Layout per kernel: w[(out * group_ch + in) * 9 + (ky * 3 + kx)].
  std::vector<std::vector<float>> group_kernels;
  std::vector<float> fuse;  // 1x1, w[out * C + in]
  float beta = 0.0f;
};

/// Randomly weighted image-to-image perturbation net:
/// 3 -> C stem conv, 4 res2 blocks, C -> 3 head conv, plus a global skip
/// so the family structurally contains the identity. All convs are 3x3
/// stride 1 with reflected padding (head aside, which is also 3x3); no
/// bias terms anywhere. Weights are never trained.
struct RandomNet {
  int channels = 0;
  std::vector<float> stem;  // w[(out * 3 + in) * 9 + k]
  std::vector<Res2BlockParams> blocks;
  std::vector<float> head;  // w[(out * C + in) * 9 + k]
};

/// Sample fresh weights: conv entries ~ N(0, (gain / sqrt(fan_in))^2) with
/// one gain ~ U[gain_min, gain_max] per network, beta_i ~ U[beta_min,
/// beta_max] per block. Draw order is fixed (gain, stem, blocks in order
/// with kernels then beta, head). Throws if channels % 4 != 0.
RandomNet sample_network(RngStream& rng, const ModelAugConfig& cfg = {});

/// One block: returns x + beta * fuse(hierarchical groups). Throws on
/// channel mismatch.
Tensor res2_forward(const Tensor& x, const Res2BlockParams& block);

/// Whole net: clamp01(img + head(blocks(stem(img)))). Output dimensions
/// equal input dimensions.
Image forward(const RandomNet& net, const Image& img);

/// With probability `ratio` return forward(net, img), else the input
/// unchanged. The Bernoulli draw always consumes exactly one uniform.
Image model_aware_augment(const Image& img, RngStream& rng, const RandomNet& net,
                          double ratio = 0.25);

}  // namespace heteraug
