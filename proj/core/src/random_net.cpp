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

#include "heteraug/random_net.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "heteraug/filters.hpp"

namespace heteraug {
namespace {

constexpr int kRes2Scale = 4;

// Gaussian directions rescaled so the realized RMS equals sigma exactly.
// Without the rescale, per-kernel RMS fluctuation (~1/sqrt(fan_in))
// compounds multiplicatively through the ~12-conv cascade and produces a
// heavy tail of image-destroying networks.
void fill_normal(std::vector<float>& w, RngStream& rng, double sigma) {
  double sum_sq = 0.0;
  for (float& v : w) {
    v = float(rng.normal());
    sum_sq += double(v) * v;
  }
  const double rms = std::sqrt(sum_sq / double(w.size()));
  const float scale = rms > 0.0 ? float(sigma / rms) : 0.0f;
  for (float& v : w) v *= scale;
}

// 3x3 conv, stride 1, reflect pad 1, no bias.
// weights: w[(out * in_ch + in) * 9 + (ky * 3 + kx)]
void conv3x3(const Tensor& src, const std::vector<float>& w, Tensor& dst) {
  const int h = src.height, width = src.width;
  const int in_ch = src.channels, out_ch = dst.channels;
  for (int o = 0; o < out_ch; ++o) {
    for (int y = 0; y < h; ++y) {
      const int ym = reflect_index(y - 1, h);
      const int yp = reflect_index(y + 1, h);
      const int rows[3] = {ym, y, yp};
      for (int x = 0; x < width; ++x) {
        const int xm = reflect_index(x - 1, width);
        const int xp = reflect_index(x + 1, width);
        const int cols[3] = {xm, x, xp};
        float acc = 0.0f;
        for (int i = 0; i < in_ch; ++i) {
          const float* wk = &w[(size_t(o) * in_ch + i) * 9];
          const float* plane = &src.data[size_t(i) * h * width];
          for (int ky = 0; ky < 3; ++ky) {
            const float* row = plane + size_t(rows[ky]) * width;
            acc += wk[ky * 3 + 0] * row[cols[0]];
            acc += wk[ky * 3 + 1] * row[cols[1]];
            acc += wk[ky * 3 + 2] * row[cols[2]];
          }
        }
        dst.at(y, x, o) = acc;
      }
    }
  }
}

}  // namespace

Tensor Tensor::zeros(int height, int width, int channels) {
  Tensor t;
  t.height = height;
  t.width = width;
  t.channels = channels;
  t.data.assign(size_t(height) * width * channels, 0.0f);
  return t;
}

RandomNet sample_network(RngStream& rng, const ModelAugConfig& cfg) {
  if (cfg.channels < kRes2Scale || cfg.channels % kRes2Scale != 0)
    throw std::invalid_argument("sample_network: channels must be divisible by 4");
  if (cfg.blocks < 1) throw std::invalid_argument("sample_network: blocks must be >= 1");

  const int c = cfg.channels;
  const int gc = c / kRes2Scale;
  // One strength gain per network, applied to the head only. Spreading it
  // over the whole ~12-conv cascade compounds exponentially (gain^depth)
  // and makes a large fraction of sampled nets destroy the image instead
  // of perturbing it; on the head it varies perturbation strength
  // linearly across batches.
  const double gain = rng.uniform(cfg.gain_min, cfg.gain_max);

  RandomNet net;
  net.channels = c;

  net.stem.resize(size_t(c) * 3 * 9);
  fill_normal(net.stem, rng, 1.0 / std::sqrt(3.0 * 9.0));

  net.blocks.resize(cfg.blocks);
  for (Res2BlockParams& block : net.blocks) {
    block.group_kernels.assign(kRes2Scale - 1, std::vector<float>(size_t(gc) * gc * 9));
    for (auto& k : block.group_kernels) fill_normal(k, rng, 1.0 / std::sqrt(double(gc) * 9.0));
    block.fuse.resize(size_t(c) * c);
    fill_normal(block.fuse, rng, 1.0 / std::sqrt(double(c)));
    block.beta = float(rng.uniform(cfg.beta_min, cfg.beta_max));
  }

  // Calibrate the head against the sampled trunk's actual response: push a
  // deterministic noise probe through stem+blocks and normalize by the
  // feature RMS. Per-network response to the relu cascade varies by an
  // order of magnitude, and without this step the strength tail destroys
  // images instead of perturbing them.
  Tensor probe = Tensor::zeros(16, 16, 3);
  for (float& v : probe.data) v = float(rng.uniform());
  Tensor features = Tensor::zeros(16, 16, c);
  conv3x3(probe, net.stem, features);
  for (const Res2BlockParams& block : net.blocks) features = res2_forward(features, block);
  double sum_sq = 0.0;
  for (float v : features.data) sum_sq += double(v) * v;
  const double feature_rms = std::max(1e-6, std::sqrt(sum_sq / double(features.data.size())));

  net.head.resize(size_t(3) * c * 9);
  fill_normal(net.head, rng,
              cfg.head_scale * gain / (feature_rms * std::sqrt(double(c) * 9.0)));
  return net;
}

Tensor res2_forward(const Tensor& x, const Res2BlockParams& block) {
  const int c = x.channels;
  if (c % kRes2Scale != 0)
    throw std::invalid_argument("res2_forward: channels must be divisible by 4");
  const int gc = c / kRes2Scale;
  if (int(block.group_kernels.size()) != kRes2Scale - 1 ||
      block.fuse.size() != size_t(c) * c)
    throw std::invalid_argument("res2_forward: kernel shapes inconsistent with channels");

  const int h = x.height, w = x.width;
  const size_t plane = size_t(h) * w;

  // hierarchical groups: y1 = x1; yj = relu(convj(xj + y_{j-1}))
  Tensor ys = Tensor::zeros(h, w, c);
  std::copy(x.data.begin(), x.data.begin() + long(plane * gc), ys.data.begin());

  Tensor gin = Tensor::zeros(h, w, gc);
  Tensor gout = Tensor::zeros(h, w, gc);
  for (int j = 1; j < kRes2Scale; ++j) {
    const float* xg = &x.data[plane * gc * j];
    const float* prev = &ys.data[plane * gc * (j - 1)];
    for (size_t i = 0; i < plane * gc; ++i) gin.data[i] = xg[i] + prev[i];
    conv3x3(gin, block.group_kernels[j - 1], gout);
    float* dst = &ys.data[plane * gc * j];
    for (size_t i = 0; i < plane * gc; ++i) dst[i] = std::max(0.0f, gout.data[i]);
  }

  // 1x1 fuse over the concatenated groups, then the beta-scaled residual
  Tensor out = x;
  for (int o = 0; o < c; ++o) {
    const float* wk = &block.fuse[size_t(o) * c];
    float* dst = &out.data[plane * o];
    for (int y = 0; y < h; ++y) {
      for (int xcol = 0; xcol < w; ++xcol) {
        const size_t p = size_t(y) * w + xcol;
        float acc = 0.0f;
        for (int i = 0; i < c; ++i) acc += wk[i] * ys.data[plane * i + p];
        dst[p] += block.beta * acc;
      }
    }
  }
  return out;
}

Image forward(const RandomNet& net, const Image& img) {
  if (!img.valid()) throw std::invalid_argument("forward: invalid image");
  const int h = img.height, w = img.width;

  Tensor input = Tensor::zeros(h, w, 3);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < 3; ++c) input.at(y, x, c) = img.at(y, x, c);

  Tensor features = Tensor::zeros(h, w, net.channels);
  conv3x3(input, net.stem, features);
  for (const Res2BlockParams& block : net.blocks) features = res2_forward(features, block);

  Tensor delta = Tensor::zeros(h, w, 3);
  conv3x3(features, net.head, delta);

  Image out = img;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < 3; ++c)
        out.at(y, x, c) = std::clamp(img.at(y, x, c) + delta.at(y, x, c), 0.0f, 1.0f);
  return out;
}

Image model_aware_augment(const Image& img, RngStream& rng, const RandomNet& net,
                          double ratio) {
  const bool apply = rng.uniform() < ratio;
  return apply ? forward(net, img) : img;
}

}  // namespace heteraug
