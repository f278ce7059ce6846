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

#include "heteraug/chain_augment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "heteraug/filters.hpp"

namespace heteraug {
namespace {

constexpr float kSolarizeThreshold = 128.0f / 255.0f;
constexpr float kSharpnessFactor = 1.5f;

Image equalize(const Image& img) {
  Image out = img;
  const size_t total = img.pixel_count();
  for (int c = 0; c < 3; ++c) {
    uint32_t hist[256] = {0};
    for (size_t i = c; i < img.data.size(); i += 3)
      ++hist[int(std::lround(img.data[i] * 255.0f))];

    // cumulative mapping; constant channels stay put
    uint32_t cdf[256];
    uint32_t running = 0;
    uint32_t cdf_min = 0;
    bool found_min = false;
    for (int b = 0; b < 256; ++b) {
      running += hist[b];
      cdf[b] = running;
      if (!found_min && hist[b] > 0) {
        cdf_min = running;
        found_min = true;
      }
    }
    if (cdf_min == total) continue;

    float lut[256];
    const float denom = float(total - cdf_min);
    for (int b = 0; b < 256; ++b) {
      const float mapped = std::round(255.0f * float(cdf[b] - cdf_min) / denom);
      lut[b] = std::clamp(mapped, 0.0f, 255.0f) / 255.0f;
    }
    for (size_t i = c; i < out.data.size(); i += 3)
      out.data[i] = lut[int(std::lround(img.data[i] * 255.0f))];
  }
  return out;
}

// Posterize and invert quantize through the 256-level lattice, mirroring
// their byte-domain origins; the integer round trip is what makes
// posterize exactly idempotent and invert an exact involution.
Image posterize(const Image& img) {
  Image out = img;
  for (float& v : out.data) {
    const long q = std::lround(v * 255.0f);
    v = float((q / 16) * 16) / 255.0f;
  }
  return out;
}

Image solarize(const Image& img) {
  Image out = img;
  for (float& v : out.data) v = v < kSolarizeThreshold ? v : 1.0f - v;
  return out;
}

Image invert(const Image& img) {
  Image out = img;
  for (float& v : out.data) v = float(255 - std::lround(v * 255.0f)) / 255.0f;
  return out;
}

Image sharpness(const Image& img) {
  static const std::vector<KernelTap> kSmooth = [] {
    std::vector<KernelTap> taps;
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx)
        taps.push_back({dy, dx, (dy == 0 && dx == 0 ? 5.0f : 1.0f) / 13.0f});
    return taps;
  }();
  const Image smooth = convolve(img, kSmooth);
  Image out = img;
  for (size_t i = 0; i < out.data.size(); ++i) {
    const float v = img.data[i] + kSharpnessFactor * (img.data[i] - smooth.data[i]);
    out.data[i] = std::clamp(v, 0.0f, 1.0f);
  }
  return out;
}

}  // namespace

const std::array<OpId, kNumChainOps>& all_chain_ops() {
  static const std::array<OpId, kNumChainOps> ops = {
      OpId::kEqualize, OpId::kPosterize, OpId::kSolarize, OpId::kInvert, OpId::kSharpness};
  return ops;
}

std::string_view op_name(OpId op) {
  switch (op) {
    case OpId::kEqualize: return "equalize";
    case OpId::kPosterize: return "posterize";
    case OpId::kSolarize: return "solarize";
    case OpId::kInvert: return "invert";
    default: return "sharpness";
  }
}

ChainPolicy sample_chain(RngStream& rng, const ChainConfig& cfg) {
  if (cfg.k < 1 || cfg.k > kNumChainOps)
    throw std::invalid_argument("sample_chain: k must be in [1,5]");

  ChainPolicy policy;
  std::vector<OpId> pool(all_chain_ops().begin(), all_chain_ops().end());
  for (int i = 0; i < cfg.k; ++i) {
    const size_t j = rng.uniform_int(pool.size());
    policy.ops.push_back(pool[j]);
    pool.erase(pool.begin() + long(j));
  }

  policy.gates.resize(policy.ops.size());
  if (cfg.gate_mode == ChainConfig::GateMode::kWholeChain) {
    const double p = rng.uniform();
    const bool open = rng.uniform() < p;
    std::fill(policy.gates.begin(), policy.gates.end(), open);
  } else {
    for (size_t i = 0; i < policy.gates.size(); ++i) {
      const double p = rng.uniform();
      policy.gates[i] = rng.uniform() < p;
    }
  }

  policy.alpha = rng.beta(cfg.beta_a, cfg.beta_b);
  return policy;
}

Image apply_op(const Image& img, OpId op) {
  switch (op) {
    case OpId::kEqualize: return equalize(img);
    case OpId::kPosterize: return posterize(img);
    case OpId::kSolarize: return solarize(img);
    case OpId::kInvert: return invert(img);
    case OpId::kSharpness: return sharpness(img);
  }
  throw std::invalid_argument("apply_op: bad op id");
}

Image apply_chain(const Image& img, const ChainPolicy& policy) {
  if (policy.ops.size() != policy.gates.size())
    throw std::invalid_argument("apply_chain: ops/gates size mismatch");
  Image out = img;
  for (size_t i = 0; i < policy.ops.size(); ++i)
    if (policy.gates[i]) out = apply_op(out, policy.ops[i]);
  return out;
}

Image mix(const Image& original, const Image& augmented, double alpha) {
  if (!original.same_shape(augmented))
    throw std::invalid_argument("mix: dimension mismatch");
  const float a = float(alpha);
  Image out = original;
  for (size_t i = 0; i < out.data.size(); ++i)
    out.data[i] = a * original.data[i] + (1.0f - a) * augmented.data[i];
  return out;
}

Image image_aware_augment(const Image& img, RngStream& rng, const ChainConfig& cfg) {
  if (cfg.ratio < 1.0 && rng.uniform() >= cfg.ratio) return img;
  const ChainPolicy policy = sample_chain(rng, cfg);
  const Image augmented = apply_chain(img, policy);
  return mix(img, augmented, policy.alpha);
}

}  // namespace heteraug
