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
#include <string_view>
#include <vector>

#include "heteraug/image.hpp"
#include "heteraug/rng.hpp"

namespace heteraug {

/// The 5 chain operations. Deliberately disjoint from the 16 benchmark
/// corruptions so train-time augmentation never rehearses the test set.
enum class OpId { kEqualize, kPosterize, kSolarize, kInvert, kSharpness };

constexpr int kNumChainOps = 5;

const std::array<OpId, kNumChainOps>& all_chain_ops();
std::string_view op_name(OpId op);

struct ChainConfig {
  enum class GateMode { kPerOp, kWholeChain };

  int k = 2;                 // ops per chain, sampled without replacement
  double beta_a = 3.0;       // mix coefficient ~ Beta(beta_a, beta_b); the
  double beta_b = 1.0;       // default biases the mix toward the original
  double ratio = 1.0;        // fraction of images that get the chain at all
  GateMode gate_mode = GateMode::kPerOp;
};

/// One sampled augmentation plan: which ops, whether each fires, and the
/// mix coefficient.
struct ChainPolicy {
  std::vector<OpId> ops;     // k distinct ops, in application order
  std::vector<bool> gates;   // one per op
  double alpha = 1.0;        // mix weight on the ORIGINAL image
};

/// Draw a policy. Each gate is Bernoulli(p) with p itself drawn uniformly
/// per op, so the marginal apply-rate is 0.5. Draw order is fixed: ops,
/// then per-op (p, coin) pairs, then alpha.
ChainPolicy sample_chain(RngStream& rng, const ChainConfig& cfg = {});

/// Apply one op at its fixed magnitude.
Image apply_op(const Image& img, OpId op);

/// Apply the gated ops in order; closed gates pass the image through.
Image apply_chain(const Image& img, const ChainPolicy& policy);

/// alpha * original + (1 - alpha) * augmented, exact (no clamp needed for
/// in-range inputs). Throws on dimension mismatch.
Image mix(const Image& original, const Image& augmented, double alpha);

/// Full image-aware stage: sample_chain -> apply_chain -> mix. When
/// cfg.ratio < 1, a leading Bernoulli draw decides whether the image is
/// augmented at all.
Image image_aware_augment(const Image& img, RngStream& rng, const ChainConfig& cfg = {});

}  // namespace heteraug
