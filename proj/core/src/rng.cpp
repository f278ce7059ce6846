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

#include "heteraug/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace heteraug {
namespace {

constexpr uint64_t kPhiloxM = 0xD2B74407B1CE6E93ULL;
constexpr uint64_t kPhiloxW = 0x9E3779B97F4A7C15ULL;  // golden-ratio Weyl step

constexpr uint64_t kSeedTag = 0x5EEDC0DE5EEDC0DEULL;
constexpr uint64_t kStringLabelTag = 0x53545220A5A5A5A5ULL;
constexpr uint64_t kIntLabelTag = 0x494E5420C3C3C3C3ULL;

// splitmix64 finalizer, used for key derivation only
uint64_t mix64(uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

void philox_round(uint64_t& x0, uint64_t& x1, uint64_t key) {
  const __uint128_t prod = static_cast<__uint128_t>(kPhiloxM) * x0;
  const uint64_t hi = static_cast<uint64_t>(prod >> 64);
  const uint64_t lo = static_cast<uint64_t>(prod);
  x0 = hi ^ key ^ x1;
  x1 = lo;
}

// tagged_hash already carries the string/int type tag
uint64_t derive_key(uint64_t parent_key, uint64_t tagged_hash) {
  return mix64(parent_key ^ mix64(tagged_hash));
}

}  // namespace

RngStream::RngStream(uint64_t seed) { key_ = mix64(seed ^ kSeedTag); }

RngStream RngStream::from_key(uint64_t key) {
  RngStream s(0);
  s.key_ = key;
  s.counter_ = 0;
  s.has_spare_word_ = false;
  s.has_spare_normal_ = false;
  return s;
}

RngStream RngStream::child_tagged(uint64_t tagged_hash) const {
  return from_key(derive_key(key_, tagged_hash));
}

RngStream RngStream::child(std::string_view label) const {
  return child_tagged(fnv1a64(label) ^ kStringLabelTag);
}

RngStream RngStream::child(uint64_t label) const {
  return child_tagged(label ^ kIntLabelTag);
}

uint64_t RngStream::next_u64() {
  if (has_spare_word_) {
    has_spare_word_ = false;
    return spare_word_;
  }
  uint64_t x0 = counter_++;
  uint64_t x1 = 0;
  uint64_t key = key_;
  for (int round = 0; round < 10; ++round) {
    philox_round(x0, x1, key);
    key += kPhiloxW;
  }
  spare_word_ = x1;
  has_spare_word_ = true;
  return x0;
}

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

uint64_t RngStream::uniform_int(uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_int: n must be > 0");
  const uint64_t threshold = (-n) % n;  // rejection bound for unbiased modulo
  for (;;) {
    const uint64_t r = next_u64();
    if (r >= threshold) return r % n;
  }
}

double RngStream::normal() {
  if (has_spare_normal_) {
    has_spare_normal_ = false;
    return spare_normal_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_normal_ = r * std::sin(theta);
  has_spare_normal_ = true;
  return r * std::cos(theta);
}

long RngStream::poisson(double lambda) {
  if (lambda < 0.0 || !std::isfinite(lambda))
    throw std::invalid_argument("poisson: lambda must be finite and >= 0");
  if (lambda == 0.0) return 0;
  // Knuth product method; schedules keep lambda <= ~60 so O(lambda) is fine.
  const double limit = std::exp(-lambda);
  long k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= uniform();
  } while (p > limit);
  return k - 1;
}

double RngStream::gamma(double shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("gamma: shape must be > 0");
  if (shape < 1.0) {
    const double u = 1.0 - uniform();  // (0, 1]
    return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = 1.0 - uniform();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
  }
}

double RngStream::beta(double a, double b) {
  for (;;) {
    const double ga = gamma(a);
    const double gb = gamma(b);
    if (ga + gb > 0.0) return ga / (ga + gb);
  }
}

RngLabel::RngLabel(std::string_view s) : hash(fnv1a64(s) ^ kStringLabelTag) {}
RngLabel::RngLabel(uint64_t v) : hash(v ^ kIntLabelTag) {}

RngStream derive_rng(uint64_t master_seed, std::initializer_list<RngLabel> labels) {
  RngStream s(master_seed);
  for (const RngLabel& l : labels) s = s.child_tagged(l.hash);
  return s;
}

}  // namespace heteraug
