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

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>

namespace heteraug {

struct RngLabel;

/// Deterministic counter-based random stream (Philox-2x64, 10 rounds).
///
/// The generator is fully specified here rather than delegated to
/// <random>, so identical seeds produce identical draw sequences on every
/// platform and compiler. Streams form a tree: child(label) derives an
/// independent stream keyed by (parent key, label), which lets benchmark
/// generation hand out one stream per (image, corruption, severity) work
/// item without any ordering effects between items.
class RngStream {
 public:
  RngStream() : RngStream(0) {}
  explicit RngStream(uint64_t seed);

  /// Independent stream derived from this one. Does not advance *this.
  RngStream child(std::string_view label) const;
  RngStream child(uint64_t label) const;

  uint64_t next_u64();

  /// Uniform real in [0, 1).
  double uniform();
  /// Uniform real in [lo, hi).
  double uniform(double lo, double hi);
  /// Uniform integer in [0, n). n must be > 0.
  uint64_t uniform_int(uint64_t n);
  /// Standard normal via Box-Muller (pairs are cached).
  double normal();
  /// Poisson(lambda), lambda >= 0.
  long poisson(double lambda);
  /// Gamma(shape, 1), shape > 0. Marsaglia-Tsang squeeze.
  double gamma(double shape);
  /// Beta(a, b) via two gamma draws.
  double beta(double a, double b);

 private:
  friend RngStream derive_rng(uint64_t, std::initializer_list<RngLabel>);

  static RngStream from_key(uint64_t key);
  RngStream child_tagged(uint64_t tagged_hash) const;

  uint64_t key_ = 0;
  uint64_t counter_ = 0;
  uint64_t spare_word_ = 0;
  bool has_spare_word_ = false;
  double spare_normal_ = 0.0;
  bool has_spare_normal_ = false;
};

/// Label in a stream-derivation path: either a string or an integer.
/// Strings and integers hash into disjoint key spaces.
struct RngLabel {
  RngLabel(std::string_view s);
  RngLabel(const char* s) : RngLabel(std::string_view(s)) {}
  RngLabel(const std::string& s) : RngLabel(std::string_view(s)) {}
  RngLabel(uint64_t v);
  RngLabel(int v) : RngLabel(static_cast<uint64_t>(v)) {}

  uint64_t hash;
};

/// Stream keyed by (master_seed, labels...). Equivalent to chaining
/// RngStream(master_seed).child(l0).child(l1)...
RngStream derive_rng(uint64_t master_seed, std::initializer_list<RngLabel> labels);

}  // namespace heteraug
