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

#include <benchmark/benchmark.h>

#include "heteraug/corruptions.hpp"
#include "heteraug/rng.hpp"

namespace {

using namespace heteraug;

Image bench_image(int side) {
  RngStream rng(42);
  Image img = Image::zeros(side, side);
  for (float& v : img.data) v = float(rng.uniform());
  return img;
}

void BM_ApplyCorruption(benchmark::State& state) {
  const CorruptionId id = CorruptionId(state.range(0));
  const Image img = bench_image(128);
  for (auto _ : state) {
    RngStream rng = derive_rng(7, {corruption_name(id)});
    Image out = apply_corruption(img, id, Severity(3), rng);
    benchmark::DoNotOptimize(out.data.data());
  }
  state.SetLabel(std::string(corruption_name(id)));
}

void BM_SeveritySweep(benchmark::State& state) {
  const Image img = bench_image(128);
  for (auto _ : state) {
    for (int s = 1; s <= kNumSeverities; ++s) {
      RngStream rng = derive_rng(7, {"sweep", s});
      Image out = apply_corruption(img, CorruptionId::kGaussianNoise, Severity(s), rng);
      benchmark::DoNotOptimize(out.data.data());
    }
  }
}

}  // namespace

BENCHMARK(BM_ApplyCorruption)->DenseRange(0, 15)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SeveritySweep)->Unit(benchmark::kMillisecond);
