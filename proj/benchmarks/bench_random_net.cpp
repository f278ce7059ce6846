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

#include "heteraug/chain_augment.hpp"
#include "heteraug/random_net.hpp"
#include "heteraug/rng.hpp"

namespace {

using namespace heteraug;

Image bench_image(int side) {
  RngStream rng(42);
  Image img = Image::zeros(side, side);
  for (float& v : img.data) v = float(rng.uniform());
  return img;
}

void BM_SampleNetwork(benchmark::State& state) {
  RngStream rng(7);
  for (auto _ : state) {
    RandomNet net = sample_network(rng);
    benchmark::DoNotOptimize(net.stem.data());
  }
}

void BM_NetForward(benchmark::State& state) {
  RngStream rng(7);
  const RandomNet net = sample_network(rng);
  const Image img = bench_image(int(state.range(0)));
  for (auto _ : state) {
    Image out = forward(net, img);
    benchmark::DoNotOptimize(out.data.data());
  }
}

void BM_ImageAwareAugment(benchmark::State& state) {
  const Image img = bench_image(128);
  RngStream rng(7);
  for (auto _ : state) {
    Image out = image_aware_augment(img, rng);
    benchmark::DoNotOptimize(out.data.data());
  }
}

}  // namespace

BENCHMARK(BM_SampleNetwork);
BENCHMARK(BM_NetForward)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ImageAwareAugment)->Unit(benchmark::kMillisecond);
