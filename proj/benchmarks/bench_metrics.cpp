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

#include "heteraug/metrics.hpp"
#include "heteraug/rng.hpp"

namespace {

using namespace heteraug;

LabelMap bench_map(int side, int num_classes, uint64_t seed) {
  RngStream rng(seed);
  LabelMap m = LabelMap::filled(side, side, 0);
  for (auto& v : m.data) v = uint16_t(rng.uniform_int(num_classes));
  return m;
}

void BM_Accumulate(benchmark::State& state) {
  const int side = int(state.range(0));
  const LabelMap gt = bench_map(side, 20, 1);
  const LabelMap pred = bench_map(side, 20, 2);
  for (auto _ : state) {
    ConfusionMatrix cm(20);
    accumulate(cm, pred, gt);
    benchmark::DoNotOptimize(cm.counts.data());
  }
  state.SetItemsProcessed(state.iterations() * int64_t(side) * side);
}

void BM_MiouFromMatrix(benchmark::State& state) {
  const LabelMap gt = bench_map(256, 20, 1);
  const LabelMap pred = bench_map(256, 20, 2);
  ConfusionMatrix cm(20);
  accumulate(cm, pred, gt);
  for (auto _ : state) {
    benchmark::DoNotOptimize(miou(cm));
    benchmark::DoNotOptimize(mean_f1(cm));
  }
}

}  // namespace

BENCHMARK(BM_Accumulate)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_MiouFromMatrix);

BENCHMARK_MAIN();
