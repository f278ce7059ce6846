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
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "heteraug/image.hpp"
#include "heteraug/rng.hpp"

namespace heteraug {

/// The 16 benchmark corruptions, 4 per family.
enum class CorruptionId {
  // blur
  kDefocusBlur,
  kGaussianBlur,
  kMotionBlur,
  kGlassBlur,
  // digital
  kBrightness,
  kContrast,
  kSaturate,
  kJpeg,
  // noise
  kGaussianNoise,
  kImpulseNoise,
  kShotNoise,
  kSpeckleNoise,
  // weather
  kFog,
  kFrost,
  kSnow,
  kSpatter,
};

enum class CorruptionFamily { kBlur, kDigital, kNoise, kWeather };

constexpr int kNumCorruptions = 16;
constexpr int kNumSeverities = 5;

const std::array<CorruptionId, kNumCorruptions>& all_corruptions();

CorruptionFamily family_of(CorruptionId id);
std::string_view corruption_name(CorruptionId id);
std::string_view family_name(CorruptionFamily f);
std::optional<CorruptionId> corruption_from_name(std::string_view name);
std::optional<CorruptionFamily> family_from_name(std::string_view name);

/// Severity level in [1, 5]; higher is more degraded.
struct Severity {
  int level = 1;

  explicit Severity(int l);
};

/// Named scalar parameters for one (corruption, severity) pair, in a fixed
/// order so the table digests identically everywhere.
struct ParamSet {
  std::vector<std::pair<std::string, double>> values;

  double get(std::string_view name) const;
};

/// The frozen constants table entry for (id, s). Pure and total; the full
/// table is pinned by a golden-constants test and by the manifest digest.
ParamSet severity_schedule(CorruptionId id, Severity s);

/// FNV-1a hex digest over the entire 16 x 5 constants table. Stamped into
/// benchmark manifests so evaluation can refuse mismatched schedules.
std::string corruption_constants_digest();

/// Apply one corruption. Output has the input's dimensions and is clamped
/// to [0, 1]. Stochastic corruptions (all noise, glass blur, the motion
/// blur angle, weather layers) draw from rng; brightness, contrast,
/// saturate, JPEG, defocus and gaussian blur consume nothing.
Image apply_corruption(const Image& img, CorruptionId id, Severity s, RngStream& rng);

/// 10 * log10(1 / MSE) in dB; +infinity for identical images.
double psnr(const Image& a, const Image& b);

}  // namespace heteraug
