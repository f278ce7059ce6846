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

#include <cstddef>
#include <cstdint>
#include <vector>

namespace heteraug {

/// 3-channel floating-point image with intensities in [0, 1].
///
/// Storage is row-major and channel-interleaved: the value of channel c at
/// pixel (y, x) lives at data[(y * width + x) * 3 + c]. Every producer in
/// the pipeline clamps into [0, 1]; quantization to 8 bits happens only at
/// file boundaries (image_io).
struct Image {
  int height = 0;
  int width = 0;
  std::vector<float> data;

  static constexpr int kChannels = 3;

  static Image zeros(int height, int width);
  static Image constant(int height, int width, float value);

  float& at(int y, int x, int c) { return data[size_t(y * width + x) * 3 + c]; }
  float at(int y, int x, int c) const { return data[size_t(y * width + x) * 3 + c]; }

  size_t pixel_count() const { return size_t(height) * size_t(width); }
  bool same_shape(const Image& other) const {
    return height == other.height && width == other.width;
  }
  bool valid() const {
    return height >= 1 && width >= 1 && data.size() == pixel_count() * 3;
  }
};

/// Per-pixel class ids paired with an Image of the same dimensions.
/// Ground truth and predictions share this type.
struct LabelMap {
  int height = 0;
  int width = 0;
  std::vector<uint16_t> data;

  static LabelMap filled(int height, int width, uint16_t id);

  uint16_t& at(int y, int x) { return data[size_t(y) * width + x]; }
  uint16_t at(int y, int x) const { return data[size_t(y) * width + x]; }

  size_t pixel_count() const { return size_t(height) * size_t(width); }
  bool same_shape(const LabelMap& other) const {
    return height == other.height && width == other.width;
  }
};

/// Clamp every value into [0, 1] in place.
void clamp01(Image& img);

/// True if all values already lie in [0, 1].
bool in_range01(const Image& img);

/// Max absolute difference over all values; images must share dimensions.
float max_abs_diff(const Image& a, const Image& b);

}  // namespace heteraug
