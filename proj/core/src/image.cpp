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

#include "heteraug/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace heteraug {

Image Image::zeros(int height, int width) { return constant(height, width, 0.0f); }

Image Image::constant(int height, int width, float value) {
  if (height < 1 || width < 1)
    throw std::invalid_argument("Image: dimensions must be >= 1");
  Image img;
  img.height = height;
  img.width = width;
  img.data.assign(size_t(height) * width * 3, value);
  return img;
}

LabelMap LabelMap::filled(int height, int width, uint16_t id) {
  if (height < 1 || width < 1)
    throw std::invalid_argument("LabelMap: dimensions must be >= 1");
  LabelMap m;
  m.height = height;
  m.width = width;
  m.data.assign(size_t(height) * width, id);
  return m;
}

void clamp01(Image& img) {
  for (float& v : img.data) v = std::clamp(v, 0.0f, 1.0f);
}

bool in_range01(const Image& img) {
  return std::all_of(img.data.begin(), img.data.end(),
                     [](float v) { return v >= 0.0f && v <= 1.0f; });
}

float max_abs_diff(const Image& a, const Image& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("max_abs_diff: shape mismatch");
  float m = 0.0f;
  for (size_t i = 0; i < a.data.size(); ++i)
    m = std::max(m, std::fabs(a.data[i] - b.data[i]));
  return m;
}

}  // namespace heteraug
