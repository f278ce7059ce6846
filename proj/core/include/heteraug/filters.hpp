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

#include <vector>

#include "heteraug/image.hpp"

namespace heteraug {

/// Single-channel float field; scratch space for kernels and weather layers.
struct Plane {
  int height = 0;
  int width = 0;
  std::vector<float> data;

  static Plane zeros(int height, int width);

  float& at(int y, int x) { return data[size_t(y) * width + x]; }
  float at(int y, int x) const { return data[size_t(y) * width + x]; }
};

/// One sparse convolution tap at offset (dy, dx).
struct KernelTap {
  int dy;
  int dx;
  float weight;
};

/// Symmetric (edge-inclusive) reflection of index i into [0, n).
/// -1 -> 0, -2 -> 1, n -> n-1, n+1 -> n-2. Well defined for n >= 1.
int reflect_index(int i, int n);

/// Convolution with a sparse tap list, reflected padding.
Plane convolve(const Plane& src, const std::vector<KernelTap>& taps);
Image convolve(const Image& src, const std::vector<KernelTap>& taps);

/// Separable Gaussian blur, reflected padding. Kernel radius ceil(3*sigma).
/// sigma <= 0 returns the input unchanged.
Plane gaussian_blur(const Plane& src, double sigma);
Image gaussian_blur(const Image& src, double sigma);

/// Normalized flat disk of the given radius (defocus kernel).
std::vector<KernelTap> disk_kernel(int radius);

/// Normalized line segment of `length` taps at `angle_deg` degrees
/// (motion-blur kernel). Collinear taps that rasterize to the same cell
/// are merged.
std::vector<KernelTap> line_kernel(int length, double angle_deg);

Plane extract_channel(const Image& src, int c);

}  // namespace heteraug
