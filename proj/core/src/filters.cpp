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

#include "heteraug/filters.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace heteraug {

Plane Plane::zeros(int height, int width) {
  Plane p;
  p.height = height;
  p.width = width;
  p.data.assign(size_t(height) * width, 0.0f);
  return p;
}

int reflect_index(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * n;
  int m = i % period;
  if (m < 0) m += period;
  return m < n ? m : period - 1 - m;
}

Plane convolve(const Plane& src, const std::vector<KernelTap>& taps) {
  Plane out = Plane::zeros(src.height, src.width);
  for (int y = 0; y < src.height; ++y) {
    for (int x = 0; x < src.width; ++x) {
      float acc = 0.0f;
      for (const KernelTap& t : taps) {
        const int sy = reflect_index(y + t.dy, src.height);
        const int sx = reflect_index(x + t.dx, src.width);
        acc += t.weight * src.at(sy, sx);
      }
      out.at(y, x) = acc;
    }
  }
  return out;
}

Image convolve(const Image& src, const std::vector<KernelTap>& taps) {
  Image out = Image::zeros(src.height, src.width);
  for (int y = 0; y < src.height; ++y) {
    for (int x = 0; x < src.width; ++x) {
      float acc[3] = {0.0f, 0.0f, 0.0f};
      for (const KernelTap& t : taps) {
        const int sy = reflect_index(y + t.dy, src.height);
        const int sx = reflect_index(x + t.dx, src.width);
        const float* p = &src.data[size_t(sy * src.width + sx) * 3];
        acc[0] += t.weight * p[0];
        acc[1] += t.weight * p[1];
        acc[2] += t.weight * p[2];
      }
      float* q = &out.data[size_t(y * src.width + x) * 3];
      q[0] = acc[0];
      q[1] = acc[1];
      q[2] = acc[2];
    }
  }
  return out;
}

namespace {

std::vector<float> gaussian_taps_1d(double sigma, int& radius) {
  radius = std::max(1, int(std::ceil(3.0 * sigma)));
  std::vector<float> w(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = std::exp(-0.5 * (i * i) / (sigma * sigma));
    w[i + radius] = float(v);
    sum += v;
  }
  for (float& v : w) v = float(v / sum);
  return w;
}

}  // namespace

Plane gaussian_blur(const Plane& src, double sigma) {
  if (sigma <= 0.0) return src;
  int radius = 0;
  const std::vector<float> w = gaussian_taps_1d(sigma, radius);

  Plane tmp = Plane::zeros(src.height, src.width);
  for (int y = 0; y < src.height; ++y) {
    for (int x = 0; x < src.width; ++x) {
      float acc = 0.0f;
      for (int i = -radius; i <= radius; ++i)
        acc += w[i + radius] * src.at(y, reflect_index(x + i, src.width));
      tmp.at(y, x) = acc;
    }
  }
  Plane out = Plane::zeros(src.height, src.width);
  for (int y = 0; y < src.height; ++y) {
    for (int x = 0; x < src.width; ++x) {
      float acc = 0.0f;
      for (int i = -radius; i <= radius; ++i)
        acc += w[i + radius] * tmp.at(reflect_index(y + i, src.height), x);
      out.at(y, x) = acc;
    }
  }
  return out;
}

Image gaussian_blur(const Image& src, double sigma) {
  if (sigma <= 0.0) return src;
  int radius = 0;
  const std::vector<float> w = gaussian_taps_1d(sigma, radius);

  Image tmp = Image::zeros(src.height, src.width);
  for (int y = 0; y < src.height; ++y) {
    for (int x = 0; x < src.width; ++x) {
      float acc[3] = {0, 0, 0};
      for (int i = -radius; i <= radius; ++i) {
        const float* p = &src.data[size_t(y * src.width + reflect_index(x + i, src.width)) * 3];
        acc[0] += w[i + radius] * p[0];
        acc[1] += w[i + radius] * p[1];
        acc[2] += w[i + radius] * p[2];
      }
      float* q = &tmp.data[size_t(y * src.width + x) * 3];
      q[0] = acc[0];
      q[1] = acc[1];
      q[2] = acc[2];
    }
  }
  Image out = Image::zeros(src.height, src.width);
  for (int y = 0; y < src.height; ++y) {
    for (int x = 0; x < src.width; ++x) {
      float acc[3] = {0, 0, 0};
      for (int i = -radius; i <= radius; ++i) {
        const float* p = &tmp.data[size_t(reflect_index(y + i, src.height) * src.width + x) * 3];
        acc[0] += w[i + radius] * p[0];
        acc[1] += w[i + radius] * p[1];
        acc[2] += w[i + radius] * p[2];
      }
      float* q = &out.data[size_t(y * src.width + x) * 3];
      q[0] = acc[0];
      q[1] = acc[1];
      q[2] = acc[2];
    }
  }
  return out;
}

std::vector<KernelTap> disk_kernel(int radius) {
  if (radius < 1) throw std::invalid_argument("disk_kernel: radius must be >= 1");
  std::vector<KernelTap> taps;
  for (int dy = -radius; dy <= radius; ++dy)
    for (int dx = -radius; dx <= radius; ++dx)
      if (dy * dy + dx * dx <= radius * radius) taps.push_back({dy, dx, 1.0f});
  const float w = 1.0f / float(taps.size());
  for (KernelTap& t : taps) t.weight = w;
  return taps;
}

std::vector<KernelTap> line_kernel(int length, double angle_deg) {
  if (length < 1) throw std::invalid_argument("line_kernel: length must be >= 1");
  const double theta = angle_deg * M_PI / 180.0;
  const double cx = std::cos(theta);
  const double cy = std::sin(theta);
  std::map<std::pair<int, int>, float> cells;
  const double half = (length - 1) / 2.0;
  for (int i = 0; i < length; ++i) {
    const double t = i - half;
    const int dx = int(std::lround(t * cx));
    const int dy = int(std::lround(t * cy));
    cells[{dy, dx}] += 1.0f;
  }
  std::vector<KernelTap> taps;
  float total = 0.0f;
  for (const auto& [cell, w] : cells) total += w;
  taps.reserve(cells.size());
  for (const auto& [cell, w] : cells) taps.push_back({cell.first, cell.second, w / total});
  return taps;
}

Plane extract_channel(const Image& src, int c) {
  Plane p = Plane::zeros(src.height, src.width);
  for (int y = 0; y < src.height; ++y)
    for (int x = 0; x < src.width; ++x) p.at(y, x) = src.at(y, x, c);
  return p;
}

}  // namespace heteraug
