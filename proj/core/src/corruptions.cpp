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

#include "heteraug/corruptions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "heteraug/filters.hpp"
#include "heteraug/image_io.hpp"

namespace heteraug {

namespace {

constexpr std::array<std::string_view, kNumCorruptions> kNames = {
    "defocus_blur",   "gaussian_blur", "motion_blur", "glass_blur",
    "brightness",     "contrast",      "saturate",    "jpeg",
    "gaussian_noise", "impulse_noise", "shot_noise",  "speckle_noise",
    "fog",            "frost",         "snow",        "spatter",
};

// ---- frozen severity tables (index = level - 1) ----
// The benchmark protocol delegates parameterization to the implementation;
// these constants are pinned by tests/golden digest and must not drift.

constexpr double kDefocusRadius[5] = {3, 4, 6, 8, 10};
constexpr double kGaussianBlurSigma[5] = {1.0, 2.0, 3.0, 4.0, 6.0};
constexpr double kMotionLength[5] = {7, 11, 15, 19, 25};
constexpr double kGlassSigma[5] = {0.7, 0.9, 1.1, 1.3, 1.5};
constexpr double kGlassMaxDelta[5] = {1, 1, 2, 3, 4};
constexpr double kGlassIterations[5] = {1, 2, 2, 2, 3};
constexpr double kBrightnessOffset[5] = {0.1, 0.2, 0.3, 0.4, 0.5};
constexpr double kContrastScale[5] = {0.4, 0.3, 0.2, 0.1, 0.05};
constexpr double kSaturateScale[5] = {1.7, 2.6, 4.0, 6.5, 10.0};
constexpr double kSaturateOffset[5] = {0.0, 0.05, 0.10, 0.15, 0.20};
constexpr double kJpegQuality[5] = {25, 18, 15, 10, 7};
constexpr double kGaussianNoiseSigma[5] = {0.08, 0.12, 0.18, 0.26, 0.38};
constexpr double kImpulseFraction[5] = {0.03, 0.06, 0.09, 0.17, 0.27};
constexpr double kShotLambda[5] = {60, 25, 12, 5, 3};
constexpr double kSpeckleSigma[5] = {0.15, 0.20, 0.35, 0.45, 0.60};
constexpr double kFogBlend[5] = {0.15, 0.25, 0.35, 0.45, 0.55};
constexpr double kFogDecay[5] = {2.0, 2.0, 1.7, 1.5, 1.4};
constexpr double kFrostWeight[5] = {0.22, 0.32, 0.42, 0.52, 0.62};
constexpr double kFrostThreshold[5] = {0.75, 0.70, 0.65, 0.60, 0.55};
constexpr double kSnowThreshold[5] = {2.4, 2.2, 2.0, 1.8, 1.6};
constexpr double kSnowScale[5] = {0.8, 0.9, 1.0, 1.1, 1.2};
constexpr double kSnowStreak[5] = {6, 8, 10, 12, 14};
constexpr double kSnowWhiten[5] = {0.10, 0.15, 0.20, 0.25, 0.30};
constexpr double kSpatterThreshold[5] = {0.88, 0.84, 0.80, 0.76, 0.72};
constexpr double kSpatterOpacity[5] = {0.50, 0.58, 0.66, 0.74, 0.82};
constexpr double kSpatterBlurSigma[5] = {1.4, 1.3, 1.2, 1.1, 1.0};

uint64_t fnv1a_append(uint64_t h, std::string_view s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

float clampf(float v) { return std::clamp(v, 0.0f, 1.0f); }

// ---- color space ----

void rgb_to_hsv(float r, float g, float b, float& h, float& s, float& v) {
  const float mx = std::max({r, g, b});
  const float mn = std::min({r, g, b});
  const float d = mx - mn;
  v = mx;
  s = mx <= 0.0f ? 0.0f : d / mx;
  if (d <= 0.0f) {
    h = 0.0f;
  } else if (mx == r) {
    h = (g - b) / d;
    if (h < 0.0f) h += 6.0f;
  } else if (mx == g) {
    h = (b - r) / d + 2.0f;
  } else {
    h = (r - g) / d + 4.0f;
  }
  h /= 6.0f;  // [0, 1)
}

void hsv_to_rgb(float h, float s, float v, float& r, float& g, float& b) {
  if (s <= 0.0f) {
    r = g = b = v;
    return;
  }
  const float hh = (h - std::floor(h)) * 6.0f;
  const int i = std::min(5, int(hh));
  const float f = hh - float(i);
  const float p = v * (1.0f - s);
  const float q = v * (1.0f - s * f);
  const float t = v * (1.0f - s * (1.0f - f));
  switch (i) {
    case 0: r = v, g = t, b = p; break;
    case 1: r = q, g = v, b = p; break;
    case 2: r = p, g = v, b = t; break;
    case 3: r = p, g = q, b = v; break;
    case 4: r = t, g = p, b = v; break;
    default: r = v, g = p, b = q; break;
  }
}

// ---- individual corruptions ----

Image defocus_blur(const Image& img, const ParamSet& p) {
  return convolve(img, disk_kernel(int(p.get("radius"))));
}

Image motion_blur(const Image& img, const ParamSet& p, RngStream& rng) {
  const double angle = rng.uniform(0.0, 180.0);
  return convolve(img, line_kernel(int(p.get("length")), angle));
}

Image glass_blur(const Image& img, const ParamSet& p, RngStream& rng) {
  const double sigma = p.get("sigma");
  const int max_delta = int(p.get("max_delta"));
  const int iterations = int(p.get("iterations"));

  Image out = gaussian_blur(img, sigma);
  const int span = 2 * max_delta + 1;
  for (int it = 0; it < iterations; ++it) {
    for (int y = 0; y < out.height; ++y) {
      for (int x = 0; x < out.width; ++x) {
        const int dy = int(rng.uniform_int(span)) - max_delta;
        const int dx = int(rng.uniform_int(span)) - max_delta;
        const int sy = reflect_index(y + dy, out.height);
        const int sx = reflect_index(x + dx, out.width);
        for (int c = 0; c < 3; ++c) std::swap(out.at(y, x, c), out.at(sy, sx, c));
      }
    }
  }
  return gaussian_blur(out, sigma);
}

Image brightness(const Image& img, const ParamSet& p) {
  const float b = float(p.get("offset"));
  Image out = img;
  for (float& v : out.data) v = clampf(v + b);
  return out;
}

Image contrast(const Image& img, const ParamSet& p) {
  const float c = float(p.get("scale"));
  double mean[3] = {0, 0, 0};
  for (size_t i = 0; i < img.data.size(); i += 3) {
    mean[0] += img.data[i];
    mean[1] += img.data[i + 1];
    mean[2] += img.data[i + 2];
  }
  const double n = double(img.pixel_count());
  Image out = img;
  for (size_t i = 0; i < out.data.size(); ++i) {
    const float m = float(mean[i % 3] / n);
    out.data[i] = clampf((out.data[i] - m) * c + m);
  }
  return out;
}

Image saturate(const Image& img, const ParamSet& p) {
  const float k = float(p.get("scale"));
  const float o = float(p.get("offset"));
  Image out = img;
  for (size_t i = 0; i < out.data.size(); i += 3) {
    float h, s, v;
    rgb_to_hsv(out.data[i], out.data[i + 1], out.data[i + 2], h, s, v);
    s = std::clamp(s * k + o, 0.0f, 1.0f);
    hsv_to_rgb(h, s, v, out.data[i], out.data[i + 1], out.data[i + 2]);
    out.data[i] = clampf(out.data[i]);
    out.data[i + 1] = clampf(out.data[i + 1]);
    out.data[i + 2] = clampf(out.data[i + 2]);
  }
  return out;
}

Image gaussian_noise(const Image& img, const ParamSet& p, RngStream& rng) {
  const float sigma = float(p.get("sigma"));
  Image out = img;
  for (float& v : out.data) v = clampf(v + sigma * float(rng.normal()));
  return out;
}

Image impulse_noise(const Image& img, const ParamSet& p, RngStream& rng) {
  const double fraction = p.get("fraction");
  Image out = img;
  for (size_t i = 0; i < out.data.size(); i += 3) {
    if (rng.uniform() < fraction) {
      const float v = rng.uniform() < 0.5 ? 0.0f : 1.0f;
      out.data[i] = out.data[i + 1] = out.data[i + 2] = v;
    }
  }
  return out;
}

Image shot_noise(const Image& img, const ParamSet& p, RngStream& rng) {
  const double lambda = p.get("lambda");
  Image out = img;
  for (float& v : out.data) v = clampf(float(double(rng.poisson(double(v) * lambda)) / lambda));
  return out;
}

Image speckle_noise(const Image& img, const ParamSet& p, RngStream& rng) {
  const float sigma = float(p.get("sigma"));
  Image out = img;
  for (float& v : out.data) v = clampf(v * (1.0f + sigma * float(rng.normal())));
  return out;
}

// Diamond-square haze field on a wrapped power-of-two grid, min-max
// normalized to [0, 1], cropped to h x w.
Plane plasma_fractal(int h, int w, double decay, RngStream& rng) {
  int n = 1;
  while (n < std::max(h, w)) n *= 2;
  std::vector<double> g(size_t(n) * n, 0.0);

  auto idx = [&](int y, int x) -> double& {
    y %= n;
    if (y < 0) y += n;
    x %= n;
    if (x < 0) x += n;
    return g[size_t(y) * n + x];
  };

  double amplitude = 1.0;
  for (int step = n; step >= 2; step /= 2) {
    const int half = step / 2;
    // diamond: block centers
    for (int y = 0; y < n; y += step) {
      for (int x = 0; x < n; x += step) {
        const double avg = (idx(y, x) + idx(y, x + step) + idx(y + step, x) +
                            idx(y + step, x + step)) / 4.0;
        idx(y + half, x + half) = avg + amplitude * rng.uniform(-1.0, 1.0);
      }
    }
    // square: edge midpoints
    for (int y = 0; y < n; y += step) {
      for (int x = 0; x < n; x += step) {
        const double c = idx(y + half, x + half);
        const double cu = idx(y + half - step, x + half);
        const double cl = idx(y + half, x + half - step);
        idx(y, x + half) = (idx(y, x) + idx(y, x + step) + c + cu) / 4.0 +
                           amplitude * rng.uniform(-1.0, 1.0);
        idx(y + half, x) = (idx(y, x) + idx(y + step, x) + c + cl) / 4.0 +
                           amplitude * rng.uniform(-1.0, 1.0);
      }
    }
    amplitude /= decay;
  }

  double lo = g[0], hi = g[0];
  for (double v : g) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double range = hi > lo ? hi - lo : 1.0;

  Plane out = Plane::zeros(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) out.at(y, x) = float((g[size_t(y) * n + x] - lo) / range);
  return out;
}

Image fog(const Image& img, const ParamSet& p, RngStream& rng) {
  const float t = float(p.get("blend"));
  const Plane haze = plasma_fractal(img.height, img.width, p.get("decay"), rng);
  const float vmax = *std::max_element(img.data.begin(), img.data.end());
  Image out = img;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const float fogval = std::max(vmax, haze.at(y, x));
      for (int c = 0; c < 3; ++c)
        out.at(y, x, c) = clampf(img.at(y, x, c) * (1.0f - t) + t * fogval);
    }
  }
  return out;
}

Plane normal_field(int h, int w, RngStream& rng) {
  Plane p = Plane::zeros(h, w);
  for (float& v : p.data) v = float(rng.normal());
  return p;
}

void minmax_normalize(Plane& p) {
  const auto [lo_it, hi_it] = std::minmax_element(p.data.begin(), p.data.end());
  const float lo = *lo_it;
  const float range = *hi_it > lo ? *hi_it - lo : 1.0f;
  for (float& v : p.data) v = (v - lo) / range;
}

Image frost(const Image& img, const ParamSet& p, RngStream& rng) {
  const float w = float(p.get("weight"));
  const float tau = float(p.get("threshold"));
  constexpr float kFrostColor[3] = {0.82f, 0.88f, 0.96f};

  // band-pass noise streaked along a random direction: crystal texture
  const double angle = rng.uniform(0.0, 180.0);
  Plane noise = normal_field(img.height, img.width, rng);
  Plane band = gaussian_blur(noise, 1.0);
  const Plane wide = gaussian_blur(noise, 4.0);
  for (size_t i = 0; i < band.data.size(); ++i) band.data[i] -= wide.data[i];
  Plane streaks = convolve(band, line_kernel(12, angle));
  minmax_normalize(streaks);

  Image out = img;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const float f = std::clamp((streaks.at(y, x) - tau) / (1.0f - tau), 0.0f, 1.0f);
      const float a = w * f;
      for (int c = 0; c < 3; ++c)
        out.at(y, x, c) = clampf(img.at(y, x, c) * (1.0f - a) + a * kFrostColor[c]);
    }
  }
  return out;
}

Image snow(const Image& img, const ParamSet& p, RngStream& rng) {
  const float tau = float(p.get("threshold"));
  const float scale = float(p.get("scale"));
  const int streak = int(p.get("streak"));
  const float whiten = float(p.get("whiten"));

  const double angle = rng.uniform(-135.0, -45.0);
  Plane flakes = normal_field(img.height, img.width, rng);
  for (float& v : flakes.data) v = std::max(0.0f, v - tau) * scale;
  flakes = convolve(flakes, line_kernel(streak, angle));

  Image out = img;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const float f = std::clamp(flakes.at(y, x), 0.0f, 1.0f);
      for (int c = 0; c < 3; ++c) {
        const float v = img.at(y, x, c);
        const float whitened = v * (1.0f - whiten) + whiten * (0.5f + 0.5f * v);
        out.at(y, x, c) = clampf(whitened + f);
      }
    }
  }
  return out;
}

Image spatter(const Image& img, const ParamSet& p, RngStream& rng) {
  const float tau = float(p.get("threshold"));
  const float opacity = float(p.get("opacity"));
  constexpr float kLiquidColor[3] = {0.37f, 0.47f, 0.62f};  // gray-blue water

  Plane field = normal_field(img.height, img.width, rng);
  field = gaussian_blur(field, p.get("blur_sigma"));
  minmax_normalize(field);

  Image out = img;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      // soft blob edge over a narrow transition band
      const float m = std::clamp((field.at(y, x) - tau) / 0.06f, 0.0f, 1.0f);
      const float a = opacity * m;
      for (int c = 0; c < 3; ++c)
        out.at(y, x, c) = clampf(img.at(y, x, c) * (1.0f - a) + a * kLiquidColor[c]);
    }
  }
  return out;
}

}  // namespace

const std::array<CorruptionId, kNumCorruptions>& all_corruptions() {
  static const std::array<CorruptionId, kNumCorruptions> ids = [] {
    std::array<CorruptionId, kNumCorruptions> a{};
    for (int i = 0; i < kNumCorruptions; ++i) a[i] = CorruptionId(i);
    return a;
  }();
  return ids;
}

CorruptionFamily family_of(CorruptionId id) {
  return CorruptionFamily(int(id) / 4);
}

std::string_view corruption_name(CorruptionId id) { return kNames[size_t(id)]; }

std::string_view family_name(CorruptionFamily f) {
  switch (f) {
    case CorruptionFamily::kBlur: return "blur";
    case CorruptionFamily::kDigital: return "digital";
    case CorruptionFamily::kNoise: return "noise";
    default: return "weather";
  }
}

std::optional<CorruptionId> corruption_from_name(std::string_view name) {
  for (int i = 0; i < kNumCorruptions; ++i)
    if (kNames[i] == name) return CorruptionId(i);
  return std::nullopt;
}

std::optional<CorruptionFamily> family_from_name(std::string_view name) {
  for (int f = 0; f < 4; ++f)
    if (family_name(CorruptionFamily(f)) == name) return CorruptionFamily(f);
  return std::nullopt;
}

Severity::Severity(int l) : level(l) {
  if (l < 1 || l > kNumSeverities)
    throw std::invalid_argument("Severity: level must be in [1,5]");
}

double ParamSet::get(std::string_view name) const {
  for (const auto& [k, v] : values)
    if (k == name) return v;
  throw std::invalid_argument("ParamSet: no parameter named " + std::string(name));
}

ParamSet severity_schedule(CorruptionId id, Severity s) {
  const int i = s.level - 1;
  switch (id) {
    case CorruptionId::kDefocusBlur:
      return {{{"radius", kDefocusRadius[i]}}};
    case CorruptionId::kGaussianBlur:
      return {{{"sigma", kGaussianBlurSigma[i]}}};
    case CorruptionId::kMotionBlur:
      return {{{"length", kMotionLength[i]}}};
    case CorruptionId::kGlassBlur:
      return {{{"sigma", kGlassSigma[i]},
               {"max_delta", kGlassMaxDelta[i]},
               {"iterations", kGlassIterations[i]}}};
    case CorruptionId::kBrightness:
      return {{{"offset", kBrightnessOffset[i]}}};
    case CorruptionId::kContrast:
      return {{{"scale", kContrastScale[i]}}};
    case CorruptionId::kSaturate:
      return {{{"scale", kSaturateScale[i]}, {"offset", kSaturateOffset[i]}}};
    case CorruptionId::kJpeg:
      return {{{"quality", kJpegQuality[i]}}};
    case CorruptionId::kGaussianNoise:
      return {{{"sigma", kGaussianNoiseSigma[i]}}};
    case CorruptionId::kImpulseNoise:
      return {{{"fraction", kImpulseFraction[i]}}};
    case CorruptionId::kShotNoise:
      return {{{"lambda", kShotLambda[i]}}};
    case CorruptionId::kSpeckleNoise:
      return {{{"sigma", kSpeckleSigma[i]}}};
    case CorruptionId::kFog:
      return {{{"blend", kFogBlend[i]}, {"decay", kFogDecay[i]}}};
    case CorruptionId::kFrost:
      return {{{"weight", kFrostWeight[i]}, {"threshold", kFrostThreshold[i]}}};
    case CorruptionId::kSnow:
      return {{{"threshold", kSnowThreshold[i]},
               {"scale", kSnowScale[i]},
               {"streak", kSnowStreak[i]},
               {"whiten", kSnowWhiten[i]}}};
    case CorruptionId::kSpatter:
      return {{{"threshold", kSpatterThreshold[i]},
               {"opacity", kSpatterOpacity[i]},
               {"blur_sigma", kSpatterBlurSigma[i]}}};
  }
  throw std::invalid_argument("severity_schedule: bad corruption id");
}

std::string corruption_constants_digest() {
  uint64_t h = 0xCBF29CE484222325ULL;
  char buf[64];
  for (CorruptionId id : all_corruptions()) {
    for (int level = 1; level <= kNumSeverities; ++level) {
      h = fnv1a_append(h, corruption_name(id));
      std::snprintf(buf, sizeof buf, ":%d", level);
      h = fnv1a_append(h, buf);
      for (const auto& [k, v] : severity_schedule(id, Severity(level)).values) {
        std::snprintf(buf, sizeof buf, ":%s=%.17g", k.c_str(), v);
        h = fnv1a_append(h, buf);
      }
      h = fnv1a_append(h, ";");
    }
  }
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Image apply_corruption(const Image& img, CorruptionId id, Severity s, RngStream& rng) {
  if (!img.valid()) throw std::invalid_argument("apply_corruption: invalid image");
  const ParamSet p = severity_schedule(id, s);
  switch (id) {
    case CorruptionId::kDefocusBlur: return defocus_blur(img, p);
    case CorruptionId::kGaussianBlur: return gaussian_blur(img, p.get("sigma"));
    case CorruptionId::kMotionBlur: return motion_blur(img, p, rng);
    case CorruptionId::kGlassBlur: return glass_blur(img, p, rng);
    case CorruptionId::kBrightness: return brightness(img, p);
    case CorruptionId::kContrast: return contrast(img, p);
    case CorruptionId::kSaturate: return saturate(img, p);
    case CorruptionId::kJpeg: return jpeg_roundtrip(img, int(p.get("quality")));
    case CorruptionId::kGaussianNoise: return gaussian_noise(img, p, rng);
    case CorruptionId::kImpulseNoise: return impulse_noise(img, p, rng);
    case CorruptionId::kShotNoise: return shot_noise(img, p, rng);
    case CorruptionId::kSpeckleNoise: return speckle_noise(img, p, rng);
    case CorruptionId::kFog: return fog(img, p, rng);
    case CorruptionId::kFrost: return frost(img, p, rng);
    case CorruptionId::kSnow: return snow(img, p, rng);
    case CorruptionId::kSpatter: return spatter(img, p, rng);
  }
  throw std::invalid_argument("apply_corruption: bad corruption id");
}

double psnr(const Image& a, const Image& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("psnr: dimension mismatch");
  double mse = 0.0;
  for (size_t i = 0; i < a.data.size(); ++i) {
    const double d = double(a.data[i]) - double(b.data[i]);
    mse += d * d;
  }
  mse /= double(a.data.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

}  // namespace heteraug
