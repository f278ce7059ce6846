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

#include <filesystem>

#include "heteraug/image.hpp"

namespace heteraug {

/// Read an 8-bit PNG (RGB, RGBA, gray, gray+alpha or palette) or a PPM P6
/// file into [0, 1] floats via v / 255. Grayscale is replicated to 3
/// channels; alpha is dropped. 16-bit image inputs are rejected.
/// Throws std::runtime_error naming the path on any failure.
Image load_image(const std::filesystem::path& path);

/// Write an 8-bit RGB PNG (or PPM P6 when the extension is .ppm), creating
/// parent directories as needed. Quantization is round-half-up:
/// byte = clamp(round(v * 255), 0, 255); inputs outside [0, 1] are rejected.
void save_image(const Image& img, const std::filesystem::path& path);

/// Read a single-channel 8- or 16-bit gray PNG of class ids.
LabelMap load_label(const std::filesystem::path& path);

/// Write class ids as gray PNG; 16-bit when any id exceeds 255.
void save_label(const LabelMap& map, const std::filesystem::path& path);

/// Baseline-DCT JPEG round trip at the given quality (1..100), in memory.
/// Backs the JPEG corruption; output is clamped to [0, 1].
Image jpeg_roundtrip(const Image& img, int quality);

}  // namespace heteraug
