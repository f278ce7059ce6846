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

#include "heteraug/image_io.hpp"

#include <jpeglib.h>
#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>

namespace heteraug {
namespace {

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& what) {
  throw std::runtime_error(what + ": " + path.string());
}

uint8_t quantize(float v) {
  // round half up; callers guarantee v in [0, 1]
  const float scaled = std::floor(v * 255.0f + 0.5f);
  return uint8_t(std::clamp(scaled, 0.0f, 255.0f));
}

struct FileCloser {
  void operator()(FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

bool has_ppm_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext == ".ppm";
}

Image load_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open file");
  std::string magic;
  in >> magic;
  if (magic != "P6") fail(path, "unsupported PPM variant (want P6)");

  auto next_token = [&](int& value) {
    // PPM allows '#' comments between tokens
    for (;;) {
      in >> std::ws;
      if (in.peek() == '#') {
        std::string line;
        std::getline(in, line);
        continue;
      }
      if (!(in >> value)) fail(path, "corrupt PPM header");
      return;
    }
  };
  int w = 0, h = 0, maxval = 0;
  next_token(w);
  next_token(h);
  next_token(maxval);
  if (w < 1 || h < 1) fail(path, "corrupt PPM header");
  if (maxval != 255) fail(path, "unsupported bit depth (PPM maxval must be 255)");
  in.get();  // single whitespace after maxval

  std::vector<uint8_t> raw(size_t(w) * h * 3);
  in.read(reinterpret_cast<char*>(raw.data()), std::streamsize(raw.size()));
  if (size_t(in.gcount()) != raw.size()) fail(path, "corrupt PPM stream");

  Image img = Image::zeros(h, w);
  for (size_t i = 0; i < raw.size(); ++i) img.data[i] = float(raw[i]) / 255.0f;
  return img;
}

void save_ppm(const Image& img, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open file for writing");
  out << "P6\n" << img.width << " " << img.height << "\n255\n";
  std::vector<uint8_t> raw(img.data.size());
  for (size_t i = 0; i < img.data.size(); ++i) raw[i] = quantize(img.data[i]);
  out.write(reinterpret_cast<const char*>(raw.data()), std::streamsize(raw.size()));
  if (!out) fail(path, "write failure");
}

void ensure_parent_dir(const std::filesystem::path& path) {
  const auto parent = path.parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
}

// Decoded PNG rows after transforms; 8-bit samples unless keep_16bit.
struct PngPixels {
  int width = 0;
  int height = 0;
  int channels = 0;
  int bit_depth = 0;
  std::vector<uint8_t> bytes;  // row-major, 16-bit stored big-endian pairs
};

PngPixels read_png(const std::filesystem::path& path, bool expand_to_rgb8) {
  FilePtr fp(std::fopen(path.string().c_str(), "rb"));
  if (!fp) fail(path, "cannot open file");

  uint8_t sig[8];
  if (std::fread(sig, 1, 8, fp.get()) != 8 || png_sig_cmp(sig, 0, 8))
    fail(path, "not a PNG file");

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(path, "libpng allocation failure");
  }

  PngPixels out;
  std::vector<png_bytep> row_ptrs;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(path, "corrupt PNG stream");
  }

  png_init_io(png, fp.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const int bit_depth = png_get_bit_depth(png, info);
  const int color_type = png_get_color_type(png, info);

  if (expand_to_rgb8) {
    if (bit_depth == 16) {
      png_destroy_read_struct(&png, &info, nullptr);
      fail(path, "unsupported bit depth (16-bit image input)");
    }
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
      png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
      png_set_gray_to_rgb(png);
  } else {
    // label maps must be plain gray, 8 or 16 bit
    if (color_type != PNG_COLOR_TYPE_GRAY) {
      png_destroy_read_struct(&png, &info, nullptr);
      fail(path, "label map must be single-channel gray PNG");
    }
    if (bit_depth != 8 && bit_depth != 16) {
      png_destroy_read_struct(&png, &info, nullptr);
      fail(path, "unsupported label bit depth (want 8 or 16)");
    }
  }

  png_read_update_info(png, info);
  out.width = int(png_get_image_width(png, info));
  out.height = int(png_get_image_height(png, info));
  out.channels = int(png_get_channels(png, info));
  out.bit_depth = int(png_get_bit_depth(png, info));

  const size_t row_bytes = png_get_rowbytes(png, info);
  out.bytes.resize(row_bytes * out.height);
  row_ptrs.resize(out.height);
  for (int y = 0; y < out.height; ++y) row_ptrs[y] = out.bytes.data() + row_bytes * y;

  png_read_image(png, row_ptrs.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

void write_png(const std::filesystem::path& path, int width, int height, int channels,
               int bit_depth, const std::vector<uint8_t>& bytes) {
  ensure_parent_dir(path);
  FilePtr fp(std::fopen(path.string().c_str(), "wb"));
  if (!fp) fail(path, "cannot open file for writing");

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    fail(path, "libpng allocation failure");
  }

  std::vector<png_const_bytep> row_ptrs(height);
  const size_t row_bytes = size_t(width) * channels * (bit_depth / 8);
  for (int y = 0; y < height; ++y) row_ptrs[y] = bytes.data() + row_bytes * y;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    fail(path, "PNG write failure");
  }

  png_init_io(png, fp.get());
  png_set_compression_level(png, 6);  // fixed level keeps output bytes stable
  const int color_type = channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY;
  png_set_IHDR(png, info, png_uint_32(width), png_uint_32(height), bit_depth, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < height; ++y)
    png_write_row(png, const_cast<png_bytep>(row_ptrs[y]));
  png_write_end(png, info);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

Image load_image(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) fail(path, "missing file");
  if (has_ppm_extension(path)) return load_ppm(path);

  const PngPixels px = read_png(path, /*expand_to_rgb8=*/true);
  if (px.channels != 3 || px.bit_depth != 8)
    fail(path, "unsupported PNG layout after expansion");
  Image img = Image::zeros(px.height, px.width);
  for (size_t i = 0; i < img.data.size(); ++i) img.data[i] = float(px.bytes[i]) / 255.0f;
  return img;
}

void save_image(const Image& img, const std::filesystem::path& path) {
  if (!img.valid()) fail(path, "invalid image");
  if (!in_range01(img)) fail(path, "image values outside [0,1]");
  if (has_ppm_extension(path)) {
    ensure_parent_dir(path);
    save_ppm(img, path);
    return;
  }
  std::vector<uint8_t> bytes(img.data.size());
  for (size_t i = 0; i < img.data.size(); ++i) bytes[i] = quantize(img.data[i]);
  write_png(path, img.width, img.height, 3, 8, bytes);
}

LabelMap load_label(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) fail(path, "missing file");
  const PngPixels px = read_png(path, /*expand_to_rgb8=*/false);
  LabelMap map;
  map.height = px.height;
  map.width = px.width;
  map.data.resize(map.pixel_count());
  if (px.bit_depth == 8) {
    for (size_t i = 0; i < map.data.size(); ++i) map.data[i] = px.bytes[i];
  } else {
    for (size_t i = 0; i < map.data.size(); ++i) {
      map.data[i] = uint16_t((px.bytes[2 * i] << 8) | px.bytes[2 * i + 1]);  // PNG is big-endian
    }
  }
  return map;
}

void save_label(const LabelMap& map, const std::filesystem::path& path) {
  if (map.height < 1 || map.width < 1 || map.data.size() != map.pixel_count())
    fail(path, "invalid label map");
  const uint16_t max_id = *std::max_element(map.data.begin(), map.data.end());
  if (max_id <= 255) {
    std::vector<uint8_t> bytes(map.data.size());
    for (size_t i = 0; i < map.data.size(); ++i) bytes[i] = uint8_t(map.data[i]);
    write_png(path, map.width, map.height, 1, 8, bytes);
  } else {
    std::vector<uint8_t> bytes(map.data.size() * 2);
    for (size_t i = 0; i < map.data.size(); ++i) {
      bytes[2 * i] = uint8_t(map.data[i] >> 8);
      bytes[2 * i + 1] = uint8_t(map.data[i] & 0xFF);
    }
    write_png(path, map.width, map.height, 1, 16, bytes);
  }
}

namespace {

struct JpegErrorMgr {
  jpeg_error_mgr pub;
  jmp_buf jump;
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* mgr = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
  longjmp(mgr->jump, 1);
}

}  // namespace

Image jpeg_roundtrip(const Image& img, int quality) {
  if (quality < 1 || quality > 100)
    throw std::invalid_argument("jpeg_roundtrip: quality must be in [1,100]");

  std::vector<uint8_t> rgb(img.data.size());
  for (size_t i = 0; i < img.data.size(); ++i)
    rgb[i] = quantize(std::clamp(img.data[i], 0.0f, 1.0f));

  // encode
  JpegErrorMgr err{};
  unsigned char* buf = nullptr;
  unsigned long buf_size = 0;

  jpeg_compress_struct enc{};
  enc.err = jpeg_std_error(&err.pub);
  err.pub.error_exit = jpeg_error_exit;
  if (setjmp(err.jump)) {
    jpeg_destroy_compress(&enc);
    if (buf) free(buf);
    throw std::runtime_error("jpeg encode failure");
  }
  jpeg_create_compress(&enc);
  jpeg_mem_dest(&enc, &buf, &buf_size);
  enc.image_width = JDIMENSION(img.width);
  enc.image_height = JDIMENSION(img.height);
  enc.input_components = 3;
  enc.in_color_space = JCS_RGB;
  jpeg_set_defaults(&enc);
  jpeg_set_quality(&enc, quality, TRUE);
  jpeg_start_compress(&enc, TRUE);
  while (enc.next_scanline < enc.image_height) {
    JSAMPROW row = rgb.data() + size_t(enc.next_scanline) * img.width * 3;
    jpeg_write_scanlines(&enc, &row, 1);
  }
  jpeg_finish_compress(&enc);
  jpeg_destroy_compress(&enc);

  // decode
  jpeg_decompress_struct dec{};
  dec.err = jpeg_std_error(&err.pub);
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&dec);
    free(buf);
    throw std::runtime_error("jpeg decode failure");
  }
  jpeg_create_decompress(&dec);
  jpeg_mem_src(&dec, buf, buf_size);
  jpeg_read_header(&dec, TRUE);
  dec.out_color_space = JCS_RGB;
  jpeg_start_decompress(&dec);

  Image out = Image::zeros(img.height, img.width);
  std::vector<uint8_t> row(size_t(dec.output_width) * 3);
  int y = 0;
  while (dec.output_scanline < dec.output_height) {
    JSAMPROW rp = row.data();
    jpeg_read_scanlines(&dec, &rp, 1);
    for (int x = 0; x < img.width; ++x)
      for (int c = 0; c < 3; ++c) out.at(y, x, c) = float(row[size_t(x) * 3 + c]) / 255.0f;
    ++y;
  }
  jpeg_finish_decompress(&dec);
  jpeg_destroy_decompress(&dec);
  free(buf);
  return out;
}

}  // namespace heteraug
