#pragma once

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include "heteraug/image.hpp"
#include "heteraug/rng.hpp"

namespace heteraug::testing {

// Fresh scratch directory under the working dir, removed on destruction.
struct TempDir {
  std::filesystem::path path;

  explicit TempDir(const std::string& tag) {
    path = std::filesystem::absolute("tmp_" + tag + "_" +
                                     std::to_string(::getpid()));
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
};

inline Image random_image(int h, int w, RngStream& rng) {
  Image img = Image::zeros(h, w);
  for (float& v : img.data) v = float(rng.uniform());
  return img;
}

// Random image whose values are exact multiples of 1/255, i.e. what an
// 8-bit file can represent.
inline Image random_image_8bit(int h, int w, RngStream& rng) {
  Image img = Image::zeros(h, w);
  for (float& v : img.data) v = float(rng.uniform_int(256)) / 255.0f;
  return img;
}

// relative path -> file bytes for every regular file under root
inline std::map<std::string, std::string> dir_snapshot(const std::filesystem::path& root) {
  std::map<std::string, std::string> snapshot;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    snapshot[std::filesystem::relative(entry.path(), root).string()] =
        std::string(std::istreambuf_iterator<char>(in), {});
  }
  return snapshot;
}

}  // namespace heteraug::testing
