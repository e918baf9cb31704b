// Copyright Contributors to the fisheye3d Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fisheye3d/error.hpp"

namespace fisheye3d {

/// 8-bit row-major image, 1 (gray) or 3 (RGB) channels.
struct ImageBuffer {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<std::uint8_t> data;

  static ImageBuffer create(int width, int height, int channels, std::uint8_t fill = 0);

  std::uint8_t& at(int x, int y, int c = 0) {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  std::uint8_t at(int x, int y, int c = 0) const {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
  std::size_t size_bytes() const { return data.size(); }
};

ImageBuffer read_png(const std::string& path);
void write_png(const ImageBuffer& img, const std::string& path);

/// Peak signal-to-noise ratio in dB over pixels where mask != 0 (all pixels
/// when mask is null). Identical images give +inf.
double psnr(const ImageBuffer& a, const ImageBuffer& b, const ImageBuffer* mask = nullptr);

}  // namespace fisheye3d
