// Copyright Contributors to the fisheye3d Project
// SPDX-License-Identifier: Apache-2.0

#include "fisheye3d/image.hpp"

#include <png.h>

#include <cmath>
#include <cstring>
#include <limits>

namespace fisheye3d {

ImageBuffer ImageBuffer::create(int width, int height, int channels, std::uint8_t fill) {
  if (width <= 0 || height <= 0 || (channels != 1 && channels != 3))
    throw GeomError(ErrorCode::InvalidArgument, "bad image dimensions");
  ImageBuffer img;
  img.width = width;
  img.height = height;
  img.channels = channels;
  img.data.assign(static_cast<std::size_t>(width) * height * channels, fill);
  return img;
}

ImageBuffer read_png(const std::string& path) {
  png_image pim;
  std::memset(&pim, 0, sizeof(pim));
  pim.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&pim, path.c_str()))
    throw GeomError(ErrorCode::IoError, "cannot read PNG '" + path + "': " + pim.message);
  // Collapse everything to 8-bit gray or RGB.
  int channels = (pim.format & PNG_FORMAT_FLAG_COLOR) ? 3 : 1;
  pim.format = channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  ImageBuffer img = ImageBuffer::create(static_cast<int>(pim.width), static_cast<int>(pim.height),
                                        channels);
  if (!png_image_finish_read(&pim, nullptr, img.data.data(), 0, nullptr)) {
    png_image_free(&pim);
    throw GeomError(ErrorCode::IoError, "cannot decode PNG '" + path + "': " + pim.message);
  }
  return img;
}

void write_png(const ImageBuffer& img, const std::string& path) {
  if (img.width <= 0 || img.height <= 0)
    throw GeomError(ErrorCode::InvalidArgument, "cannot write empty image");
  png_image pim;
  std::memset(&pim, 0, sizeof(pim));
  pim.version = PNG_IMAGE_VERSION;
  pim.width = static_cast<png_uint_32>(img.width);
  pim.height = static_cast<png_uint_32>(img.height);
  pim.format = img.channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&pim, path.c_str(), 0, img.data.data(), 0, nullptr))
    throw GeomError(ErrorCode::IoError, "cannot write PNG '" + path + "': " + pim.message);
}

double psnr(const ImageBuffer& a, const ImageBuffer& b, const ImageBuffer* mask) {
  if (a.width != b.width || a.height != b.height || a.channels != b.channels)
    throw GeomError(ErrorCode::SizeMismatch, "psnr inputs differ in shape");
  if (mask && (mask->width != a.width || mask->height != a.height))
    throw GeomError(ErrorCode::SizeMismatch, "psnr mask differs in shape");
  double sse = 0.0;
  std::size_t n = 0;
  for (int y = 0; y < a.height; ++y) {
    for (int x = 0; x < a.width; ++x) {
      if (mask && mask->at(x, y) == 0) continue;
      for (int c = 0; c < a.channels; ++c) {
        double d = static_cast<double>(a.at(x, y, c)) - b.at(x, y, c);
        sse += d * d;
        ++n;
      }
    }
  }
  if (n == 0) throw GeomError(ErrorCode::InvalidArgument, "psnr over empty mask");
  double mse = sse / static_cast<double>(n);
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

}  // namespace fisheye3d
