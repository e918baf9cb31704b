// Copyright Contributors to the fisheye3d Project
// SPDX-License-Identifier: Apache-2.0

#include "fisheye3d/remap.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <thread>

namespace fisheye3d {

namespace {

constexpr float kSentinel = std::numeric_limits<float>::quiet_NaN();

// Runs fn(row) for every row in [0, rows); rows are independent so the
// partitioning cannot affect the result.
template <typename Fn>
void parallel_rows(int rows, Fn&& fn) {
  unsigned hw = std::thread::hardware_concurrency();
  int n_threads = static_cast<int>(std::min<unsigned>(hw ? hw : 1, 8));
  if (n_threads <= 1 || rows < 64) {
    for (int y = 0; y < rows; ++y) fn(y);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (int t = 0; t < n_threads; ++t) {
    pool.emplace_back([&] {
      for (int y = next.fetch_add(1); y < rows; y = next.fetch_add(1)) fn(y);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

std::pair<int, int> cylindrical_size_for_fov(const CameraIntrinsics& intr, const FovSpec& fov) {
  if (!(fov.h_fov > 0.0) || fov.h_fov > 2.0 * kPi)
    throw GeomError(ErrorCode::InvalidFov, "horizontal FoV outside (0, 2pi]");
  if (!(fov.v_fov > 0.0) || fov.v_fov >= kPi)
    throw GeomError(ErrorCode::InvalidFov, "vertical FoV outside (0, pi)");
  int w = static_cast<int>(std::llround(intr.fx * fov.h_fov));
  int h = static_cast<int>(std::llround(2.0 * intr.fy * std::tan(fov.v_fov / 2.0)));
  if (w < 1 || h < 1) throw GeomError(ErrorCode::InvalidFov, "FoV below one pixel");
  return {w, h};
}

RemapTable build_remap_table(const CameraModel& src, const CameraModel& dst) {
  RemapTable table;
  table.dst_width = dst.width;
  table.dst_height = dst.height;
  table.src_width = src.width;
  table.src_height = src.height;
  table.coords.resize(2 * static_cast<std::size_t>(dst.width) * dst.height);
  parallel_rows(dst.height, [&](int y) {
    float* row = table.coords.data() + 2 * static_cast<std::size_t>(y) * dst.width;
    for (int x = 0; x < dst.width; ++x) {
      Pixel dst_px{x + 0.5, y + 0.5};
      float u = kSentinel, v = kSentinel;
      if (auto dir = try_unproject(dst, dst_px)) {
        if (auto src_px = try_project(src, *dir)) {
          u = static_cast<float>(src_px->u);
          v = static_cast<float>(src_px->v);
        }
      }
      row[2 * x] = u;
      row[2 * x + 1] = v;
    }
  });
  return table;
}

ImageBuffer remap(const ImageBuffer& img, const RemapTable& table) {
  if (img.width != table.src_width || img.height != table.src_height)
    throw GeomError(ErrorCode::SizeMismatch, "image does not match table source size");
  ImageBuffer out = ImageBuffer::create(table.dst_width, table.dst_height, img.channels);
  const int ch = img.channels;
  parallel_rows(table.dst_height, [&](int y) {
    for (int x = 0; x < table.dst_width; ++x) {
      if (!table.is_valid(x, y)) continue;  // stays black
      // Shift from the integer+0.5 center convention to sample space, then
      // clamp so edge pixels sample the border row/column.
      double sx = std::clamp(static_cast<double>(table.src_u(x, y)) - 0.5, 0.0,
                             static_cast<double>(img.width - 1));
      double sy = std::clamp(static_cast<double>(table.src_v(x, y)) - 0.5, 0.0,
                             static_cast<double>(img.height - 1));
      int x0 = static_cast<int>(sx);
      int y0 = static_cast<int>(sy);
      int x1 = std::min(x0 + 1, img.width - 1);
      int y1 = std::min(y0 + 1, img.height - 1);
      double fx = sx - x0;
      double fy = sy - y0;
      for (int c = 0; c < ch; ++c) {
        double val = (1.0 - fx) * (1.0 - fy) * img.at(x0, y0, c) +
                     fx * (1.0 - fy) * img.at(x1, y0, c) +
                     (1.0 - fx) * fy * img.at(x0, y1, c) + fx * fy * img.at(x1, y1, c);
        out.at(x, y, c) = static_cast<std::uint8_t>(std::lround(val));
      }
    }
  });
  return out;
}

ImageBuffer validity_mask(const RemapTable& table) {
  ImageBuffer mask = ImageBuffer::create(table.dst_width, table.dst_height, 1);
  for (int y = 0; y < table.dst_height; ++y) {
    for (int x = 0; x < table.dst_width; ++x) {
      if (!table.is_valid(x, y)) continue;
      double u = table.src_u(x, y);
      double v = table.src_v(x, y);
      // Full bilinear support: at least half a pixel inside every border.
      if (u >= 0.5 && u <= table.src_width - 0.5 && v >= 0.5 && v <= table.src_height - 0.5)
        mask.at(x, y) = 255;
    }
  }
  return mask;
}

namespace {
constexpr char kMagic[4] = {'R', 'M', 'A', 'P'};
}

void save_remap_table(const RemapTable& table, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw GeomError(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  f.write(kMagic, 4);
  std::uint32_t dims[4] = {static_cast<std::uint32_t>(table.dst_width),
                           static_cast<std::uint32_t>(table.dst_height),
                           static_cast<std::uint32_t>(table.src_width),
                           static_cast<std::uint32_t>(table.src_height)};
  f.write(reinterpret_cast<const char*>(dims), sizeof(dims));
  f.write(reinterpret_cast<const char*>(table.coords.data()),
          static_cast<std::streamsize>(table.coords.size() * sizeof(float)));
  if (!f) throw GeomError(ErrorCode::IoError, "failed writing '" + path + "'");
}

RemapTable load_remap_table(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw GeomError(ErrorCode::IoError, "cannot open '" + path + "'");
  char magic[4];
  f.read(magic, 4);
  if (!f || std::memcmp(magic, kMagic, 4) != 0)
    throw GeomError(ErrorCode::ParseError, "'" + path + "' is not a remap table");
  std::uint32_t dims[4];
  f.read(reinterpret_cast<char*>(dims), sizeof(dims));
  if (!f) throw GeomError(ErrorCode::ParseError, "truncated remap table header");
  RemapTable table;
  table.dst_width = static_cast<int>(dims[0]);
  table.dst_height = static_cast<int>(dims[1]);
  table.src_width = static_cast<int>(dims[2]);
  table.src_height = static_cast<int>(dims[3]);
  if (table.dst_width <= 0 || table.dst_height <= 0)
    throw GeomError(ErrorCode::ParseError, "bad remap table dimensions");
  table.coords.resize(2 * static_cast<std::size_t>(table.dst_width) * table.dst_height);
  f.read(reinterpret_cast<char*>(table.coords.data()),
         static_cast<std::streamsize>(table.coords.size() * sizeof(float)));
  if (!f) throw GeomError(ErrorCode::ParseError, "truncated remap table data");
  return table;
}

}  // namespace fisheye3d
