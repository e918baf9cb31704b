// Copyright Contributors to the fisheye3d Project
// SPDX-License-Identifier: Apache-2.0

#include "fisheye3d/overlay.hpp"

#include <cmath>
#include <optional>

namespace fisheye3d {

namespace {

void put(ImageBuffer& img, int x, int y, const std::uint8_t rgb[3]) {
  if (!img.in_bounds(x, y)) return;
  if (img.channels == 3) {
    img.at(x, y, 0) = rgb[0];
    img.at(x, y, 1) = rgb[1];
    img.at(x, y, 2) = rgb[2];
  } else {
    img.at(x, y) = static_cast<std::uint8_t>((rgb[0] * 299 + rgb[1] * 587 + rgb[2] * 114) / 1000);
  }
}

void draw_segment(ImageBuffer& img, const Pixel& a, const Pixel& b, const std::uint8_t rgb[3]) {
  int x0 = static_cast<int>(std::floor(a.u));
  int y0 = static_cast<int>(std::floor(a.v));
  int x1 = static_cast<int>(std::floor(b.u));
  int y1 = static_cast<int>(std::floor(b.v));
  int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
  int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  while (true) {
    put(img, x0, y0, rgb);
    if (x0 == x1 && y0 == y1) break;
    int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

}  // namespace

void draw_box_overlay(ImageBuffer& img, const CameraModel& model, const Box3D& box,
                      const std::uint8_t rgb[3], int samples_per_edge) {
  static constexpr int kEdges[12][2] = {{0, 1}, {2, 3}, {4, 5}, {6, 7}, {0, 2}, {1, 3},
                                        {4, 6}, {5, 7}, {0, 4}, {1, 5}, {2, 6}, {3, 7}};
  auto cs = corners(box);
  for (const auto& e : kEdges) {
    std::optional<Pixel> prev;
    for (int j = 0; j < samples_per_edge; ++j) {
      double t = static_cast<double>(j) / (samples_per_edge - 1);
      Vec3 p = cs[e[0]] + (cs[e[1]] - cs[e[0]]) * t;
      auto px = try_project(model, p);
      if (px && prev) draw_segment(img, *prev, *px, rgb);
      prev = px;
    }
  }
}

}  // namespace fisheye3d
