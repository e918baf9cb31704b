// Copyright Contributors to the fisheye3d Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fisheye3d/camera.hpp"
#include "fisheye3d/image.hpp"

namespace fisheye3d {

/// Horizontal/vertical field of view of a warp target, radians.
struct FovSpec {
  double h_fov = 0.0;  // delta-phi, (0, 2pi]
  double v_fov = 0.0;  // delta-psi, (0, pi)
};

/// Image size that makes a cylindrical warp of the given FoV preserve the
/// intrinsics: W = fx * dphi, H = 2 * fy * tan(dpsi / 2), rounded to pixels.
/// Throws GeomError(InvalidFov) for out-of-range or sub-pixel FoVs.
std::pair<int, int> cylindrical_size_for_fov(const CameraIntrinsics& intr, const FovSpec& fov);

/// Per-destination-pixel continuous source coordinates for an image warp.
/// Coordinates are stored as (u, v) float pairs in row-major destination
/// order; a NaN pair marks destination pixels with no admissible source
/// direction. Immutable after construction and shareable across threads.
struct RemapTable {
  int dst_width = 0;
  int dst_height = 0;
  int src_width = 0;
  int src_height = 0;
  std::vector<float> coords;  // 2 floats per destination pixel

  float src_u(int x, int y) const { return coords[2 * (static_cast<std::size_t>(y) * dst_width + x)]; }
  float src_v(int x, int y) const { return coords[2 * (static_cast<std::size_t>(y) * dst_width + x) + 1]; }
  bool is_valid(int x, int y) const { return !std::isnan(src_u(x, y)); }
};

/// For each destination pixel center, project(src, unproject(dst, pixel)),
/// with the sentinel wherever the direction leaves src's FoV or falls behind
/// a pinhole source. Construction is parallel over destination rows; the
/// result is independent of the partitioning.
RemapTable build_remap_table(const CameraModel& src, const CameraModel& dst);

/// Bilinear remap; sentinel destinations are black. Deterministic.
/// Throws GeomError(SizeMismatch) when img does not match table.src_size.
ImageBuffer remap(const ImageBuffer& img, const RemapTable& table);

/// 1-channel mask, 255 where the table maps to a source coordinate with full
/// bilinear support inside the source image, 0 elsewhere. Metrics use this to
/// exclude invalid warp regions.
ImageBuffer validity_mask(const RemapTable& table);

/// Binary table format: "RMAP" magic, u32 dst/src sizes, row-major f32 pairs
/// (little-endian); sentinel = NaN pair.
void save_remap_table(const RemapTable& table, const std::string& path);
RemapTable load_remap_table(const std::string& path);

}  // namespace fisheye3d
