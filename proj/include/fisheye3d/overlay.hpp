// Copyright Contributors to the fisheye3d Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "fisheye3d/box.hpp"
#include "fisheye3d/image.hpp"

namespace fisheye3d {

/// Draws the 12 box edges as edge-sampled polylines; straight 3D edges curve
/// in non-rectilinear projections, so each edge is split into samples and
/// rasterized piecewise. Out-of-FoV samples break the polyline.
void draw_box_overlay(ImageBuffer& img, const CameraModel& model, const Box3D& box,
                      const std::uint8_t rgb[3], int samples_per_edge = 32);

}  // namespace fisheye3d
