// Copyright Contributors to the fisheye3d Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>

#include "fisheye3d/camera.hpp"
#include "fisheye3d/virtual_space.hpp"

namespace fisheye3d {

/// Oriented 3D bounding box in camera coordinates. dims holds the extents
/// along the box's local axes: x = width, y = height, z = length. yaw rotates
/// about the camera Y axis and lives in (-pi, pi]. Pitch and roll are zero.
struct Box3D {
  Vec3 center;
  Vec3 dims;  // (width, height, length), meters, strictly positive
  double yaw = 0.0;
};

inline double volume(const Box3D& b) { return b.dims.x * b.dims.y * b.dims.z; }

/// Axis-aligned 2D box in pixel coordinates, min <= max componentwise.
struct Box2D {
  double u_min = 0.0;
  double v_min = 0.0;
  double u_max = 0.0;
  double v_max = 0.0;

  double width() const { return u_max - u_min; }
  double height() const { return v_max - v_min; }
  double area() const { return width() * height(); }
  Pixel center() const { return {(u_min + u_max) / 2.0, (v_min + v_max) / 2.0}; }
};

/// Per-object outputs of a perspective-trained detector run on a warped image.
/// depth_out is the scalar the network regresses as "Z"; its meaning depends
/// on the InterpretationMode used downstream. alpha is the allocentric yaw.
struct VirtualDetection {
  Box2D box2d;
  Pixel center2d;  // projected 3D-center keypoint
  double depth_out = 0.0;
  Vec3 dims;
  double alpha = 0.0;
  double score = 1.0;
  int class_id = 0;
};

/// The 8 corners of the yaw-rotated cuboid. Corner k has local sign pattern
/// (sx, sy, sz) = (k&1 ? + : -, k&2 ? + : -, k&4 ? + : -) applied to half the
/// dims, rotated by yaw about Y and translated to the center.
std::array<Vec3, 8> corners(const Box3D& b);

/// Axis-aligned hull of the projections of points sampled along all 12 edges.
/// Straight 3D edges curve in non-rectilinear projections, so corner-only
/// hulls undercover; samples_per_edge = 16 is the repo default. Samples
/// outside the model's FoV are skipped; if no sample projects, throws
/// GeomError(NotVisible).
Box2D project_box(const Box3D& b, const CameraModel& model, int samples_per_edge = 16);

/// Rebuilds a real-space box from detector outputs, per the configured mode:
/// the 3D center keypoint and depth place the virtual center, the inverse
/// virtual transform maps it to real space, the azimuth turns the allocentric
/// angle into global yaw, and the dimensions are taken as predicted.
Box3D detection_to_box(const VirtualDetection& det, const CameraModel& model,
                       InterpretationMode mode);

}  // namespace fisheye3d
