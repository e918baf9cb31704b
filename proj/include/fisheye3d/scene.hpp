// Copyright Contributors to the fisheye3d Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "fisheye3d/box.hpp"
#include "fisheye3d/image.hpp"
#include "fisheye3d/remap.hpp"

namespace fisheye3d {

/// Shared-intrinsics camera set: the fisheye source plus the projections it
/// gets warped to. The cylindrical/spherical sizes follow the FoV sizing
/// rule; the pinhole view is capped to a rectilinear-friendly FoV.
struct CameraRig {
  CameraModel fisheye;
  CameraModel cylindrical;
  CameraModel spherical;
  CameraModel pinhole;
};

struct CameraRigConfig {
  double fx = 300.0;
  double fy = 300.0;
  double fisheye_fov_deg = 190.0;  // full horizontal lens FoV
  double h_fov_deg = 190.0;        // warp target horizontal FoV
  double v_fov_deg = 107.0;        // warp target vertical FoV
  double pinhole_fov_deg = 100.0;  // pinhole view FoV (capped below 180)
};

CameraRig make_rig(const CameraRigConfig& cfg);

/// Gaussian noise standard deviations per mock-detector output field.
struct NoiseSpec {
  double depth = 0.0;      // meters
  double center_px = 0.0;  // pixels, center keypoint
  double box_px = 0.0;     // pixels, each 2D box side
  double dims = 0.0;       // meters, each dimension
  double alpha = 0.0;      // radians
  double score = 0.0;
};

struct ClassDimsRange {
  int class_id = 0;
  double w_min = 1.6, w_max = 2.0;
  double h_min = 1.4, h_max = 1.8;
  double l_min = 3.5, l_max = 5.0;
};

enum class ElevationMode { GroundPlane, Free };

struct SceneConfig {
  int min_objects = 1;
  int max_objects = 12;
  double az_min_deg = -95.0;
  double az_max_deg = 95.0;
  double rho_min = 4.0;
  double rho_max = 40.0;
  double min_range = 2.0;  // boxes may not intersect a sphere of this radius
  ElevationMode elevation = ElevationMode::GroundPlane;
  double camera_height = 1.5;  // camera meters above ground (ground-plane mode)
  double y_min = -2.0;         // free-mode center range, y down
  double y_max = 2.0;
  std::vector<ClassDimsRange> classes{ClassDimsRange{},
                                      ClassDimsRange{1, 0.5, 0.8, 1.6, 1.9, 0.5, 0.8}};
  NoiseSpec noise;
  CameraRigConfig rig;
};

struct SceneObject {
  Box3D box;
  int class_id = 0;
};

struct Scene {
  CameraRig rig;
  std::vector<SceneObject> objects;
  std::uint64_t seed = 0;
};

/// Deterministic for a given seed. Every box center lies inside the fisheye
/// FoV and beyond min_range; ground-plane mode rests box bottoms on a common
/// plane. Throws GeomError(InvalidArgument) for infeasible configs.
Scene generate_scene(const SceneConfig& cfg, std::uint64_t seed);

/// Rasterizes box faces with per-box flat colors and a checker texture by
/// projecting a dense surface grid; painter's order by center distance.
/// No occlusion handling beyond the painter's order.
ImageBuffer render_scene(const Scene& scene, const CameraModel& model);

/// Color assigned to object index i in render_scene (shared with overlays).
void object_color(int index, std::uint8_t rgb[3]);

/// Emulates an ideal perspective-trained detector on the given projection:
/// per visible box, the 2D box and center keypoint from projection, the
/// depth output as the virtual z of the center (rho for cylindrical, r for
/// spherical, z for pinhole), GT dimensions, and the allocentric yaw; then
/// additive Gaussian noise per the spec. A box is visible when at least 4
/// edge samples project inside the image. Deterministic under seed.
std::vector<VirtualDetection> mock_detect(const Scene& scene, const CameraModel& model,
                                          InterpretationMode mode, const NoiseSpec& noise,
                                          std::uint64_t seed);

}  // namespace fisheye3d
