// Copyright Contributors to the fisheye3d Project
// SPDX-License-Identifier: Apache-2.0

#include "fisheye3d/box.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fisheye3d {

std::array<Vec3, 8> corners(const Box3D& b) {
  double c = std::cos(b.yaw);
  double s = std::sin(b.yaw);
  double hw = b.dims.x / 2.0, hh = b.dims.y / 2.0, hl = b.dims.z / 2.0;
  std::array<Vec3, 8> out;
  for (int k = 0; k < 8; ++k) {
    double lx = (k & 1) ? hw : -hw;
    double ly = (k & 2) ? hh : -hh;
    double lz = (k & 4) ? hl : -hl;
    // Rotation about the camera Y axis: +yaw turns the +z axis toward +x.
    out[k] = Vec3{b.center.x + c * lx + s * lz, b.center.y + ly, b.center.z - s * lx + c * lz};
  }
  return out;
}

Box2D project_box(const Box3D& b, const CameraModel& model, int samples_per_edge) {
  static constexpr int kEdges[12][2] = {{0, 1}, {2, 3}, {4, 5}, {6, 7}, {0, 2}, {1, 3},
                                        {4, 6}, {5, 7}, {0, 4}, {1, 5}, {2, 6}, {3, 7}};
  if (samples_per_edge < 2)
    throw GeomError(ErrorCode::InvalidArgument, "need at least 2 samples per edge");
  const auto cs = corners(b);
  double u_min = std::numeric_limits<double>::infinity();
  double v_min = std::numeric_limits<double>::infinity();
  double u_max = -std::numeric_limits<double>::infinity();
  double v_max = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (const auto& e : kEdges) {
    const Vec3& a = cs[e[0]];
    const Vec3& c = cs[e[1]];
    for (int j = 0; j < samples_per_edge; ++j) {
      double t = static_cast<double>(j) / (samples_per_edge - 1);
      Vec3 p = a + (c - a) * t;
      if (auto px = try_project(model, p)) {
        u_min = std::min(u_min, px->u);
        v_min = std::min(v_min, px->v);
        u_max = std::max(u_max, px->u);
        v_max = std::max(v_max, px->v);
        any = true;
      }
    }
  }
  if (!any) throw GeomError(ErrorCode::NotVisible, "no edge sample projects into the FoV");
  return Box2D{u_min, v_min, u_max, v_max};
}

Box3D detection_to_box(const VirtualDetection& det, const CameraModel& model,
                       InterpretationMode mode) {
  if (!(det.depth_out > 0.0))
    throw GeomError(ErrorCode::InvalidDepth, "detection depth output must be positive");
  const CameraIntrinsics& k = model.intr;
  Box3D box;
  box.dims = det.dims;
  switch (mode) {
    case InterpretationMode::CylindricalVirtual:
    case InterpretationMode::SphericalVirtual: {
      // The virtual scene is a perspective projection with the same intrinsic
      // matrix, so the center keypoint pins the virtual ray and depth_out is
      // the virtual z.
      VirtualPoint vc{(det.center2d.u - k.u0) / k.fx * det.depth_out,
                      (det.center2d.v - k.v0) / k.fy * det.depth_out, det.depth_out};
      auto [phi, psi] = virtual_az_el(vc);
      (void)psi;
      box.center = mode == InterpretationMode::CylindricalVirtual ? virtual_to_real_cyl(vc)
                                                                  : virtual_to_real_sph(vc);
      box.yaw = allocentric_to_global_yaw(det.alpha, phi);
      break;
    }
    case InterpretationMode::NaiveDirection: {
      box.center = naive_direction_point(model, det.center2d, det.depth_out);
      box.yaw = allocentric_to_global_yaw(det.alpha, angular_coords(box.center).azimuth);
      break;
    }
  }
  return box;
}

}  // namespace fisheye3d
