// Copyright Contributors to the fisheye3d Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "fisheye3d/error.hpp"

namespace fisheye3d {

constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * kPi);
  return w <= -kPi ? w + 2.0 * kPi : w;
}

/// 3D point or direction in camera coordinates: x right, y down, z forward.
/// The convention is fixed repo-wide; all angles follow from it.
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  Vec3 normalized() const {
    double n = norm();
    return {x / n, y / n, z / n};
  }
};

inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

/// Continuous (sub-pixel) image coordinates. Pixel centers sit at integer + 0.5.
struct Pixel {
  double u = 0.0;
  double v = 0.0;
};

/// Spherical/cylindrical coordinates of a 3D point.
///
/// azimuth       phi   = atan2(x, z), in (-pi, pi]; 0 at the cylinder axis (by convention)
/// elevation     psi   = atan2(y, sqrt(x^2 + z^2)), positive below the horizon (y down)
/// viewing_angle theta = atan2(sqrt(x^2 + y^2), z), angle off the optical axis, in [0, pi]
/// r                   = Euclidean distance, meters
/// cyl_radius    rho   = sqrt(x^2 + z^2), distance from the vertical camera axis, meters
struct AngularCoords {
  double azimuth = 0.0;
  double elevation = 0.0;
  double viewing_angle = 0.0;
  double r = 0.0;
  double cyl_radius = 0.0;
};

enum class ProjectionKind { Pinhole, FisheyeEquidistant, Spherical, Cylindrical };

const char* to_string(ProjectionKind kind);
ProjectionKind projection_kind_from_string(const std::string& name);

/// Focal lengths and principal point. For spherical/cylindrical models the fx/fy
/// slots hold the angular focal lengths f_phi and f_psi (or f_y): same matrix
/// positions, reinterpreted per projection kind.
struct CameraIntrinsics {
  double fx = 0.0;  // pixels per unit (pinhole: per tan, fisheye/spherical/cylindrical: per radian)
  double fy = 0.0;
  double u0 = 0.0;  // principal point, pixels
  double v0 = 0.0;
};

/// A projection model plus image geometry. fov_limit is the maximum admissible
/// viewing angle theta (fisheye, pinhole) or the azimuth half-range
/// (spherical, cylindrical), in radians. Construct through make_camera so the
/// invariants are checked once.
struct CameraModel {
  ProjectionKind kind = ProjectionKind::Pinhole;
  CameraIntrinsics intr;
  int width = 0;
  int height = 0;
  double fov_limit = 0.0;
};

/// Default fov_limit per kind: fisheye 95 deg (190 deg lens), spherical and
/// cylindrical 180 deg azimuth half-range, pinhole 90 deg (z > 0 only).
double default_fov_limit(ProjectionKind kind);

/// Validates invariants (positive focal lengths and image size, admissible
/// fov_limit) and returns the model. Throws GeomError(InvalidArgument).
CameraModel make_camera(ProjectionKind kind, const CameraIntrinsics& intr, int width, int height,
                        double fov_limit);

inline CameraModel make_camera(ProjectionKind kind, const CameraIntrinsics& intr, int width,
                               int height) {
  return make_camera(kind, intr, width, height, default_fov_limit(kind));
}

/// All five angular quantities of p. Throws GeomError(DegeneratePoint) at the origin.
AngularCoords angular_coords(const Vec3& p);

/// Forward projection under the model's equation. Throws GeomError with
/// BehindCamera (pinhole z <= 0), BeyondFov, or DegeneratePoint (origin;
/// cylindrical point on the vertical axis).
Pixel project(const CameraModel& model, const Vec3& p);

/// Non-throwing projection; nullopt when the point is not representable.
std::optional<Pixel> try_project(const CameraModel& model, const Vec3& p);

/// Inverse projection to a unit direction d with project(model, d*s) == px for
/// any s > 0. Pinhole directions have z > 0. Throws GeomError(OutOfDomainPixel)
/// when the pixel maps outside the admissible domain.
Vec3 unproject(const CameraModel& model, const Pixel& px);

/// Non-throwing unprojection; nullopt for out-of-domain pixels.
std::optional<Vec3> try_unproject(const CameraModel& model, const Pixel& px);

}  // namespace fisheye3d
