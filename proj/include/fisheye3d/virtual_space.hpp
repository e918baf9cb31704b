// Copyright Contributors to the fisheye3d Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <utility>

#include "fisheye3d/camera.hpp"

namespace fisheye3d {

/// Point in virtual camera coordinates: the 3D scene that would produce the
/// given cylindrical (or spherical) image if it were a perspective projection.
/// Kept as a distinct type so real and virtual points cannot be mixed up.
struct VirtualPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// How detector outputs on a warped image are mapped back to real 3D space.
///
/// CylindricalVirtual: perspective-equivalent virtual scene of the cylindrical
/// image; network depth is the virtual z, which equals the cylindrical radial
/// distance rho. SphericalVirtual: the analogous construction for spherical
/// images; network depth equals the Euclidean distance r. NaiveDirection:
/// baseline that uses the projection only to aim the ray and reads network
/// depth literally as Z.
enum class InterpretationMode { CylindricalVirtual, SphericalVirtual, NaiveDirection };

const char* to_string(InterpretationMode mode);
InterpretationMode interpretation_mode_from_string(const std::string& name);

/// (rho * phi, y, rho). Throws GeomError(DegeneratePoint) when rho = 0.
VirtualPoint real_to_virtual_cyl(const Vec3& p);

/// (z * sin(x/z), y, z * cos(x/z)). Throws InvalidDepth when z <= 0 and
/// OutOfRangeAzimuth when |x/z| >= pi.
Vec3 virtual_to_real_cyl(const VirtualPoint& p);

/// Spherical analog: (r * phi, r * psi, r) with the exact elevation angle.
VirtualPoint real_to_virtual_sph(const Vec3& p);

/// Inverse of real_to_virtual_sph: phi = x/z, psi = y/z, r = z.
Vec3 virtual_to_real_sph(const VirtualPoint& p);

/// Azimuth and elevation of the virtual point, (phi, psi) = (x/z, y/z).
/// The elevation follows the small-angle convention psi = Y/rho rather than
/// the exact atan2 elevation (which angular_coords exposes).
std::pair<double, double> virtual_az_el(const VirtualPoint& p);

/// Baseline placement: aims the unprojected ray of px and scales it so the
/// z component equals z_out, i.e. the network depth is taken literally as Z.
/// Throws InvalidDepth for z_out <= 0, BehindCamera for rays with z <= 0.
Vec3 naive_direction_point(const CameraModel& model, const Pixel& px, double z_out);

/// Global yaw = allocentric angle + azimuth of the viewing ray, in (-pi, pi].
double allocentric_to_global_yaw(double alpha, double azimuth);

/// Inverse of allocentric_to_global_yaw.
double global_to_allocentric_yaw(double yaw, double azimuth);

}  // namespace fisheye3d
