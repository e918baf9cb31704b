// Copyright Contributors to the fisheye3d Project
// SPDX-License-Identifier: Apache-2.0

#include "fisheye3d/virtual_space.hpp"

#include <cmath>

namespace fisheye3d {

const char* to_string(InterpretationMode mode) {
  switch (mode) {
    case InterpretationMode::CylindricalVirtual: return "cylindrical";
    case InterpretationMode::SphericalVirtual: return "spherical";
    case InterpretationMode::NaiveDirection: return "naive";
  }
  return "invalid";
}

InterpretationMode interpretation_mode_from_string(const std::string& name) {
  if (name == "cylindrical") return InterpretationMode::CylindricalVirtual;
  if (name == "spherical") return InterpretationMode::SphericalVirtual;
  if (name == "naive") return InterpretationMode::NaiveDirection;
  throw GeomError(ErrorCode::ParseError, "unknown interpretation mode '" + name + "'");
}

VirtualPoint real_to_virtual_cyl(const Vec3& p) {
  double rho = std::hypot(p.x, p.z);
  if (rho == 0.0)
    throw GeomError(ErrorCode::DegeneratePoint, "point on the vertical camera axis");
  double phi = std::atan2(p.x, p.z);
  return VirtualPoint{rho * phi, p.y, rho};
}

Vec3 virtual_to_real_cyl(const VirtualPoint& p) {
  if (!(p.z > 0.0)) throw GeomError(ErrorCode::InvalidDepth, "virtual depth must be positive");
  double phi = p.x / p.z;
  if (std::abs(phi) >= kPi)
    throw GeomError(ErrorCode::OutOfRangeAzimuth, "virtual azimuth outside (-pi, pi)");
  return Vec3{p.z * std::sin(phi), p.y, p.z * std::cos(phi)};
}

VirtualPoint real_to_virtual_sph(const Vec3& p) {
  double rho = std::hypot(p.x, p.z);
  if (rho == 0.0)
    throw GeomError(ErrorCode::DegeneratePoint, "point on the vertical camera axis");
  double r = std::hypot(rho, p.y);
  double phi = std::atan2(p.x, p.z);
  double psi = std::atan2(p.y, rho);
  return VirtualPoint{r * phi, r * psi, r};
}

Vec3 virtual_to_real_sph(const VirtualPoint& p) {
  if (!(p.z > 0.0)) throw GeomError(ErrorCode::InvalidDepth, "virtual depth must be positive");
  double phi = p.x / p.z;
  double psi = p.y / p.z;
  if (std::abs(phi) >= kPi)
    throw GeomError(ErrorCode::OutOfRangeAzimuth, "virtual azimuth outside (-pi, pi)");
  double r = p.z;
  double cp = std::cos(psi);
  return Vec3{r * cp * std::sin(phi), r * std::sin(psi), r * cp * std::cos(phi)};
}

std::pair<double, double> virtual_az_el(const VirtualPoint& p) {
  if (!(p.z > 0.0)) throw GeomError(ErrorCode::InvalidDepth, "virtual depth must be positive");
  return {p.x / p.z, p.y / p.z};
}

Vec3 naive_direction_point(const CameraModel& model, const Pixel& px, double z_out) {
  if (!(z_out > 0.0)) throw GeomError(ErrorCode::InvalidDepth, "depth output must be positive");
  Vec3 d = unproject(model, px);
  if (!(d.z > 0.0))
    throw GeomError(ErrorCode::BehindCamera, "ray parallel to or behind the image plane");
  return d * (z_out / d.z);
}

double allocentric_to_global_yaw(double alpha, double azimuth) {
  return wrap_angle(alpha + azimuth);
}

double global_to_allocentric_yaw(double yaw, double azimuth) {
  return wrap_angle(yaw - azimuth);
}

}  // namespace fisheye3d
