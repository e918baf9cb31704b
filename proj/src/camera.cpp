// Copyright Contributors to the fisheye3d Project
// SPDX-License-Identifier: Apache-2.0

#include "fisheye3d/camera.hpp"

#include <cmath>

namespace fisheye3d {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegeneratePoint: return "degenerate-point";
    case ErrorCode::BehindCamera: return "behind-camera";
    case ErrorCode::BeyondFov: return "beyond-fov";
    case ErrorCode::OutOfDomainPixel: return "out-of-domain-pixel";
    case ErrorCode::InvalidDepth: return "invalid-depth";
    case ErrorCode::OutOfRangeAzimuth: return "out-of-range-azimuth";
    case ErrorCode::InvalidFov: return "invalid-fov";
    case ErrorCode::NotVisible: return "not-visible";
    case ErrorCode::SizeMismatch: return "size-mismatch";
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::IoError: return "io-error";
    case ErrorCode::ParseError: return "parse-error";
  }
  return "unknown";
}

const char* to_string(ProjectionKind kind) {
  switch (kind) {
    case ProjectionKind::Pinhole: return "pinhole";
    case ProjectionKind::FisheyeEquidistant: return "fisheye";
    case ProjectionKind::Spherical: return "spherical";
    case ProjectionKind::Cylindrical: return "cylindrical";
  }
  return "invalid";
}

ProjectionKind projection_kind_from_string(const std::string& name) {
  if (name == "pinhole") return ProjectionKind::Pinhole;
  if (name == "fisheye") return ProjectionKind::FisheyeEquidistant;
  if (name == "spherical") return ProjectionKind::Spherical;
  if (name == "cylindrical") return ProjectionKind::Cylindrical;
  throw GeomError(ErrorCode::ParseError, "unknown projection kind '" + name + "'");
}

double default_fov_limit(ProjectionKind kind) {
  switch (kind) {
    case ProjectionKind::Pinhole: return kPi / 2.0;
    case ProjectionKind::FisheyeEquidistant: return deg2rad(95.0);
    case ProjectionKind::Spherical:
    case ProjectionKind::Cylindrical: return kPi;
  }
  return 0.0;
}

CameraModel make_camera(ProjectionKind kind, const CameraIntrinsics& intr, int width, int height,
                        double fov_limit) {
  if (!(intr.fx > 0.0) || !(intr.fy > 0.0))
    throw GeomError(ErrorCode::InvalidArgument, "focal lengths must be positive");
  if (!std::isfinite(intr.u0) || !std::isfinite(intr.v0))
    throw GeomError(ErrorCode::InvalidArgument, "principal point must be finite");
  if (width <= 0 || height <= 0)
    throw GeomError(ErrorCode::InvalidArgument, "image size must be positive");
  if (!(fov_limit > 0.0))
    throw GeomError(ErrorCode::InvalidArgument, "fov_limit must be positive");
  // Fisheye viewing angle stays below pi (the backward axis has no image
  // direction); azimuth half-ranges may reach pi (full panorama).
  if (kind == ProjectionKind::FisheyeEquidistant && fov_limit >= kPi)
    throw GeomError(ErrorCode::InvalidArgument, "fisheye fov_limit must be below pi");
  if (fov_limit > kPi)
    throw GeomError(ErrorCode::InvalidArgument, "fov_limit above pi");
  if (kind == ProjectionKind::Pinhole && fov_limit > kPi / 2.0)
    throw GeomError(ErrorCode::InvalidArgument, "pinhole fov_limit above pi/2");
  return CameraModel{kind, intr, width, height, fov_limit};
}

AngularCoords angular_coords(const Vec3& p) {
  if (p.x == 0.0 && p.y == 0.0 && p.z == 0.0)
    throw GeomError(ErrorCode::DegeneratePoint, "angular coordinates of the origin");
  AngularCoords a;
  a.cyl_radius = std::hypot(p.x, p.z);
  a.r = std::hypot(a.cyl_radius, p.y);
  a.azimuth = a.cyl_radius > 0.0 ? std::atan2(p.x, p.z) : 0.0;
  if (a.azimuth <= -kPi) a.azimuth = kPi;
  a.elevation = std::atan2(p.y, a.cyl_radius);
  a.viewing_angle = std::atan2(std::hypot(p.x, p.y), p.z);
  return a;
}

namespace {

// Shared by the throwing and optional-returning entry points; projection
// probing in remap tables runs over millions of pixels, so failures must not
// unwind.
std::optional<Pixel> project_impl(const CameraModel& m, const Vec3& p, ErrorCode& ec) {
  const CameraIntrinsics& k = m.intr;
  if (p.x == 0.0 && p.y == 0.0 && p.z == 0.0) {
    ec = ErrorCode::DegeneratePoint;
    return std::nullopt;
  }
  switch (m.kind) {
    case ProjectionKind::Pinhole: {
      if (p.z <= 0.0) {
        ec = ErrorCode::BehindCamera;
        return std::nullopt;
      }
      if (std::atan2(std::hypot(p.x, p.y), p.z) > m.fov_limit) {
        ec = ErrorCode::BeyondFov;
        return std::nullopt;
      }
      return Pixel{k.fx * p.x / p.z + k.u0, k.fy * p.y / p.z + k.v0};
    }
    case ProjectionKind::FisheyeEquidistant: {
      double r_im = std::hypot(p.x, p.y);
      double theta = std::atan2(r_im, p.z);
      if (theta > m.fov_limit) {
        ec = ErrorCode::BeyondFov;
        return std::nullopt;
      }
      if (r_im == 0.0) return Pixel{k.u0, k.v0};  // optical axis
      return Pixel{k.u0 + k.fx * theta * (p.x / r_im), k.v0 + k.fy * theta * (p.y / r_im)};
    }
    case ProjectionKind::Spherical: {
      double rho = std::hypot(p.x, p.z);
      double phi = rho > 0.0 ? std::atan2(p.x, p.z) : 0.0;
      if (std::abs(phi) > m.fov_limit) {
        ec = ErrorCode::BeyondFov;
        return std::nullopt;
      }
      double psi = std::atan2(p.y, rho);
      return Pixel{k.fx * phi + k.u0, k.fy * psi + k.v0};
    }
    case ProjectionKind::Cylindrical: {
      double rho = std::hypot(p.x, p.z);
      if (rho == 0.0) {
        // The cylinder excludes points directly above or below the camera.
        ec = ErrorCode::DegeneratePoint;
        return std::nullopt;
      }
      double phi = std::atan2(p.x, p.z);
      if (std::abs(phi) > m.fov_limit) {
        ec = ErrorCode::BeyondFov;
        return std::nullopt;
      }
      return Pixel{k.fx * phi + k.u0, k.fy * (p.y / rho) + k.v0};
    }
  }
  ec = ErrorCode::InvalidArgument;
  return std::nullopt;
}

std::optional<Vec3> unproject_impl(const CameraModel& m, const Pixel& px, ErrorCode& ec) {
  const CameraIntrinsics& k = m.intr;
  switch (m.kind) {
    case ProjectionKind::Pinhole: {
      Vec3 d{(px.u - k.u0) / k.fx, (px.v - k.v0) / k.fy, 1.0};
      return d.normalized();
    }
    case ProjectionKind::FisheyeEquidistant: {
      double a = (px.u - k.u0) / k.fx;
      double b = (px.v - k.v0) / k.fy;
      double theta = std::hypot(a, b);
      if (theta > m.fov_limit) {
        ec = ErrorCode::OutOfDomainPixel;
        return std::nullopt;
      }
      if (theta == 0.0) return Vec3{0.0, 0.0, 1.0};
      double s = std::sin(theta) / theta;
      return Vec3{s * a, s * b, std::cos(theta)};
    }
    case ProjectionKind::Spherical: {
      double phi = (px.u - k.u0) / k.fx;
      double psi = (px.v - k.v0) / k.fy;
      if (std::abs(phi) > m.fov_limit || std::abs(psi) > kPi / 2.0) {
        ec = ErrorCode::OutOfDomainPixel;
        return std::nullopt;
      }
      double cp = std::cos(psi);
      return Vec3{cp * std::sin(phi), std::sin(psi), cp * std::cos(phi)};
    }
    case ProjectionKind::Cylindrical: {
      double phi = (px.u - k.u0) / k.fx;
      if (std::abs(phi) > m.fov_limit) {
        ec = ErrorCode::OutOfDomainPixel;
        return std::nullopt;
      }
      double t = (px.v - k.v0) / k.fy;
      return Vec3{std::sin(phi), t, std::cos(phi)}.normalized();
    }
  }
  ec = ErrorCode::InvalidArgument;
  return std::nullopt;
}

}  // namespace

Pixel project(const CameraModel& model, const Vec3& p) {
  ErrorCode ec = ErrorCode::InvalidArgument;
  if (auto px = project_impl(model, p, ec)) return *px;
  throw GeomError(ec, "cannot project point under " + std::string(to_string(model.kind)) +
                          " model");
}

std::optional<Pixel> try_project(const CameraModel& model, const Vec3& p) {
  ErrorCode ec{};
  return project_impl(model, p, ec);
}

Vec3 unproject(const CameraModel& model, const Pixel& px) {
  ErrorCode ec = ErrorCode::InvalidArgument;
  if (auto d = unproject_impl(model, px, ec)) return *d;
  throw GeomError(ec, "cannot unproject pixel under " + std::string(to_string(model.kind)) +
                          " model");
}

std::optional<Vec3> try_unproject(const CameraModel& model, const Pixel& px) {
  ErrorCode ec{};
  return unproject_impl(model, px, ec);
}

}  // namespace fisheye3d
