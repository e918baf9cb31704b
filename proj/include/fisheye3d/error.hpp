// Copyright Contributors to the fisheye3d Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace fisheye3d {

enum class ErrorCode {
  DegeneratePoint,    // point where the projection is undefined (origin, cylinder axis)
  BehindCamera,       // pinhole projection of a point with z <= 0
  BeyondFov,          // direction outside the model's admissible field of view
  OutOfDomainPixel,   // pixel that does not map to an admissible direction
  InvalidDepth,       // virtual depth <= 0
  OutOfRangeAzimuth,  // virtual azimuth outside (-pi, pi)
  InvalidFov,         // FoV spec outside its admissible range
  NotVisible,         // no sample of the box projects into the image
  SizeMismatch,       // buffer dimensions do not match
  InvalidArgument,    // constructor/validation failure
  IoError,            // file could not be read or written
  ParseError,         // malformed file contents
};

const char* error_code_name(ErrorCode code);

class GeomError : public std::runtime_error {
 public:
  GeomError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fisheye3d
