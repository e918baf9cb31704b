// Copyright Contributors to the fisheye3d Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "fisheye3d/box.hpp"
#include "fisheye3d/metrics.hpp"
#include "fisheye3d/scene.hpp"

namespace fisheye3d {

// All angles in files are degrees; conversion to radians happens here and
// nowhere else.

/// Camera calibration file: JSON object with fields kind, fx, fy, u0, v0,
/// width, height, fov_limit_deg.
CameraModel read_camera(const std::string& path);
void write_camera(const CameraModel& model, const std::string& path);

/// Detector output record, one JSON object per line: image_id, class_id,
/// score, box2d [u_min,v_min,u_max,v_max], center2d [u,v], depth_out,
/// dims [w,h,l], alpha (degrees).
struct DetectionRecord {
  int image_id = 0;
  VirtualDetection det;
};

std::vector<DetectionRecord> read_detections(const std::string& path);
void write_detections(const std::vector<DetectionRecord>& records, const std::string& path);

/// Tolerant reader for the transform command: malformed lines are collected
/// instead of aborting the run.
struct DetectionReadResult {
  std::vector<DetectionRecord> records;
  int skipped = 0;
  std::vector<std::string> warnings;
};
DetectionReadResult read_detections_tolerant(const std::string& path);

/// 3D box record, one JSON object per line: image_id, class_id, score,
/// center [x,y,z], dims [w,h,l], yaw (degrees), optional box2d carried
/// through from the detector.
struct BoxRecord {
  int image_id = 0;
  int class_id = 0;
  double score = 1.0;
  Box3D box;
  std::optional<Box2D> box2d;
};

std::vector<BoxRecord> read_boxes(const std::string& path);
void write_boxes(const std::vector<BoxRecord>& records, const std::string& path);

/// Ground-truth record: like BoxRecord without score/box2d.
struct GtRecord {
  int image_id = 0;
  int class_id = 0;
  Box3D box;
};

std::vector<GtRecord> read_ground_truth(const std::string& path);
void write_ground_truth(const std::vector<GtRecord>& records, const std::string& path);

/// Scene config JSON; missing fields fall back to SceneConfig defaults.
SceneConfig read_scene_config(const std::string& path);

void write_report(const EvalReport& report, const std::string& path);

}  // namespace fisheye3d
