// Copyright Contributors to the fisheye3d Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fisheye3d/box.hpp"
#include "fisheye3d/image.hpp"

namespace fisheye3d {

/// Rectangle intersection-over-union in [0, 1].
double iou_2d(const Box2D& a, const Box2D& b);

/// Volumetric IoU of yaw-rotated boxes: BEV polygon intersection (convex
/// clipping) times the vertical overlap, over the union volume.
double iou_3d(const Box3D& a, const Box3D& b);

/// One detection/ground truth inside a single (image, class) group, with the
/// 2D box already resolved so matching stays independent of any camera.
struct DetEntry {
  double score = 1.0;
  Box2D box2d;
  Box3D box3d;
};
struct GtEntry {
  Box2D box2d;
  Box3D box3d;
};

struct Matcher {
  enum class Kind { Iou2D, CenterDist };
  Kind kind = Kind::Iou2D;
  double threshold = 0.5;  // minimum IoU, or maximum center distance in meters
};

/// Greedy matching in descending score order (ties by lower detection index);
/// each ground truth and each detection appears in at most one pair.
struct MatchResult {
  std::vector<std::pair<int, int>> pairs;  // (detection index, gt index)
  std::vector<int> unmatched_dets;
  std::vector<int> unmatched_gts;
  std::vector<double> pair_metric;  // IoU or center distance, parallel to pairs
};

MatchResult match_and_score(std::span<const DetEntry> dets, std::span<const GtEntry> gts,
                            const Matcher& matcher);

/// One (score, hit) point of a detection sweep; weight scales the precision
/// contribution of a true positive (1 for plain AP, orientation similarity
/// for AOS).
struct SweepPoint {
  double score = 0.0;
  bool tp = false;
  double weight = 1.0;
};

/// Area under the precision-recall curve, all-points interpolation.
double average_precision(std::vector<SweepPoint> sweep, int num_gt);

struct ClassMetrics {
  double ap2d = 0.0;
  double map3d = 0.0;
  double aos = 0.0;
  double mean_iou3d = 0.0;
  double mean_dist_err = 0.0;
  std::map<double, double> ap3d_by_threshold;
  int num_gt = 0;
  int num_det = 0;
  int num_matched = 0;
};

/// Table row: 2D-AP / 3D-mAP / AOS / IoU / Dist. Err., per class and
/// aggregated. ap2d, aos, mean_iou3d and mean_dist_err use IoU2D > 0.5
/// matching; map3d averages AP over the center-distance thresholds.
struct EvalReport {
  ClassMetrics aggregate;
  std::map<int, ClassMetrics> per_class;
};

struct EvalDetection {
  int image_id = 0;
  int class_id = 0;
  double score = 1.0;
  Box3D box;
  std::optional<Box2D> box2d;  // detector 2D box, when carried through
};

struct EvalGroundTruth {
  int image_id = 0;
  int class_id = 0;
  Box3D box;
};

struct EvalOptions {
  std::vector<double> dist_thresholds{0.5, 1.0, 2.0, 4.0};
  double iou2d_threshold = 0.5;
  int samples_per_edge = 16;
};

/// Full evaluation. cam is the projection the detector consumed; it provides
/// 2D boxes for ground truths (and for detections that do not carry one).
/// When valid_mask is given, objects whose 2D center falls in a masked-out
/// region are dropped from both sides rather than penalized.
///
/// Aggregate ap2d/map3d/aos are macro-averages over classes with ground
/// truth; mean_iou3d and mean_dist_err pool all matched pairs.
EvalReport evaluate(const std::vector<EvalDetection>& dets,
                    const std::vector<EvalGroundTruth>& gts, const CameraModel& cam,
                    const ImageBuffer* valid_mask = nullptr, const EvalOptions& opts = {});

}  // namespace fisheye3d
