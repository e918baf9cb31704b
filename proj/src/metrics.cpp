// Copyright Contributors to the fisheye3d Project
// SPDX-License-Identifier: Apache-2.0

#include "fisheye3d/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace fisheye3d {

double iou_2d(const Box2D& a, const Box2D& b) {
  double iw = std::min(a.u_max, b.u_max) - std::max(a.u_min, b.u_min);
  double ih = std::min(a.v_max, b.v_max) - std::max(a.v_min, b.v_min);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  double inter = iw * ih;
  double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

namespace {

struct P2 {
  double x = 0.0;
  double y = 0.0;
};

double cross(const P2& o, const P2& a, const P2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Bird's-eye-view footprint in the (x, z) ground plane, counterclockwise.
std::array<P2, 4> bev_corners(const Box3D& b) {
  double c = std::cos(b.yaw);
  double s = std::sin(b.yaw);
  double hw = b.dims.x / 2.0, hl = b.dims.z / 2.0;
  std::array<P2, 4> out;
  const double lx[4] = {hw, -hw, -hw, hw};
  const double lz[4] = {hl, hl, -hl, -hl};
  for (int i = 0; i < 4; ++i)
    out[i] = P2{b.center.x + c * lx[i] + s * lz[i], b.center.z - s * lx[i] + c * lz[i]};
  return out;
}

double polygon_area(const std::vector<P2>& poly) {
  double a = 0.0;
  for (std::size_t i = 0, n = poly.size(); i < n; ++i) {
    const P2& p = poly[i];
    const P2& q = poly[(i + 1) % n];
    a += p.x * q.y - q.x * p.y;
  }
  return std::abs(a) / 2.0;
}

// Sutherland-Hodgman clip of a convex subject against a counterclockwise
// convex quad.
std::vector<P2> clip_polygon(std::vector<P2> subject, const std::array<P2, 4>& clip) {
  std::vector<P2> out;
  for (int e = 0; e < 4 && !subject.empty(); ++e) {
    const P2& c1 = clip[e];
    const P2& c2 = clip[(e + 1) % 4];
    out.clear();
    for (std::size_t i = 0, n = subject.size(); i < n; ++i) {
      const P2& s = subject[i];
      const P2& t = subject[(i + 1) % n];
      bool s_in = cross(c1, c2, s) >= 0.0;
      bool t_in = cross(c1, c2, t) >= 0.0;
      if (s_in != t_in) {
        double d1 = cross(c1, c2, s);
        double d2 = cross(c1, c2, t);
        double f = d1 / (d1 - d2);
        out.push_back(P2{s.x + f * (t.x - s.x), s.y + f * (t.y - s.y)});
      }
      if (t_in) out.push_back(t);
    }
    subject = out;
  }
  return subject;
}

}  // namespace

double iou_3d(const Box3D& a, const Box3D& b) {
  auto ca = bev_corners(a);
  auto cb = bev_corners(b);
  std::vector<P2> inter_poly = clip_polygon({ca.begin(), ca.end()}, cb);
  if (inter_poly.size() < 3) return 0.0;
  double bev_inter = polygon_area(inter_poly);
  double y_lo = std::max(a.center.y - a.dims.y / 2.0, b.center.y - b.dims.y / 2.0);
  double y_hi = std::min(a.center.y + a.dims.y / 2.0, b.center.y + b.dims.y / 2.0);
  double v_inter = std::max(0.0, y_hi - y_lo);
  double inter = bev_inter * v_inter;
  double uni = volume(a) + volume(b) - inter;
  return uni > 0.0 ? std::clamp(inter / uni, 0.0, 1.0) : 0.0;
}

MatchResult match_and_score(std::span<const DetEntry> dets, std::span<const GtEntry> gts,
                            const Matcher& matcher) {
  std::vector<int> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int l, int r) { return dets[l].score > dets[r].score; });
  MatchResult res;
  std::vector<char> gt_used(gts.size(), 0);
  std::vector<char> det_used(dets.size(), 0);
  for (int di : order) {
    int best = -1;
    double best_metric = 0.0;
    for (int gi = 0; gi < static_cast<int>(gts.size()); ++gi) {
      if (gt_used[gi]) continue;
      if (matcher.kind == Matcher::Kind::Iou2D) {
        double iou = iou_2d(dets[di].box2d, gts[gi].box2d);
        if (iou > matcher.threshold && (best < 0 || iou > best_metric)) {
          best = gi;
          best_metric = iou;
        }
      } else {
        double d = distance(dets[di].box3d.center, gts[gi].box3d.center);
        if (d < matcher.threshold && (best < 0 || d < best_metric)) {
          best = gi;
          best_metric = d;
        }
      }
    }
    if (best >= 0) {
      gt_used[best] = 1;
      det_used[di] = 1;
      res.pairs.emplace_back(di, best);
      res.pair_metric.push_back(best_metric);
    }
  }
  for (int di = 0; di < static_cast<int>(dets.size()); ++di)
    if (!det_used[di]) res.unmatched_dets.push_back(di);
  for (int gi = 0; gi < static_cast<int>(gts.size()); ++gi)
    if (!gt_used[gi]) res.unmatched_gts.push_back(gi);
  return res;
}

double average_precision(std::vector<SweepPoint> sweep, int num_gt) {
  if (num_gt <= 0) return 0.0;
  std::stable_sort(sweep.begin(), sweep.end(),
                   [](const SweepPoint& a, const SweepPoint& b) { return a.score > b.score; });
  const int n = static_cast<int>(sweep.size());
  if (n == 0) return 0.0;
  std::vector<double> wprec(n), recall(n);
  double cum_w = 0.0;
  int cum_tp = 0;
  for (int i = 0; i < n; ++i) {
    if (sweep[i].tp) {
      ++cum_tp;
      cum_w += sweep[i].weight;
    }
    wprec[i] = cum_w / (i + 1);
    recall[i] = static_cast<double>(cum_tp) / num_gt;
  }
  for (int i = n - 2; i >= 0; --i) wprec[i] = std::max(wprec[i], wprec[i + 1]);
  double ap = 0.0;
  double prev_recall = 0.0;
  for (int i = 0; i < n; ++i) {
    if (recall[i] > prev_recall) {
      ap += (recall[i] - prev_recall) * wprec[i];
      prev_recall = recall[i];
    }
  }
  return ap;
}

namespace {

struct ResolvedDet {
  int image_id = 0;
  double score = 1.0;
  Box3D box;
  Box2D box2d;
};

struct ResolvedGt {
  int image_id = 0;
  Box3D box;
  Box2D box2d;
};

std::optional<Box2D> clip_to_image(const Box2D& b, const CameraModel& cam) {
  Box2D out{std::max(b.u_min, 0.0), std::max(b.v_min, 0.0),
            std::min(b.u_max, static_cast<double>(cam.width)),
            std::min(b.v_max, static_cast<double>(cam.height))};
  if (out.u_min >= out.u_max || out.v_min >= out.v_max) return std::nullopt;
  return out;
}

bool masked_out(const ImageBuffer* mask, const Pixel& px) {
  if (!mask) return false;
  int x = std::clamp(static_cast<int>(std::floor(px.u)), 0, mask->width - 1);
  int y = std::clamp(static_cast<int>(std::floor(px.v)), 0, mask->height - 1);
  return mask->at(x, y) == 0;
}

double orientation_similarity(double yaw_a, double yaw_b) {
  return (1.0 + std::cos(yaw_a - yaw_b)) / 2.0;
}

}  // namespace

EvalReport evaluate(const std::vector<EvalDetection>& dets,
                    const std::vector<EvalGroundTruth>& gts, const CameraModel& cam,
                    const ImageBuffer* valid_mask, const EvalOptions& opts) {
  // Resolve 2D boxes and apply the valid-region filter up front.
  std::map<int, std::vector<ResolvedDet>> dets_by_class;
  std::map<int, std::vector<ResolvedGt>> gts_by_class;
  for (const auto& d : dets) {
    ResolvedDet rd{d.image_id, d.score, d.box, Box2D{}};
    std::optional<Box2D> b2;
    if (d.box2d) {
      b2 = clip_to_image(*d.box2d, cam);
    } else {
      try {
        b2 = clip_to_image(project_box(d.box, cam, opts.samples_per_edge), cam);
      } catch (const GeomError&) {
        b2 = std::nullopt;
      }
    }
    // Keep detections without a usable 2D box: they can never match in 2D
    // (counted as false positives) but still take part in center-distance
    // matching.
    if (b2) rd.box2d = *b2;
    Pixel center_px = b2 ? b2->center() : Pixel{-1.0, -1.0};
    if (b2 && masked_out(valid_mask, center_px)) continue;
    dets_by_class[d.class_id].push_back(rd);
  }
  for (const auto& g : gts) {
    std::optional<Box2D> b2;
    try {
      b2 = clip_to_image(project_box(g.box, cam, opts.samples_per_edge), cam);
    } catch (const GeomError&) {
      b2 = std::nullopt;
    }
    if (!b2) continue;  // not detectable from this camera
    if (masked_out(valid_mask, b2->center())) continue;
    gts_by_class[g.class_id].push_back(ResolvedGt{g.image_id, g.box, *b2});
  }

  EvalReport report;
  double pooled_iou = 0.0, pooled_dist = 0.0;
  int pooled_matched = 0;
  int classes_with_gt = 0;

  std::vector<int> class_ids;
  for (const auto& [cid, _] : gts_by_class) class_ids.push_back(cid);
  for (const auto& [cid, _] : dets_by_class)
    if (!gts_by_class.count(cid)) class_ids.push_back(cid);
  std::sort(class_ids.begin(), class_ids.end());

  for (int cid : class_ids) {
    const auto& cdets = dets_by_class[cid];
    const auto& cgts = gts_by_class[cid];
    ClassMetrics cm;
    cm.num_det = static_cast<int>(cdets.size());
    cm.num_gt = static_cast<int>(cgts.size());

    // Group per image so a detection can only claim ground truth in its frame.
    std::map<int, std::pair<std::vector<DetEntry>, std::vector<GtEntry>>> groups;
    std::map<int, std::vector<int>> det_origin;  // group-local -> class-local index
    std::map<int, std::vector<int>> gt_origin;
    for (int i = 0; i < static_cast<int>(cdets.size()); ++i) {
      groups[cdets[i].image_id].first.push_back(
          DetEntry{cdets[i].score, cdets[i].box2d, cdets[i].box});
      det_origin[cdets[i].image_id].push_back(i);
    }
    for (int i = 0; i < static_cast<int>(cgts.size()); ++i) {
      groups[cgts[i].image_id].second.push_back(GtEntry{cgts[i].box2d, cgts[i].box});
      gt_origin[cgts[i].image_id].push_back(i);
    }

    // 2D-AP, AOS, and the matched-pair means share one IoU2D matching.
    std::vector<SweepPoint> sweep2d, sweep_aos;
    for (auto& [img, group] : groups) {
      auto& [gdets, ggts] = group;
      MatchResult m =
          match_and_score(gdets, ggts, Matcher{Matcher::Kind::Iou2D, opts.iou2d_threshold});
      std::vector<char> tp(gdets.size(), 0);
      std::vector<double> sim(gdets.size(), 0.0);
      for (std::size_t k = 0; k < m.pairs.size(); ++k) {
        auto [di, gi] = m.pairs[k];
        tp[di] = 1;
        sim[di] = orientation_similarity(gdets[di].box3d.yaw, ggts[gi].box3d.yaw);
        cm.mean_iou3d += iou_3d(gdets[di].box3d, ggts[gi].box3d);
        cm.mean_dist_err += distance(gdets[di].box3d.center, ggts[gi].box3d.center);
        ++cm.num_matched;
      }
      for (std::size_t di = 0; di < gdets.size(); ++di) {
        sweep2d.push_back(SweepPoint{gdets[di].score, tp[di] != 0, 1.0});
        sweep_aos.push_back(SweepPoint{gdets[di].score, tp[di] != 0, sim[di]});
      }
    }
    cm.ap2d = average_precision(sweep2d, cm.num_gt);
    cm.aos = average_precision(sweep_aos, cm.num_gt);
    if (cm.num_matched > 0) {
      cm.mean_iou3d /= cm.num_matched;
      cm.mean_dist_err /= cm.num_matched;
    }

    for (double thr : opts.dist_thresholds) {
      std::vector<SweepPoint> sweep3d;
      for (auto& [img, group] : groups) {
        auto& [gdets, ggts] = group;
        MatchResult m = match_and_score(gdets, ggts, Matcher{Matcher::Kind::CenterDist, thr});
        std::vector<char> tp(gdets.size(), 0);
        for (auto [di, gi] : m.pairs) tp[di] = 1;
        for (std::size_t di = 0; di < gdets.size(); ++di)
          sweep3d.push_back(SweepPoint{gdets[di].score, tp[di] != 0, 1.0});
      }
      cm.ap3d_by_threshold[thr] = average_precision(sweep3d, cm.num_gt);
    }
    if (!cm.ap3d_by_threshold.empty()) {
      for (const auto& [thr, ap] : cm.ap3d_by_threshold) cm.map3d += ap;
      cm.map3d /= static_cast<double>(cm.ap3d_by_threshold.size());
    }

    pooled_iou += cm.mean_iou3d * cm.num_matched;
    pooled_dist += cm.mean_dist_err * cm.num_matched;
    pooled_matched += cm.num_matched;
    report.aggregate.num_gt += cm.num_gt;
    report.aggregate.num_det += cm.num_det;
    report.aggregate.num_matched += cm.num_matched;
    if (cm.num_gt > 0) {
      ++classes_with_gt;
      report.aggregate.ap2d += cm.ap2d;
      report.aggregate.aos += cm.aos;
      report.aggregate.map3d += cm.map3d;
      for (const auto& [thr, ap] : cm.ap3d_by_threshold)
        report.aggregate.ap3d_by_threshold[thr] += ap;
    }
    report.per_class[cid] = std::move(cm);
  }

  if (classes_with_gt > 0) {
    report.aggregate.ap2d /= classes_with_gt;
    report.aggregate.aos /= classes_with_gt;
    report.aggregate.map3d /= classes_with_gt;
    for (auto& [thr, ap] : report.aggregate.ap3d_by_threshold) ap /= classes_with_gt;
  }
  if (pooled_matched > 0) {
    report.aggregate.mean_iou3d = pooled_iou / pooled_matched;
    report.aggregate.mean_dist_err = pooled_dist / pooled_matched;
  }
  return report;
}

}  // namespace fisheye3d
