// Copyright Contributors to the fisheye3d Project
// SPDX-License-Identifier: Apache-2.0

#include "fisheye3d/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fisheye3d {

using nlohmann::json;

namespace {

json parse_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw GeomError(ErrorCode::IoError, "cannot open '" + path + "'");
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw GeomError(ErrorCode::ParseError, "'" + path + "': " + e.what());
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw GeomError(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  return f;
}

Vec3 vec3_from(const json& j) { return Vec3{j.at(0), j.at(1), j.at(2)}; }
json vec3_to(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Box2D box2d_from(const json& j) { return Box2D{j.at(0), j.at(1), j.at(2), j.at(3)}; }
json box2d_to(const Box2D& b) { return json::array({b.u_min, b.v_min, b.u_max, b.v_max}); }

}  // namespace

CameraModel read_camera(const std::string& path) {
  json j = parse_file(path);
  try {
    return make_camera(projection_kind_from_string(j.at("kind").get<std::string>()),
                       CameraIntrinsics{j.at("fx"), j.at("fy"), j.at("u0"), j.at("v0")},
                       j.at("width"), j.at("height"), deg2rad(j.at("fov_limit_deg")));
  } catch (const json::exception& e) {
    throw GeomError(ErrorCode::ParseError, "camera file '" + path + "': " + e.what());
  }
}

void write_camera(const CameraModel& model, const std::string& path) {
  json j{{"kind", to_string(model.kind)}, {"fx", model.intr.fx},
         {"fy", model.intr.fy},          {"u0", model.intr.u0},
         {"v0", model.intr.v0},          {"width", model.width},
         {"height", model.height},       {"fov_limit_deg", rad2deg(model.fov_limit)}};
  open_out(path) << j.dump(2) << "\n";
}

namespace {

DetectionRecord detection_from_json(const json& j) {
  DetectionRecord rec;
  rec.image_id = j.at("image_id");
  rec.det.class_id = j.at("class_id");
  rec.det.score = j.at("score");
  rec.det.box2d = box2d_from(j.at("box2d"));
  rec.det.center2d = Pixel{j.at("center2d").at(0), j.at("center2d").at(1)};
  rec.det.depth_out = j.at("depth_out");
  rec.det.dims = vec3_from(j.at("dims"));
  rec.det.alpha = deg2rad(j.at("alpha"));
  if (!(rec.det.depth_out > 0.0))
    throw GeomError(ErrorCode::ParseError, "depth_out must be positive");
  if (!(rec.det.dims.x > 0.0 && rec.det.dims.y > 0.0 && rec.det.dims.z > 0.0))
    throw GeomError(ErrorCode::ParseError, "dims must be positive");
  return rec;
}

json detection_to_json(const DetectionRecord& rec) {
  return json{{"image_id", rec.image_id},
              {"class_id", rec.det.class_id},
              {"score", rec.det.score},
              {"box2d", box2d_to(rec.det.box2d)},
              {"center2d", json::array({rec.det.center2d.u, rec.det.center2d.v})},
              {"depth_out", rec.det.depth_out},
              {"dims", vec3_to(rec.det.dims)},
              {"alpha", rad2deg(rec.det.alpha)}};
}

template <typename Fn>
void for_each_jsonl(const std::string& path, Fn&& fn) {
  std::ifstream f(path);
  if (!f) throw GeomError(ErrorCode::IoError, "cannot open '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    fn(line, lineno);
  }
}

}  // namespace

std::vector<DetectionRecord> read_detections(const std::string& path) {
  std::vector<DetectionRecord> out;
  for_each_jsonl(path, [&](const std::string& line, int lineno) {
    try {
      out.push_back(detection_from_json(json::parse(line)));
    } catch (const std::exception& e) {
      throw GeomError(ErrorCode::ParseError,
                      "'" + path + "' line " + std::to_string(lineno) + ": " + e.what());
    }
  });
  return out;
}

DetectionReadResult read_detections_tolerant(const std::string& path) {
  DetectionReadResult res;
  for_each_jsonl(path, [&](const std::string& line, int lineno) {
    try {
      res.records.push_back(detection_from_json(json::parse(line)));
    } catch (const std::exception& e) {
      ++res.skipped;
      res.warnings.push_back("line " + std::to_string(lineno) + ": " + e.what());
    }
  });
  return res;
}

void write_detections(const std::vector<DetectionRecord>& records, const std::string& path) {
  auto f = open_out(path);
  for (const auto& rec : records) f << detection_to_json(rec).dump() << "\n";
}

std::vector<BoxRecord> read_boxes(const std::string& path) {
  std::vector<BoxRecord> out;
  for_each_jsonl(path, [&](const std::string& line, int lineno) {
    try {
      json j = json::parse(line);
      BoxRecord rec;
      rec.image_id = j.at("image_id");
      rec.class_id = j.at("class_id");
      rec.score = j.at("score");
      rec.box.center = vec3_from(j.at("center"));
      rec.box.dims = vec3_from(j.at("dims"));
      rec.box.yaw = deg2rad(j.at("yaw"));
      if (j.contains("box2d")) rec.box2d = box2d_from(j.at("box2d"));
      out.push_back(rec);
    } catch (const std::exception& e) {
      throw GeomError(ErrorCode::ParseError,
                      "'" + path + "' line " + std::to_string(lineno) + ": " + e.what());
    }
  });
  return out;
}

void write_boxes(const std::vector<BoxRecord>& records, const std::string& path) {
  auto f = open_out(path);
  for (const auto& rec : records) {
    json j{{"image_id", rec.image_id}, {"class_id", rec.class_id},
           {"score", rec.score},       {"center", vec3_to(rec.box.center)},
           {"dims", vec3_to(rec.box.dims)}, {"yaw", rad2deg(rec.box.yaw)}};
    if (rec.box2d) j["box2d"] = box2d_to(*rec.box2d);
    f << j.dump() << "\n";
  }
}

std::vector<GtRecord> read_ground_truth(const std::string& path) {
  std::vector<GtRecord> out;
  for_each_jsonl(path, [&](const std::string& line, int lineno) {
    try {
      json j = json::parse(line);
      GtRecord rec;
      rec.image_id = j.at("image_id");
      rec.class_id = j.at("class_id");
      rec.box.center = vec3_from(j.at("center"));
      rec.box.dims = vec3_from(j.at("dims"));
      rec.box.yaw = deg2rad(j.at("yaw"));
      out.push_back(rec);
    } catch (const std::exception& e) {
      throw GeomError(ErrorCode::ParseError,
                      "'" + path + "' line " + std::to_string(lineno) + ": " + e.what());
    }
  });
  return out;
}

void write_ground_truth(const std::vector<GtRecord>& records, const std::string& path) {
  auto f = open_out(path);
  for (const auto& rec : records) {
    json j{{"image_id", rec.image_id},       {"class_id", rec.class_id},
           {"center", vec3_to(rec.box.center)}, {"dims", vec3_to(rec.box.dims)},
           {"yaw", rad2deg(rec.box.yaw)}};
    f << j.dump() << "\n";
  }
}

SceneConfig read_scene_config(const std::string& path) {
  json j = parse_file(path);
  SceneConfig cfg;
  try {
    cfg.min_objects = j.value("min_objects", cfg.min_objects);
    cfg.max_objects = j.value("max_objects", cfg.max_objects);
    cfg.az_min_deg = j.value("az_min_deg", cfg.az_min_deg);
    cfg.az_max_deg = j.value("az_max_deg", cfg.az_max_deg);
    cfg.rho_min = j.value("rho_min", cfg.rho_min);
    cfg.rho_max = j.value("rho_max", cfg.rho_max);
    cfg.min_range = j.value("min_range", cfg.min_range);
    if (j.contains("elevation")) {
      std::string mode = j.at("elevation");
      if (mode == "ground-plane") {
        cfg.elevation = ElevationMode::GroundPlane;
      } else if (mode == "free") {
        cfg.elevation = ElevationMode::Free;
      } else {
        throw GeomError(ErrorCode::ParseError, "elevation must be 'ground-plane' or 'free'");
      }
    }
    cfg.camera_height = j.value("camera_height", cfg.camera_height);
    cfg.y_min = j.value("y_min", cfg.y_min);
    cfg.y_max = j.value("y_max", cfg.y_max);
    if (j.contains("classes")) {
      cfg.classes.clear();
      for (const auto& c : j.at("classes")) {
        ClassDimsRange r;
        r.class_id = c.at("class_id");
        r.w_min = c.at("width").at(0);
        r.w_max = c.at("width").at(1);
        r.h_min = c.at("height").at(0);
        r.h_max = c.at("height").at(1);
        r.l_min = c.at("length").at(0);
        r.l_max = c.at("length").at(1);
        cfg.classes.push_back(r);
      }
    }
    if (j.contains("noise")) {
      const auto& n = j.at("noise");
      cfg.noise.depth = n.value("depth", 0.0);
      cfg.noise.center_px = n.value("center_px", 0.0);
      cfg.noise.box_px = n.value("box_px", 0.0);
      cfg.noise.dims = n.value("dims", 0.0);
      cfg.noise.alpha = deg2rad(n.value("alpha_deg", 0.0));
      cfg.noise.score = n.value("score", 0.0);
    }
    if (j.contains("rig")) {
      const auto& r = j.at("rig");
      cfg.rig.fx = r.value("fx", cfg.rig.fx);
      cfg.rig.fy = r.value("fy", cfg.rig.fy);
      cfg.rig.fisheye_fov_deg = r.value("fisheye_fov_deg", cfg.rig.fisheye_fov_deg);
      cfg.rig.h_fov_deg = r.value("h_fov_deg", cfg.rig.h_fov_deg);
      cfg.rig.v_fov_deg = r.value("v_fov_deg", cfg.rig.v_fov_deg);
      cfg.rig.pinhole_fov_deg = r.value("pinhole_fov_deg", cfg.rig.pinhole_fov_deg);
    }
  } catch (const json::exception& e) {
    throw GeomError(ErrorCode::ParseError, "scene config '" + path + "': " + e.what());
  }
  return cfg;
}

namespace {

json metrics_to_json(const ClassMetrics& m) {
  json thresholds = json::object();
  for (const auto& [thr, ap] : m.ap3d_by_threshold) {
    std::ostringstream key;
    key << thr;
    thresholds[key.str()] = ap;
  }
  return json{{"ap2d", m.ap2d},
              {"map3d", m.map3d},
              {"aos", m.aos},
              {"mean_iou3d", m.mean_iou3d},
              {"mean_dist_err", m.mean_dist_err},
              {"ap3d_by_threshold", thresholds},
              {"num_gt", m.num_gt},
              {"num_det", m.num_det},
              {"num_matched", m.num_matched}};
}

}  // namespace

void write_report(const EvalReport& report, const std::string& path) {
  json per_class = json::object();
  for (const auto& [cid, m] : report.per_class) per_class[std::to_string(cid)] = metrics_to_json(m);
  json j{{"aggregate", metrics_to_json(report.aggregate)}, {"per_class", per_class}};
  open_out(path) << j.dump(2) << "\n";
}

}  // namespace fisheye3d
