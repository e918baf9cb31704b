// Copyright Contributors to the fisheye3d Project
// SPDX-License-Identifier: Apache-2.0
//
// Command-line driver: warp fisheye images to cylindrical/spherical
// projections, map detector outputs to real-space 3D boxes, and evaluate
// against ground truth. Exit codes: 0 success, 1 internal error,
// 2 usage/input error.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fisheye3d/box.hpp"
#include "fisheye3d/io.hpp"
#include "fisheye3d/metrics.hpp"
#include "fisheye3d/overlay.hpp"
#include "fisheye3d/remap.hpp"
#include "fisheye3d/scene.hpp"

namespace fs = std::filesystem;
using namespace fisheye3d;

namespace {

enum LogLevel { kDebug = 0, kInfo = 1, kWarn = 2, kError = 3 };

LogLevel log_threshold() {
  static LogLevel level = [] {
    const char* env = std::getenv("FISHEYE3D_LOG");
    std::string v = env ? env : "warn";
    if (v == "debug") return kDebug;
    if (v == "info") return kInfo;
    if (v == "error") return kError;
    return kWarn;
  }();
  return level;
}

void log(LogLevel level, const std::string& msg) {
  static const char* names[] = {"debug", "info", "warn", "error"};
  if (level >= log_threshold()) std::cerr << "[" << names[level] << "] " << msg << "\n";
}

fs::path sibling_output(const fs::path& out, const std::string& suffix) {
  return out.parent_path() / (out.stem().string() + suffix);
}

// Derives a warp-target camera from the source intrinsics and a FoV, sized so
// the focal lengths are preserved.
CameraModel derive_camera(ProjectionKind kind, const CameraIntrinsics& base, double h_fov,
                          double v_fov) {
  CameraIntrinsics intr = base;
  int w = 0, h = 0;
  double fov_limit = default_fov_limit(kind);
  switch (kind) {
    case ProjectionKind::Cylindrical: {
      auto size = cylindrical_size_for_fov(base, {h_fov, v_fov});
      w = size.first;
      h = size.second;
      fov_limit = h_fov / 2.0;
      break;
    }
    case ProjectionKind::Spherical:
      if (!(h_fov > 0.0) || h_fov > 2.0 * kPi || !(v_fov > 0.0) || v_fov > kPi)
        throw GeomError(ErrorCode::InvalidFov, "spherical FoV out of range");
      w = static_cast<int>(std::llround(base.fx * h_fov));
      h = static_cast<int>(std::llround(base.fy * v_fov));
      fov_limit = h_fov / 2.0;
      break;
    case ProjectionKind::Pinhole:
      if (!(h_fov > 0.0) || h_fov >= kPi || !(v_fov > 0.0) || v_fov >= kPi)
        throw GeomError(ErrorCode::InvalidFov, "pinhole FoV must be inside (0, 180) degrees");
      w = static_cast<int>(std::llround(2.0 * base.fx * std::tan(h_fov / 2.0)));
      h = static_cast<int>(std::llround(2.0 * base.fy * std::tan(v_fov / 2.0)));
      break;
    case ProjectionKind::FisheyeEquidistant:
      if (!(h_fov > 0.0) || h_fov >= 2.0 * kPi)
        throw GeomError(ErrorCode::InvalidFov, "fisheye FoV must be inside (0, 360) degrees");
      w = 2 * static_cast<int>(std::llround(base.fx * h_fov / 2.0));
      h = w;
      fov_limit = h_fov / 2.0;
      break;
  }
  if (w < 1 || h < 1) throw GeomError(ErrorCode::InvalidFov, "FoV below one pixel");
  intr.u0 = w / 2.0;
  intr.v0 = h / 2.0;
  return make_camera(kind, intr, w, h, fov_limit);
}

struct WarpArgs {
  std::string src_cam, dst_cam, dst_kind, in, out, out_mask, out_cam, save_table;
  double h_fov_deg = 0.0, v_fov_deg = 0.0;
};

int cmd_warp(const WarpArgs& a) {
  CameraModel src = read_camera(a.src_cam);
  CameraModel dst;
  if (!a.dst_cam.empty()) {
    dst = read_camera(a.dst_cam);
  } else if (!a.dst_kind.empty()) {
    if (!(a.h_fov_deg > 0.0) || !(a.v_fov_deg > 0.0))
      throw GeomError(ErrorCode::InvalidArgument, "--dst-kind requires --h-fov and --v-fov");
    dst = derive_camera(projection_kind_from_string(a.dst_kind), src.intr, deg2rad(a.h_fov_deg),
                        deg2rad(a.v_fov_deg));
  } else {
    throw GeomError(ErrorCode::InvalidArgument, "need either --dst-cam or --dst-kind");
  }
  ImageBuffer img = read_png(a.in);
  RemapTable table = build_remap_table(src, dst);
  ImageBuffer warped = remap(img, table);
  ImageBuffer mask = validity_mask(table);
  write_png(warped, a.out);
  fs::path out(a.out);
  std::string mask_path =
      a.out_mask.empty() ? sibling_output(out, ".mask.png").string() : a.out_mask;
  std::string cam_path = a.out_cam.empty() ? sibling_output(out, ".cam.json").string() : a.out_cam;
  write_png(mask, mask_path);
  write_camera(dst, cam_path);
  if (!a.save_table.empty()) save_remap_table(table, a.save_table);
  log(kInfo, "warped " + a.in + " -> " + a.out + " (" + std::to_string(dst.width) + "x" +
                 std::to_string(dst.height) + ")");
  return 0;
}

struct TransformArgs {
  std::string cam, mode = "cylindrical", in, out;
};

int cmd_transform(const TransformArgs& a) {
  CameraModel cam = read_camera(a.cam);
  InterpretationMode mode = interpretation_mode_from_string(a.mode);
  DetectionReadResult input = read_detections_tolerant(a.in);
  for (const auto& w : input.warnings) log(kWarn, a.in + " " + w);
  std::vector<BoxRecord> out;
  int failed = 0;
  for (const auto& rec : input.records) {
    try {
      BoxRecord box;
      box.image_id = rec.image_id;
      box.class_id = rec.det.class_id;
      box.score = rec.det.score;
      box.box = detection_to_box(rec.det, cam, mode);
      box.box2d = rec.det.box2d;
      out.push_back(box);
    } catch (const GeomError& e) {
      ++failed;
      log(kWarn, std::string("skipping detection: ") + e.what());
    }
  }
  write_boxes(out, a.out);
  int skipped = input.skipped + failed;
  if (skipped > 0)
    std::cerr << "transform: " << out.size() << " boxes written, " << skipped << " skipped\n";
  if (out.empty() && skipped > 0) {
    log(kError, "no record could be transformed");
    return 1;
  }
  return 0;
}

struct EvaluateArgs {
  std::string dets, gt, cam, mask, out;
};

int cmd_evaluate(const EvaluateArgs& a) {
  CameraModel cam = read_camera(a.cam);
  std::vector<BoxRecord> det_records = read_boxes(a.dets);
  std::vector<GtRecord> gt_records = read_ground_truth(a.gt);
  std::vector<EvalDetection> dets;
  dets.reserve(det_records.size());
  for (const auto& r : det_records)
    dets.push_back(EvalDetection{r.image_id, r.class_id, r.score, r.box, r.box2d});
  std::vector<EvalGroundTruth> gts;
  gts.reserve(gt_records.size());
  for (const auto& r : gt_records) gts.push_back(EvalGroundTruth{r.image_id, r.class_id, r.box});
  EvalReport report;
  if (!a.mask.empty()) {
    ImageBuffer mask = read_png(a.mask);
    report = evaluate(dets, gts, cam, &mask);
  } else {
    report = evaluate(dets, gts, cam);
  }
  write_report(report, a.out);
  const ClassMetrics& m = report.aggregate;
  std::cout << "2D-AP " << m.ap2d << "  3D-mAP " << m.map3d << "  AOS " << m.aos << "  IoU "
            << m.mean_iou3d << "  Dist.Err " << m.mean_dist_err << "  (gt " << m.num_gt
            << ", det " << m.num_det << ", matched " << m.num_matched << ")\n";
  return 0;
}

struct SynthArgs {
  std::string config, out_dir;
  std::uint64_t seed = 0;
};

int cmd_synth(const SynthArgs& a) {
  SceneConfig cfg;
  if (!a.config.empty()) cfg = read_scene_config(a.config);
  Scene scene = generate_scene(cfg, a.seed);
  fs::create_directories(a.out_dir);
  fs::path dir(a.out_dir);

  std::vector<GtRecord> gt;
  gt.reserve(scene.objects.size());
  for (const auto& obj : scene.objects) gt.push_back(GtRecord{0, obj.class_id, obj.box});
  write_ground_truth(gt, (dir / "gt.jsonl").string());

  const std::pair<const char*, const CameraModel*> cams[] = {
      {"fisheye", &scene.rig.fisheye},
      {"cylindrical", &scene.rig.cylindrical},
      {"spherical", &scene.rig.spherical},
      {"pinhole", &scene.rig.pinhole}};
  for (const auto& [name, model] : cams) {
    write_camera(*model, (dir / (std::string(name) + ".cam.json")).string());
    write_png(render_scene(scene, *model), (dir / (std::string(name) + ".png")).string());
  }
  std::cout << "scene with " << scene.objects.size() << " objects written to " << a.out_dir
            << "\n";
  return 0;
}

struct MockDetectArgs {
  std::string scene_dir, mode = "cylindrical", proj = "cylindrical", out;
  double noise_depth = 0.0, noise_center = 0.0, noise_box = 0.0, noise_dims = 0.0,
         noise_alpha_deg = 0.0, noise_score = 0.0;
  std::uint64_t seed = 0;
};

int cmd_mock_detect(const MockDetectArgs& a) {
  fs::path dir(a.scene_dir);
  Scene scene;
  scene.rig.fisheye = read_camera((dir / "fisheye.cam.json").string());
  scene.rig.cylindrical = read_camera((dir / "cylindrical.cam.json").string());
  scene.rig.spherical = read_camera((dir / "spherical.cam.json").string());
  scene.rig.pinhole = read_camera((dir / "pinhole.cam.json").string());
  for (const auto& rec : read_ground_truth((dir / "gt.jsonl").string()))
    scene.objects.push_back(SceneObject{rec.box, rec.class_id});
  scene.seed = a.seed;

  InterpretationMode mode = interpretation_mode_from_string(a.mode);
  const CameraModel* model = nullptr;
  switch (mode) {
    case InterpretationMode::CylindricalVirtual: model = &scene.rig.cylindrical; break;
    case InterpretationMode::SphericalVirtual: model = &scene.rig.spherical; break;
    case InterpretationMode::NaiveDirection: {
      // The naive baseline still consumes a warped image; --proj picks which.
      if (a.proj == "cylindrical") {
        model = &scene.rig.cylindrical;
      } else if (a.proj == "spherical") {
        model = &scene.rig.spherical;
      } else if (a.proj == "pinhole") {
        model = &scene.rig.pinhole;
      } else {
        throw GeomError(ErrorCode::InvalidArgument,
                        "--proj must be cylindrical, spherical or pinhole");
      }
      break;
    }
  }
  NoiseSpec noise{a.noise_depth,
                  a.noise_center,
                  a.noise_box,
                  a.noise_dims,
                  deg2rad(a.noise_alpha_deg),
                  a.noise_score};
  std::vector<VirtualDetection> dets = mock_detect(scene, *model, mode, noise, a.seed);
  std::vector<DetectionRecord> records;
  records.reserve(dets.size());
  for (const auto& d : dets) records.push_back(DetectionRecord{0, d});
  write_detections(records, a.out);
  std::cout << records.size() << " detections written to " << a.out << "\n";
  return 0;
}

struct OverlayArgs {
  std::string cam, boxes, in, out;
  int image_id = 0;
};

int cmd_overlay(const OverlayArgs& a) {
  CameraModel cam = read_camera(a.cam);
  ImageBuffer img = read_png(a.in);
  int drawn = 0;
  for (const auto& rec : read_boxes(a.boxes)) {
    if (rec.image_id != a.image_id) continue;
    std::uint8_t rgb[3];
    object_color(rec.class_id, rgb);
    draw_box_overlay(img, cam, rec.box, rgb);
    ++drawn;
  }
  write_png(img, a.out);
  log(kInfo, "overlaid " + std::to_string(drawn) + " boxes onto " + a.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"3D object detection geometry for fisheye cameras"};
  app.require_subcommand(1);

  WarpArgs warp_args;
  auto* warp = app.add_subcommand("warp", "Warp an image between projection models");
  warp->add_option("--src-cam", warp_args.src_cam, "Source camera file")
      ->required()
      ->check(CLI::ExistingFile);
  warp->add_option("--dst-cam", warp_args.dst_cam, "Target camera file")->check(CLI::ExistingFile);
  warp->add_option("--dst-kind", warp_args.dst_kind,
                   "Target projection kind (with --h-fov/--v-fov)");
  warp->add_option("--h-fov", warp_args.h_fov_deg, "Target horizontal FoV, degrees");
  warp->add_option("--v-fov", warp_args.v_fov_deg, "Target vertical FoV, degrees");
  warp->add_option("--in", warp_args.in, "Input image")->required()->check(CLI::ExistingFile);
  warp->add_option("--out", warp_args.out, "Output image")->required();
  warp->add_option("--out-mask", warp_args.out_mask, "Validity mask path");
  warp->add_option("--out-cam", warp_args.out_cam, "Target camera output path");
  warp->add_option("--save-table", warp_args.save_table, "Write the remap table (binary)");

  TransformArgs transform_args;
  auto* transform =
      app.add_subcommand("transform", "Map detector outputs to real-space 3D boxes");
  transform->add_option("--cam", transform_args.cam, "Camera the detector consumed")
      ->required()
      ->check(CLI::ExistingFile);
  transform->add_option("--mode", transform_args.mode,
                        "Interpretation mode: cylindrical, spherical or naive");
  transform->add_option("--in", transform_args.in, "Detections (JSONL)")
      ->required()
      ->check(CLI::ExistingFile);
  transform->add_option("--out", transform_args.out, "Output boxes (JSONL)")->required();

  EvaluateArgs eval_args;
  auto* evaluate = app.add_subcommand("evaluate", "Score detections against ground truth");
  evaluate->add_option("--dets", eval_args.dets, "Detected boxes (JSONL)")
      ->required()
      ->check(CLI::ExistingFile);
  evaluate->add_option("--gt", eval_args.gt, "Ground truth (JSONL)")
      ->required()
      ->check(CLI::ExistingFile);
  evaluate->add_option("--cam", eval_args.cam, "Camera the detector consumed")
      ->required()
      ->check(CLI::ExistingFile);
  evaluate->add_option("--mask", eval_args.mask, "Validity mask")->check(CLI::ExistingFile);
  evaluate->add_option("--out", eval_args.out, "Report path (JSON)")->required();

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "Generate a labeled synthetic scene");
  synth->add_option("--config", synth_args.config, "Scene config (JSON)")
      ->check(CLI::ExistingFile);
  synth->add_option("--seed", synth_args.seed, "Random seed");
  synth->add_option("--out-dir", synth_args.out_dir, "Output directory")->required();

  MockDetectArgs mock_args;
  auto* mock = app.add_subcommand("mock-detect", "Emulate an ideal detector on a scene");
  mock->add_option("--scene", mock_args.scene_dir, "Scene directory from synth")
      ->required()
      ->check(CLI::ExistingDirectory);
  mock->add_option("--mode", mock_args.mode, "cylindrical, spherical or naive");
  mock->add_option("--proj", mock_args.proj, "Projection consumed in naive mode");
  mock->add_option("--noise-depth", mock_args.noise_depth, "Depth noise sigma, meters");
  mock->add_option("--noise-center", mock_args.noise_center, "Center keypoint noise, pixels");
  mock->add_option("--noise-box", mock_args.noise_box, "2D box side noise, pixels");
  mock->add_option("--noise-dims", mock_args.noise_dims, "Dimension noise, meters");
  mock->add_option("--noise-alpha-deg", mock_args.noise_alpha_deg, "Allocentric noise, degrees");
  mock->add_option("--noise-score", mock_args.noise_score, "Score noise");
  mock->add_option("--seed", mock_args.seed, "Random seed");
  mock->add_option("--out", mock_args.out, "Output detections (JSONL)")->required();

  OverlayArgs overlay_args;
  auto* overlay = app.add_subcommand("overlay", "Draw 3D boxes onto an image");
  overlay->add_option("--cam", overlay_args.cam, "Camera of the image")
      ->required()
      ->check(CLI::ExistingFile);
  overlay->add_option("--boxes", overlay_args.boxes, "Boxes (JSONL)")
      ->required()
      ->check(CLI::ExistingFile);
  overlay->add_option("--in", overlay_args.in, "Input image")
      ->required()
      ->check(CLI::ExistingFile);
  overlay->add_option("--out", overlay_args.out, "Output image")->required();
  overlay->add_option("--image-id", overlay_args.image_id, "Image id to draw");

  try {
    app.parse(argc, argv);
    if (warp->parsed()) return cmd_warp(warp_args);
    if (transform->parsed()) return cmd_transform(transform_args);
    if (evaluate->parsed()) return cmd_evaluate(eval_args);
    if (synth->parsed()) return cmd_synth(synth_args);
    if (mock->parsed()) return cmd_mock_detect(mock_args);
    if (overlay->parsed()) return cmd_overlay(overlay_args);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const GeomError& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::IoError:
      case ErrorCode::ParseError:
      case ErrorCode::InvalidArgument:
      case ErrorCode::InvalidFov:
      case ErrorCode::SizeMismatch: return 2;
      default: return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
