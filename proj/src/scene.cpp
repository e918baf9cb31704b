// Copyright Contributors to the fisheye3d Project
// SPDX-License-Identifier: Apache-2.0

#include "fisheye3d/scene.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace fisheye3d {

namespace {

// Deterministic draws across platforms: mt19937_64 is fully specified by the
// standard, and the uniform/normal mappings below avoid the
// implementation-defined std distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed ^ 0x9e3779b97f4a7c15ull) {}

  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }  // [0, 1)
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  int uniform_int(int a, int b) {  // inclusive range
    return std::min(b, a + static_cast<int>(uniform() * (b - a + 1)));
  }

  double normal(double sigma) {  // Marsaglia polar
    if (sigma <= 0.0) return 0.0;
    if (has_spare_) {
      has_spare_ = false;
      return spare_ * sigma;
    }
    double u, v, s;
    do {
      u = uniform(-1.0, 1.0);
      v = uniform(-1.0, 1.0);
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f * sigma;
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace

CameraRig make_rig(const CameraRigConfig& cfg) {
  double theta_max = deg2rad(cfg.fisheye_fov_deg) / 2.0;
  double h_fov = deg2rad(cfg.h_fov_deg);
  double v_fov = deg2rad(cfg.v_fov_deg);

  int fw = 2 * static_cast<int>(std::llround(cfg.fx * theta_max));
  CameraModel fisheye = make_camera(ProjectionKind::FisheyeEquidistant,
                                    {cfg.fx, cfg.fy, fw / 2.0, fw / 2.0}, fw, fw, theta_max);

  auto [cw, ch] = cylindrical_size_for_fov({cfg.fx, cfg.fy, 0, 0}, {h_fov, v_fov});
  CameraModel cylindrical = make_camera(ProjectionKind::Cylindrical,
                                        {cfg.fx, cfg.fy, cw / 2.0, ch / 2.0}, cw, ch, h_fov / 2.0);

  int sw = static_cast<int>(std::llround(cfg.fx * h_fov));
  int sh = static_cast<int>(std::llround(cfg.fy * v_fov));
  CameraModel spherical = make_camera(ProjectionKind::Spherical,
                                      {cfg.fx, cfg.fy, sw / 2.0, sh / 2.0}, sw, sh, h_fov / 2.0);

  double ph_fov = deg2rad(std::min(cfg.pinhole_fov_deg, 170.0));
  int pw = static_cast<int>(std::llround(2.0 * cfg.fx * std::tan(ph_fov / 2.0)));
  int ph = static_cast<int>(
      std::llround(2.0 * cfg.fy * std::tan(std::min(v_fov, ph_fov) / 2.0)));
  CameraModel pinhole = make_camera(ProjectionKind::Pinhole,
                                    {cfg.fx, cfg.fy, pw / 2.0, ph / 2.0}, pw, ph, kPi / 2.0);

  return CameraRig{fisheye, cylindrical, spherical, pinhole};
}

Scene generate_scene(const SceneConfig& cfg, std::uint64_t seed) {
  if (cfg.min_objects < 0 || cfg.max_objects < cfg.min_objects)
    throw GeomError(ErrorCode::InvalidArgument, "bad object count range");
  if (!(cfg.rho_min > 0.0) || cfg.rho_max < cfg.rho_min)
    throw GeomError(ErrorCode::InvalidArgument, "bad rho range");
  if (cfg.rho_max < cfg.min_range)
    throw GeomError(ErrorCode::InvalidArgument, "rho range entirely below minimum range");
  if (cfg.az_max_deg < cfg.az_min_deg)
    throw GeomError(ErrorCode::InvalidArgument, "bad azimuth range");
  if (cfg.classes.empty())
    throw GeomError(ErrorCode::InvalidArgument, "no object classes configured");

  Scene scene;
  scene.rig = make_rig(cfg.rig);
  scene.seed = seed;
  Rng rng(seed);

  int count = rng.uniform_int(cfg.min_objects, cfg.max_objects);
  scene.objects.reserve(count);
  const int max_attempts = 1000;
  for (int i = 0; i < count; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < max_attempts && !placed; ++attempt) {
      const ClassDimsRange& cls =
          cfg.classes[rng.uniform_int(0, static_cast<int>(cfg.classes.size()) - 1)];
      Box3D box;
      box.dims = Vec3{rng.uniform(cls.w_min, cls.w_max), rng.uniform(cls.h_min, cls.h_max),
                      rng.uniform(cls.l_min, cls.l_max)};
      double phi = deg2rad(rng.uniform(cfg.az_min_deg, cfg.az_max_deg));
      double rho = rng.uniform(cfg.rho_min, cfg.rho_max);
      double y = cfg.elevation == ElevationMode::GroundPlane
                     ? cfg.camera_height - box.dims.y / 2.0
                     : rng.uniform(cfg.y_min, cfg.y_max);
      box.center = Vec3{rho * std::sin(phi), y, rho * std::cos(phi)};
      box.yaw = wrap_angle(rng.uniform(-kPi, kPi));

      double half_diag = box.dims.norm() / 2.0;
      if (box.center.norm() - half_diag < cfg.min_range) continue;
      if (angular_coords(box.center).viewing_angle > scene.rig.fisheye.fov_limit) continue;
      scene.objects.push_back(SceneObject{box, cls.class_id});
      placed = true;
    }
    if (!placed)
      throw GeomError(ErrorCode::InvalidArgument,
                      "infeasible scene config: cannot place objects within constraints");
  }
  return scene;
}

void object_color(int index, std::uint8_t rgb[3]) {
  static constexpr std::uint8_t kPalette[8][3] = {
      {230, 80, 60},  {70, 180, 90},  {80, 110, 230}, {230, 200, 60},
      {190, 80, 200}, {70, 200, 210}, {240, 140, 50}, {150, 220, 120}};
  const std::uint8_t* c = kPalette[index % 8];
  rgb[0] = c[0];
  rgb[1] = c[1];
  rgb[2] = c[2];
}

namespace {

// Ring-ordered corner ids per face, for bilinear surface interpolation.
constexpr int kFaces[6][4] = {{0, 2, 6, 4}, {1, 3, 7, 5}, {0, 1, 5, 4},
                              {2, 3, 7, 6}, {0, 1, 3, 2}, {4, 5, 7, 6}};

double chord_px(const CameraModel& m, const Vec3& a, const Vec3& b) {
  Vec3 mid = (a + b) * 0.5;
  auto pa = try_project(m, a);
  auto pm = try_project(m, mid);
  auto pb = try_project(m, b);
  double len = 0.0;
  if (pa && pm) len += std::hypot(pa->u - pm->u, pa->v - pm->v);
  if (pm && pb) len += std::hypot(pm->u - pb->u, pm->v - pb->v);
  if (!pm && pa && pb) len = std::hypot(pa->u - pb->u, pa->v - pb->v);
  return len;
}

void render_face(ImageBuffer& img, const CameraModel& model, const Vec3& a, const Vec3& b,
                 const Vec3& c, const Vec3& d, const std::uint8_t bright[3],
                 const std::uint8_t dim[3]) {
  // Sampling density from projected edge lengths, oversampled so the splats
  // leave no holes; curvature is picked up via the edge midpoints.
  double len_s = std::max(chord_px(model, a, b), chord_px(model, d, c));
  double len_t = std::max(chord_px(model, a, d), chord_px(model, b, c));
  if (len_s <= 0.0 && len_t <= 0.0) return;
  int ns = std::clamp(static_cast<int>(std::ceil(len_s * 2.0)) + 2, 12, 2400);
  int nt = std::clamp(static_cast<int>(std::ceil(len_t * 2.0)) + 2, 12, 2400);
  double budget = 3.0e6;
  if (static_cast<double>(ns) * nt > budget) {
    double scale = std::sqrt(budget / (static_cast<double>(ns) * nt));
    ns = std::max(12, static_cast<int>(ns * scale));
    nt = std::max(12, static_cast<int>(nt * scale));
  }
  for (int j = 0; j < nt; ++j) {
    double t = static_cast<double>(j) / (nt - 1);
    for (int i = 0; i < ns; ++i) {
      double s = static_cast<double>(i) / (ns - 1);
      Vec3 p = a * ((1 - s) * (1 - t)) + b * (s * (1 - t)) + c * (s * t) + d * ((1 - s) * t);
      auto px = try_project(model, p);
      if (!px) continue;
      int x = static_cast<int>(std::floor(px->u));
      int y = static_cast<int>(std::floor(px->v));
      if (!img.in_bounds(x, y)) continue;
      bool check = (static_cast<int>(s * 8.0) + static_cast<int>(t * 8.0)) & 1;
      const std::uint8_t* col = check ? dim : bright;
      img.at(x, y, 0) = col[0];
      img.at(x, y, 1) = col[1];
      img.at(x, y, 2) = col[2];
    }
  }
}

}  // namespace

ImageBuffer render_scene(const Scene& scene, const CameraModel& model) {
  ImageBuffer img = ImageBuffer::create(model.width, model.height, 3);
  std::vector<int> order(scene.objects.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int l, int r) {
    return scene.objects[l].box.center.norm() > scene.objects[r].box.center.norm();
  });
  for (int idx : order) {
    const Box3D& box = scene.objects[idx].box;
    auto cs = corners(box);
    std::uint8_t bright[3], dim[3];
    object_color(idx, bright);
    for (int c = 0; c < 3; ++c) dim[c] = static_cast<std::uint8_t>(bright[c] * 0.55);

    int face_order[6] = {0, 1, 2, 3, 4, 5};
    double face_dist[6];
    for (int f = 0; f < 6; ++f) {
      Vec3 fc = (cs[kFaces[f][0]] + cs[kFaces[f][1]] + cs[kFaces[f][2]] + cs[kFaces[f][3]]) * 0.25;
      face_dist[f] = fc.norm();
    }
    std::sort(face_order, face_order + 6,
              [&](int l, int r) { return face_dist[l] > face_dist[r]; });
    for (int f : face_order) {
      render_face(img, model, cs[kFaces[f][0]], cs[kFaces[f][1]], cs[kFaces[f][2]],
                  cs[kFaces[f][3]], bright, dim);
    }
  }
  return img;
}

namespace {

int count_visible_edge_samples(const Box3D& box, const CameraModel& model, int samples_per_edge) {
  static constexpr int kEdges[12][2] = {{0, 1}, {2, 3}, {4, 5}, {6, 7}, {0, 2}, {1, 3},
                                        {4, 6}, {5, 7}, {0, 4}, {1, 5}, {2, 6}, {3, 7}};
  auto cs = corners(box);
  int count = 0;
  for (const auto& e : kEdges) {
    for (int j = 0; j < samples_per_edge; ++j) {
      double t = static_cast<double>(j) / (samples_per_edge - 1);
      Vec3 p = cs[e[0]] + (cs[e[1]] - cs[e[0]]) * t;
      if (auto px = try_project(model, p)) {
        if (px->u >= 0.0 && px->u <= model.width && px->v >= 0.0 && px->v <= model.height)
          ++count;
      }
    }
  }
  return count;
}

double native_virtual_depth(const CameraModel& model, const AngularCoords& ac) {
  switch (model.kind) {
    case ProjectionKind::Cylindrical: return ac.cyl_radius;
    case ProjectionKind::Spherical: return ac.r;
    case ProjectionKind::Pinhole: return ac.r * std::cos(ac.viewing_angle);  // = z
    case ProjectionKind::FisheyeEquidistant:
      throw GeomError(ErrorCode::InvalidArgument,
                      "raw fisheye images have no shift-invariant depth measure to emulate");
  }
  throw GeomError(ErrorCode::InvalidArgument, "unknown projection kind");
}

}  // namespace

std::vector<VirtualDetection> mock_detect(const Scene& scene, const CameraModel& model,
                                          InterpretationMode mode, const NoiseSpec& noise,
                                          std::uint64_t seed) {
  if (mode == InterpretationMode::CylindricalVirtual &&
      model.kind != ProjectionKind::Cylindrical)
    throw GeomError(ErrorCode::InvalidArgument, "cylindrical mode needs a cylindrical camera");
  if (mode == InterpretationMode::SphericalVirtual && model.kind != ProjectionKind::Spherical)
    throw GeomError(ErrorCode::InvalidArgument, "spherical mode needs a spherical camera");

  Rng rng(seed);
  std::vector<VirtualDetection> dets;
  for (const SceneObject& obj : scene.objects) {
    if (count_visible_edge_samples(obj.box, model, 16) < 4) continue;
    Box2D box2d;
    Pixel center2d;
    try {
      box2d = project_box(obj.box, model);
      center2d = project(model, obj.box.center);
    } catch (const GeomError&) {
      continue;  // center outside the warped FoV
    }
    box2d.u_min = std::max(box2d.u_min, 0.0);
    box2d.v_min = std::max(box2d.v_min, 0.0);
    box2d.u_max = std::min(box2d.u_max, static_cast<double>(model.width));
    box2d.v_max = std::min(box2d.v_max, static_cast<double>(model.height));
    if (box2d.u_min >= box2d.u_max || box2d.v_min >= box2d.v_max) continue;

    AngularCoords ac = angular_coords(obj.box.center);
    VirtualDetection det;
    det.box2d = box2d;
    det.center2d = center2d;
    det.depth_out = native_virtual_depth(model, ac);
    det.dims = obj.box.dims;
    det.alpha = global_to_allocentric_yaw(obj.box.yaw, ac.azimuth);
    det.score = 1.0;
    det.class_id = obj.class_id;

    det.depth_out = std::max(0.05, det.depth_out + rng.normal(noise.depth));
    det.center2d.u += rng.normal(noise.center_px);
    det.center2d.v += rng.normal(noise.center_px);
    det.box2d.u_min += rng.normal(noise.box_px);
    det.box2d.v_min += rng.normal(noise.box_px);
    det.box2d.u_max += rng.normal(noise.box_px);
    det.box2d.v_max += rng.normal(noise.box_px);
    if (det.box2d.u_min > det.box2d.u_max) std::swap(det.box2d.u_min, det.box2d.u_max);
    if (det.box2d.v_min > det.box2d.v_max) std::swap(det.box2d.v_min, det.box2d.v_max);
    det.dims.x = std::max(0.05, det.dims.x + rng.normal(noise.dims));
    det.dims.y = std::max(0.05, det.dims.y + rng.normal(noise.dims));
    det.dims.z = std::max(0.05, det.dims.z + rng.normal(noise.dims));
    det.alpha = wrap_angle(det.alpha + rng.normal(noise.alpha));
    det.score = std::clamp(det.score + rng.normal(noise.score), 0.0, 1.0);
    dets.push_back(det);
  }
  return dets;
}

}  // namespace fisheye3d
