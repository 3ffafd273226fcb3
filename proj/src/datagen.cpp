#include "artk/datagen.hpp"

#include "artk/articulation.hpp"
#include "artk/geometry.hpp"
#include "artk/parallel.hpp"
#include "artk/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>

namespace artk {

std::string_view to_string(TemplateKind kind) {
  switch (kind) {
    case TemplateKind::cabinet_drawers: return "cabinet_drawers";
    case TemplateKind::cabinet_doors: return "cabinet_doors";
    case TemplateKind::mixed: return "mixed";
    case TemplateKind::lid_box: return "lid_box";
  }
  return "unknown";
}

TemplateKind template_kind_from_string(std::string_view name) {
  for (auto kind : kAllTemplateKinds) {
    if (to_string(kind) == name) return kind;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown template kind '" + std::string(name) + "'");
}

std::string_view to_string(SplitKind split) { return split == SplitKind::per_image ? "per_image" : "per_object"; }

SplitKind split_kind_from_string(std::string_view name) {
  if (name == "image" || name == "per_image") return SplitKind::per_image;
  if (name == "object" || name == "per_object") return SplitKind::per_object;
  throw Error(ErrorKind::InvalidArgument, "unknown split '" + std::string(name) + "'");
}

std::string mesh_file_name(const std::string& object_id) { return object_id + ".obj"; }

namespace {

constexpr double kPanelThickness = 0.02;
constexpr double kGap = 0.005;

// Axis-aligned box as its own part, outward-facing triangles.
void add_box(Mesh& mesh, const std::string& part_id, const Vec3& lo, const Vec3& hi) {
  const std::size_t base = mesh.vertices.size();
  for (int i = 0; i < 8; ++i) {
    mesh.vertices.emplace_back((i & 1) ? hi.x() : lo.x(), (i & 2) ? hi.y() : lo.y(), (i & 4) ? hi.z() : lo.z());
  }
  static constexpr std::array<std::array<std::size_t, 3>, 12> kTriangles = {{
      {0, 4, 6}, {0, 6, 2},  // -x
      {1, 3, 7}, {1, 7, 5},  // +x
      {0, 1, 5}, {0, 5, 4},  // -y
      {2, 6, 7}, {2, 7, 3},  // +y
      {0, 2, 3}, {0, 3, 1},  // -z
      {4, 5, 7}, {4, 7, 6},  // +z
  }};
  PartGroup part{part_id, {}};
  for (const auto& t : kTriangles) {
    part.face_indices.push_back(mesh.faces.size());
    mesh.faces.push_back({base + t[0], base + t[1], base + t[2]});
  }
  mesh.parts.push_back(std::move(part));
}

struct Builder {
  const GeneratorConfig& config;
  Rng& rng;
  Mesh mesh;
  std::vector<JointSpec> joints;
  double width = 0, height = 0, depth = 0;

  void body() {
    width = rng.uniform(config.min_body_dim, config.max_body_dim);
    height = rng.uniform(config.min_body_dim, config.max_body_dim);
    depth = rng.uniform(config.min_body_dim, config.max_body_dim);
    add_box(mesh, "body", Vec3::Zero(), Vec3(width, height, depth));
  }

  // Drawers stacked in [y0, y1), sliding out along +Z.
  void drawers(int count, double y0, double y1, int first_index) {
    const double step = (y1 - y0) / count;
    for (int i = 0; i < count; ++i) {
      const std::string id = "drawer_" + std::to_string(first_index + i);
      const Vec3 lo(kGap, y0 + i * step + kGap, 0.2 * depth);
      const Vec3 hi(width - kGap, y0 + (i + 1) * step - kGap, depth + kPanelThickness);
      add_box(mesh, id, lo, hi);
      JointSpec j;
      j.part_id = id;
      j.motion_type = MotionType::prismatic;
      j.axis = Vec3::UnitZ();
      j.origin = Vec3(0.5 * (lo.x() + hi.x()), 0.5 * (lo.y() + hi.y()), hi.z());
      j.max_magnitude = config.prismatic_depth_fraction * depth;
      joints.push_back(j);
    }
  }

  // Doors covering the front over [y0, y1); each hinges on its outer vertical edge.
  void doors(int count, double y0, double y1, int first_index) {
    const double w = width / count;
    for (int i = 0; i < count; ++i) {
      const std::string id = "door_" + std::to_string(first_index + i);
      const Vec3 lo(i * w + (i > 0 ? kGap : 0.0), y0, depth);
      const Vec3 hi((i + 1) * w - (i + 1 < count ? kGap : 0.0), y1, depth + kPanelThickness);
      add_box(mesh, id, lo, hi);
      bool hinge_left = i == 0;
      if (count == 1) hinge_left = rng.below(2) == 0;
      JointSpec j;
      j.part_id = id;
      j.motion_type = MotionType::revolute;
      j.axis = hinge_left ? Vec3(0, -1, 0) : Vec3(0, 1, 0);
      j.origin = Vec3(hinge_left ? lo.x() : hi.x(), 0.5 * (y0 + y1), depth);
      j.max_magnitude = config.max_revolute_deg * std::numbers::pi / 180.0;
      joints.push_back(j);
    }
  }

  // Lid on top, hinged on one of its four bottom edges so it lifts upward.
  void lid() {
    const Vec3 lo(0, height, 0);
    const Vec3 hi(width, height + kPanelThickness, depth);
    add_box(mesh, "lid_0", lo, hi);
    JointSpec j;
    j.part_id = "lid_0";
    j.motion_type = MotionType::revolute;
    switch (rng.below(4)) {
      case 0:  // back
        j.axis = Vec3(-1, 0, 0);
        j.origin = Vec3(0.5 * width, height, 0);
        break;
      case 1:  // front
        j.axis = Vec3(1, 0, 0);
        j.origin = Vec3(0.5 * width, height, depth);
        break;
      case 2:  // left
        j.axis = Vec3(0, 0, 1);
        j.origin = Vec3(0, height, 0.5 * depth);
        break;
      default:  // right
        j.axis = Vec3(0, 0, -1);
        j.origin = Vec3(width, height, 0.5 * depth);
        break;
    }
    j.max_magnitude = config.max_revolute_deg * std::numbers::pi / 180.0;
    joints.push_back(j);
  }
};

ArticulatedObject build_once(TemplateKind kind, std::uint64_t seed, const GeneratorConfig& config) {
  Rng rng(seed);
  Builder b{config, rng, {}, {}};
  b.body();
  switch (kind) {
    case TemplateKind::cabinet_drawers:
      b.drawers(2 + static_cast<int>(rng.below(3)), 0.0, b.height, 0);
      break;
    case TemplateKind::cabinet_doors:
      b.doors(1 + static_cast<int>(rng.below(2)), 0.0, b.height, 0);
      break;
    case TemplateKind::mixed: {
      const double split = b.height * rng.uniform(0.35, 0.55);
      b.drawers(1 + static_cast<int>(rng.below(2)), 0.0, split, 0);
      b.doors(1 + static_cast<int>(rng.below(2)), split + kGap, b.height, 0);
      break;
    }
    case TemplateKind::lid_box:
      b.lid();
      break;
  }

  // Normalize; joint origins follow the vertices, lengths scale.
  auto normalized = normalize_to_unit_box(b.mesh);
  const auto& t = normalized.transform;
  for (auto& j : b.joints) {
    j.origin = t.apply(j.origin);
    if (j.motion_type == MotionType::prismatic) {
      j.min_magnitude *= t.scale;
      j.max_magnitude *= t.scale;
    }
  }

  ArticulatedObject object;
  object.object_id = "obj";
  object.kind = kind;
  object.mesh = std::move(normalized.geometry);
  object.joints = std::move(b.joints);
  return object;
}

bool parts_large_enough(const ArticulatedObject& object, double min_fraction) {
  const double total = surface_area(object.mesh);
  return std::all_of(object.joints.begin(), object.joints.end(), [&](const JointSpec& j) {
    return surface_area(object.mesh, j.part_id) / total >= min_fraction;
  });
}

}  // namespace

ArticulatedObject generate_object(TemplateKind kind, std::uint64_t seed, const GeneratorConfig& config) {
  constexpr int kMaxAttempts = 1000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const std::uint64_t draw_seed = attempt == 0 ? seed : derive_seed(seed, static_cast<std::uint64_t>(attempt));
    ArticulatedObject object = build_once(kind, draw_seed, config);
    if (parts_large_enough(object, config.min_part_area_fraction)) {
      object.seed = seed;
      object.attempts = attempt + 1;
      return object;
    }
  }
  throw Error(ErrorKind::InvalidArgument, "no object with large enough parts after 1000 draws; check the config");
}

PoseSpec sample_pose(std::uint64_t seed, const GeneratorConfig& config) {
  Rng rng(seed);
  PoseSpec pose;
  pose.azimuth_deg = rng.uniform(config.azimuth_range[0], config.azimuth_range[1]);
  pose.elevation_deg = rng.uniform(config.elevation_range[0], config.elevation_range[1]);
  pose.inplane_deg = rng.uniform(config.inplane_range[0], config.inplane_range[1]);
  return pose;
}

SceneSample sample_scene(const ArticulatedObject& object, std::uint64_t seed, const std::string& scene_id,
                         const GeneratorConfig& config) {
  if (object.joints.empty()) throw Error(ErrorKind::InvalidArgument, "object has no joints");
  Rng rng(seed);

  AnnotationRecord r;
  r.scene_id = scene_id;
  r.object_id = object.object_id;
  r.mesh_path = mesh_file_name(object.object_id);
  r.pose = sample_pose(rng.next_u64(), config);
  r.fov_deg = rng.uniform(config.fov_range[0], config.fov_range[1]);
  const JointSpec& joint = object.joints[rng.below(object.joints.size())];
  r.moved_part_id = joint.part_id;
  r.motion.motion_type = joint.motion_type;
  r.motion.axis = joint.axis;
  r.motion.origin = joint.origin;
  r.motion.magnitude = rng.uniform(joint.min_magnitude, joint.max_magnitude);
  r.pointcloud_seed = rng.next_u64();

  SceneSample scene;
  scene.record = r;
  const PointCloud rest = sample_pointcloud(object.mesh, kInputCloudSize, r.pointcloud_seed);
  scene.articulated_cloud = apply_motion(rest, PartSet{joint.part_id}, r.motion);
  const Mat3 rotation = euler_to_rotation(r.pose);
  for (auto& p : scene.articulated_cloud.points) p = rotation * p;
  return scene;
}

namespace {

TemplateKind pick_kind(std::uint64_t seed, const std::array<double, 4>& weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw Error(ErrorKind::InvalidArgument, "template weights must sum to a positive value");
  double u = Rng(seed).uniform() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (u < weights[i]) return kAllTemplateKinds[i];
    u -= weights[i];
  }
  return kAllTemplateKinds.back();
}

std::vector<std::size_t> shuffled(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
  return v;
}

std::string numbered(const char* prefix, std::size_t i, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%0*zu", prefix, width, i);
  return buf;
}

}  // namespace

Dataset generate_dataset(const DatasetOptions& options) {
  if (options.n_objects == 0) throw Error(ErrorKind::InvalidArgument, "need at least one object");
  if (options.scenes_per_object == 0) throw Error(ErrorKind::InvalidArgument, "need at least one scene per object");
  if (!(options.train_ratio > 0.0 && options.train_ratio < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "train ratio must be in (0, 1)");
  }
  if (options.split == SplitKind::per_object && options.n_objects < 2) {
    throw Error(ErrorKind::TooFewObjects, "per-object split needs ≥2 objects");
  }

  const std::size_t n_obj = options.n_objects;
  const std::size_t n_scenes = options.scenes_per_object;
  Dataset data;
  data.objects.resize(n_obj);
  std::vector<std::vector<AnnotationRecord>> scenes(n_obj);

  parallel_for(n_obj, [&](std::size_t i) {
    const std::uint64_t object_seed = derive_seed(options.seed, static_cast<std::uint64_t>(i));
    const TemplateKind kind = pick_kind(derive_seed(object_seed, "kind"), options.generator.template_weights);
    ArticulatedObject object = generate_object(kind, derive_seed(object_seed, "geometry"), options.generator);
    object.object_id = numbered("obj_", i, 5);

    const std::uint64_t scene_root = derive_seed(object_seed, "scenes");
    auto& out = scenes[i];
    out.reserve(n_scenes);
    for (std::size_t j = 0; j < n_scenes; ++j) {
      const std::string scene_id = object.object_id + numbered("_s", j, 4);
      out.push_back(sample_scene(object, derive_seed(scene_root, static_cast<std::uint64_t>(j)), scene_id,
                                 options.generator)
                        .record);
    }
    data.objects[i] = std::move(object);
  });

  const std::uint64_t split_seed = derive_seed(options.seed, "split");
  if (options.split == SplitKind::per_object) {
    auto n_train = static_cast<std::size_t>(std::floor(options.train_ratio * static_cast<double>(n_obj) + 1e-9));
    n_train = std::clamp<std::size_t>(n_train, 1, n_obj - 1);
    const auto order = shuffled(n_obj, split_seed);
    std::vector<bool> is_train(n_obj, false);
    for (std::size_t k = 0; k < n_train; ++k) is_train[order[k]] = true;
    for (std::size_t i = 0; i < n_obj; ++i) {
      auto& side = is_train[i] ? data.train : data.val;
      side.insert(side.end(), scenes[i].begin(), scenes[i].end());
    }
  } else {
    const std::size_t total = n_obj * n_scenes;
    const auto train_total =
        static_cast<std::size_t>(std::floor(options.train_ratio * static_cast<double>(total) + 1e-9));
    for (std::size_t i = 0; i < n_obj; ++i) {
      std::size_t count = train_total / n_obj + (i < train_total % n_obj ? 1 : 0);
      if (n_scenes >= 2) count = std::clamp<std::size_t>(count, 1, n_scenes - 1);
      count = std::min(count, n_scenes);
      const auto order = shuffled(n_scenes, derive_seed(split_seed, static_cast<std::uint64_t>(i)));
      std::vector<bool> is_train(n_scenes, false);
      for (std::size_t k = 0; k < count; ++k) is_train[order[k]] = true;
      for (std::size_t j = 0; j < n_scenes; ++j) (is_train[j] ? data.train : data.val).push_back(scenes[i][j]);
    }
  }
  return data;
}

}  // namespace artk
