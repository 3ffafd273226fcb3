#pragma once

// Procedural articulated objects and annotated scene sampling.
//
// Objects are box assemblies in the canonical frame: +Y up, +Z out of the
// front face. Body dimensions are drawn uniformly from [0.4, 1.0] before the
// whole object is normalized to the unit box.
//
//   cabinet_drawers  2-4 drawers stacked in the front; prismatic along +Z
//   cabinet_doors    1-2 doors on the front face; revolute about a vertical
//                    edge (left hinge -> axis -Y, right hinge -> +Y, so a
//                    positive angle opens outward)
//   mixed            doors above, drawers below
//   lid_box          one lid on top, hinged on a random top edge
//
// Valid ranges: revolute [0, 120] degrees, prismatic [0, 0.4 * body depth].

#include "artk/core.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace artk {

enum class TemplateKind { cabinet_drawers, cabinet_doors, mixed, lid_box };

std::string_view to_string(TemplateKind kind);
TemplateKind template_kind_from_string(std::string_view name);

inline constexpr std::array<TemplateKind, 4> kAllTemplateKinds = {
    TemplateKind::cabinet_drawers, TemplateKind::cabinet_doors, TemplateKind::mixed, TemplateKind::lid_box};

struct JointSpec {
  std::string part_id;
  MotionType motion_type = MotionType::revolute;
  Vec3 axis = Vec3::UnitY();
  Vec3 origin = Vec3::Zero();
  double min_magnitude = 0.0;
  double max_magnitude = 0.0;
};

struct GeneratorConfig {
  double min_body_dim = 0.4;
  double max_body_dim = 1.0;
  double max_revolute_deg = 120.0;
  double prismatic_depth_fraction = 0.4;
  double min_part_area_fraction = 0.05;
  std::array<double, 2> azimuth_range = {-90.0, 90.0};
  std::array<double, 2> elevation_range = {-45.0, 45.0};
  std::array<double, 2> inplane_range = {-20.0, 20.0};
  std::array<double, 2> fov_range = {20.0, 60.0};
  // Sampling weights for cabinet_drawers, cabinet_doors, mixed, lid_box.
  std::array<double, 4> template_weights = {0.30, 0.35, 0.15, 0.20};
};

struct ArticulatedObject {
  std::string object_id;
  TemplateKind kind = TemplateKind::cabinet_drawers;
  Mesh mesh;  // normalized to the unit box
  std::vector<JointSpec> joints;
  std::uint64_t seed = 0;
  int attempts = 1;  // > 1 when a draw failed the small-part filter
};

// Deterministic in (kind, seed). Redraws until every moveable part covers at
// least min_part_area_fraction of the surface.
ArticulatedObject generate_object(TemplateKind kind, std::uint64_t seed, const GeneratorConfig& config = {});

// Uniform pose within the configured ranges.
PoseSpec sample_pose(std::uint64_t seed, const GeneratorConfig& config = {});

struct SceneSample {
  AnnotationRecord record;
  // Rest cloud (2500 points) deformed by the motion, then rotated by the pose.
  PointCloud articulated_cloud;
};

SceneSample sample_scene(const ArticulatedObject& object, std::uint64_t seed, const std::string& scene_id,
                         const GeneratorConfig& config = {});

enum class SplitKind { per_image, per_object };

std::string_view to_string(SplitKind split);
SplitKind split_kind_from_string(std::string_view name);  // accepts image/object too

struct DatasetOptions {
  std::size_t n_objects = 10;
  std::size_t scenes_per_object = 256;
  SplitKind split = SplitKind::per_image;
  double train_ratio = 0.965;
  std::uint64_t seed = 0;
  GeneratorConfig generator;
};

struct Dataset {
  std::vector<ArticulatedObject> objects;
  std::vector<AnnotationRecord> train;
  std::vector<AnnotationRecord> val;
};

// Throws TooFewObjects (per-object split with < 2 objects), InvalidArgument.
Dataset generate_dataset(const DatasetOptions& options);

// Mesh file name used in records: "<object_id>.obj".
std::string mesh_file_name(const std::string& object_id);

}  // namespace artk
