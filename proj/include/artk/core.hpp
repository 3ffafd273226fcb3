#pragma once

// Shared domain types for the articulation toolkit. Everything lives in the
// normalized object frame: the unit box is [-0.5, 0.5]^3, centered.

#include <Eigen/Dense>
#include <json.hpp>

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace artk {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Face = std::array<std::size_t, 3>;

enum class ErrorKind {
  ZeroAxis,
  NonUnitAxis,
  UnknownPart,
  ZeroAreaMesh,
  DegenerateExtent,
  EmptyCloud,
  OutOfRangeBin,
  NotARotation,
  LengthMismatch,
  LabelOutOfRange,
  SceneMismatch,
  EmptyTrainSet,
  TooFewObjects,
  MissingMesh,
  MissingLogits,
  InvalidArgument,
  Parse,
  Io,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct PartGroup {
  std::string part_id;
  std::vector<std::size_t> face_indices;
};

struct Mesh {
  std::vector<Vec3> vertices;
  std::vector<Face> faces;
  std::vector<PartGroup> parts;

  const PartGroup* find_part(std::string_view part_id) const;
  const PartGroup& part(std::string_view part_id) const;  // throws UnknownPart
  std::vector<std::string> part_ids() const;
  // Index into `parts` for every face; assumes a valid mesh.
  std::vector<std::size_t> face_part_index() const;
};

// Returns human-readable violations; empty iff the mesh is well formed.
std::vector<std::string> validate_mesh(const Mesh& mesh);

struct PointCloud {
  std::vector<Vec3> points;
  // Empty, or one label per point.
  std::vector<std::string> part_ids;

  std::size_t size() const noexcept { return points.size(); }
  bool labeled() const noexcept { return !part_ids.empty(); }
};

enum class MotionType { revolute = 0, prismatic = 1 };

std::string_view to_string(MotionType type);
MotionType motion_type_from_string(std::string_view name);

struct MotionParameters {
  MotionType motion_type = MotionType::revolute;
  Vec3 axis = Vec3::UnitY();
  // Stored for prismatic motion too, but ignored there.
  Vec3 origin = Vec3::Zero();
  // Radians for revolute, normalized length for prismatic.
  double magnitude = 0.0;

  bool operator==(const MotionParameters&) const = default;
};

// Throws NonUnitAxis / InvalidArgument.
void validate_motion(const MotionParameters& motion);

Vec3 normalize_axis(const Vec3& v);  // throws ZeroAxis below 1e-9

struct PoseSpec {
  double azimuth_deg = 0.0;
  double elevation_deg = 0.0;
  double inplane_deg = 0.0;

  bool operator==(const PoseSpec&) const = default;
};

inline constexpr int kAzimuthBins = 24;
inline constexpr int kElevationBins = 12;
inline constexpr int kInplaneBins = 24;
inline constexpr std::array<int, 3> kPoseBinCounts = {kAzimuthBins, kElevationBins, kInplaneBins};

struct PoseBinned {
  std::array<int, 3> bins{};        // azimuth, elevation, in-plane
  std::array<double, 3> offsets{};  // fraction of bin width, [0, 1)

  bool operator==(const PoseBinned&) const = default;
};

struct AnnotationRecord {
  std::string scene_id;
  std::string object_id;
  std::string mesh_path;
  PoseSpec pose;
  double fov_deg = 40.0;
  std::string moved_part_id;
  MotionParameters motion;
  std::uint64_t pointcloud_seed = 0;
  // Fields we do not understand; kept on read, dropped on write.
  nlohmann::json extra = nlohmann::json::object();
};

// Moveability either per point (indexing sample_pointcloud(mesh, n, pointcloud_seed))
// or per part id.
using PointProbs = std::vector<double>;
using PartProbs = std::map<std::string, double>;
using MoveableProbs = std::variant<PointProbs, PartProbs>;

struct PoseLogits {
  std::array<std::vector<double>, 3> logits;  // 24 / 12 / 24
};

struct PredictionRecord {
  std::string scene_id;
  PoseBinned pose;
  std::array<double, 2> motion_type_scores{};  // (revolute, prismatic)
  Vec3 axis = Vec3::UnitY();
  Vec3 origin = Vec3::Zero();
  double magnitude = 0.0;
  MoveableProbs point_moveable_prob = PartProbs{};
  std::optional<PoseLogits> pose_logits;
  nlohmann::json extra = nlohmann::json::object();

  MotionType predicted_type() const;
};

// Record-level validation (throws InvalidArgument naming the field).
void validate_record(const AnnotationRecord& record);
void validate_record(const PredictionRecord& record);

}  // namespace artk
