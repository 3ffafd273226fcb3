#include "artk/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

namespace artk {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ZeroAxis: return "ZeroAxis";
    case ErrorKind::NonUnitAxis: return "NonUnitAxis";
    case ErrorKind::UnknownPart: return "UnknownPart";
    case ErrorKind::ZeroAreaMesh: return "ZeroAreaMesh";
    case ErrorKind::DegenerateExtent: return "DegenerateExtent";
    case ErrorKind::EmptyCloud: return "EmptyCloud";
    case ErrorKind::OutOfRangeBin: return "OutOfRangeBin";
    case ErrorKind::NotARotation: return "NotARotation";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::LabelOutOfRange: return "LabelOutOfRange";
    case ErrorKind::SceneMismatch: return "SceneMismatch";
    case ErrorKind::EmptyTrainSet: return "EmptyTrainSet";
    case ErrorKind::TooFewObjects: return "TooFewObjects";
    case ErrorKind::MissingMesh: return "MissingMesh";
    case ErrorKind::MissingLogits: return "MissingLogits";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

const PartGroup* Mesh::find_part(std::string_view part_id) const {
  for (const auto& p : parts) {
    if (p.part_id == part_id) return &p;
  }
  return nullptr;
}

const PartGroup& Mesh::part(std::string_view part_id) const {
  if (const auto* p = find_part(part_id)) return *p;
  throw Error(ErrorKind::UnknownPart, "no part '" + std::string(part_id) + "'");
}

std::vector<std::string> Mesh::part_ids() const {
  std::vector<std::string> ids;
  ids.reserve(parts.size());
  for (const auto& p : parts) ids.push_back(p.part_id);
  return ids;
}

std::vector<std::size_t> Mesh::face_part_index() const {
  std::vector<std::size_t> index(faces.size(), 0);
  for (std::size_t p = 0; p < parts.size(); ++p) {
    for (std::size_t f : parts[p].face_indices) {
      if (f < index.size()) index[f] = p;
    }
  }
  return index;
}

std::vector<std::string> validate_mesh(const Mesh& mesh) {
  std::vector<std::string> violations;
  if (mesh.vertices.empty()) violations.push_back("mesh has no vertices");
  if (mesh.faces.empty()) violations.push_back("mesh has no faces");

  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const auto& face = mesh.faces[f];
    if (std::any_of(face.begin(), face.end(), [&](std::size_t i) { return i >= mesh.vertices.size(); })) {
      violations.push_back("face " + std::to_string(f) + ": index out of range");
    }
  }

  constexpr std::size_t kUnowned = static_cast<std::size_t>(-1);
  std::vector<std::size_t> owner(mesh.faces.size(), kUnowned);
  std::unordered_map<std::string, std::size_t> seen_ids;
  for (std::size_t p = 0; p < mesh.parts.size(); ++p) {
    const auto& part = mesh.parts[p];
    if (!seen_ids.emplace(part.part_id, p).second) {
      violations.push_back("duplicate part id '" + part.part_id + "'");
    }
    if (part.face_indices.empty()) {
      violations.push_back("part '" + part.part_id + "' is empty");
    }
    for (std::size_t f : part.face_indices) {
      if (f >= mesh.faces.size()) {
        violations.push_back("part '" + part.part_id + "': face " + std::to_string(f) + " out of range");
        continue;
      }
      if (owner[f] == p) {
        violations.push_back("part '" + part.part_id + "': duplicate face " + std::to_string(f));
      } else if (owner[f] != kUnowned) {
        violations.push_back("parts overlap at face " + std::to_string(f));
      } else {
        owner[f] = p;
      }
    }
  }
  for (std::size_t f = 0; f < owner.size(); ++f) {
    if (owner[f] == kUnowned) violations.push_back("face " + std::to_string(f) + " has no part");
  }
  return violations;
}

std::string_view to_string(MotionType type) {
  return type == MotionType::revolute ? "revolute" : "prismatic";
}

MotionType motion_type_from_string(std::string_view name) {
  if (name == "revolute") return MotionType::revolute;
  if (name == "prismatic") return MotionType::prismatic;
  throw Error(ErrorKind::InvalidArgument, "unknown motion type '" + std::string(name) + "'");
}

namespace {

bool finite(const Vec3& v) { return v.allFinite(); }

}  // namespace

void validate_motion(const MotionParameters& motion) {
  if (!finite(motion.axis) || std::abs(motion.axis.norm() - 1.0) > 1e-9) {
    throw Error(ErrorKind::NonUnitAxis, "motion axis must have unit norm");
  }
  if (!finite(motion.origin)) throw Error(ErrorKind::InvalidArgument, "motion origin is not finite");
  if (!std::isfinite(motion.magnitude)) throw Error(ErrorKind::InvalidArgument, "motion magnitude is not finite");
}

Vec3 normalize_axis(const Vec3& v) {
  const double n = v.norm();
  if (!(n >= 1e-9) || !std::isfinite(n)) throw Error(ErrorKind::ZeroAxis, "axis norm below 1e-9");
  return v / n;
}

MotionType PredictionRecord::predicted_type() const {
  return motion_type_scores[1] > motion_type_scores[0] ? MotionType::prismatic : MotionType::revolute;
}

void validate_record(const AnnotationRecord& r) {
  auto fail = [&](const std::string& what) {
    throw Error(ErrorKind::InvalidArgument, "scene '" + r.scene_id + "': " + what);
  };
  if (r.scene_id.empty()) fail("empty scene_id");
  if (!(r.fov_deg >= 20.0 && r.fov_deg <= 60.0)) fail("fov_deg outside [20, 60]");
  if (!(r.pose.azimuth_deg >= -180.0 && r.pose.azimuth_deg < 180.0)) fail("azimuth outside [-180, 180)");
  if (!(r.pose.elevation_deg >= -90.0 && r.pose.elevation_deg <= 90.0)) fail("elevation outside [-90, 90]");
  if (!(r.pose.inplane_deg >= -180.0 && r.pose.inplane_deg < 180.0)) fail("in-plane outside [-180, 180)");
  if (r.moved_part_id.empty()) fail("empty moved_part_id");
  validate_motion(r.motion);
}

void validate_record(const PredictionRecord& r) {
  auto fail = [&](const std::string& what) {
    throw Error(ErrorKind::InvalidArgument, "prediction '" + r.scene_id + "': " + what);
  };
  if (r.scene_id.empty()) fail("empty scene_id");
  for (int a = 0; a < 3; ++a) {
    if (r.pose.bins[a] < 0 || r.pose.bins[a] >= kPoseBinCounts[a]) fail("pose bin out of range");
    if (!(r.pose.offsets[a] >= 0.0 && r.pose.offsets[a] < 1.0)) fail("pose offset outside [0, 1)");
  }
  if (!std::isfinite(r.motion_type_scores[0]) || !std::isfinite(r.motion_type_scores[1])) {
    fail("motion_type_scores not finite");
  }
  if (!finite(r.axis) || !finite(r.origin) || !std::isfinite(r.magnitude)) fail("motion fields not finite");
  auto check_prob = [&](double p) {
    if (!(p >= 0.0 && p <= 1.0)) fail("probability outside [0, 1]");
  };
  std::visit(
      [&](const auto& probs) {
        using T = std::decay_t<decltype(probs)>;
        if constexpr (std::is_same_v<T, PointProbs>) {
          for (double p : probs) check_prob(p);
        } else {
          for (const auto& [id, p] : probs) check_prob(p);
        }
      },
      r.point_moveable_prob);
  if (r.pose_logits) {
    for (int a = 0; a < 3; ++a) {
      if (r.pose_logits->logits[a].size() != static_cast<std::size_t>(kPoseBinCounts[a])) {
        fail("pose_logits has the wrong bin count");
      }
    }
  }
}

}  // namespace artk
