#include "artk/articulation.hpp"

#include <cmath>
#include <numbers>

namespace artk {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

void require_unit(const Vec3& axis) {
  if (!axis.allFinite() || std::abs(axis.norm() - 1.0) > 1e-9) {
    throw Error(ErrorKind::NonUnitAxis, "rotation axis must have unit norm");
  }
}

Mat3 rotation_x(double rad) {
  const double c = std::cos(rad), s = std::sin(rad);
  Mat3 r;
  r << 1, 0, 0, 0, c, -s, 0, s, c;
  return r;
}

Mat3 rotation_y(double rad) {
  const double c = std::cos(rad), s = std::sin(rad);
  Mat3 r;
  r << c, 0, s, 0, 1, 0, -s, 0, c;
  return r;
}

Mat3 rotation_z(double rad) {
  const double c = std::cos(rad), s = std::sin(rad);
  Mat3 r;
  r << c, -s, 0, s, c, 0, 0, 0, 1;
  return r;
}

void check_parts(const Mesh& mesh, const PartSet& moveable) {
  for (const auto& id : moveable) mesh.part(id);
}

}  // namespace

RigidTransform RigidTransform::then(const RigidTransform& next) const {
  return {next.rotation * rotation, next.rotation * translation + next.translation};
}

RigidTransform RigidTransform::inverse() const {
  const Mat3 rt = rotation.transpose();
  return {rt, -(rt * translation)};
}

bool RigidTransform::is_proper(double tol) const {
  return (rotation.transpose() * rotation - Mat3::Identity()).cwiseAbs().maxCoeff() <= tol &&
         std::abs(rotation.determinant() - 1.0) <= tol;
}

Mat3 euler_to_rotation(const PoseSpec& pose) {
  return rotation_z(pose.inplane_deg * kDegToRad) * rotation_x(pose.elevation_deg * kDegToRad) *
         rotation_y(pose.azimuth_deg * kDegToRad);
}

Mat3 axis_angle_matrix(const Vec3& axis, double theta) {
  require_unit(axis);
  const double c = std::cos(theta), s = std::sin(theta);
  Mat3 k;
  k << 0, -axis.z(), axis.y(), axis.z(), 0, -axis.x(), -axis.y(), axis.x(), 0;
  return Mat3::Identity() + s * k + (1.0 - c) * (k * k);
}

Vec3 rodrigues_rotate(const Vec3& p, const Vec3& axis, const Vec3& origin, double theta) {
  require_unit(axis);
  const Vec3 v = p - origin;
  const double c = std::cos(theta), s = std::sin(theta);
  return origin + v * c + axis.cross(v) * s + axis * (axis.dot(v) * (1.0 - c));
}

RigidTransform motion_transform(const MotionParameters& motion) {
  validate_motion(motion);
  if (motion.motion_type == MotionType::prismatic) {
    return {Mat3::Identity(), motion.magnitude * motion.axis};
  }
  const Mat3 r = axis_angle_matrix(motion.axis, motion.magnitude);
  return {r, motion.origin - r * motion.origin};
}

namespace {

// o + R (p - o) keeps points on the axis line exactly fixed, which the
// folded translation form does not.
Vec3 move_point(const Vec3& p, const MotionParameters& motion, const Mat3& rotation) {
  if (motion.motion_type == MotionType::prismatic) return p + motion.magnitude * motion.axis;
  return motion.origin + rotation * (p - motion.origin);
}

Mat3 motion_rotation(const MotionParameters& motion) {
  validate_motion(motion);
  return motion.motion_type == MotionType::revolute ? axis_angle_matrix(motion.axis, motion.magnitude)
                                                    : Mat3::Identity();
}

}  // namespace

PointCloud apply_motion(const PointCloud& cloud, const std::vector<bool>& moveable, const MotionParameters& motion) {
  if (moveable.size() != cloud.size()) {
    throw Error(ErrorKind::LengthMismatch, "moveable mask length differs from the cloud size");
  }
  const Mat3 rotation = motion_rotation(motion);
  PointCloud out = cloud;
  if (motion.magnitude == 0.0) return out;
  for (std::size_t i = 0; i < out.points.size(); ++i) {
    if (moveable[i]) out.points[i] = move_point(cloud.points[i], motion, rotation);
  }
  return out;
}

PointCloud apply_motion(const PointCloud& cloud, const PartSet& moveable, const MotionParameters& motion) {
  if (!moveable.empty() && !cloud.labeled()) {
    throw Error(ErrorKind::UnknownPart, "cloud has no part labels");
  }
  std::vector<bool> mask(cloud.size(), false);
  for (std::size_t i = 0; i < cloud.part_ids.size(); ++i) mask[i] = moveable.contains(cloud.part_ids[i]);
  return apply_motion(cloud, mask, motion);
}

Mesh apply_motion(const Mesh& mesh, const PartSet& moveable, const MotionParameters& motion) {
  check_parts(mesh, moveable);
  const Mat3 rotation = motion_rotation(motion);
  if (motion.magnitude == 0.0 || moveable.empty()) return mesh;

  std::vector<bool> face_moves(mesh.faces.size(), false);
  for (const auto& part : mesh.parts) {
    if (!moveable.contains(part.part_id)) continue;
    for (std::size_t f : part.face_indices) face_moves[f] = true;
  }

  std::vector<bool> used_moving(mesh.vertices.size(), false);
  std::vector<bool> used_static(mesh.vertices.size(), false);
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    auto& used = face_moves[f] ? used_moving : used_static;
    for (std::size_t v : mesh.faces[f]) used[v] = true;
  }

  Mesh out = mesh;
  // Seam vertices keep their static copy; moving faces get a fresh one.
  std::vector<std::size_t> remap(mesh.vertices.size());
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    remap[v] = v;
    if (!used_moving[v]) continue;
    const Vec3 moved = move_point(mesh.vertices[v], motion, rotation);
    if (used_static[v]) {
      remap[v] = out.vertices.size();
      out.vertices.push_back(moved);
    } else {
      out.vertices[v] = moved;
    }
  }
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    if (!face_moves[f]) continue;
    for (auto& v : out.faces[f]) v = remap[v];
  }
  return out;
}

MotionParameters invert_motion(const MotionParameters& motion) {
  MotionParameters inv = motion;
  inv.magnitude = -motion.magnitude;
  return inv;
}

MotionParameters interpolate_motion(const MotionParameters& motion, double t) {
  if (!std::isfinite(t)) throw Error(ErrorKind::InvalidArgument, "interpolation parameter must be finite");
  MotionParameters out = motion;
  out.magnitude = motion.magnitude * t;
  return out;
}

std::vector<Mesh> animate(const Mesh& mesh, const PartSet& moveable, const MotionParameters& motion, int frames,
                          double t_max) {
  if (frames < 2) throw Error(ErrorKind::InvalidArgument, "animation needs at least 2 frames");
  std::vector<Mesh> out;
  out.reserve(static_cast<std::size_t>(frames));
  for (int k = 0; k < frames; ++k) {
    const double t = t_max * static_cast<double>(k) / static_cast<double>(frames - 1);
    out.push_back(apply_motion(mesh, moveable, interpolate_motion(motion, t)));
  }
  return out;
}

}  // namespace artk
