#pragma once

#include "artk/core.hpp"

#include <set>
#include <string>
#include <vector>

namespace artk {

struct RigidTransform {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
  RigidTransform then(const RigidTransform& next) const;
  RigidTransform inverse() const;
  bool is_proper(double tol = 1e-9) const;
};

// R = R_inplane(+Z) * R_elevation(+X) * R_azimuth(+Y).
Mat3 euler_to_rotation(const PoseSpec& pose);

// Right-handed rotation by theta about a unit axis through the origin.
Mat3 axis_angle_matrix(const Vec3& axis, double theta);

// Rotates p about the line (origin, axis). Throws NonUnitAxis.
Vec3 rodrigues_rotate(const Vec3& p, const Vec3& axis, const Vec3& origin, double theta);

// The rigid map a motion applies to its moving part.
RigidTransform motion_transform(const MotionParameters& motion);

using PartSet = std::set<std::string, std::less<>>;

// Moves every point whose mask entry is true.
PointCloud apply_motion(const PointCloud& cloud, const std::vector<bool>& moveable,
                        const MotionParameters& motion);

// Moves points whose part label is in `moveable` (the cloud must be labeled).
PointCloud apply_motion(const PointCloud& cloud, const PartSet& moveable,
                        const MotionParameters& motion);

// Moves the faces of the given parts. Vertices shared between moving and
// static faces are split first so no triangle straddles the seam. Throws
// UnknownPart, NonUnitAxis.
Mesh apply_motion(const Mesh& mesh, const PartSet& moveable, const MotionParameters& motion);

MotionParameters invert_motion(const MotionParameters& motion);

// Scales the magnitude by t; t > 1 extrapolates.
MotionParameters interpolate_motion(const MotionParameters& motion, double t);

// frames >= 2; frame k uses t = t_max * k / (frames - 1).
std::vector<Mesh> animate(const Mesh& mesh, const PartSet& moveable, const MotionParameters& motion,
                          int frames, double t_max = 1.0);

}  // namespace artk
