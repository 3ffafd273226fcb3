#pragma once

// Bin + offset pose encoding. Bin k of every angle spans
// [lo + 15k, lo + 15(k+1)) with lo = -180 (azimuth, in-plane) or -90
// (elevation); offsets are fractions of the 15 degree bin width.

#include "artk/core.hpp"

namespace artk {

inline constexpr double kPoseBinWidthDeg = 15.0;

// Wraps an angle into [-180, 180).
double wrap_degrees(double angle_deg);

PoseBinned encode_pose(const PoseSpec& pose);
PoseSpec decode_pose(const PoseBinned& binned);  // throws OutOfRangeBin

// Geodesic distance in degrees, clamped to [0, 180]. Throws NotARotation when
// either input is not orthonormal within 1e-6 or has negative determinant.
double geodesic_deg(const Mat3& a, const Mat3& b);

}  // namespace artk
