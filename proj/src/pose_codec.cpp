#include "artk/pose_codec.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace artk {

namespace {

constexpr std::array<double, 3> kBinStart = {-180.0, -90.0, -180.0};

std::array<double, 3> angles(const PoseSpec& p) { return {p.azimuth_deg, p.elevation_deg, p.inplane_deg}; }

void check_rotation(const Mat3& r) {
  const double ortho = (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff();
  if (!(ortho <= 1e-6) || !(r.determinant() > 0.0)) {
    throw Error(ErrorKind::NotARotation, "matrix is not a proper rotation");
  }
}

}  // namespace

double wrap_degrees(double angle_deg) {
  double r = std::fmod(angle_deg + 180.0, 360.0);
  if (r < 0.0) r += 360.0;
  double wrapped = r - 180.0;
  if (wrapped >= 180.0) wrapped -= 360.0;
  return wrapped;
}

PoseBinned encode_pose(const PoseSpec& pose) {
  auto a = angles(pose);
  a[0] = wrap_degrees(a[0]);
  a[2] = wrap_degrees(a[2]);

  PoseBinned out;
  for (int j = 0; j < 3; ++j) {
    const double q = (a[j] - kBinStart[j]) / kPoseBinWidthDeg;
    double bin = std::floor(q);
    double offset = q - bin;  // exact
    if (bin >= kPoseBinCounts[j]) {
      // Only the closed upper end of elevation (or rounding just below 180).
      bin = kPoseBinCounts[j] - 1;
      offset = std::nextafter(1.0, 0.0);
    } else if (bin < 0) {
      bin = 0;
      offset = 0.0;
    }
    out.bins[j] = static_cast<int>(bin);
    out.offsets[j] = offset;
  }
  return out;
}

PoseSpec decode_pose(const PoseBinned& binned) {
  std::array<double, 3> a{};
  for (int j = 0; j < 3; ++j) {
    if (binned.bins[j] < 0 || binned.bins[j] >= kPoseBinCounts[j]) {
      throw Error(ErrorKind::OutOfRangeBin,
                  "bin " + std::to_string(binned.bins[j]) + " outside [0, " + std::to_string(kPoseBinCounts[j]) + ")");
    }
    if (!(binned.offsets[j] >= 0.0 && binned.offsets[j] < 1.0)) {
      throw Error(ErrorKind::OutOfRangeBin, "offset outside [0, 1)");
    }
    a[j] = kBinStart[j] + kPoseBinWidthDeg * (binned.bins[j] + binned.offsets[j]);
  }
  return {a[0], a[1], a[2]};
}

double geodesic_deg(const Mat3& a, const Mat3& b) {
  check_rotation(a);
  check_rotation(b);
  // Same angle as arccos((tr - 1) / 2), but well conditioned near 0 and 180.
  const Mat3 m = a.transpose() * b;
  const Vec3 vee(m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1));
  const double cos_theta = 0.5 * (m.trace() - 1.0);
  const double sin_theta = 0.5 * vee.norm();
  const double deg = std::atan2(sin_theta, cos_theta) * 180.0 / std::numbers::pi;
  return std::clamp(deg, 0.0, 180.0);
}

}  // namespace artk
