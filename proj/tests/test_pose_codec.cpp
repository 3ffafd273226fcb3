#include "artk/articulation.hpp"
#include "artk/pose_codec.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace artk;

TEST_CASE("encode_pose layout") {
  const auto zero = encode_pose({0, 0, 0});
  CHECK(zero.bins == std::array<int, 3>{12, 6, 12});
  CHECK(zero.offsets == std::array<double, 3>{0, 0, 0});

  const auto b = encode_pose({37, 0, 0});
  CHECK(b.bins[0] == 14);
  CHECK(b.offsets[0] == doctest::Approx(7.0 / 15.0).epsilon(1e-14));

  const auto top = encode_pose({-180, 90, 179.999});
  CHECK(top.bins == std::array<int, 3>{0, 11, 23});
  CHECK(top.offsets[1] < 1.0);
  CHECK(encode_pose({180, -90, -540}).bins == std::array<int, 3>{0, 0, 0});
}

TEST_CASE("decode_pose") {
  const auto p = decode_pose({{12, 6, 12}, {0, 0, 0}});
  CHECK(p == PoseSpec{0, 0, 0});

  const auto below = decode_pose({{12, 6, 12}, {0.999999, 0, 0}});
  CHECK(below.azimuth_deg < 15.0);
  CHECK(below.azimuth_deg > 14.9999);

  CHECK_THROWS_AS(decode_pose({{24, 0, 0}, {0, 0, 0}}), Error);
  CHECK_THROWS_AS(decode_pose({{0, 12, 0}, {0, 0, 0}}), Error);
  CHECK_THROWS_AS(decode_pose({{0, 0, -1}, {0, 0, 0}}), Error);
  CHECK_THROWS_AS(decode_pose({{0, 0, 0}, {1.0, 0, 0}}), Error);
}

TEST_CASE("pose round trip") {
  Rng rng(41);
  for (int i = 0; i < 10000; ++i) {
    const PoseSpec pose{rng.uniform(-180, 180), rng.uniform(-90, 90), rng.uniform(-180, 180)};
    const PoseBinned b = encode_pose(pose);
    const PoseSpec back = decode_pose(b);
    CHECK(std::abs(back.azimuth_deg - pose.azimuth_deg) < 1e-12);
    CHECK(std::abs(back.elevation_deg - pose.elevation_deg) < 1e-12);
    CHECK(std::abs(back.inplane_deg - pose.inplane_deg) < 1e-12);
    const PoseBinned again = encode_pose(back);
    CHECK(again.bins == b.bins);
    for (int j = 0; j < 3; ++j) CHECK(std::abs(again.offsets[j] - b.offsets[j]) < 1e-12);
  }
}

TEST_CASE("geodesic_deg") {
  Rng rng(43);
  const Mat3 r = oracle::random_rotation(rng);
  CHECK(geodesic_deg(r, r) < 1e-6);
  const Vec3 axis = oracle::random_unit(rng);
  const Mat3 thirty = Eigen::AngleAxisd(M_PI / 6, axis).toRotationMatrix();
  CHECK(geodesic_deg(Mat3::Identity(), thirty) == doctest::Approx(30.0).epsilon(1e-12));
  for (int i = 0; i < 1000; ++i) {
    const Mat3 a = oracle::random_rotation(rng), b = oracle::random_rotation(rng);
    CHECK(std::abs(geodesic_deg(a, b) - oracle::quaternion_angle_deg(a, b)) < 1e-9);
  }
  CHECK_THROWS_AS(geodesic_deg(Mat3::Identity(), 2.0 * Mat3::Identity()), Error);
  CHECK_THROWS_AS(geodesic_deg(Mat3::Identity(), -Mat3::Identity()), Error);

  // Encoding is lossless at the rotation level too.
  for (int i = 0; i < 200; ++i) {
    const PoseSpec pose{rng.uniform(-90, 90), rng.uniform(-45, 45), rng.uniform(-20, 20)};
    CHECK(geodesic_deg(euler_to_rotation(pose), euler_to_rotation(decode_pose(encode_pose(pose)))) < 1e-6);
  }
}
