#include "artk/baselines.hpp"
#include "artk/pose_codec.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <map>

using namespace artk;

namespace {

AnnotationRecord record(const std::string& id, MotionType type, double magnitude, const std::string& part = "door_0") {
  AnnotationRecord r;
  r.scene_id = id;
  r.object_id = "obj";
  r.mesh_path = "obj.obj";
  r.moved_part_id = part;
  r.pose = {10, 5, -3};
  r.motion = {type, Vec3::UnitY(), Vec3(0.1, 0.2, 0.3), magnitude};
  return r;
}

Mesh two_parts(double area_a, double area_b) {
  Mesh m;
  oracle::add_quad(m, "a", 0, area_a, 0, 1);
  oracle::add_quad(m, "b", 10, 10 + area_b, 0, 1);
  return m;
}

}  // namespace

TEST_CASE("part_class") {
  CHECK(part_class("drawer_2") == "drawer");
  CHECK(part_class("lid_0") == "lid");
  CHECK(part_class("body") == "body");
  CHECK(part_class("door_x") == "door_x");
}

TEST_CASE("kmeans") {
  std::vector<Eigen::VectorXd> same(30, Eigen::Vector3d(0.2, -1, 4));
  const auto r = kmeans(same, 10, 50, 1);
  for (const auto& c : r.centers) CHECK((c - same[0]).norm() < 1e-12);

  Rng rng(89);
  std::vector<Eigen::VectorXd> planted;
  for (int i = 0; i < 800; ++i) planted.push_back(Eigen::Vector2d(rng.normal() * 0.01, rng.normal() * 0.01));
  for (int i = 0; i < 200; ++i) planted.push_back(Eigen::Vector2d(1 + rng.normal() * 0.01, rng.normal() * 0.01));
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto km = kmeans(planted, 2, 50, seed);
    CHECK(km.centers[km.largest].norm() < 0.05);
    CHECK(km.sizes[km.largest] == 800);
  }
}

TEST_CASE("train stats") {
  std::vector<AnnotationRecord> train;
  for (int i = 0; i < 700; ++i) train.push_back(record("r" + std::to_string(i), MotionType::revolute, 1.0));
  for (int i = 0; i < 300; ++i) {
    train.push_back(record("p" + std::to_string(i), MotionType::prismatic, 0.2, "drawer_" + std::to_string(i % 3)));
  }
  Mesh obj;
  oracle::add_quad(obj, "door_0", 0, 0.5, 0, 1);
  for (int k = 0; k < 3; ++k) oracle::add_quad(obj, "drawer_" + std::to_string(k), 2 + k, 2.2 + k, 0, 1);
  const MeshProvider meshes = [&](const std::string&) -> const Mesh& { return obj; };

  const TrainStats s = build_train_stats(train, meshes, 7);
  CHECK(s.most_frequent_type == MotionType::revolute);
  CHECK(s.axis.isApprox(Vec3::UnitY()));
  CHECK(s.origin.isApprox(Vec3(0.1, 0.2, 0.3)));
  CHECK(s.magnitude == doctest::Approx(1.0));
  CHECK(*s.revolute_magnitude == doctest::Approx(1.0));
  CHECK(*s.prismatic_magnitude == doctest::Approx(0.2));
  CHECK(s.most_frequent_part_class == "door");
  CHECK(s.mean_part_area == doctest::Approx(0.5));

  CHECK_THROWS_AS(build_train_stats({}, meshes, 7), Error);
}

TEST_CASE("randmot") {
  const std::vector<AnnotationRecord> one{record("t", MotionType::prismatic, 0.3)};
  const Mesh mesh = two_parts(1, 2);
  for (int i = 0; i < 20; ++i) {
    const auto p = randmot_predict(one, record("e" + std::to_string(i), MotionType::revolute, 1), mesh, 5);
    CHECK(p.predicted_type() == MotionType::prismatic);
    CHECK(p.magnitude == 0.3);
    CHECK(p.axis == one[0].motion.axis);
    CHECK(p.pose == encode_pose(one[0].pose));
  }

  Mesh single;
  oracle::add_quad(single, "only", 0, 1, 0, 1);
  const auto p = randmot_predict(one, one[0], single, 9);
  CHECK(std::get<PartProbs>(p.point_moveable_prob) == PartProbs{{"only", 1.0}});

  // Each of N records drawn with frequency 1/N within 5 sigma.
  std::vector<AnnotationRecord> train;
  for (int i = 0; i < 10; ++i) train.push_back(record("t", MotionType::revolute, 0.1 * i));
  std::map<double, int> counts;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    ++counts[randmot_predict(train, record("e" + std::to_string(i), MotionType::revolute, 1), single, 13).magnitude];
  }
  const double sigma = std::sqrt(draws * 0.1 * 0.9);
  CHECK(counts.size() == 10);
  for (const auto& [mag, c] : counts) CHECK(std::abs(c - draws * 0.1) < 5 * sigma);
}

TEST_CASE("freqmot") {
  TrainStats stats;
  stats.records = {record("t", MotionType::revolute, 1)};
  stats.mean_part_area = 0.12;
  stats.magnitude = 0.7;
  const Mesh m = two_parts(0.1, 0.9);
  const auto scene = record("e", MotionType::revolute, 1);
  const auto p = freqmot_predict(stats, scene, m, 3);
  CHECK(std::get<PartProbs>(p.point_moveable_prob).at("a") == 1.0);
  CHECK(std::get<PartProbs>(p.point_moveable_prob).at("b") == 0.0);
  CHECK(p.magnitude == 0.7);

  Mesh tie;
  oracle::add_quad(tie, "zeta", 0, 0.5, 0, 1);
  oracle::add_quad(tie, "alpha", 2, 2.5, 0, 1);
  stats.mean_part_area = 0.3;
  CHECK(std::get<PartProbs>(freqmot_predict(stats, scene, tie, 3).point_moveable_prob).at("alpha") == 1.0);

  const auto again = freqmot_predict(stats, scene, m, 3);
  CHECK(again.pose == freqmot_predict(stats, scene, m, 3).pose);
  const PoseSpec pose = decode_pose(again.pose);
  CHECK(std::abs(pose.azimuth_deg) <= 90.0);
  CHECK(std::abs(pose.elevation_deg) <= 45.0);
  CHECK(std::abs(pose.inplane_deg) <= 20.0);
}

TEST_CASE("oracle predictor") {
  const auto r = record("s", MotionType::prismatic, 0.25, "drawer_1");
  const auto p = oracle_predict(r);
  CHECK(p.scene_id == "s");
  CHECK(p.predicted_type() == MotionType::prismatic);
  CHECK(p.magnitude == 0.25);
  CHECK(std::get<PartProbs>(p.point_moveable_prob) == PartProbs{{"drawer_1", 1.0}});
}
