#include "artk/losses.hpp"
#include "artk/pose_codec.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace artk;

namespace {

double huber1(double d) {
  d = std::abs(d);
  return d <= 1.0 ? 0.5 * d * d : d - 0.5;
}

double huber_mean(const Vec3& a, const Vec3& b) {
  return (huber1(a.x() - b.x()) + huber1(a.y() - b.y()) + huber1(a.z() - b.z())) / 3.0;
}

long double naive_ce(const std::vector<double>& logits, int label) {
  long double z = 0;
  for (double l : logits) z += std::exp(static_cast<long double>(l));
  return std::log(z) - logits[label];
}

std::vector<double> random_logits(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(-5, 5);
  return v;
}

}  // namespace

TEST_CASE("huber") {
  const double zero = 0.0, two = 2.0, half = 0.5;
  CHECK(huber(std::span(&zero, 1), std::span(&zero, 1)) == 0.0);
  CHECK(huber(std::span(&two, 1), std::span(&zero, 1)) == 1.5);
  CHECK(huber(std::span(&half, 1), std::span(&zero, 1)) == 0.125);
  const std::vector<double> a{1, 2}, b{1};
  CHECK_THROWS_AS(huber(a, b), Error);
}

TEST_CASE("cross_entropy") {
  CHECK(cross_entropy(std::vector<double>(24, 0.3), 5) == doctest::Approx(std::log(24.0)).epsilon(1e-14));
  const double big = cross_entropy(std::vector<double>{1000.0, 0.0}, 0);
  CHECK(std::isfinite(big));
  CHECK(big < 1e-300);

  Rng rng(47);
  for (int i = 0; i < 500; ++i) {
    const auto logits = random_logits(rng, 12);
    const int label = static_cast<int>(rng.below(12));
    CHECK(std::abs(cross_entropy(logits, label) - static_cast<double>(naive_ce(logits, label))) < 1e-12);
  }
  CHECK_THROWS_AS(cross_entropy(std::vector<double>{0, 0}, 2), Error);
}

TEST_CASE("pose_loss") {
  const PoseBinned gt = encode_pose({37, -12, 5});
  PosePrediction perfect;
  for (int j = 0; j < 3; ++j) {
    perfect.logits[j].assign(kPoseBinCounts[j], -50.0);
    perfect.logits[j][gt.bins[j]] = 50.0;
  }
  perfect.offsets = gt.offsets;
  CHECK(pose_loss(perfect, gt) < 1e-12);

  PosePrediction uniform;
  for (int j = 0; j < 3; ++j) uniform.logits[j].assign(kPoseBinCounts[j], 0.0);
  uniform.offsets = gt.offsets;
  CHECK(std::abs(pose_loss(uniform, gt) - (std::log(24.0) + std::log(12.0) + std::log(24.0))) < 1e-9);

  Rng rng(53);
  for (int i = 0; i < 100; ++i) {
    PosePrediction p;
    double expected = 0.0;
    for (int j = 0; j < 3; ++j) {
      p.logits[j] = random_logits(rng, kPoseBinCounts[j]);
      p.offsets[j] = rng.uniform(-1, 2);
      expected += static_cast<double>(naive_ce(p.logits[j], gt.bins[j])) + huber1(p.offsets[j] - gt.offsets[j]);
    }
    CHECK(pose_loss(p, gt) == doctest::Approx(expected).epsilon(1e-12));
  }

  PosePrediction wrong = uniform;
  wrong.logits[1].pop_back();
  CHECK_THROWS_AS(pose_loss(wrong, gt), Error);
}

TEST_CASE("motion_class_loss") {
  CHECK(std::abs(motion_class_loss(std::array<double, 2>{0.7, 0.7}, MotionType::prismatic) - std::log(2.0)) < 1e-12);
  CHECK(motion_class_loss(std::array<double, 2>{20, -20}, MotionType::revolute) < 1e-12);
  // Softplus of the gap: ln(1 + e^10).
  CHECK(motion_class_loss(std::array<double, 2>{10, 0}, MotionType::prismatic) ==
        doctest::Approx(std::log1p(std::exp(10.0))).epsilon(1e-14));
}

TEST_CASE("motion_reg_loss") {
  const MotionParameters gt{MotionType::revolute, Vec3::UnitY(), Vec3(0.1, 0.2, 0.3), 0.8};
  MotionHeadOutput exact{{5, 0}, gt.axis, gt.origin, gt.magnitude};
  CHECK(motion_reg_loss(exact, gt) == 0.0);

  MotionHeadOutput pris{{0, 5}, Vec3(0.3, 0.9, 0.1), gt.origin, 0.5};
  MotionHeadOutput pris_far = pris;
  pris_far.origin = Vec3(40, -70, 12);
  CHECK(motion_reg_loss(pris, gt) == motion_reg_loss(pris_far, gt));

  Rng rng(59);
  for (int i = 0; i < 100; ++i) {
    MotionHeadOutput rev{{3, 1}, oracle::random_point(rng, -2, 2), oracle::random_point(rng, -2, 2),
                         rng.uniform(-3, 3)};
    const double expected =
        huber_mean(rev.axis, gt.axis) + huber_mean(rev.origin, gt.origin) + huber1(rev.magnitude - gt.magnitude);
    CHECK(motion_reg_loss(rev, gt) == doctest::Approx(expected).epsilon(1e-13));
  }
}

TEST_CASE("segmentation_loss") {
  const std::vector<bool> mask{true, false, true, true};
  CHECK(segmentation_loss(std::vector<double>(4, 0.5), mask) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(segmentation_loss(std::vector<double>{1, 0, 1, 1}, mask) < 1e-11);
  CHECK_THROWS_AS(segmentation_loss(std::vector<double>{0.5}, mask), Error);

  Rng rng(61);
  std::vector<double> probs(300);
  std::vector<bool> m(300);
  double expected = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    probs[i] = rng.uniform(0.01, 0.99);
    m[i] = rng.below(2) == 0;
    expected -= m[i] ? std::log(probs[i]) : std::log(1 - probs[i]);
  }
  CHECK(segmentation_loss(probs, m) == doctest::Approx(expected / 300.0).epsilon(1e-12));

  std::vector<std::array<double, 2>> logits(300);
  double ce = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    logits[i] = {rng.uniform(-4, 4), rng.uniform(-4, 4)};
    ce += static_cast<double>(naive_ce({logits[i][0], logits[i][1]}, m[i] ? 1 : 0));
  }
  CHECK(segmentation_loss(logits, m) == doctest::Approx(ce / 300.0).epsilon(1e-12));
}

TEST_CASE("total_loss") {
  const LossBreakdown ones = weighted_total(1, 1, 1, 1);
  CHECK(ones.total == 12.0);

  AnnotationRecord gt;
  gt.scene_id = "s";
  gt.pose = {20, -10, 5};
  gt.moved_part_id = "door";
  gt.motion = {MotionType::revolute, Vec3::UnitY(), Vec3(0.5, 0, 0.5), 1.0};
  PointCloud points;
  points.points.assign(6, Vec3::Zero());
  points.part_ids = {"body", "door", "door", "body", "body", "door"};

  const PoseBinned bins = encode_pose(gt.pose);
  PredictionRecord perfect;
  perfect.scene_id = "s";
  perfect.pose = bins;
  perfect.motion_type_scores = {40, -40};
  perfect.axis = gt.motion.axis;
  perfect.origin = gt.motion.origin;
  perfect.magnitude = gt.motion.magnitude;
  perfect.point_moveable_prob = PartProbs{{"door", 1.0}, {"body", 0.0}};
  PoseLogits logits;
  for (int j = 0; j < 3; ++j) {
    logits.logits[j].assign(kPoseBinCounts[j], -40.0);
    logits.logits[j][bins.bins[j]] = 40.0;
  }
  perfect.pose_logits = logits;

  const LossBreakdown zero = total_loss(perfect, {gt, points});
  CHECK(zero.pose < 1e-12);
  CHECK(zero.motion_class < 1e-12);
  CHECK(zero.motion_reg == 0.0);
  CHECK(zero.segmentation < 1e-11);

  Rng rng(67);
  PredictionRecord noisy = perfect;
  for (int j = 0; j < 3; ++j) noisy.pose_logits->logits[j] = random_logits(rng, kPoseBinCounts[j]);
  noisy.motion_type_scores = {rng.uniform(-2, 2), rng.uniform(-2, 2)};
  noisy.axis = oracle::random_point(rng);
  noisy.origin = oracle::random_point(rng);
  noisy.magnitude = rng.uniform(0, 2);
  PointProbs probs(points.size());
  for (auto& p : probs) p = rng.uniform(0.05, 0.95);
  noisy.point_moveable_prob = probs;

  const LossWeights w{2, 1, 8, 1};
  const LossBreakdown b = total_loss(noisy, {gt, points}, w);
  CHECK(b.total == 2 * b.pose + 1 * b.motion_class + 8 * b.motion_reg + 1 * b.segmentation);

  PosePrediction pp{noisy.pose_logits->logits, noisy.pose.offsets};
  CHECK(b.pose == pose_loss(pp, bins));
  CHECK(b.motion_class == motion_class_loss(noisy.motion_type_scores, gt.motion.motion_type));
  std::vector<bool> mask;
  for (const auto& id : points.part_ids) mask.push_back(id == "door");
  CHECK(b.segmentation == segmentation_loss(probs, mask));

  PredictionRecord no_logits = noisy;
  no_logits.pose_logits.reset();
  CHECK_THROWS_AS(total_loss(no_logits, {gt, points}), Error);
  PredictionRecord other = noisy;
  other.scene_id = "t";
  CHECK_THROWS_AS(total_loss(other, {gt, points}), Error);
}
