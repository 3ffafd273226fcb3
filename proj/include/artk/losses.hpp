#pragma once

// Training objectives as plain scoring functions over (prediction, ground
// truth). Reductions are means over vector components and sampled points.

#include "artk/core.hpp"

#include <array>
#include <span>
#include <vector>

namespace artk {

struct LossWeights {
  double pose = 2.0;
  double motion_class = 1.0;
  double motion_reg = 8.0;
  double segmentation = 1.0;
};

struct LossBreakdown {
  double pose = 0.0;
  double motion_class = 0.0;
  double motion_reg = 0.0;
  double segmentation = 0.0;
  double total = 0.0;
};

LossBreakdown weighted_total(double pose, double motion_class, double motion_reg, double segmentation,
                             const LossWeights& weights = {});

inline constexpr double kHuberDelta = 1.0;

double huber(std::span<const double> pred, std::span<const double> gt, double delta = kHuberDelta);

// -log softmax(logits)[label], max-shifted. Throws LabelOutOfRange.
double cross_entropy(std::span<const double> logits, int label);

struct PosePrediction {
  std::array<std::vector<double>, 3> logits;  // azimuth, elevation, in-plane
  std::array<double, 3> offsets{};
};

double pose_loss(const PosePrediction& pred, const PoseBinned& gt);

double motion_class_loss(std::span<const double, 2> scores, MotionType gt_type);

struct MotionHeadOutput {
  std::array<double, 2> type_scores{};
  Vec3 axis = Vec3::Zero();
  Vec3 origin = Vec3::Zero();
  double magnitude = 0.0;

  MotionType predicted_type() const;
};

// Axis and magnitude terms always; the origin term only when the head
// predicts revolute motion.
double motion_reg_loss(const MotionHeadOutput& pred, const MotionParameters& gt);

// Mean binary cross-entropy; probabilities are clamped to [1e-12, 1 - 1e-12].
double segmentation_loss(std::span<const double> probs, const std::vector<bool>& gt_mask);

// Two-logit form: (static, moveable) logits per point.
double segmentation_loss(std::span<const std::array<double, 2>> logits, const std::vector<bool>& gt_mask);

// Ground truth for one scene: the record plus labeled points whose moveability
// is scored (moveable iff the label equals record.moved_part_id).
struct LossTarget {
  const AnnotationRecord& record;
  const PointCloud& points;
};

// Throws SceneMismatch, MissingLogits.
LossBreakdown total_loss(const PredictionRecord& pred, const LossTarget& gt, const LossWeights& weights = {});

}  // namespace artk
