#include "artk/losses.hpp"

#include "artk/pose_codec.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace artk {

LossBreakdown weighted_total(double pose, double motion_class, double motion_reg, double segmentation,
                             const LossWeights& w) {
  LossBreakdown b{pose, motion_class, motion_reg, segmentation, 0.0};
  b.total = w.pose * pose + w.motion_class * motion_class + w.motion_reg * motion_reg + w.segmentation * segmentation;
  return b;
}

double huber(std::span<const double> pred, std::span<const double> gt, double delta) {
  if (pred.size() != gt.size()) throw Error(ErrorKind::LengthMismatch, "huber inputs differ in length");
  if (pred.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = std::abs(pred[i] - gt[i]);
    sum += d <= delta ? 0.5 * d * d : delta * (d - 0.5 * delta);
  }
  return sum / static_cast<double>(pred.size());
}

double cross_entropy(std::span<const double> logits, int label) {
  if (label < 0 || static_cast<std::size_t>(label) >= logits.size()) {
    throw Error(ErrorKind::LabelOutOfRange,
                "label " + std::to_string(label) + " with " + std::to_string(logits.size()) + " classes");
  }
  if (!std::all_of(logits.begin(), logits.end(), [](double x) { return std::isfinite(x); })) {
    throw Error(ErrorKind::InvalidArgument, "logits must be finite");
  }
  const double m = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double x : logits) sum += std::exp(x - m);
  return m + std::log(sum) - logits[static_cast<std::size_t>(label)];
}

double pose_loss(const PosePrediction& pred, const PoseBinned& gt) {
  double total = 0.0;
  for (int j = 0; j < 3; ++j) {
    if (pred.logits[j].size() != static_cast<std::size_t>(kPoseBinCounts[j])) {
      throw Error(ErrorKind::LengthMismatch, "pose logits have the wrong bin count");
    }
    total += cross_entropy(pred.logits[j], gt.bins[j]);
    total += huber(std::span(&pred.offsets[j], 1), std::span(&gt.offsets[j], 1));
  }
  return total;
}

double motion_class_loss(std::span<const double, 2> scores, MotionType gt_type) {
  return cross_entropy(scores, static_cast<int>(gt_type));
}

MotionType MotionHeadOutput::predicted_type() const {
  return type_scores[1] > type_scores[0] ? MotionType::prismatic : MotionType::revolute;
}

double motion_reg_loss(const MotionHeadOutput& pred, const MotionParameters& gt) {
  double loss = huber(std::span(pred.axis.data(), 3), std::span(gt.axis.data(), 3));
  if (pred.predicted_type() == MotionType::revolute) {
    loss += huber(std::span(pred.origin.data(), 3), std::span(gt.origin.data(), 3));
  }
  loss += huber(std::span(&pred.magnitude, 1), std::span(&gt.magnitude, 1));
  return loss;
}

double segmentation_loss(std::span<const double> probs, const std::vector<bool>& gt_mask) {
  if (probs.size() != gt_mask.size()) throw Error(ErrorKind::LengthMismatch, "probabilities and mask differ in length");
  if (probs.empty()) return 0.0;
  constexpr double kEps = 1e-12;
  double sum = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double p = std::clamp(probs[i], kEps, 1.0 - kEps);
    sum -= gt_mask[i] ? std::log(p) : std::log1p(-p);
  }
  return sum / static_cast<double>(probs.size());
}

double segmentation_loss(std::span<const std::array<double, 2>> logits, const std::vector<bool>& gt_mask) {
  if (logits.size() != gt_mask.size()) throw Error(ErrorKind::LengthMismatch, "logits and mask differ in length");
  if (logits.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) sum += cross_entropy(logits[i], gt_mask[i] ? 1 : 0);
  return sum / static_cast<double>(logits.size());
}

LossBreakdown total_loss(const PredictionRecord& pred, const LossTarget& gt, const LossWeights& weights) {
  if (pred.scene_id != gt.record.scene_id) {
    throw Error(ErrorKind::SceneMismatch, "prediction '" + pred.scene_id + "' vs ground truth '" + gt.record.scene_id + "'");
  }
  if (!pred.pose_logits) throw Error(ErrorKind::MissingLogits, "prediction '" + pred.scene_id + "' has no pose logits");

  PosePrediction pose_pred{pred.pose_logits->logits, pred.pose.offsets};
  const double pose = pose_loss(pose_pred, encode_pose(gt.record.pose));

  const double motion_class = motion_class_loss(pred.motion_type_scores, gt.record.motion.motion_type);

  MotionHeadOutput head{pred.motion_type_scores, pred.axis, pred.origin, pred.magnitude};
  const double motion_reg = motion_reg_loss(head, gt.record.motion);

  if (!gt.points.labeled()) throw Error(ErrorKind::InvalidArgument, "segmentation targets need part labels");
  std::vector<bool> mask(gt.points.size());
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = gt.points.part_ids[i] == gt.record.moved_part_id;

  std::vector<double> probs;
  if (const auto* point_probs = std::get_if<PointProbs>(&pred.point_moveable_prob)) {
    probs = *point_probs;
  } else {
    const auto& part_probs = std::get<PartProbs>(pred.point_moveable_prob);
    probs.reserve(mask.size());
    for (const auto& id : gt.points.part_ids) {
      auto it = part_probs.find(id);
      probs.push_back(it == part_probs.end() ? 0.0 : it->second);
    }
  }
  const double segmentation = segmentation_loss(probs, mask);

  return weighted_total(pose, motion_class, motion_reg, segmentation, weights);
}

}  // namespace artk
