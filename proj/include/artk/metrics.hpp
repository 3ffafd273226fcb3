#pragma once

// Evaluation metrics over (ground truth, prediction) pairs and their
// aggregation into a report.

#include "artk/articulation.hpp"
#include "artk/core.hpp"
#include "artk/geometry.hpp"
#include "artk/moveability.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace artk {

inline constexpr double kPoseAccThresholdDeg = 30.0;
inline constexpr std::size_t kSegEvalPoints = 1000;
inline constexpr std::size_t kReconstructionPoints = 10000;
inline constexpr double kFScoreTau = 0.1;

struct PosePair {
  PoseSpec gt;
  PoseSpec pred;
};

// Percent of pairs with geodesic error strictly below 30 degrees.
double pose_acc30(std::span<const PosePair> pairs);

// Angle between normalized axes, sign-sensitive. Throws ZeroAxis.
double axis_error_deg(const Vec3& pred, const Vec3& gt);

// L1 distance when the predicted type is revolute, nullopt otherwise.
std::optional<double> origin_error_l1(const Vec3& pred, const Vec3& gt, MotionType predicted_type);

struct MagnitudeError {
  MotionType bucket;  // ground-truth type
  double value;       // degrees (revolute) or normalized length (prismatic)
};

MagnitudeError magnitude_error(double pred_magnitude, const MotionParameters& gt);

// Percent of points where (prob > 0.5) matches the mask. Throws LengthMismatch.
double seg_accuracy(std::span<const double> probs, const std::vector<bool>& gt_mask);

// 100 * (mean squared NN distance a->b + b->a). Throws EmptyCloud.
double chamfer(const std::vector<Vec3>& a, const std::vector<Vec3>& b);

// F1 (percent) with matches at NN distance < tau; 0 when P + R = 0.
double f_score(const std::vector<Vec3>& a, const std::vector<Vec3>& b, double tau = kFScoreTau);

struct ReconstructionScores {
  double chamfer;
  double f1;
};

// Both metrics from one pair of kd-tree passes.
ReconstructionScores reconstruction_scores(const std::vector<Vec3>& a, const std::vector<Vec3>& b,
                                           double tau = kFScoreTau);

struct InferenceOptions {
  double prob_threshold = 0.5;
  std::size_t samples_per_part = 100;
};

// Parts with strictly more than half of their sampled points above the
// probability threshold.
PartSet infer_moved_parts(const Mesh& mesh, const MoveabilityField& field, std::uint64_t seed,
                          const InferenceOptions& options = {});

struct MetricsReport {
  double pose_acc30 = 0.0;
  double type_acc = 0.0;
  double axis_err_deg = 0.0;
  std::optional<double> origin_err_l1;
  std::optional<double> mag_r_deg;
  std::optional<double> mag_p_l1;
  double seg_acc = 0.0;
  std::optional<double> chamfer;
  std::optional<double> f1_at_0_1;
  std::size_t n_scenes = 0;
  std::size_t n_revolute = 0;
  std::size_t n_prismatic = 0;
};

// Resolves AnnotationRecord::mesh_path to a loaded mesh; throws MissingMesh.
using MeshProvider = std::function<const Mesh&(const std::string& mesh_path)>;

struct EvaluateOptions {
  bool reconstruction = true;  // Chamfer / F1
};

// Per-scene seeds derived from the record's pointcloud_seed.
std::uint64_t inference_seed(const AnnotationRecord& record);
std::uint64_t reconstruction_seed(const AnnotationRecord& record);

// Scene ids must match 1:1 (any order). Throws SceneMismatch, MissingMesh.
MetricsReport evaluate(const std::vector<AnnotationRecord>& gt, const std::vector<PredictionRecord>& pred,
                       const MeshProvider& meshes, const EvaluateOptions& options = {});

}  // namespace artk
