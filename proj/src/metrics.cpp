#include "artk/metrics.hpp"

#include "artk/parallel.hpp"
#include "artk/pose_codec.hpp"
#include "artk/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

namespace artk {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

// Angles within this of the threshold count as on it: an exact 30 deg pair
// evaluates to 29.99999999999999 through the rotation matrices.
constexpr double kThresholdTieDeg = 1e-9;

bool within_acc30(const PoseSpec& gt, const PoseSpec& pred) {
  return geodesic_deg(euler_to_rotation(gt), euler_to_rotation(pred)) < kPoseAccThresholdDeg - kThresholdTieDeg;
}

double percent(std::size_t hits, std::size_t total) {
  return total == 0 ? 0.0 : 100.0 * static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace

double pose_acc30(std::span<const PosePair> pairs) {
  std::size_t hits = 0;
  for (const auto& pair : pairs) {
    if (within_acc30(pair.gt, pair.pred)) ++hits;
  }
  return percent(hits, pairs.size());
}

double axis_error_deg(const Vec3& pred, const Vec3& gt) {
  const double c = std::clamp(normalize_axis(pred).dot(normalize_axis(gt)), -1.0, 1.0);
  return std::acos(c) * kRadToDeg;
}

std::optional<double> origin_error_l1(const Vec3& pred, const Vec3& gt, MotionType predicted_type) {
  if (predicted_type != MotionType::revolute) return std::nullopt;
  return (pred - gt).cwiseAbs().sum();
}

MagnitudeError magnitude_error(double pred_magnitude, const MotionParameters& gt) {
  const double diff = std::abs(pred_magnitude - gt.magnitude);
  if (gt.motion_type == MotionType::revolute) return {MotionType::revolute, diff * kRadToDeg};
  return {MotionType::prismatic, diff};
}

double seg_accuracy(std::span<const double> probs, const std::vector<bool>& gt_mask) {
  if (probs.size() != gt_mask.size()) throw Error(ErrorKind::LengthMismatch, "probabilities and mask differ in length");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if ((probs[i] > 0.5) == gt_mask[i]) ++hits;
  }
  return percent(hits, probs.size());
}

namespace {

// NN distances from every point of `from` to the indexed cloud.
std::vector<double> nn_distances(const std::vector<Vec3>& from, const NearestNeighborIndex& to) {
  std::vector<double> d(from.size());
  for (std::size_t i = 0; i < from.size(); ++i) d[i] = to.query(from[i]).distance;
  return d;
}

double mean_square(const std::vector<double>& d) {
  double s = 0.0;
  for (double x : d) s += x * x;
  return s / static_cast<double>(d.size());
}

double fraction_below(const std::vector<double>& d, double tau) {
  return static_cast<double>(std::count_if(d.begin(), d.end(), [tau](double x) { return x < tau; })) /
         static_cast<double>(d.size());
}

double f1_from(double precision, double recall) {
  return precision + recall > 0.0 ? 100.0 * 2.0 * precision * recall / (precision + recall) : 0.0;
}

void require_points(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  if (a.empty() || b.empty()) throw Error(ErrorKind::EmptyCloud, "reconstruction metrics need non-empty clouds");
}

}  // namespace

ReconstructionScores reconstruction_scores(const std::vector<Vec3>& a, const std::vector<Vec3>& b, double tau) {
  require_points(a, b);
  const NearestNeighborIndex index_a(a);
  const NearestNeighborIndex index_b(b);
  const auto a_to_b = nn_distances(a, index_b);
  const auto b_to_a = nn_distances(b, index_a);
  return {100.0 * (mean_square(a_to_b) + mean_square(b_to_a)),
          f1_from(fraction_below(a_to_b, tau), fraction_below(b_to_a, tau))};
}

double chamfer(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  return reconstruction_scores(a, b).chamfer;
}

double f_score(const std::vector<Vec3>& a, const std::vector<Vec3>& b, double tau) {
  return reconstruction_scores(a, b, tau).f1;
}

PartSet infer_moved_parts(const Mesh& mesh, const MoveabilityField& field, std::uint64_t seed,
                          const InferenceOptions& options) {
  PartSet moved;
  for (const auto& part : mesh.parts) {
    if (!(surface_area(mesh, part.part_id) > 0.0)) continue;
    const PointCloud samples =
        sample_part_points(mesh, part.part_id, options.samples_per_part, derive_seed(seed, part.part_id));
    std::size_t moveable = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (field(samples.points[i], part.part_id) > options.prob_threshold) ++moveable;
    }
    if (2 * moveable > options.samples_per_part) moved.insert(part.part_id);
  }
  return moved;
}

std::uint64_t inference_seed(const AnnotationRecord& record) {
  return derive_seed(record.pointcloud_seed, "infer");
}

std::uint64_t reconstruction_seed(const AnnotationRecord& record) {
  return derive_seed(record.pointcloud_seed, "reconstruction");
}

namespace {

struct SceneMetrics {
  bool pose_hit = false;
  bool type_hit = false;
  double axis_err = 0.0;
  std::optional<double> origin_err;
  MagnitudeError magnitude{MotionType::revolute, 0.0};
  double seg_acc = 0.0;
  std::optional<ReconstructionScores> reconstruction;
};

SceneMetrics score_scene(const AnnotationRecord& gt, const PredictionRecord& pred, const Mesh& mesh,
                         const EvaluateOptions& options) {
  SceneMetrics m;
  mesh.part(gt.moved_part_id);

  const PoseSpec pred_pose = decode_pose(pred.pose);
  m.pose_hit = within_acc30(gt.pose, pred_pose);

  const MotionType pred_type = pred.predicted_type();
  m.type_hit = pred_type == gt.motion.motion_type;
  m.axis_err = axis_error_deg(pred.axis, gt.motion.axis);
  m.origin_err = origin_error_l1(pred.origin, gt.motion.origin, pred_type);
  m.magnitude = magnitude_error(pred.magnitude, gt.motion);

  const MoveabilityField field = MoveabilityField::from_probs(pred.point_moveable_prob, mesh, gt.pointcloud_seed);

  const PointCloud seg_points = sample_pointcloud(mesh, kSegEvalPoints, gt.pointcloud_seed);
  std::vector<bool> mask(seg_points.size());
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = seg_points.part_ids[i] == gt.moved_part_id;
  std::vector<double> probs;
  const auto* point_probs = std::get_if<PointProbs>(&pred.point_moveable_prob);
  if (point_probs && point_probs->size() >= kSegEvalPoints) {
    // The evaluation points are the prefix of the predictor's indexed cloud.
    probs.assign(point_probs->begin(), point_probs->begin() + kSegEvalPoints);
  } else {
    probs = field.evaluate(seg_points);
  }
  m.seg_acc = seg_accuracy(probs, mask);

  if (options.reconstruction) {
    const PointCloud base = sample_pointcloud(mesh, kReconstructionPoints, reconstruction_seed(gt));
    const PointCloud gt_cloud = apply_motion(base, PartSet{gt.moved_part_id}, gt.motion);

    MotionParameters pred_motion;
    pred_motion.motion_type = pred_type;
    pred_motion.axis = normalize_axis(pred.axis);
    pred_motion.origin = pred.origin;
    pred_motion.magnitude = pred.magnitude;
    const PartSet moved = infer_moved_parts(mesh, field, inference_seed(gt));
    const PointCloud pred_cloud = apply_motion(base, moved, pred_motion);

    m.reconstruction = reconstruction_scores(pred_cloud.points, gt_cloud.points);
  }
  return m;
}

struct Mean {
  double sum = 0.0;
  std::size_t n = 0;
  void add(double x) {
    sum += x;
    ++n;
  }
  std::optional<double> value() const {
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
  }
};

}  // namespace

MetricsReport evaluate(const std::vector<AnnotationRecord>& gt, const std::vector<PredictionRecord>& pred,
                       const MeshProvider& meshes, const EvaluateOptions& options) {
  std::map<std::string, const PredictionRecord*> by_id;
  std::vector<std::string> duplicates;
  for (const auto& p : pred) {
    if (!by_id.emplace(p.scene_id, &p).second) duplicates.push_back(p.scene_id);
  }
  std::vector<std::string> missing;
  std::map<std::string, std::size_t> gt_ids;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (!gt_ids.emplace(gt[i].scene_id, i).second) duplicates.push_back(gt[i].scene_id);
    if (!by_id.contains(gt[i].scene_id)) missing.push_back(gt[i].scene_id);
  }
  std::vector<std::string> extra;
  for (const auto& [id, p] : by_id) {
    if (!gt_ids.contains(id)) extra.push_back(id);
  }
  if (!missing.empty() || !extra.empty() || !duplicates.empty()) {
    auto join = [](const std::vector<std::string>& ids) {
      std::string s;
      for (const auto& id : ids) s += (s.empty() ? "" : ",") + id;
      return s;
    };
    std::string what = "scene ids do not align 1:1";
    if (!missing.empty()) what += "; missing predictions: " + join(missing);
    if (!extra.empty()) what += "; unknown predictions: " + join(extra);
    if (!duplicates.empty()) what += "; duplicates: " + join(duplicates);
    throw Error(ErrorKind::SceneMismatch, what);
  }

  // Resolve meshes up front: the provider may cache lazily.
  std::vector<const Mesh*> scene_mesh(gt.size());
  for (std::size_t i = 0; i < gt.size(); ++i) scene_mesh[i] = &meshes(gt[i].mesh_path);

  // Visit scenes in scene-id order so the report does not depend on input order.
  std::vector<std::size_t> order;
  order.reserve(gt.size());
  for (const auto& [id, i] : gt_ids) order.push_back(i);

  std::vector<SceneMetrics> scores(gt.size());
  parallel_for(order.size(), [&](std::size_t k) {
    const std::size_t i = order[k];
    scores[k] = score_scene(gt[i], *by_id.at(gt[i].scene_id), *scene_mesh[i], options);
  });

  MetricsReport report;
  report.n_scenes = gt.size();
  std::size_t pose_hits = 0, type_hits = 0;
  Mean axis, origin, mag_r, mag_p, seg, chamf, f1;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& s = scores[k];
    if (gt[order[k]].motion.motion_type == MotionType::revolute) {
      ++report.n_revolute;
    } else {
      ++report.n_prismatic;
    }
    pose_hits += s.pose_hit;
    type_hits += s.type_hit;
    axis.add(s.axis_err);
    if (s.origin_err) origin.add(*s.origin_err);
    (s.magnitude.bucket == MotionType::revolute ? mag_r : mag_p).add(s.magnitude.value);
    seg.add(s.seg_acc);
    if (s.reconstruction) {
      chamf.add(s.reconstruction->chamfer);
      f1.add(s.reconstruction->f1);
    }
  }
  report.pose_acc30 = percent(pose_hits, gt.size());
  report.type_acc = percent(type_hits, gt.size());
  report.axis_err_deg = axis.value().value_or(0.0);
  report.origin_err_l1 = origin.value();
  report.mag_r_deg = mag_r.value();
  report.mag_p_l1 = mag_p.value();
  report.seg_acc = seg.value().value_or(0.0);
  report.chamfer = chamf.value();
  report.f1_at_0_1 = f1.value();
  return report;
}

}  // namespace artk
