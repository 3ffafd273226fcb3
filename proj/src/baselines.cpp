#include "artk/baselines.hpp"

#include "artk/datagen.hpp"
#include "artk/geometry.hpp"
#include "artk/pose_codec.hpp"
#include "artk/rng.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <map>

namespace artk {

KMeansResult kmeans(const std::vector<Eigen::VectorXd>& points, std::size_t k, int iterations, std::uint64_t seed) {
  if (points.empty()) throw Error(ErrorKind::InvalidArgument, "k-means needs at least one point");
  if (k == 0) throw Error(ErrorKind::InvalidArgument, "k-means needs k >= 1");
  const std::size_t n = points.size();

  // Farthest-point initialization; stops early once every point is a center.
  Rng rng(seed);
  KMeansResult r;
  r.centers.push_back(points[rng.below(n)]);
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  while (r.centers.size() < std::min(k, n)) {
    std::size_t far = 0;
    double far_d = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], (points[i] - r.centers.back()).squaredNorm());
      if (nearest[i] > far_d) {
        far_d = nearest[i];
        far = i;
      }
    }
    if (far_d <= 0.0) break;
    r.centers.push_back(points[far]);
  }

  const std::size_t kk = r.centers.size();
  r.assignment.assign(n, 0);
  auto assign = [&] {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < kk; ++c) {
        const double d = (points[i] - r.centers[c]).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      changed |= r.assignment[i] != best;
      r.assignment[i] = best;
    }
    return changed;
  };

  assign();
  for (int it = 0; it < iterations; ++it) {
    std::vector<Eigen::VectorXd> sums(kk, Eigen::VectorXd::Zero(points.front().size()));
    std::vector<std::size_t> counts(kk, 0);
    for (std::size_t i = 0; i < n; ++i) {
      sums[r.assignment[i]] += points[i];
      ++counts[r.assignment[i]];
    }
    for (std::size_t c = 0; c < kk; ++c) {
      if (counts[c] > 0) r.centers[c] = sums[c] / static_cast<double>(counts[c]);
    }
    if (!assign()) break;
  }

  r.sizes.assign(kk, 0);
  for (std::size_t a : r.assignment) ++r.sizes[a];
  r.largest = static_cast<std::size_t>(std::max_element(r.sizes.begin(), r.sizes.end()) - r.sizes.begin());
  return r;
}

std::string part_class(const std::string& part_id) {
  const auto pos = part_id.rfind('_');
  if (pos == std::string::npos || pos == 0 || pos + 1 == part_id.size()) return part_id;
  const bool numeric = std::all_of(part_id.begin() + static_cast<std::ptrdiff_t>(pos) + 1, part_id.end(),
                                   [](unsigned char c) { return std::isdigit(c) != 0; });
  return numeric ? part_id.substr(0, pos) : part_id;
}

namespace {

Eigen::VectorXd as_vector(const Vec3& v) { return Eigen::VectorXd(v); }

Eigen::VectorXd as_vector(double x) {
  Eigen::VectorXd v(1);
  v[0] = x;
  return v;
}

// Mean of the most populous cluster.
Eigen::VectorXd frequent_value(const std::vector<Eigen::VectorXd>& values, const ClusterOptions& options,
                               std::uint64_t seed) {
  const KMeansResult r = kmeans(values, options.k, options.iterations, seed);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(values.front().size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (r.assignment[i] == r.largest) sum += values[i];
  }
  return sum / static_cast<double>(r.sizes[r.largest]);
}

template <typename T>
const T& most_frequent(const std::map<T, std::size_t>& counts) {
  // std::map iterates in key order, so ties go to the smallest key.
  auto best = counts.begin();
  for (auto it = counts.begin(); it != counts.end(); ++it) {
    if (it->second > best->second) best = it;
  }
  return best->first;
}

PartProbs one_part(const Mesh& mesh, const std::string& chosen) {
  PartProbs probs;
  for (const auto& part : mesh.parts) probs[part.part_id] = part.part_id == chosen ? 1.0 : 0.0;
  return probs;
}

std::array<double, 2> one_hot(MotionType type) {
  return type == MotionType::revolute ? std::array<double, 2>{1.0, 0.0} : std::array<double, 2>{0.0, 1.0};
}

}  // namespace

TrainStats build_train_stats(const std::vector<AnnotationRecord>& train, const MeshProvider& meshes,
                             std::uint64_t seed, const ClusterOptions& options) {
  if (train.empty()) throw Error(ErrorKind::EmptyTrainSet, "no training records");

  TrainStats stats;
  stats.records = train;

  std::map<MotionType, std::size_t> type_counts;
  std::map<std::string, std::size_t> class_counts;
  std::vector<Eigen::VectorXd> axes, origins, all_origins, magnitudes, revolute_mags, prismatic_mags;
  for (const auto& r : train) {
    ++type_counts[r.motion.motion_type];
    ++class_counts[part_class(r.moved_part_id)];
    axes.push_back(as_vector(normalize_axis(r.motion.axis)));
    all_origins.push_back(as_vector(r.motion.origin));
    magnitudes.push_back(as_vector(r.motion.magnitude));
    if (r.motion.motion_type == MotionType::revolute) {
      origins.push_back(as_vector(r.motion.origin));
      revolute_mags.push_back(as_vector(r.motion.magnitude));
    } else {
      prismatic_mags.push_back(as_vector(r.motion.magnitude));
    }
  }

  stats.most_frequent_type = most_frequent(type_counts);

  const Vec3 axis_mean = frequent_value(axes, options, derive_seed(seed, "axis"));
  stats.axis = axis_mean.norm() > 1e-9 ? Vec3(axis_mean.normalized()) : Vec3(axes.front());

  stats.origin = frequent_value(origins.empty() ? all_origins : origins, options, derive_seed(seed, "origin"));
  stats.magnitude = frequent_value(magnitudes, options, derive_seed(seed, "magnitude"))[0];
  if (!revolute_mags.empty()) {
    stats.revolute_magnitude = frequent_value(revolute_mags, options, derive_seed(seed, "magnitude/revolute"))[0];
  }
  if (!prismatic_mags.empty()) {
    stats.prismatic_magnitude = frequent_value(prismatic_mags, options, derive_seed(seed, "magnitude/prismatic"))[0];
  }

  stats.most_frequent_part_class = most_frequent(class_counts);
  double area_sum = 0.0;
  std::size_t area_n = 0;
  for (const auto& r : train) {
    if (part_class(r.moved_part_id) != stats.most_frequent_part_class) continue;
    area_sum += surface_area(meshes(r.mesh_path), r.moved_part_id);
    ++area_n;
  }
  stats.mean_part_area = area_sum / static_cast<double>(area_n);
  return stats;
}

PredictionRecord randmot_predict(const std::vector<AnnotationRecord>& train, const AnnotationRecord& scene,
                                 const Mesh& mesh, std::uint64_t seed) {
  if (train.empty()) throw Error(ErrorKind::EmptyTrainSet, "no training records");
  if (mesh.parts.empty()) throw Error(ErrorKind::InvalidArgument, "mesh has no parts");

  Rng rng(derive_seed(seed, scene.scene_id));
  const AnnotationRecord& label = train[rng.below(train.size())];
  const std::string& part = mesh.parts[rng.below(mesh.parts.size())].part_id;

  PredictionRecord p;
  p.scene_id = scene.scene_id;
  p.pose = encode_pose(label.pose);
  p.motion_type_scores = one_hot(label.motion.motion_type);
  p.axis = label.motion.axis;
  p.origin = label.motion.origin;
  p.magnitude = label.motion.magnitude;
  p.point_moveable_prob = one_part(mesh, part);
  return p;
}

PredictionRecord freqmot_predict(const TrainStats& stats, const AnnotationRecord& scene, const Mesh& mesh,
                                 std::uint64_t seed) {
  if (mesh.parts.empty()) throw Error(ErrorKind::InvalidArgument, "mesh has no parts");

  const std::string* best = nullptr;
  double best_gap = std::numeric_limits<double>::infinity();
  for (const auto& part : mesh.parts) {
    const double gap = std::abs(surface_area(mesh, part.part_id) - stats.mean_part_area);
    if (gap < best_gap || (gap == best_gap && part.part_id < *best)) {
      best_gap = gap;
      best = &part.part_id;
    }
  }

  PredictionRecord p;
  p.scene_id = scene.scene_id;
  p.pose = encode_pose(sample_pose(derive_seed(seed, scene.scene_id)));
  p.motion_type_scores = one_hot(stats.most_frequent_type);
  p.axis = stats.axis;
  p.origin = stats.origin;
  p.magnitude = stats.magnitude;
  p.point_moveable_prob = one_part(mesh, *best);
  return p;
}

PredictionRecord oracle_predict(const AnnotationRecord& scene) {
  PredictionRecord p;
  p.scene_id = scene.scene_id;
  p.pose = encode_pose(scene.pose);
  p.motion_type_scores = one_hot(scene.motion.motion_type);
  p.axis = scene.motion.axis;
  p.origin = scene.motion.origin;
  p.magnitude = scene.motion.magnitude;
  p.point_moveable_prob = PartProbs{{scene.moved_part_id, 1.0}};
  return p;
}

}  // namespace artk
