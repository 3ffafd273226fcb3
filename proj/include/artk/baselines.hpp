#pragma once

// Heuristic predictors: RandMot (copy a random training label, pick a random
// part) and FreqMot (most frequent / clustered training values, part chosen
// by size).

#include "artk/core.hpp"
#include "artk/metrics.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace artk {

struct KMeansResult {
  std::vector<Eigen::VectorXd> centers;
  std::vector<std::size_t> assignment;
  std::vector<std::size_t> sizes;
  std::size_t largest = 0;  // most populous cluster, ties to the lower index
};

// Lloyd iterations from a seeded farthest-point initialization. Empty
// clusters keep their previous center. k is capped at the point count.
KMeansResult kmeans(const std::vector<Eigen::VectorXd>& points, std::size_t k, int iterations, std::uint64_t seed);

struct ClusterOptions {
  std::size_t k = 10;
  int iterations = 50;
};

struct TrainStats {
  std::vector<AnnotationRecord> records;
  MotionType most_frequent_type = MotionType::revolute;
  Vec3 axis = Vec3::UnitY();
  Vec3 origin = Vec3::Zero();
  // Most populous cluster over all magnitudes regardless of type.
  double magnitude = 0.0;
  std::optional<double> revolute_magnitude;
  std::optional<double> prismatic_magnitude;
  std::string most_frequent_part_class;
  double mean_part_area = 0.0;
};

// "drawer_2" -> "drawer"; ids without a numeric suffix are their own class.
std::string part_class(const std::string& part_id);

// Throws EmptyTrainSet.
TrainStats build_train_stats(const std::vector<AnnotationRecord>& train, const MeshProvider& meshes,
                             std::uint64_t seed, const ClusterOptions& options = {});

// Throws EmptyTrainSet, InvalidArgument (mesh without parts).
PredictionRecord randmot_predict(const std::vector<AnnotationRecord>& train, const AnnotationRecord& scene,
                                 const Mesh& mesh, std::uint64_t seed);

PredictionRecord freqmot_predict(const TrainStats& stats, const AnnotationRecord& scene, const Mesh& mesh,
                                 std::uint64_t seed);

// Ground truth repackaged as a prediction (part-level probabilities).
PredictionRecord oracle_predict(const AnnotationRecord& scene);

}  // namespace artk
