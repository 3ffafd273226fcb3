#pragma once

#include "artk/core.hpp"
#include "artk/geometry.hpp"

#include <functional>
#include <memory>
#include <string>

namespace artk {

// A predictor's moveability probability for any surface point of the rest mesh.
class MoveabilityField {
 public:
  using Fn = std::function<double(const Vec3& point, const std::string& part_id)>;

  explicit MoveabilityField(Fn fn) : fn_(std::move(fn)) {}

  // Resolves a record's probabilities. Per-point arrays index
  // sample_pointcloud(mesh, size, pointcloud_seed); other points take the
  // value of their nearest indexed point on the same part (any part when
  // the query is unlabeled). Unlisted parts get 0.
  static MoveabilityField from_probs(const MoveableProbs& probs, const Mesh& mesh, std::uint64_t pointcloud_seed);
  static MoveabilityField from_part_probs(PartProbs probs);

  double operator()(const Vec3& point, const std::string& part_id) const { return fn_(point, part_id); }

  // Probabilities for every point of a labeled cloud.
  std::vector<double> evaluate(const PointCloud& cloud) const;

 private:
  Fn fn_;
};

}  // namespace artk
