#include "artk/moveability.hpp"

#include <map>
#include <memory>

namespace artk {

MoveabilityField MoveabilityField::from_part_probs(PartProbs probs) {
  return MoveabilityField([probs = std::move(probs)](const Vec3&, const std::string& part_id) {
    auto it = probs.find(part_id);
    return it == probs.end() ? 0.0 : it->second;
  });
}

MoveabilityField MoveabilityField::from_probs(const MoveableProbs& probs, const Mesh& mesh,
                                              std::uint64_t pointcloud_seed) {
  if (const auto* parts = std::get_if<PartProbs>(&probs)) return from_part_probs(*parts);

  const auto& values = std::get<PointProbs>(probs);
  if (values.empty()) return MoveabilityField([](const Vec3&, const std::string&) { return 0.0; });

  // Scores are looked up among sampled points of the queried part; unlabeled queries use all points.
  struct Lookup {
    NearestNeighborIndex index;
    std::vector<std::size_t> rows;
  };
  const PointCloud cloud = sample_pointcloud(mesh, values.size(), pointcloud_seed);
  std::map<std::string, std::vector<std::size_t>> rows_by_part;
  for (std::size_t i = 0; i < cloud.size(); ++i) rows_by_part[cloud.part_ids[i]].push_back(i);

  auto lookups = std::make_shared<std::map<std::string, Lookup>>();
  for (auto& [part, rows] : rows_by_part) {
    std::vector<Vec3> pts;
    pts.reserve(rows.size());
    for (std::size_t i : rows) pts.push_back(cloud.points[i]);
    lookups->emplace(part, Lookup{NearestNeighborIndex(std::move(pts)), std::move(rows)});
  }
  auto global = std::make_shared<const NearestNeighborIndex>(cloud.points);
  return MoveabilityField([lookups, global, values](const Vec3& p, const std::string& part_id) {
    if (auto it = lookups->find(part_id); it != lookups->end()) {
      return values[it->second.rows[it->second.index.query(p).index]];
    }
    return values[global->query(p).index];
  });
}

std::vector<double> MoveabilityField::evaluate(const PointCloud& cloud) const {
  std::vector<double> out(cloud.size());
  static const std::string kNoLabel;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    out[i] = fn_(cloud.points[i], cloud.labeled() ? cloud.part_ids[i] : kNoLabel);
  }
  return out;
}

}  // namespace artk
