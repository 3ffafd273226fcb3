#pragma once

// Mesh and point-cloud kernels: areas, area-weighted sampling, unit-box
// normalization, exact nearest neighbors and connected components.

#include "artk/core.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace artk {

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);

// Total area, or the area of one part (throws UnknownPart).
double surface_area(const Mesh& mesh, std::optional<std::string_view> part_id = std::nullopt);

inline constexpr double kSmallPartThreshold = 0.05;

// Parts whose area fraction is >= threshold, in mesh order.
std::vector<std::string> filter_small_parts(const Mesh& mesh, double threshold = kSmallPartThreshold);

inline constexpr std::size_t kInputCloudSize = 2500;

// Area-weighted surface sampling with uniform barycentrics
// (u = 1 - sqrt(r1), v = r2 * sqrt(r1)). Points are drawn one at a time, so
// the first k points for a seed do not depend on n. Labels come from the
// triangle's part. Throws ZeroAreaMesh, InvalidArgument for n == 0.
PointCloud sample_pointcloud(const Mesh& mesh, std::size_t n, std::uint64_t seed);

// Same, restricted to the faces of one part.
PointCloud sample_part_points(const Mesh& mesh, std::string_view part_id, std::size_t n,
                              std::uint64_t seed);

// p' = (p + translation) * scale.
struct UnitBoxTransform {
  double scale = 1.0;
  Vec3 translation = Vec3::Zero();

  Vec3 apply(const Vec3& p) const { return (p + translation) * scale; }
  Vec3 invert(const Vec3& p) const { return p / scale - translation; }
};

// Centers the bounding box at the origin and scales the max extent to 1.
// Throws DegenerateExtent when every extent is zero.
UnitBoxTransform unit_box_transform(const std::vector<Vec3>& points);

template <typename Geometry>
struct Normalized {
  Geometry geometry;
  UnitBoxTransform transform;
};

Normalized<Mesh> normalize_to_unit_box(const Mesh& mesh);
Normalized<PointCloud> normalize_to_unit_box(const PointCloud& cloud);

// Exact kd-tree over a fixed set of points. Read-only after construction.
class NearestNeighborIndex {
 public:
  explicit NearestNeighborIndex(std::vector<Vec3> points);  // throws EmptyCloud

  struct Hit {
    std::size_t index;
    double distance;
  };

  Hit query(const Vec3& p) const;
  std::size_t size() const noexcept { return points_.size(); }
  const std::vector<Vec3>& points() const noexcept { return points_; }

 private:
  struct Node {
    std::uint32_t begin, end;  // range into order_
    std::int32_t left = -1, right = -1;
    int axis = -1;  // -1: leaf
    double split = 0.0;
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end);
  void search(std::int32_t node, const Vec3& p, Hit& best, double& best_sq) const;

  std::vector<Vec3> points_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
};

NearestNeighborIndex build_nn_index(const PointCloud& cloud);

inline constexpr double kDefaultWeldEps = 1e-6;

struct ComponentLabeling {
  std::vector<std::size_t> component_of_face;
  std::size_t count = 0;
};

struct ComponentSegmentation {
  ComponentLabeling labeling;
  Mesh mesh;  // same geometry, parts replaced by "cc_<k>"
};

// Welds vertices closer than weld_eps (0 disables welding), then labels faces
// connected through shared vertices. Ids follow first appearance in face order.
ComponentSegmentation connected_components(const Mesh& mesh, double weld_eps = kDefaultWeldEps);

// Union-find with path halving.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n);
  std::size_t find(std::size_t x);
  void unite(std::size_t a, std::size_t b);

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::uint32_t> rank_;
};

}  // namespace artk
