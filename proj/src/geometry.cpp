#include "artk/geometry.hpp"

#include "artk/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

namespace artk {

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 0.5 * (b - a).cross(c - a).norm();
}

namespace {

double face_area(const Mesh& mesh, std::size_t f) {
  const auto& face = mesh.faces[f];
  return triangle_area(mesh.vertices[face[0]], mesh.vertices[face[1]], mesh.vertices[face[2]]);
}

std::vector<std::size_t> all_faces(const Mesh& mesh) {
  std::vector<std::size_t> faces(mesh.faces.size());
  std::iota(faces.begin(), faces.end(), std::size_t{0});
  return faces;
}

// Draws n points from the given faces, area weighted.
PointCloud sample_faces(const Mesh& mesh, const std::vector<std::size_t>& faces,
                        const std::vector<std::size_t>& face_part, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "sample count must be >= 1");

  std::vector<double> cumulative(faces.size());
  double total = 0.0;
  std::size_t last_positive = faces.size();
  for (std::size_t i = 0; i < faces.size(); ++i) {
    const double a = face_area(mesh, faces[i]);
    total += a;
    cumulative[i] = total;
    if (a > 0.0) last_positive = i;
  }
  if (!(total > 0.0)) throw Error(ErrorKind::ZeroAreaMesh, "cannot sample a surface with zero area");

  Rng rng(seed);
  PointCloud cloud;
  cloud.points.reserve(n);
  cloud.part_ids.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double target = rng.uniform() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
    std::size_t i = it == cumulative.end() ? last_positive : static_cast<std::size_t>(it - cumulative.begin());

    const double r1 = rng.uniform();
    const double r2 = rng.uniform();
    const double s = std::sqrt(r1);
    const double u = 1.0 - s;
    const double v = r2 * s;

    const auto& face = mesh.faces[faces[i]];
    const Vec3& a = mesh.vertices[face[0]];
    const Vec3& b = mesh.vertices[face[1]];
    const Vec3& c = mesh.vertices[face[2]];
    cloud.points.push_back(a + u * (b - a) + v * (c - a));
    cloud.part_ids.push_back(mesh.parts[face_part[faces[i]]].part_id);
  }
  return cloud;
}

}  // namespace

double surface_area(const Mesh& mesh, std::optional<std::string_view> part_id) {
  double total = 0.0;
  if (part_id) {
    for (std::size_t f : mesh.part(*part_id).face_indices) total += face_area(mesh, f);
  } else {
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) total += face_area(mesh, f);
  }
  return total;
}

std::vector<std::string> filter_small_parts(const Mesh& mesh, double threshold) {
  const double total = surface_area(mesh);
  std::vector<std::string> passing;
  for (const auto& part : mesh.parts) {
    const double fraction = total > 0.0 ? surface_area(mesh, part.part_id) / total : 0.0;
    if (fraction >= threshold) passing.push_back(part.part_id);
  }
  return passing;
}

PointCloud sample_pointcloud(const Mesh& mesh, std::size_t n, std::uint64_t seed) {
  return sample_faces(mesh, all_faces(mesh), mesh.face_part_index(), n, seed);
}

PointCloud sample_part_points(const Mesh& mesh, std::string_view part_id, std::size_t n, std::uint64_t seed) {
  return sample_faces(mesh, mesh.part(part_id).face_indices, mesh.face_part_index(), n, seed);
}

UnitBoxTransform unit_box_transform(const std::vector<Vec3>& points) {
  if (points.empty()) throw Error(ErrorKind::DegenerateExtent, "no points");
  Vec3 lo = points.front();
  Vec3 hi = points.front();
  for (const auto& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double extent = (hi - lo).maxCoeff();
  if (!(extent > 0.0) || !std::isfinite(extent)) {
    throw Error(ErrorKind::DegenerateExtent, "bounding box has zero extent");
  }
  UnitBoxTransform t;
  t.translation = -0.5 * (lo + hi);
  t.scale = 1.0 / extent;
  return t;
}

Normalized<Mesh> normalize_to_unit_box(const Mesh& mesh) {
  Normalized<Mesh> out{mesh, unit_box_transform(mesh.vertices)};
  for (auto& v : out.geometry.vertices) v = out.transform.apply(v);
  return out;
}

Normalized<PointCloud> normalize_to_unit_box(const PointCloud& cloud) {
  Normalized<PointCloud> out{cloud, unit_box_transform(cloud.points)};
  for (auto& p : out.geometry.points) p = out.transform.apply(p);
  return out;
}

// --- kd-tree ---------------------------------------------------------------

namespace {
constexpr std::uint32_t kLeafSize = 8;
}

NearestNeighborIndex::NearestNeighborIndex(std::vector<Vec3> points) : points_(std::move(points)) {
  if (points_.empty()) throw Error(ErrorKind::EmptyCloud, "cannot index an empty cloud");
  if (points_.size() >= std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorKind::InvalidArgument, "cloud too large to index");
  }
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), 0u);
  nodes_.reserve(2 * points_.size() / kLeafSize + 1);
  build(0, static_cast<std::uint32_t>(points_.size()));
}

std::int32_t NearestNeighborIndex::build(std::uint32_t begin, std::uint32_t end) {
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(Node{begin, end});
  if (end - begin <= kLeafSize) return id;

  Vec3 lo = points_[order_[begin]];
  Vec3 hi = lo;
  for (std::uint32_t i = begin; i < end; ++i) {
    lo = lo.cwiseMin(points_[order_[i]]);
    hi = hi.cwiseMax(points_[order_[i]]);
  }
  int axis = 0;
  (hi - lo).maxCoeff(&axis);
  if (hi[axis] == lo[axis]) return id;  // all duplicates

  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) { return points_[a][axis] < points_[b][axis]; });
  const double split = points_[order_[mid]][axis];

  const std::int32_t left = build(begin, mid);
  const std::int32_t right = build(mid, end);
  Node& node = nodes_[id];
  node.axis = axis;
  node.split = split;
  node.left = left;
  node.right = right;
  return id;
}

void NearestNeighborIndex::search(std::int32_t id, const Vec3& p, Hit& best, double& best_sq) const {
  const Node& node = nodes_[id];
  if (node.axis < 0) {
    for (std::uint32_t i = node.begin; i < node.end; ++i) {
      const std::uint32_t idx = order_[i];
      const double d = (points_[idx] - p).squaredNorm();
      if (d < best_sq) {
        best_sq = d;
        best.index = idx;
      }
    }
    return;
  }
  // Left holds coordinates <= split, right holds >= split.
  const double diff = p[node.axis] - node.split;
  const std::int32_t near = diff < 0.0 ? node.left : node.right;
  const std::int32_t far = diff < 0.0 ? node.right : node.left;
  search(near, p, best, best_sq);
  if (diff * diff <= best_sq) search(far, p, best, best_sq);
}

NearestNeighborIndex::Hit NearestNeighborIndex::query(const Vec3& p) const {
  Hit best{0, 0.0};
  double best_sq = std::numeric_limits<double>::infinity();
  search(0, p, best, best_sq);
  best.distance = std::sqrt(best_sq);
  return best;
}

NearestNeighborIndex build_nn_index(const PointCloud& cloud) { return NearestNeighborIndex(cloud.points); }

// --- connected components ----------------------------------------------------

DisjointSets::DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t DisjointSets::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

void DisjointSets::unite(std::size_t a, std::size_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return;
  if (rank_[a] < rank_[b]) std::swap(a, b);
  parent_[b] = a;
  if (rank_[a] == rank_[b]) ++rank_[a];
}

namespace {

struct CellKey {
  std::int64_t x, y, z;
  bool operator==(const CellKey&) const = default;
};

struct CellHash {
  std::size_t operator()(const CellKey& k) const noexcept {
    std::uint64_t h = mix64(static_cast<std::uint64_t>(k.x));
    h = mix64(h ^ static_cast<std::uint64_t>(k.y));
    return static_cast<std::size_t>(mix64(h ^ static_cast<std::uint64_t>(k.z)));
  }
};

void weld_vertices(const std::vector<Vec3>& vertices, double eps, DisjointSets& sets) {
  std::unordered_map<CellKey, std::vector<std::size_t>, CellHash> grid;
  grid.reserve(vertices.size());
  auto cell_of = [eps](const Vec3& p) {
    return CellKey{static_cast<std::int64_t>(std::floor(p.x() / eps)),
                   static_cast<std::int64_t>(std::floor(p.y() / eps)),
                   static_cast<std::int64_t>(std::floor(p.z() / eps))};
  };
  const double eps_sq = eps * eps;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const CellKey c = cell_of(vertices[i]);
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        for (std::int64_t dz = -1; dz <= 1; ++dz) {
          auto it = grid.find(CellKey{c.x + dx, c.y + dy, c.z + dz});
          if (it == grid.end()) continue;
          for (std::size_t j : it->second) {
            if ((vertices[i] - vertices[j]).squaredNorm() < eps_sq) sets.unite(i, j);
          }
        }
      }
    }
    grid[c].push_back(i);
  }
}

}  // namespace

ComponentSegmentation connected_components(const Mesh& mesh, double weld_eps) {
  if (!(weld_eps >= 0.0)) throw Error(ErrorKind::InvalidArgument, "weld_eps must be >= 0");

  DisjointSets sets(mesh.vertices.size());
  if (weld_eps > 0.0) weld_vertices(mesh.vertices, weld_eps, sets);
  for (const auto& face : mesh.faces) {
    sets.unite(face[0], face[1]);
    sets.unite(face[0], face[2]);
  }

  ComponentSegmentation out;
  auto& labeling = out.labeling;
  labeling.component_of_face.resize(mesh.faces.size());
  std::unordered_map<std::size_t, std::size_t> root_to_id;
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const std::size_t root = sets.find(mesh.faces[f][0]);
    auto [it, inserted] = root_to_id.emplace(root, root_to_id.size());
    labeling.component_of_face[f] = it->second;
  }
  labeling.count = root_to_id.size();

  out.mesh.vertices = mesh.vertices;
  out.mesh.faces = mesh.faces;
  out.mesh.parts.resize(labeling.count);
  for (std::size_t k = 0; k < labeling.count; ++k) out.mesh.parts[k].part_id = "cc_" + std::to_string(k);
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    out.mesh.parts[labeling.component_of_face[f]].face_indices.push_back(f);
  }
  return out;
}

}  // namespace artk
