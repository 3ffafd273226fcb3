#include "artk/geometry.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace artk;

TEST_CASE("validate_mesh") {
  CHECK(validate_mesh(oracle::unit_cube()).empty());

  Mesh bad = oracle::unit_cube();
  bad.faces[0][1] = 99;
  CHECK(validate_mesh(bad) == std::vector<std::string>{"face 0: index out of range"});

  Mesh overlap = oracle::unit_cube();
  overlap.parts[0].face_indices = {0, 1, 2, 3, 4, 5};
  overlap.parts.push_back({"b", {3, 6, 7, 8, 9, 10, 11}});
  CHECK(validate_mesh(overlap) == std::vector<std::string>{"parts overlap at face 3"});
}

TEST_CASE("normalize_axis") {
  CHECK(normalize_axis(Vec3(0, 0, 2)).isApprox(Vec3(0, 0, 1)));
  CHECK(normalize_axis(Vec3(3, 4, 0)).isApprox(Vec3(0.6, 0.8, 0)));
  CHECK_THROWS_AS(normalize_axis(Vec3::Zero()), Error);
}

TEST_CASE("surface_area") {
  CHECK(surface_area(oracle::unit_cube()) == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(triangle_area(Vec3(0, 0, 0), Vec3(1, 1, 1), Vec3(2, 2, 2)) == 0.0);

  Rng rng(3);
  Mesh m;
  oracle::add_quad(m, "body", 0, 1, 0, 1);
  oracle::add_quad(m, "drawer", 2, 2.5, 0, 0.3);
  for (auto& v : m.vertices) v += oracle::random_point(rng, -0.1, 0.1);
  double body = 0, drawer = 0;
  for (std::size_t f = 0; f < m.faces.size(); ++f) {
    const auto& a = m.vertices[m.faces[f][0]];
    const auto& b = m.vertices[m.faces[f][1]];
    const auto& c = m.vertices[m.faces[f][2]];
    (f < 2 ? body : drawer) += 0.5 * (b - a).cross(c - a).norm();
  }
  CHECK(surface_area(m, "drawer") / surface_area(m) == doctest::Approx(drawer / (body + drawer)).epsilon(1e-12));
  CHECK_THROWS_AS(surface_area(m, "lid"), Error);
}

TEST_CASE("filter_small_parts") {
  CHECK(filter_small_parts(oracle::unit_cube()) == std::vector<std::string>{"cube"});

  Mesh m;
  oracle::add_quad(m, "big", 0, 0.96, 0, 1);
  oracle::add_quad(m, "small", 2, 2.04, 0, 1);
  CHECK(filter_small_parts(m) == std::vector<std::string>{"big"});

  // 1 / (19 + 1) is exactly 0.05 in double arithmetic.
  Mesh five;
  oracle::add_quad(five, "big", 0, 19, 0, 1);
  oracle::add_quad(five, "five", 0, 1, 2, 3);
  CHECK(surface_area(five, "five") / surface_area(five) == 0.05);
  CHECK(filter_small_parts(five) == std::vector<std::string>{"big", "five"});
}

TEST_CASE("sample_pointcloud") {
  Mesh tri;
  tri.vertices = {{0.3, -1, 2}, {1, 0.5, 0.1}, {-0.7, 2, 1}};
  tri.faces = {{0, 1, 2}};
  tri.parts = {{"t", {0}}};
  const Vec3 normal = (tri.vertices[1] - tri.vertices[0]).cross(tri.vertices[2] - tri.vertices[0]).normalized();
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto cloud = sample_pointcloud(tri, 1, seed);
    REQUIRE(cloud.size() == 1);
    CHECK(std::abs(normal.dot(cloud.points[0] - tri.vertices[0])) < 1e-12);
  }

  Mesh two;
  oracle::add_quad(two, "a", 0, 1, 0, 1);
  oracle::add_quad(two, "b", 5, 5.5, 0, 2);
  const auto cloud = sample_pointcloud(two, 10000, 11);
  const auto in_a = std::count(cloud.part_ids.begin(), cloud.part_ids.end(), "a");
  CHECK(std::abs(in_a - 5000) <= 300);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const double x = cloud.points[i].x();
    CHECK((cloud.part_ids[i] == "a" ? (x >= 0 && x <= 1) : (x >= 5 && x <= 5.5)));
  }

  const auto again = sample_pointcloud(two, 10000, 11);
  CHECK(again.points == cloud.points);
  CHECK(again.part_ids == cloud.part_ids);

  // Smaller samples with the same seed are prefixes.
  const auto prefix = sample_pointcloud(two, 100, 11);
  CHECK(std::equal(prefix.points.begin(), prefix.points.end(), cloud.points.begin()));

  Mesh flat;
  flat.vertices = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
  flat.faces = {{0, 1, 2}};
  flat.parts = {{"p", {0}}};
  CHECK_THROWS_AS(sample_pointcloud(flat, 10, 0), Error);
}

TEST_CASE("normalize_to_unit_box") {
  PointCloud c;
  c.points = {{0, 0, 0}, {2, 0, 0}};
  const auto n = normalize_to_unit_box(c);
  CHECK(n.transform.scale == doctest::Approx(0.5));
  CHECK(n.transform.translation.isApprox(Vec3(-1, 0, 0)));
  CHECK(n.geometry.points[0].isApprox(Vec3(-0.5, 0, 0)));
  CHECK(n.geometry.points[1].isApprox(Vec3(0.5, 0, 0)));

  PointCloud unit;
  unit.points = {{-0.5, -0.2, 0.3}, {0.5, 0.2, -0.3}};
  const auto id = normalize_to_unit_box(unit);
  CHECK(std::abs(id.transform.scale - 1.0) < 1e-12);
  CHECK(id.transform.translation.norm() < 1e-12);

  Rng rng(5);
  PointCloud r;
  r.points = oracle::random_cloud(rng, 500, -3, 7);
  const auto rn = normalize_to_unit_box(r);
  double max_extent = 0;
  for (int k = 0; k < 3; ++k) {
    double lo = 1e9, hi = -1e9;
    for (const auto& p : rn.geometry.points) {
      lo = std::min(lo, p[k]);
      hi = std::max(hi, p[k]);
    }
    CHECK(std::abs(lo + hi) < 1e-12);
    max_extent = std::max(max_extent, hi - lo);
  }
  CHECK(max_extent == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t i = 0; i < r.size(); ++i) {
    CHECK((rn.transform.invert(rn.geometry.points[i]) - r.points[i]).norm() < 1e-9);
  }

  PointCloud single;
  single.points = {{1, 1, 1}, {1, 1, 1}};
  CHECK_THROWS_AS(normalize_to_unit_box(single), Error);
}

TEST_CASE("nearest neighbour index") {
  Rng rng(17);
  const auto cloud = oracle::random_cloud(rng, 200);
  const NearestNeighborIndex index(cloud);
  for (const auto& p : cloud) CHECK(index.query(p).distance == 0.0);
  for (int q = 0; q < 200; ++q) {
    const Vec3 p = oracle::random_point(rng, -1.2, 1.2);
    const auto hit = index.query(p);
    CHECK(hit.distance == oracle::nn_distance(cloud, p));
    CHECK((cloud[hit.index] - p).norm() == hit.distance);
  }

  std::vector<Vec3> dup(20, Vec3(0.1, 0.2, 0.3));
  const NearestNeighborIndex dindex(dup);
  const auto hit = dindex.query(Vec3(0.1, 0.2, 0.3));
  CHECK(hit.distance == 0.0);
  CHECK(hit.index < dup.size());

  CHECK_THROWS_AS(NearestNeighborIndex(std::vector<Vec3>{}), Error);
}

TEST_CASE("connected components") {
  Mesh two;
  two.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {5, 0, 0}, {6, 0, 0}, {5, 1, 0}};
  two.faces = {{0, 1, 2}, {3, 4, 5}};
  two.parts = {{"all", {0, 1}}};
  CHECK(connected_components(two).labeling.count == 2);

  // Two triangles joined only through duplicated seam vertices.
  Mesh halves;
  halves.vertices = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
  halves.vertices.insert(halves.vertices.end(), {{0, 0, 0}, {1, 1, 0}, {0, 0, 1}});
  halves.faces = {{0, 1, 2}, {4, 5, 6}};
  halves.parts = {{"all", {0, 1}}};
  CHECK(connected_components(halves, 0.0).labeling.count == 2);
  CHECK(connected_components(halves, 1e-6).labeling.count == 1);

  const auto seg = connected_components(two);
  CHECK(seg.mesh.parts.size() == 2);
  CHECK(seg.mesh.parts[0].part_id == "cc_0");
  CHECK(validate_mesh(seg.mesh).empty());

  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const Mesh soup = oracle::random_soup(rng, 50);
    for (double eps : {0.0, 1e-6}) {
      const auto labels = connected_components(soup, eps).labeling.component_of_face;
      CHECK(oracle::canonical(labels) == oracle::component_labels(soup, eps));
    }
  }
}
