#include "artk/datagen.hpp"
#include "artk/geometry.hpp"
#include "artk/io.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <set>
#include <sstream>

using namespace artk;

namespace {

double point_line_distance(const Vec3& p, const Vec3& origin, const Vec3& axis) {
  return (p - origin).cross(axis).norm();
}

std::set<std::string> object_ids(const std::vector<AnnotationRecord>& records) {
  std::set<std::string> ids;
  for (const auto& r : records) ids.insert(r.object_id);
  return ids;
}

std::string serialized(const Dataset& d) {
  std::ostringstream out;
  for (const auto& r : d.train) out << io::to_json(r).dump() << '\n';
  for (const auto& r : d.val) out << io::to_json(r).dump() << '\n';
  for (const auto& o : d.objects) io::write_obj(out, o.mesh);
  return out.str();
}

}  // namespace

TEST_CASE("generate_object templates") {
  int drawers_seen = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto obj = generate_object(TemplateKind::cabinet_drawers, seed);
    CHECK(validate_mesh(obj.mesh).empty());
    CHECK(obj.mesh.parts.size() == obj.joints.size() + 1);
    for (const auto& j : obj.joints) {
      CHECK(j.motion_type == MotionType::prismatic);
      CHECK(j.axis == Vec3::UnitZ());
    }
    if (obj.joints.size() == 3) ++drawers_seen;
  }
  CHECK(drawers_seen > 0);

  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto obj = generate_object(TemplateKind::cabinet_doors, seed);
    for (const auto& j : obj.joints) {
      CHECK(j.motion_type == MotionType::revolute);
      CHECK(std::abs(std::abs(j.axis.y()) - 1.0) < 1e-15);
      // The hinge line runs along a vertical edge of the door box.
      const auto& part = obj.mesh.part(j.part_id);
      std::size_t on_line = 0;
      std::set<std::size_t> verts;
      for (std::size_t f : part.face_indices) verts.insert(obj.mesh.faces[f].begin(), obj.mesh.faces[f].end());
      for (std::size_t v : verts) on_line += point_line_distance(obj.mesh.vertices[v], j.origin, j.axis) < 1e-9;
      CHECK(on_line == 2);
    }
  }

  const auto a = generate_object(TemplateKind::mixed, 77), b = generate_object(TemplateKind::mixed, 77);
  CHECK(a.mesh.vertices == b.mesh.vertices);
  CHECK(a.mesh.faces == b.mesh.faces);
}

TEST_CASE("every emitted moveable part passes the area filter") {
  for (auto kind : kAllTemplateKinds) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const auto obj = generate_object(kind, seed);
      const double total = surface_area(obj.mesh);
      const auto kept = filter_small_parts(obj.mesh);
      for (const auto& j : obj.joints) {
        double area = 0.0;
        for (std::size_t f : obj.mesh.part(j.part_id).face_indices) {
          const auto& t = obj.mesh.faces[f];
          area += 0.5 * (obj.mesh.vertices[t[1]] - obj.mesh.vertices[t[0]])
                            .cross(obj.mesh.vertices[t[2]] - obj.mesh.vertices[t[0]])
                            .norm();
        }
        CHECK(area / total >= 0.05);
        CHECK(std::find(kept.begin(), kept.end(), j.part_id) != kept.end());
      }
    }
  }
}

TEST_CASE("objects are normalized to the unit box") {
  const auto obj = generate_object(TemplateKind::lid_box, 5);
  Vec3 lo = Vec3::Constant(1e9), hi = Vec3::Constant(-1e9);
  for (const auto& v : obj.mesh.vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  CHECK((lo + hi).norm() < 1e-12);
  CHECK((hi - lo).maxCoeff() == doctest::Approx(1.0));
}

TEST_CASE("sample_scene") {
  const auto obj = generate_object(TemplateKind::cabinet_doors, 3);
  GeneratorConfig config;
  std::vector<double> az, el, ip;
  const int n = 100000;
  az.reserve(n);
  for (int i = 0; i < n; ++i) {
    const auto s = sample_scene(obj, derive_seed(19, static_cast<std::uint64_t>(i)), "s", config);
    const auto& r = s.record;
    az.push_back(r.pose.azimuth_deg);
    el.push_back(r.pose.elevation_deg);
    ip.push_back(r.pose.inplane_deg);
    if (i < 10000) {
      CHECK(r.motion.magnitude >= 0.0);
      CHECK(r.motion.magnitude <= 120.0 * M_PI / 180.0);
      CHECK(r.fov_deg >= 20.0);
      CHECK(r.fov_deg <= 60.0);
    }
    if (i < 3) CHECK(s.articulated_cloud.size() == kInputCloudSize);
  }
  CHECK(oracle::ks_uniform(az, -90, 90) < oracle::ks_critical_01(n));
  CHECK(oracle::ks_uniform(el, -45, 45) < oracle::ks_critical_01(n));
  CHECK(oracle::ks_uniform(ip, -20, 20) < oracle::ks_critical_01(n));

  const auto a = sample_scene(obj, 123, "x"), b = sample_scene(obj, 123, "x");
  CHECK(io::to_json(a.record).dump() == io::to_json(b.record).dump());
  CHECK(a.articulated_cloud.points == b.articulated_cloud.points);

  // The cloud is the rest sample, articulated, then posed.
  const auto rest = sample_pointcloud(obj.mesh, kInputCloudSize, a.record.pointcloud_seed);
  const Mat3 pose = euler_to_rotation(a.record.pose);
  const auto moved = apply_motion(rest, PartSet{a.record.moved_part_id}, a.record.motion);
  for (std::size_t i = 0; i < rest.size(); i += 97) {
    CHECK((a.articulated_cloud.points[i] - pose * moved.points[i]).norm() < 1e-12);
  }

  // Prismatic drawers stay within 0.4 of the (normalized) body depth.
  const auto drawers = generate_object(TemplateKind::cabinet_drawers, 8);
  for (int i = 0; i < 1000; ++i) {
    const auto r = sample_scene(drawers, static_cast<std::uint64_t>(i), "d").record;
    const auto& j = *std::find_if(drawers.joints.begin(), drawers.joints.end(),
                                  [&](const JointSpec& js) { return js.part_id == r.moved_part_id; });
    CHECK(r.motion.magnitude >= 0.0);
    CHECK(r.motion.magnitude <= j.max_magnitude);
  }
}

TEST_CASE("generate_dataset splits") {
  DatasetOptions o;
  o.n_objects = 10;
  o.scenes_per_object = 256;
  o.train_ratio = 0.9;
  o.seed = 1;
  const Dataset image = generate_dataset(o);
  CHECK(image.train.size() == 2304);
  CHECK(image.val.size() == 256);
  CHECK(object_ids(image.train) == object_ids(image.val));
  CHECK(object_ids(image.train).size() == 10);

  o.scenes_per_object = 8;
  o.split = SplitKind::per_object;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    o.seed = seed;
    const Dataset obj = generate_dataset(o);
    const auto train = object_ids(obj.train), val = object_ids(obj.val);
    for (const auto& id : val) CHECK(!train.contains(id));
    CHECK(train.size() + val.size() == 10);
    CHECK(obj.train.size() + obj.val.size() == 80);
  }

  o.seed = 4;
  CHECK(serialized(generate_dataset(o)) == serialized(generate_dataset(o)));
  o.seed = 5;
  const auto other = serialized(generate_dataset(o));
  o.seed = 4;
  CHECK(serialized(generate_dataset(o)) != other);

  o.n_objects = 1;
  try {
    generate_dataset(o);
    FAIL("expected TooFewObjects");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TooFewObjects);
  }
}
