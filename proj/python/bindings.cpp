#include "artk/articulation.hpp"
#include "artk/baselines.hpp"
#include "artk/datagen.hpp"
#include "artk/geometry.hpp"
#include "artk/io.hpp"
#include "artk/metrics.hpp"
#include "artk/moveability.hpp"
#include "artk/pose_codec.hpp"

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace artk;
using nlohmann::json;

namespace {

using Points = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<Vec3> to_points(const Points& a) {
  if (a.ndim() != 2 || a.shape(1) != 3) throw Error(ErrorKind::InvalidArgument, "points must have shape (n, 3)");
  auto r = a.unchecked<2>();
  std::vector<Vec3> out(static_cast<std::size_t>(a.shape(0)));
  for (py::ssize_t i = 0; i < a.shape(0); ++i) out[i] = Vec3(r(i, 0), r(i, 1), r(i, 2));
  return out;
}

Points from_points(const std::vector<Vec3>& pts) {
  Points a({static_cast<py::ssize_t>(pts.size()), py::ssize_t{3}});
  auto w = a.mutable_unchecked<2>();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (int k = 0; k < 3; ++k) w(i, k) = pts[i][k];
  return a;
}

py::object to_py(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }
json from_py(const py::handle& o) { return json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>()); }

template <class T, class F>
std::vector<T> records(const py::list& items, F parse) {
  std::vector<T> out;
  for (const auto& item : items) out.push_back(parse(from_py(item)));
  return out;
}

template <class T>
py::list dump(const std::vector<T>& items) {
  py::list out;
  for (const auto& r : items) out.append(to_py(io::to_json(r)));
  return out;
}

MeshProvider provider(const std::map<std::string, Mesh>& meshes) {
  return [&meshes](const std::string& path) -> const Mesh& {
    auto it = meshes.find(path);
    if (it == meshes.end()) throw Error(ErrorKind::MissingMesh, "no mesh for " + path);
    return it->second;
  };
}

PoseSpec pose_from(const py::dict& d) {
  return {d["azimuth_deg"].cast<double>(), d["elevation_deg"].cast<double>(), d["inplane_deg"].cast<double>()};
}

py::dict pose_to(const PoseSpec& p) {
  py::dict d;
  d["azimuth_deg"] = p.azimuth_deg;
  d["elevation_deg"] = p.elevation_deg;
  d["inplane_deg"] = p.inplane_deg;
  return d;
}

MotionParameters motion_from(const py::dict& d) { return io::motion_from_json(from_py(d)); }

}  // namespace

PYBIND11_MODULE(_artk, m) {
  m.doc() = "Part motion estimation toolkit";

  py::register_exception<Error>(m, "ArtkError", PyExc_RuntimeError);

  py::class_<Mesh>(m, "Mesh")
      .def(py::init([](const Points& vertices, const std::vector<Face>& faces,
                       const std::vector<std::pair<std::string, std::vector<std::size_t>>>& parts) {
             Mesh mesh;
             mesh.vertices = to_points(vertices);
             mesh.faces = faces;
             for (const auto& [id, idx] : parts) mesh.parts.push_back({id, idx});
             if (auto problems = validate_mesh(mesh); !problems.empty())
               throw Error(ErrorKind::InvalidArgument, problems.front());
             return mesh;
           }),
           py::arg("vertices"), py::arg("faces"), py::arg("parts"))
      .def_property_readonly("vertices", [](const Mesh& mesh) { return from_points(mesh.vertices); })
      .def_property_readonly("faces", [](const Mesh& mesh) { return mesh.faces; })
      .def_property_readonly("parts",
                             [](const Mesh& mesh) {
                               std::vector<std::pair<std::string, std::vector<std::size_t>>> out;
                               for (const auto& p : mesh.parts) out.emplace_back(p.part_id, p.face_indices);
                               return out;
                             })
      .def("part_ids", &Mesh::part_ids)
      .def("__repr__", [](const Mesh& mesh) {
        return "<Mesh " + std::to_string(mesh.vertices.size()) + " vertices, " + std::to_string(mesh.faces.size()) +
               " faces, " + std::to_string(mesh.parts.size()) + " parts>";
      });

  m.def("read_obj", [](const std::filesystem::path& p) { return io::read_obj(p); });
  m.def("write_obj", [](const std::filesystem::path& p, const Mesh& mesh) { io::write_obj(p, mesh); });

  m.def(
      "surface_area",
      [](const Mesh& mesh, std::optional<std::string> part) {
        return part ? surface_area(mesh, *part) : surface_area(mesh);
      },
      py::arg("mesh"), py::arg("part_id") = py::none());
  m.def("filter_small_parts", &filter_small_parts, py::arg("mesh"), py::arg("threshold") = kSmallPartThreshold);
  m.def(
      "sample_pointcloud",
      [](const Mesh& mesh, std::size_t n, std::uint64_t seed) {
        const auto c = sample_pointcloud(mesh, n, seed);
        return py::make_tuple(from_points(c.points), c.part_ids);
      },
      py::arg("mesh"), py::arg("n"), py::arg("seed"));
  m.def(
      "connected_components",
      [](const Mesh& mesh, double weld_eps) {
        const auto s = connected_components(mesh, weld_eps);
        return py::make_tuple(s.labeling.component_of_face, s.labeling.count);
      },
      py::arg("mesh"), py::arg("weld_eps") = kDefaultWeldEps);
  m.def(
      "nearest",
      [](const Points& cloud, const Points& queries) {
        const NearestNeighborIndex index(to_points(cloud));
        std::vector<std::size_t> idx;
        std::vector<double> dist;
        for (const auto& q : to_points(queries)) {
          const auto hit = index.query(q);
          idx.push_back(hit.index);
          dist.push_back(hit.distance);
        }
        return py::make_tuple(idx, dist);
      },
      py::arg("cloud"), py::arg("queries"));

  m.def("rodrigues_rotate", &rodrigues_rotate, py::arg("p"), py::arg("axis"), py::arg("origin"), py::arg("theta"));
  m.def("euler_to_rotation", [](const py::dict& pose) { return euler_to_rotation(pose_from(pose)); });
  m.def(
      "apply_motion",
      [](const Mesh& mesh, const PartSet& parts, const py::dict& motion) {
        return apply_motion(mesh, parts, motion_from(motion));
      },
      py::arg("mesh"), py::arg("parts"), py::arg("motion"));
  m.def(
      "apply_motion_points",
      [](const Points& points, const std::vector<bool>& mask, const py::dict& motion) {
        PointCloud c;
        c.points = to_points(points);
        return from_points(apply_motion(c, mask, motion_from(motion)).points);
      },
      py::arg("points"), py::arg("mask"), py::arg("motion"));
  m.def(
      "animate",
      [](const Mesh& mesh, const PartSet& parts, const py::dict& motion, int frames, double t_max) {
        return animate(mesh, parts, motion_from(motion), frames, t_max);
      },
      py::arg("mesh"), py::arg("parts"), py::arg("motion"), py::arg("frames"), py::arg("t_max") = 1.0);

  m.def("encode_pose", [](const py::dict& pose) {
    const auto b = encode_pose(pose_from(pose));
    return py::make_tuple(b.bins, b.offsets);
  });
  m.def("decode_pose", [](const std::array<int, 3>& bins, const std::array<double, 3>& offsets) {
    return pose_to(decode_pose(PoseBinned{bins, offsets}));
  });
  m.def("geodesic_deg", &geodesic_deg, py::arg("a"), py::arg("b"));

  m.def("chamfer", [](const Points& a, const Points& b) { return chamfer(to_points(a), to_points(b)); });
  m.def(
      "f_score", [](const Points& a, const Points& b, double tau) { return f_score(to_points(a), to_points(b), tau); },
      py::arg("a"), py::arg("b"), py::arg("tau") = kFScoreTau);
  m.def(
      "infer_moved_parts",
      [](const Mesh& mesh, const py::object& probs, std::uint64_t pointcloud_seed, std::uint64_t seed) {
        MoveableProbs p;
        if (py::isinstance<py::dict>(probs))
          p = probs.cast<PartProbs>();
        else
          p = probs.cast<PointProbs>();
        return infer_moved_parts(mesh, MoveabilityField::from_probs(p, mesh, pointcloud_seed), seed);
      },
      py::arg("mesh"), py::arg("probs"), py::arg("pointcloud_seed"), py::arg("seed"));

  m.def(
      "generate_dataset",
      [](std::size_t n_objects, std::size_t scenes_per_object, const std::string& split, double train_ratio,
         std::uint64_t seed) {
        DatasetOptions o;
        o.n_objects = n_objects;
        o.scenes_per_object = scenes_per_object;
        o.split = split_kind_from_string(split);
        o.train_ratio = train_ratio;
        o.seed = seed;
        const Dataset d = generate_dataset(o);
        py::dict meshes;
        for (const auto& obj : d.objects) meshes[py::str(mesh_file_name(obj.object_id))] = obj.mesh;
        py::dict out;
        out["train"] = dump(d.train);
        out["val"] = dump(d.val);
        out["meshes"] = meshes;
        return out;
      },
      py::arg("n_objects") = 10, py::arg("scenes_per_object") = 256, py::arg("split") = "image",
      py::arg("train_ratio") = 0.965, py::arg("seed") = 0);

  m.def(
      "baseline",
      [](const std::string& method, const py::list& train, const py::list& eval,
         const std::map<std::string, Mesh>& meshes, std::uint64_t seed) {
        const auto tr = records<AnnotationRecord>(train, io::annotation_from_json);
        const auto ev = records<AnnotationRecord>(eval, io::annotation_from_json);
        const auto get = provider(meshes);
        std::vector<PredictionRecord> preds;
        if (method == "oracle") {
          for (const auto& r : ev) preds.push_back(oracle_predict(r));
        } else if (method == "randmot") {
          for (const auto& r : ev) preds.push_back(randmot_predict(tr, r, get(r.mesh_path), seed));
        } else if (method == "freqmot") {
          const auto stats = build_train_stats(tr, get, seed);
          for (const auto& r : ev) preds.push_back(freqmot_predict(stats, r, get(r.mesh_path), seed));
        } else {
          throw Error(ErrorKind::InvalidArgument, "unknown method " + method);
        }
        return dump(preds);
      },
      py::arg("method"), py::arg("train"), py::arg("eval"), py::arg("meshes"), py::arg("seed") = 0);

  m.def(
      "evaluate",
      [](const py::list& gt, const py::list& pred, const std::map<std::string, Mesh>& meshes, bool reconstruction) {
        const auto g = records<AnnotationRecord>(gt, io::annotation_from_json);
        const auto p = records<PredictionRecord>(pred, io::prediction_from_json);
        MetricsReport report;
        {
          py::gil_scoped_release release;
          report = evaluate(g, p, provider(meshes), EvaluateOptions{reconstruction});
        }
        return to_py(io::to_json(report));
      },
      py::arg("gt"), py::arg("pred"), py::arg("meshes"), py::arg("reconstruction") = true);
}
