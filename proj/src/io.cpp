#include "artk/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace artk::io {

using nlohmann::json;

namespace {

[[noreturn]] void parse_error(std::size_t line_no, const std::string& what) {
  throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": " + what);
}

std::size_t parse_index(std::string_view token, std::size_t vertex_count, std::size_t line_no) {
  const auto slash = token.find('/');
  if (slash != std::string_view::npos) token = token.substr(0, slash);
  long long idx = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), idx);
  if (ec != std::errc() || ptr != token.data() + token.size() || idx == 0) {
    parse_error(line_no, "bad face index '" + std::string(token) + "'");
  }
  // Negative indices are relative to the vertices read so far.
  const long long resolved = idx > 0 ? idx - 1 : static_cast<long long>(vertex_count) + idx;
  if (resolved < 0) parse_error(line_no, "face index out of range");
  return static_cast<std::size_t>(resolved);
}

}  // namespace

Mesh parse_obj(std::istream& in) {
  Mesh mesh;
  std::string line;
  std::size_t line_no = 0;
  std::map<std::string, std::size_t> part_index;
  std::size_t current = static_cast<std::size_t>(-1);

  auto select_part = [&](const std::string& id) {
    auto [it, inserted] = part_index.emplace(id, mesh.parts.size());
    if (inserted) mesh.parts.push_back(PartGroup{id, {}});
    current = it->second;
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag)) continue;

    if (tag == "v") {
      double x, y, z;
      if (!(ss >> x >> y >> z)) parse_error(line_no, "vertex needs three coordinates");
      mesh.vertices.emplace_back(x, y, z);
    } else if (tag == "f") {
      std::vector<std::string> tokens;
      for (std::string t; ss >> t;) tokens.push_back(t);
      if (tokens.size() != 3) {
        parse_error(line_no, "only triangles are supported (face has " + std::to_string(tokens.size()) + " vertices)");
      }
      Face face{};
      for (int k = 0; k < 3; ++k) face[k] = parse_index(tokens[k], mesh.vertices.size(), line_no);
      if (current == static_cast<std::size_t>(-1)) select_part("default");
      mesh.parts[current].face_indices.push_back(mesh.faces.size());
      mesh.faces.push_back(face);
    } else if (tag == "g" || tag == "o") {
      std::string id;
      std::getline(ss >> std::ws, id);
      while (!id.empty() && std::isspace(static_cast<unsigned char>(id.back()))) id.pop_back();
      if (id.empty()) parse_error(line_no, "group without a name");
      select_part(id);
    }
    // vn, vt, s, usemtl, mtllib: ignored
  }

  // Groups that never received faces are dropped.
  std::erase_if(mesh.parts, [](const PartGroup& p) { return p.face_indices.empty(); });

  const auto violations = validate_mesh(mesh);
  if (!violations.empty()) throw Error(ErrorKind::Parse, "invalid mesh: " + violations.front());
  return mesh;
}

Mesh read_obj(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  try {
    return parse_obj(in);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Parse) throw;
    throw Error(ErrorKind::Parse, path.string() + ": " + e.what());
  }
}

void write_obj(std::ostream& out, const Mesh& mesh) {
  // Faces are renumbered part by part; vertices keep their order.
  char buf[96];
  for (const auto& v : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v.x(), v.y(), v.z());
    out << buf;
  }
  for (const auto& part : mesh.parts) {
    out << "g " << part.part_id << '\n';
    for (std::size_t f : part.face_indices) {
      const auto& face = mesh.faces[f];
      out << "f " << face[0] + 1 << ' ' << face[1] + 1 << ' ' << face[2] + 1 << '\n';
    }
  }
}

void write_obj(const std::filesystem::path& path, const Mesh& mesh) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  write_obj(out, mesh);
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

// --- JSON ------------------------------------------------------------------

namespace {

json vec(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 vec_from(const json& j, const char* field) {
  if (!j.is_array() || j.size() != 3) {
    throw Error(ErrorKind::Parse, std::string("field '") + field + "' must be a 3-element array");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

const json& field(const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) throw Error(ErrorKind::Parse, std::string("missing field '") + name + "'");
  return *it;
}

template <typename T>
T get(const json& j, const char* name) {
  try {
    return field(j, name).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("field '") + name + "': " + e.what());
  }
}

json unknown_fields(const json& j, std::initializer_list<const char*> known) {
  json extra = json::object();
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find_if(known.begin(), known.end(), [&](const char* k) { return it.key() == k; }) == known.end()) {
      extra[it.key()] = it.value();
    }
  }
  return extra;
}

template <typename Fn>
auto wrap_json_errors(Fn fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, e.what());
  }
}

}  // namespace

json to_json(const MotionParameters& m) {
  return {{"motion_type", std::string(to_string(m.motion_type))},
          {"axis", vec(m.axis)},
          {"origin", vec(m.origin)},
          {"magnitude", m.magnitude}};
}

MotionParameters motion_from_json(const json& j) {
  return wrap_json_errors([&] {
    MotionParameters m;
    m.motion_type = motion_type_from_string(get<std::string>(j, "motion_type"));
    m.axis = vec_from(field(j, "axis"), "axis");
    m.origin = vec_from(field(j, "origin"), "origin");
    m.magnitude = get<double>(j, "magnitude");
    return m;
  });
}

json to_json(const AnnotationRecord& r) {
  return {{"scene_id", r.scene_id},
          {"object_id", r.object_id},
          {"mesh_path", r.mesh_path},
          {"pose", {{"azimuth_deg", r.pose.azimuth_deg}, {"elevation_deg", r.pose.elevation_deg}, {"inplane_deg", r.pose.inplane_deg}}},
          {"fov_deg", r.fov_deg},
          {"moved_part_id", r.moved_part_id},
          {"motion", to_json(r.motion)},
          {"pointcloud_seed", r.pointcloud_seed}};
}

AnnotationRecord annotation_from_json(const json& j) {
  return wrap_json_errors([&] {
    if (!j.is_object()) throw Error(ErrorKind::Parse, "annotation record must be an object");
    AnnotationRecord r;
    r.scene_id = get<std::string>(j, "scene_id");
    r.object_id = get<std::string>(j, "object_id");
    r.mesh_path = get<std::string>(j, "mesh_path");
    const json& pose = field(j, "pose");
    r.pose.azimuth_deg = get<double>(pose, "azimuth_deg");
    r.pose.elevation_deg = get<double>(pose, "elevation_deg");
    r.pose.inplane_deg = get<double>(pose, "inplane_deg");
    r.fov_deg = get<double>(j, "fov_deg");
    r.moved_part_id = get<std::string>(j, "moved_part_id");
    r.motion = motion_from_json(field(j, "motion"));
    r.pointcloud_seed = get<std::uint64_t>(j, "pointcloud_seed");
    r.extra = unknown_fields(j, {"scene_id", "object_id", "mesh_path", "pose", "fov_deg", "moved_part_id", "motion",
                                 "pointcloud_seed"});
    validate_record(r);
    return r;
  });
}

json to_json(const PredictionRecord& r) {
  json j = {{"scene_id", r.scene_id},
            {"pose", {{"bins", r.pose.bins}, {"offsets", r.pose.offsets}}},
            {"motion_type_scores", r.motion_type_scores},
            {"axis", vec(r.axis)},
            {"origin", vec(r.origin)},
            {"magnitude", r.magnitude}};
  std::visit([&](const auto& probs) { j["point_moveable_prob"] = probs; }, r.point_moveable_prob);
  if (r.pose_logits) {
    j["pose_logits"] = {{"azimuth", r.pose_logits->logits[0]},
                        {"elevation", r.pose_logits->logits[1]},
                        {"inplane", r.pose_logits->logits[2]}};
  }
  return j;
}

PredictionRecord prediction_from_json(const json& j) {
  return wrap_json_errors([&] {
    if (!j.is_object()) throw Error(ErrorKind::Parse, "prediction record must be an object");
    PredictionRecord r;
    r.scene_id = get<std::string>(j, "scene_id");
    const json& pose = field(j, "pose");
    r.pose.bins = get<std::array<int, 3>>(pose, "bins");
    r.pose.offsets = get<std::array<double, 3>>(pose, "offsets");
    r.motion_type_scores = get<std::array<double, 2>>(j, "motion_type_scores");
    r.axis = vec_from(field(j, "axis"), "axis");
    r.origin = vec_from(field(j, "origin"), "origin");
    r.magnitude = get<double>(j, "magnitude");
    const json& probs = field(j, "point_moveable_prob");
    if (probs.is_array()) {
      r.point_moveable_prob = probs.get<PointProbs>();
    } else if (probs.is_object()) {
      r.point_moveable_prob = probs.get<PartProbs>();
    } else {
      throw Error(ErrorKind::Parse, "point_moveable_prob must be an array or an object");
    }
    if (auto it = j.find("pose_logits"); it != j.end() && !it->is_null()) {
      PoseLogits logits;
      logits.logits[0] = get<std::vector<double>>(*it, "azimuth");
      logits.logits[1] = get<std::vector<double>>(*it, "elevation");
      logits.logits[2] = get<std::vector<double>>(*it, "inplane");
      r.pose_logits = std::move(logits);
    }
    r.extra = unknown_fields(j, {"scene_id", "pose", "motion_type_scores", "axis", "origin", "magnitude",
                                 "point_moveable_prob", "pose_logits"});
    validate_record(r);
    return r;
  });
}

json to_json(const MetricsReport& m) {
  json j = {{"pose_acc30", m.pose_acc30},   {"type_acc", m.type_acc},       {"axis_err_deg", m.axis_err_deg},
            {"seg_acc", m.seg_acc},         {"n_scenes", m.n_scenes},       {"n_revolute", m.n_revolute},
            {"n_prismatic", m.n_prismatic}};
  auto optional = [&](const char* name, const std::optional<double>& v) {
    if (v) j[name] = *v;
  };
  optional("origin_err_l1", m.origin_err_l1);
  optional("mag_r_deg", m.mag_r_deg);
  optional("mag_p_l1", m.mag_p_l1);
  optional("chamfer", m.chamfer);
  optional("f1_at_0_1", m.f1_at_0_1);
  return j;
}

MetricsReport report_from_json(const json& j) {
  return wrap_json_errors([&] {
    MetricsReport m;
    m.pose_acc30 = get<double>(j, "pose_acc30");
    m.type_acc = get<double>(j, "type_acc");
    m.axis_err_deg = get<double>(j, "axis_err_deg");
    m.seg_acc = get<double>(j, "seg_acc");
    m.n_scenes = get<std::size_t>(j, "n_scenes");
    m.n_revolute = get<std::size_t>(j, "n_revolute");
    m.n_prismatic = get<std::size_t>(j, "n_prismatic");
    auto optional = [&](const char* name) -> std::optional<double> {
      if (auto it = j.find(name); it != j.end()) return it->get<double>();
      return std::nullopt;
    };
    m.origin_err_l1 = optional("origin_err_l1");
    m.mag_r_deg = optional("mag_r_deg");
    m.mag_p_l1 = optional("mag_p_l1");
    m.chamfer = optional("chamfer");
    m.f1_at_0_1 = optional("f1_at_0_1");
    return m;
  });
}

std::vector<json> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::vector<json> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::Parse, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

namespace {

template <typename Record, typename Parse>
std::vector<Record> read_records(const std::filesystem::path& path, Parse parse) {
  const auto lines = read_jsonl(path);
  std::vector<Record> out;
  out.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    try {
      out.push_back(parse(lines[i]));
    } catch (const Error& e) {
      throw Error(ErrorKind::Parse, path.string() + ": record " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return out;
}

template <typename Record>
void write_records(const std::filesystem::path& path, const std::vector<Record>& records) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  std::size_t with_extra = 0;
  for (const auto& r : records) {
    if (!r.extra.empty()) ++with_extra;
    out << to_json(r).dump() << '\n';
  }
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
  if (with_extra > 0) {
    std::cerr << "warning: dropped unknown fields from " << with_extra << " record(s) written to " << path.string()
              << '\n';
  }
}

}  // namespace

std::vector<AnnotationRecord> read_annotations(const std::filesystem::path& path) {
  return read_records<AnnotationRecord>(path, annotation_from_json);
}

std::vector<PredictionRecord> read_predictions(const std::filesystem::path& path) {
  return read_records<PredictionRecord>(path, prediction_from_json);
}

void write_annotations(const std::filesystem::path& path, const std::vector<AnnotationRecord>& records) {
  write_records(path, records);
}

void write_predictions(const std::filesystem::path& path, const std::vector<PredictionRecord>& records) {
  write_records(path, records);
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, path.string() + ": " + e.what());
  }
}

const Mesh& MeshCache::get(const std::string& mesh_path) {
  if (auto it = meshes_.find(mesh_path); it != meshes_.end()) return it->second;
  const auto path = dir_ / mesh_path;
  if (!std::filesystem::exists(path)) throw Error(ErrorKind::MissingMesh, "no mesh file " + path.string());
  return meshes_.emplace(mesh_path, read_obj(path)).first->second;
}

void MeshCache::preload(const std::vector<AnnotationRecord>& records) {
  for (const auto& r : records) get(r.mesh_path);
}

MeshProvider MeshCache::provider() {
  return [this](const std::string& mesh_path) -> const Mesh& { return get(mesh_path); };
}

}  // namespace artk::io
