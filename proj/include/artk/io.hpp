#pragma once

// File formats.
//
// OBJ subset: `v x y z`, `f a b c` (1-based; `a/b/c` texture/normal suffixes
// are ignored) and `g <part_id>` starting a part group. Faces before the
// first `g` go to part "default". Comments and blank lines are skipped;
// faces with more than three vertices are rejected. The writer emits parts
// in order with their faces, coordinates at 17 significant digits.
//
// Records are JSON lines with lower_snake_case fields named as in core.hpp.

#include "artk/core.hpp"
#include "artk/datagen.hpp"
#include "artk/metrics.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace artk::io {

Mesh parse_obj(std::istream& in);   // throws Parse
Mesh read_obj(const std::filesystem::path& path);  // throws Io, Parse
void write_obj(std::ostream& out, const Mesh& mesh);
void write_obj(const std::filesystem::path& path, const Mesh& mesh);

nlohmann::json to_json(const MotionParameters& motion);
MotionParameters motion_from_json(const nlohmann::json& j);

nlohmann::json to_json(const AnnotationRecord& record);
AnnotationRecord annotation_from_json(const nlohmann::json& j);

nlohmann::json to_json(const PredictionRecord& record);
PredictionRecord prediction_from_json(const nlohmann::json& j);

// Flat object; absent metrics are omitted.
nlohmann::json to_json(const MetricsReport& report);
MetricsReport report_from_json(const nlohmann::json& j);

std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path);
std::vector<AnnotationRecord> read_annotations(const std::filesystem::path& path);
std::vector<PredictionRecord> read_predictions(const std::filesystem::path& path);

// Records with unknown fields trigger one warning on stderr; the fields are dropped.
void write_annotations(const std::filesystem::path& path, const std::vector<AnnotationRecord>& records);
void write_predictions(const std::filesystem::path& path, const std::vector<PredictionRecord>& records);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

// Loads meshes from a directory on first use; safe for concurrent readers
// once every mesh has been loaded via preload().
class MeshCache {
 public:
  explicit MeshCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  const Mesh& get(const std::string& mesh_path);  // throws MissingMesh
  void preload(const std::vector<AnnotationRecord>& records);
  MeshProvider provider();

 private:
  std::filesystem::path dir_;
  std::map<std::string, Mesh> meshes_;
};

}  // namespace artk::io
