#include "artk/cli.hpp"

#include "artk/articulation.hpp"
#include "artk/baselines.hpp"
#include "artk/datagen.hpp"
#include "artk/geometry.hpp"
#include "artk/io.hpp"
#include "artk/metrics.hpp"
#include "artk/parallel.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

namespace artk::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

PartSet parse_parts(const std::string& csv) {
  PartSet parts;
  std::stringstream ss(csv);
  for (std::string id; std::getline(ss, id, ',');) {
    if (!id.empty()) parts.insert(id);
  }
  return parts;
}

MotionParameters read_motion(const fs::path& path) {
  const json j = io::read_json(path);
  MotionParameters m = io::motion_from_json(j.contains("motion") ? j.at("motion") : j);
  m.axis = normalize_axis(m.axis);
  return m;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());
}

json joint_json(const JointSpec& j) {
  return {{"part_id", j.part_id},
          {"motion_type", std::string(to_string(j.motion_type))},
          {"axis", {j.axis.x(), j.axis.y(), j.axis.z()}},
          {"origin", {j.origin.x(), j.origin.y(), j.origin.z()}},
          {"min_magnitude", j.min_magnitude},
          {"max_magnitude", j.max_magnitude}};
}

// --- generate ---

struct GenerateArgs {
  std::string out;
  std::size_t objects = 10;
  std::size_t scenes = 256;
  std::string split = "image";
  std::uint64_t seed = 0;
  double train_ratio = 0.965;
};

int cmd_generate(const GenerateArgs& a) {
  DatasetOptions options;
  options.n_objects = a.objects;
  options.scenes_per_object = a.scenes;
  options.split = split_kind_from_string(a.split);
  options.seed = a.seed;
  options.train_ratio = a.train_ratio;

  const Dataset data = generate_dataset(options);

  const fs::path out(a.out);
  ensure_dir(out / "meshes");
  for (const auto& object : data.objects) io::write_obj(out / "meshes" / mesh_file_name(object.object_id), object.mesh);
  io::write_annotations(out / "train.jsonl", data.train);
  io::write_annotations(out / "val.jsonl", data.val);

  const auto& g = options.generator;
  json objects = json::array();
  for (const auto& object : data.objects) {
    json joints = json::array();
    for (const auto& j : object.joints) joints.push_back(joint_json(j));
    objects.push_back({{"object_id", object.object_id},
                       {"kind", std::string(to_string(object.kind))},
                       {"seed", object.seed},
                       {"attempts", object.attempts},
                       {"joints", joints}});
  }
  json manifest = {
      {"seed", options.seed},
      {"n_objects", options.n_objects},
      {"scenes_per_object", options.scenes_per_object},
      {"split", std::string(to_string(options.split))},
      {"train_ratio", options.train_ratio},
      {"n_train", data.train.size()},
      {"n_val", data.val.size()},
      {"generator",
       {{"body_dim_range", {g.min_body_dim, g.max_body_dim}},
        {"max_revolute_deg", g.max_revolute_deg},
        {"prismatic_depth_fraction", g.prismatic_depth_fraction},
        {"min_part_area_fraction", g.min_part_area_fraction},
        {"azimuth_range", g.azimuth_range},
        {"elevation_range", g.elevation_range},
        {"inplane_range", g.inplane_range},
        {"fov_range", g.fov_range},
        {"template_weights",
         {{"cabinet_drawers", g.template_weights[0]},
          {"cabinet_doors", g.template_weights[1]},
          {"mixed", g.template_weights[2]},
          {"lid_box", g.template_weights[3]}}},
        {"pointcloud_points", kInputCloudSize}}},
      {"objects", objects}};
  io::write_json(out / "manifest.json", manifest);

  std::cout << "wrote " << data.objects.size() << " meshes, " << data.train.size() << " train and "
            << data.val.size() << " val scenes to " << out.string() << '\n';
  return kOk;
}

// --- articulate / animate ---

struct ArticulateArgs {
  std::string mesh, parts, motion, out;
};

int cmd_articulate(const ArticulateArgs& a) {
  const Mesh mesh = io::read_obj(a.mesh);
  const MotionParameters motion = read_motion(a.motion);
  io::write_obj(a.out, apply_motion(mesh, parse_parts(a.parts), motion));
  return kOk;
}

struct AnimateArgs {
  std::string mesh, parts, motion, out_dir;
  int frames = 10;
  double t_max = 1.0;
};

int cmd_animate(const AnimateArgs& a) {
  if (a.frames < 2) throw UsageError("--frames must be >= 2");
  const Mesh mesh = io::read_obj(a.mesh);
  const MotionParameters motion = read_motion(a.motion);
  const auto frames = animate(mesh, parse_parts(a.parts), motion, a.frames, a.t_max);
  ensure_dir(a.out_dir);
  for (std::size_t k = 0; k < frames.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%04zu.obj", k);
    io::write_obj(fs::path(a.out_dir) / name, frames[k]);
  }
  std::cout << "wrote " << frames.size() << " frames to " << a.out_dir << '\n';
  return kOk;
}

// --- baseline ---

struct BaselineArgs {
  std::string method, train, eval, meshes, out;
  std::uint64_t seed = 0;
};

int cmd_baseline(const BaselineArgs& a) {
  if (a.method != "randmot" && a.method != "freqmot" && a.method != "oracle") {
    throw UsageError("--method must be randmot, freqmot or oracle");
  }
  if (a.method != "oracle" && a.train.empty()) throw UsageError("--train is required for " + a.method);

  const auto eval = io::read_annotations(a.eval);
  std::vector<PredictionRecord> preds(eval.size());

  if (a.method == "oracle") {
    for (std::size_t i = 0; i < eval.size(); ++i) preds[i] = oracle_predict(eval[i]);
  } else {
    if (a.meshes.empty()) throw UsageError("--meshes is required for " + a.method);
    const auto train = io::read_annotations(a.train);
    io::MeshCache cache(a.meshes);
    cache.preload(eval);
    if (a.method == "randmot") {
      parallel_for(eval.size(), [&](std::size_t i) {
        preds[i] = randmot_predict(train, eval[i], cache.get(eval[i].mesh_path), a.seed);
      });
    } else {
      cache.preload(train);
      const TrainStats stats = build_train_stats(train, cache.provider(), a.seed);
      parallel_for(eval.size(), [&](std::size_t i) {
        preds[i] = freqmot_predict(stats, eval[i], cache.get(eval[i].mesh_path), a.seed);
      });
    }
  }
  io::write_predictions(a.out, preds);
  return kOk;
}

// --- evaluate ---

struct EvaluateArgs {
  std::string gt, pred, meshes, out;
  bool no_3d = false;
};

int cmd_evaluate(const EvaluateArgs& a) {
  const auto gt = io::read_annotations(a.gt);
  const auto pred = io::read_predictions(a.pred);
  io::MeshCache cache(a.meshes);
  cache.preload(gt);
  EvaluateOptions options;
  options.reconstruction = !a.no_3d;
  const MetricsReport report = evaluate(gt, pred, cache.provider(), options);
  const json j = io::to_json(report);
  io::write_json(a.out, j);
  std::cout << j.dump(2) << '\n';
  return kOk;
}

// --- segment-cc ---

struct SegmentArgs {
  std::string mesh, out;
  double weld_eps = kDefaultWeldEps;
};

int cmd_segment_cc(const SegmentArgs& a) {
  if (!(a.weld_eps >= 0.0)) throw UsageError("--weld-eps must be >= 0");
  const Mesh mesh = io::read_obj(a.mesh);
  const auto seg = connected_components(mesh, a.weld_eps);
  json parts = json::object();
  for (const auto& part : seg.mesh.parts) parts[part.part_id] = part.face_indices;
  io::write_json(a.out, {{"component_count", seg.labeling.count}, {"weld_eps", a.weld_eps}, {"parts", parts}});
  std::cout << "components: " << seg.labeling.count << '\n';
  return kOk;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Io:
    case ErrorKind::Parse:
    case ErrorKind::MissingMesh:
      return kIo;
    case ErrorKind::SceneMismatch:
      return kDataMismatch;
    default:
      return kUsage;
  }
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Articulation toolkit: datasets, articulation, baselines and evaluation", "artk"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Generate a procedural articulated-object dataset");
  generate->add_option("--out", gen.out, "Output directory")->required();
  generate->add_option("--objects", gen.objects, "Number of objects")->check(CLI::PositiveNumber);
  generate->add_option("--scenes", gen.scenes, "Scenes per object")->check(CLI::PositiveNumber);
  generate->add_option("--split", gen.split, "Train/val split")->check(CLI::IsMember({"image", "object"}));
  generate->add_option("--seed", gen.seed, "Random seed");
  generate->add_option("--train-ratio", gen.train_ratio, "Train fraction")->check(CLI::Range(0.0, 1.0));

  ArticulateArgs art;
  auto* articulate = app.add_subcommand("articulate", "Apply a motion to mesh parts and write the result");
  articulate->add_option("--mesh", art.mesh, "Input OBJ")->required();
  articulate->add_option("--parts", art.parts, "Comma-separated moving part ids")->required();
  articulate->add_option("--motion", art.motion, "Motion JSON")->required();
  articulate->add_option("--out", art.out, "Output OBJ")->required();

  AnimateArgs anim;
  auto* animate_cmd = app.add_subcommand("animate", "Write frames interpolating from rest to t-max times the motion");
  animate_cmd->add_option("--mesh", anim.mesh, "Input OBJ")->required();
  animate_cmd->add_option("--parts", anim.parts, "Comma-separated moving part ids")->required();
  animate_cmd->add_option("--motion", anim.motion, "Motion JSON")->required();
  animate_cmd->add_option("--frames", anim.frames, "Frame count (>= 2)");
  animate_cmd->add_option("--t-max", anim.t_max, "Magnitude scale of the last frame");
  animate_cmd->add_option("--out-dir", anim.out_dir, "Output directory")->required();

  BaselineArgs base;
  auto* baseline = app.add_subcommand("baseline", "Run a heuristic predictor over evaluation scenes");
  baseline->add_option("--method", base.method, "randmot, freqmot or oracle")->required();
  baseline->add_option("--train", base.train, "Training annotations (jsonl)");
  baseline->add_option("--eval", base.eval, "Evaluation annotations (jsonl)")->required();
  baseline->add_option("--meshes", base.meshes, "Mesh directory");
  baseline->add_option("--seed", base.seed, "Random seed");
  baseline->add_option("--out", base.out, "Output predictions (jsonl)")->required();

  EvaluateArgs ev;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score predictions against ground truth");
  evaluate_cmd->add_option("--gt", ev.gt, "Ground-truth annotations (jsonl)")->required();
  evaluate_cmd->add_option("--pred", ev.pred, "Predictions (jsonl)")->required();
  evaluate_cmd->add_option("--meshes", ev.meshes, "Mesh directory")->required();
  evaluate_cmd->add_option("--out", ev.out, "Report JSON")->required();
  evaluate_cmd->add_flag("--no-3d", ev.no_3d, "Skip Chamfer / F1");

  SegmentArgs seg;
  auto* segment = app.add_subcommand("segment-cc", "Connected-component pseudo-part segmentation");
  segment->add_option("--mesh", seg.mesh, "Input OBJ")->required();
  segment->add_option("--weld-eps", seg.weld_eps, "Vertex weld distance");
  segment->add_option("--out", seg.out, "Labels JSON")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*generate) return cmd_generate(gen);
    if (*articulate) return cmd_articulate(art);
    if (*animate_cmd) return cmd_animate(anim);
    if (*baseline) return cmd_baseline(base);
    if (*evaluate_cmd) return cmd_evaluate(ev);
    if (*segment) return cmd_segment_cc(seg);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  }
  return kUsage;
}

int main(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace artk::cli
