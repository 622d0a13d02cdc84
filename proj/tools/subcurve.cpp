// Copyright 2026 The subcurve Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// subcurve: curved high-order meshes from linear meshes with features.
//
//   subcurve curve-surface   --input in.msh --degree 4 --nodes warpblend --output out.msh
//   subcurve curve-volume    --input box.msh --degree 3 --plan plan.json --output out.msh
//   subcurve detect-features --input in.msh --delta 17 --two-pass --output suggestions.json
//   subcurve report          --lebesgue-only --degree 10
//
// Exit status: 0 ok, 1 pipeline error, 2 usage or I/O error.

#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "subcurve/subcurve.hpp"

namespace subcurve::cli {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PipelineConfig {
  std::string command;
  std::string input;
  std::string format;
  std::string features;
  int degree = 4;
  std::string nodes = "equispaced";
  int pre_refine = 0;
  std::string plan;
  double delta = 17.0;
  double char_length = 0.0;
  std::string output;
  std::string report;
  bool dump_stages = false;
  int threads = 0;
  bool two_pass = false;
  bool lebesgue_only = false;
  int depth_cap = 48;

  NodeKind kind() const { return parse_node_kind(nodes); }
};

void validate(const PipelineConfig& c) {
  if (c.degree < 1) throw UsageError("--degree must be at least 1");
  if (c.pre_refine < 0) throw UsageError("--pre-refine must be non-negative");
  if (!(c.delta > 0.0 && c.delta < 180.0))
    throw UsageError("--delta must lie in (0, 180) degrees");
  if (c.char_length < 0.0) throw UsageError("--char-length must be positive");
  if (c.threads < 0) throw UsageError("--threads must be non-negative");
  if (c.nodes != "equispaced" && c.nodes != "warpblend")
    throw UsageError("--nodes must be equispaced or warpblend");
  if (c.kind() == NodeKind::WarpBlend && c.degree > 10)
    throw UsageError("warp-and-blend nodes are available up to degree 10");
  if (!c.format.empty() && c.format != "msh41" && c.format != "msh22" &&
      c.format != "vtu")
    throw UsageError("--format must be msh41, msh22 or vtu");
}

std::string output_format(const PipelineConfig& c, const std::string& path) {
  if (!c.format.empty()) return c.format;
  return std::filesystem::path(path).extension() == ".vtu" ? "vtu" : "msh41";
}

/** Induced model of a written mesh by node and element numbers. */
Json induced_model_json(const HighOrderMesh& ho) {
  Json j{{"points", Json::object()}, {"curves", Json::object()},
         {"surfaces", Json::object()}};
  for (const auto& [id, n] : ho.points) j["points"][std::to_string(id)] = n;
  for (const HoCurveSegment& c : ho.curves)
    j["curves"][std::to_string(c.curve)].push_back(c.nodes);
  if (ho.dim == 2) {
    for (int e = 0; e < ho.num_elements(); ++e)
      j["surfaces"][std::to_string(ho.element_tags[e])].push_back(e);
  } else {
    for (const HoFacet& f : ho.facets)
      j["surfaces"][std::to_string(f.surface)].push_back(f.nodes);
  }
  return j;
}

void write_mesh(const PipelineConfig& c, const HighOrderMesh& ho,
                const std::string& path, const MeshFields& fields = {}) {
  const std::string fmt = output_format(c, path);
  if (fmt == "vtu") {
    write_vtu(ho, path, fields);
    write_json_file(induced_model_json(ho), path + ".features.json");
  } else {
    write_msh(ho, path, fmt == "msh22" ? MshVersion::V22 : MshVersion::V41,
              fields);
  }
}

/** Path next to `output` with `tag` inserted before the extension. */
std::string stage_path(const std::string& output, const std::string& tag) {
  std::filesystem::path p(output);
  return (p.parent_path() / (p.stem().string() + "." + tag + p.extension().string()))
      .string();
}

void emit_json(const Json& j, const std::string& path) {
  if (path.empty() || path == "-") std::cout << j.dump(2) << '\n';
  else write_json_file(j, path);
}

struct SurfaceInput {
  SurfaceMesh mesh;
  FeatureModel model;
};

LoadedMesh load_input(const PipelineConfig& c) {
  if (c.input.empty()) throw UsageError("--input is required");
  if (!std::filesystem::exists(c.input))
    throw IoError("input file " + c.input + " does not exist");
  LoadedMesh m = load_linear_mesh(c.input);
  if (!c.features.empty()) {
    const Json j = read_json_file(c.features);
    if (m.dim == 2)
      m.model = complete_model(m.surface, feature_model_from_json(j));
    else
      m.features = volume_features_from_json(j);
  }
  return m;
}

SmoothingPlan load_plan(const PipelineConfig& c) {
  if (c.plan.empty()) return {};
  if (!std::filesystem::exists(c.plan))
    throw IoError("plan file " + c.plan + " does not exist");
  return read_smoothing_plan(c.plan);
}

/** Linear surface of the input: the mesh itself or a volume's boundary. */
SurfaceInput surface_input(const PipelineConfig& c) {
  LoadedMesh m = load_input(c);
  if (m.dim == 2) return {std::move(m.surface), std::move(m.model)};
  BoundaryExtraction b = extract_boundary(m.volume, m.features);
  return {std::move(b.surface), std::move(b.model)};
}

double characteristic_length(const PipelineConfig& c, const SurfaceMesh& s) {
  return c.char_length > 0.0 ? c.char_length
                             : bounding_box(s.vertices()).diagonal();
}

Json distribution_json(const NodalDistribution& d) {
  return {{"degree", d.degree}, {"nodes", node_kind_name(d.kind)}};
}

int cmd_curve_surface(const PipelineConfig& c) {
  if (c.output.empty()) throw UsageError("--output is required");
  SurfaceInput in = surface_input(c);
  in.model = smooth_features(in.mesh, std::move(in.model), load_plan(c));
  const NodalDistribution dist = make_distribution(c.degree, c.kind(), 2);
  SurfaceCurvingOptions so;
  so.pre_refine = c.pre_refine;
  so.depth_cap = c.depth_cap;
  SurfaceCurvingResult res = generate_ho_surface_mesh(in.mesh, in.model, dist, so);

  MeshFields fields;
  if (!c.report.empty()) {
    const double L = characteristic_length(c, in.mesh);
    DistanceReport d = model_distance(*res.evaluator, res.mesh, dist, L);
    NormalAngleReport a = normal_angles(res.mesh, dist, res.linear, res.model);
    fields.element.push_back({"distance", d.per_element});
    Json j = distribution_json(dist);
    j["pre_refine"] = c.pre_refine;
    j["control_residual"] = res.control_residual;
    j["fallbacks"] = res.fallback_count;
    j["distance"] = to_json(d);
    j["normal_angles"] = to_json(a);
    emit_json(j, c.report);
  }
  write_mesh(c, res.mesh, c.output, fields);
  return 0;
}

int cmd_curve_volume(const PipelineConfig& c) {
  if (c.output.empty()) throw UsageError("--output is required");
  if (c.kind() != NodeKind::Equispaced)
    throw UsageError("curve-volume uses equispaced nodes");
  if (c.pre_refine != 0) throw UsageError("curve-volume does not pre-refine");
  const SmoothingPlan plan = load_plan(c);
  LoadedMesh m = load_input(c);
  if (m.dim != 3) throw UsageError(c.input + " is not a tetrahedral mesh");
  VolumeCurvingOptions opt;
  opt.depth_cap = c.depth_cap;
  // The optimization hook is left empty; reports list invalid elements.
  VolumeCurvingResult res = curve_volume_mesh(m.volume, m.features, c.degree, plan, opt);

  MeshFields fields;
  fields.element.push_back({"quality", res.reports.back().quality});
  write_mesh(c, res.mesh, c.output, fields);
  if (c.dump_stages) {
    MeshFields pre;
    for (const QualityReport& r : res.reports)
      if (r.stage == "no-TFI") pre.element.push_back({"quality", r.quality});
    write_mesh(c, res.pre_tfi, stage_path(c.output, "pre_tfi"), pre);
    write_mesh(c, res.surface, stage_path(c.output, "boundary"));
  }
  Json j = distribution_json(make_distribution(c.degree, NodeKind::Equispaced, 3));
  j["relocated_nodes"] = res.relocated_nodes;
  j["stages"] = Json::array();
  for (const QualityReport& r : res.reports) j["stages"].push_back(to_json(r));
  if (!c.report.empty() && std::filesystem::path(c.report).extension() == ".csv") {
    std::ofstream os(c.report);
    if (!os) throw IoError("cannot write " + c.report);
    os.precision(17);
    os << "stage,element,quality\n";
    for (const QualityReport& r : res.reports)
      for (size_t e = 0; e < r.quality.size(); ++e)
        os << r.stage << ',' << e << ',' << r.quality[e] << '\n';
  } else if (!c.report.empty()) {
    emit_json(j, c.report);
  }
  for (const QualityReport& r : res.reports)
    std::cerr << r.stage << ": min quality " << r.min_quality << ", inverted "
              << r.inverted << '\n';
  return 0;
}

std::vector<SmoothingSuggestion> suggest(const PipelineConfig& c,
                                         const SurfaceMesh& mesh,
                                         const FeatureModel& model, bool curves,
                                         bool points) {
  const NodalDistribution dist = make_distribution(c.degree, c.kind(), 2);
  SurfaceCurvingOptions so;
  so.pre_refine = c.pre_refine;
  so.depth_cap = c.depth_cap;
  SurfaceCurvingResult res = generate_ho_surface_mesh(mesh, model, dist, so);
  return detect_smooth_candidates(res.mesh, dist, res.linear, res.model,
                                  c.delta, curves, points);
}

int cmd_detect_features(const PipelineConfig& c) {
  SurfaceInput in = surface_input(c);
  const SmoothingPlan plan = load_plan(c);
  std::vector<SmoothingSuggestion> out;
  if (c.two_pass) {
    in.model = smooth_features(in.mesh, std::move(in.model), plan);
    out = suggest(c, in.mesh, in.model, true, false);
    SmoothingPlan accepted;
    for (const SmoothingSuggestion& s : out) accepted.curves.push_back(s.id);
    FeatureModel smoothed = smooth_features(in.mesh, in.model, accepted);
    for (const SmoothingSuggestion& s : suggest(c, in.mesh, smoothed, false, true))
      out.push_back(s);
  } else if (plan.empty()) {
    out = suggest(c, in.mesh, in.model, true, false);
  } else {
    // A reviewed curve plan: regenerate and look at the points.
    in.model = smooth_features(in.mesh, std::move(in.model), plan);
    out = suggest(c, in.mesh, in.model, false, true);
  }
  emit_json(to_json(out), c.output);
  return 0;
}

void write_csv(const std::string& text, const std::string& output,
               const std::string& name) {
  if (output.empty()) {
    std::cout << text << '\n';
    return;
  }
  const std::string path = output + "_" + name + ".csv";
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path);
  os << text;
}

int cmd_report(const PipelineConfig& c) {
  if (c.degree > 10) throw UsageError("report covers degrees 1 to 10");
  std::ostringstream leb;
  leb.precision(6);
  leb << "degree,lambda_equispaced,lambda_warpblend\n";
  std::map<int, double> lambda;
  for (int q = 1; q <= c.degree; ++q) {
    const double eq =
        lebesgue_constant(make_distribution(q, NodeKind::Equispaced, 2)).lambda;
    const double wb =
        lebesgue_constant(make_distribution(q, NodeKind::WarpBlend, 2)).lambda;
    lambda[q] = c.kind() == NodeKind::WarpBlend ? wb : eq;
    leb << q << ',' << eq << ',' << wb << '\n';
  }
  write_csv(leb.str(), c.output, "lebesgue");
  if (c.lebesgue_only) return 0;

  SurfaceInput in = surface_input(c);
  const double L = characteristic_length(c, in.mesh);
  std::ostringstream dist_csv, angle_csv;
  dist_csv.precision(6);
  angle_csv.precision(6);
  dist_csv << "degree,nodes,model_distance,lower_bound,upper_bound\n";
  angle_csv << "degree,nodes,max_angle,max_edge,flagged_samples\n";
  for (int q = 1; q <= c.degree; ++q) {
    const NodalDistribution dist = make_distribution(q, c.kind(), 2);
    SurfaceCurvingOptions so;
    so.pre_refine = c.pre_refine;
    so.depth_cap = c.depth_cap;
    SurfaceCurvingResult res = generate_ho_surface_mesh(in.mesh, in.model, dist, so);
    const DistanceReport d = model_distance(*res.evaluator, res.mesh, dist, L);
    const auto [lo, hi] = best_approx_bounds(d.model_distance, lambda[q]);
    dist_csv << q << ',' << c.nodes << ',' << d.model_distance << ',' << lo
             << ',' << hi << '\n';
    const NormalAngleReport a = normal_angles(res.mesh, dist, res.linear, res.model);
    angle_csv << q << ',' << c.nodes << ',' << a.max_angle << ',' << a.max_edge
              << ',' << a.flagged_samples << '\n';
  }
  write_csv(dist_csv.str(), c.output, "distance");
  write_csv(angle_csv.str(), c.output, "angles");
  return 0;
}

int run(const PipelineConfig& c) {
  validate(c);
  set_thread_limit(c.threads);
  if (c.command == "curve-surface") return cmd_curve_surface(c);
  if (c.command == "curve-volume") return cmd_curve_volume(c);
  if (c.command == "detect-features") return cmd_detect_features(c);
  return cmd_report(c);
}

}  // namespace subcurve::cli

int main(int argc, char** argv) {
  using namespace subcurve::cli;
  PipelineConfig c;
  CLI::App app{"Curved high-order meshes from linear meshes with features"};
  app.set_config("--config", "", "TOML config file; flags take precedence");
  app.require_subcommand(1);
  app.add_option("--input", c.input, "Linear mesh (MSH 2.2 or 4.1)");
  app.add_option("--format", c.format, "Output mesh format: msh41, msh22 or vtu");
  app.add_option("--features", c.features, "Feature model JSON sidecar");
  app.add_option("--degree", c.degree, "Element degree (report: highest degree)");
  app.add_option("--nodes", c.nodes, "equispaced or warpblend");
  app.add_option("--pre-refine", c.pre_refine, "Control mesh refinements");
  app.add_option("--plan", c.plan, "Smoothing plan or reviewed suggestions");
  app.add_option("--delta", c.delta, "Detection threshold in degrees");
  app.add_option("--char-length", c.char_length,
                 "Characteristic length (default: bounding box diagonal)");
  app.add_option("--output", c.output, "Output path (report: file prefix)");
  app.add_option("--report", c.report, "Report file (JSON, or CSV for volumes)");
  app.add_flag("--dump-stages", c.dump_stages, "Write boundary and pre-TFI meshes");
  app.add_option("--threads", c.threads, "Worker cap (0: all cores)");
  app.add_option("--depth-cap", c.depth_cap, "Subdivision depth cap");
  app.add_flag("--two-pass", c.two_pass, "detect-features: curves, then points");
  app.add_flag("--lebesgue-only", c.lebesgue_only, "report: skip mesh tables");
  for (const char* name :
       {"curve-surface", "curve-volume", "detect-features", "report"})
    app.add_subcommand(name)->fallthrough();
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  c.command = app.get_subcommands().front()->get_name();
  try {
    return run(c);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const subcurve::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
