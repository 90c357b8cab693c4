#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spatnet/builders.hpp"
#include "spatnet/graph.hpp"
#include "spatnet/graph_io.hpp"
#include "spatnet/measurements.hpp"
#include "spatnet/pnm.hpp"
#include "spatnet/saliency.hpp"
#include "spatnet/segmentation.hpp"
#include "spatnet/sim_config.hpp"
#include "spatnet/simulate.hpp"
#include "spatnet/texture.hpp"
#include "spatnet/topology.hpp"

namespace {

using namespace spatnet;

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

void finish_output(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw std::runtime_error("error writing '" + path + "'");
}

LineMode parse_line_mode(const std::string& name) {
  if (name == "tangent") return LineMode::tangent;
  if (name == "normal") return LineMode::normal;
  throw std::runtime_error("mode must be tangent or normal, got '" + name + "'");
}

CommunityMethod parse_method(const std::string& name) {
  if (name == "greedy_modularity") return CommunityMethod::greedy_modularity;
  if (name == "label_propagation") return CommunityMethod::label_propagation;
  throw std::runtime_error(
      "method must be greedy_modularity or label_propagation, got '" + name + "'");
}

EdgePixelSet detect_edge_pixels(const GrayImage& img, double contrast) {
  const EdgePixelSet edges = select_edge_pixels(estimate_gradient(img), contrast);
  if (edges.empty()) throw std::runtime_error("no edge pixels");
  return edges;
}

struct BuildArgs {
  std::string in, out, positions;
  std::string type = "similarity";
  double threshold = 0.5;
  double radius = 3.0;
  SimilarityOptions sim;
  double contrast = 0.25;
  std::string mode = "tangent";
};

void run_build(const BuildArgs& a) {
  const GrayImage img = read_pnm(a.in);
  SpatialGraph g;
  if (a.type == "similarity") {
    g = build_pixel_similarity_network(img, a.threshold, a.radius, a.sim);
  } else if (a.type == "line") {
    const EdgePixelSet edges = detect_edge_pixels(img, a.contrast);
    g = build_orientation_line_network(edges, img.width(), img.height(),
                                       parse_line_mode(a.mode));
  } else {
    throw std::runtime_error("type must be similarity or line, got '" + a.type + "'");
  }
  write_edge_list(g, a.out);
  if (!a.positions.empty()) write_positions_csv(g, a.positions);
}

struct MeasureArgs {
  std::string graph, features, histogram;
};

void run_measure(const MeasureArgs& a) {
  if (a.features.empty() && a.histogram.empty()) {
    throw std::runtime_error("nothing to do: pass --features and/or --histogram");
  }
  const SpatialGraph g = read_edge_list(a.graph);
  if (!a.features.empty()) {
    auto out = open_output(a.features);
    write_feature_csv(out, g);
    finish_output(out, a.features);
  }
  if (!a.histogram.empty()) {
    auto out = open_output(a.histogram);
    write_degree_histogram_csv(out, g);
    finish_output(out, a.histogram);
  }
}

struct SaliencyArgs {
  std::string in, out, csv, indices;
  double tol = 1e-10;
  std::uint64_t max_iter = 100000;
  std::string mode = "tangent";
  double contrast = 0.25;
};

/// Per-edge-pixel walk bias, sparse CSV `node,s` over default 1.0.
std::vector<double> read_indices_csv(const std::string& path, std::size_t n) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || detail::trim(line) != "node,s") {
    throw std::runtime_error("indices CSV: expected header 'node,s'");
  }
  std::vector<double> s(n, 1.0);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view trimmed = detail::trim(line);
    if (trimmed.empty()) continue;
    const auto fields = detail::split(trimmed, ',');
    const std::string where = "indices CSV line " + std::to_string(lineno);
    if (fields.size() != 2) throw std::runtime_error(where + ": expected node,s");
    const std::uint64_t node = detail::parse_u64(fields[0], where);
    if (node >= n) {
      throw std::runtime_error(where + ": node " + std::to_string(node) +
                               " out of range (have " + std::to_string(n) +
                               " edge pixels)");
    }
    s[node] = detail::parse_double(fields[1], where);
  }
  return s;
}

void run_saliency(const SaliencyArgs& a) {
  if (a.out.empty() && a.csv.empty()) {
    throw std::runtime_error("nothing to do: pass --out and/or --csv");
  }
  const GrayImage img = read_pnm(a.in);
  const EdgePixelSet edges = detect_edge_pixels(img, a.contrast);
  const SpatialGraph g = build_orientation_line_network(
      edges, img.width(), img.height(), parse_line_mode(a.mode));
  std::vector<double> s_all(edges.size(), 1.0);
  if (!a.indices.empty()) s_all = read_indices_csv(a.indices, edges.size());

  // Isolated pixels cannot support the walk; they keep raw saliency 0.
  std::vector<NodeId> walk_nodes;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (g.degree(v) > 0) walk_nodes.push_back(v);
  }
  if (walk_nodes.empty()) {
    throw std::runtime_error("no edge pixels are connected by orientation lines");
  }
  const SpatialGraph walk_graph = induced_subgraph(g, walk_nodes);
  SaliencyIndexVector s(walk_nodes.size());
  EdgePixelSet walk_pixels(walk_nodes.size());
  for (std::size_t i = 0; i < walk_nodes.size(); ++i) {
    s[i] = s_all[walk_nodes[i]];
    walk_pixels[i] = edges[walk_nodes[i]];
  }

  const StochasticMatrix w = build_stochastic_matrix(walk_graph, s);
  const std::vector<double> q = stationary_distribution(w, a.tol, a.max_iter);

  std::vector<double> q_all(edges.size(), 0.0);
  for (std::size_t i = 0; i < walk_nodes.size(); ++i) q_all[walk_nodes[i]] = q[i];

  if (!a.out.empty()) {
    write_pgm(saliency_map(img.width(), img.height(), walk_pixels, q), a.out);
  }
  if (!a.csv.empty()) {
    auto out = open_output(a.csv);
    const double n_walk = static_cast<double>(walk_nodes.size());
    out << "node,x,y,q,q_n\n";
    for (std::size_t i = 0; i < edges.size(); ++i) {
      out << i << ',' << edges[i].pos.x << ',' << edges[i].pos.y << ','
          << detail::format_double_sci(q_all[i]) << ','
          << detail::format_double_sci(q_all[i] * n_walk) << '\n';
    }
    finish_output(out, a.csv);
  }
}

struct SegmentArgs {
  std::string in, out, preview;
  std::string method = "greedy_modularity";
  std::uint64_t seed = 42;
  std::uint64_t min_size = 0;
  double threshold = 0.5;
  double radius = 3.0;
};

void run_segment(const SegmentArgs& a) {
  const GrayImage img = read_pnm(a.in);
  const SpatialGraph g = build_pixel_similarity_network(img, a.threshold, a.radius);
  Partition p = detect_communities(g, parse_method(a.method), a.seed);
  if (a.min_size > 1) p = merge_small_communities(g, p, a.min_size);
  const LabelImage labels =
      partition_to_label_image(p, g, img.width(), img.height());
  auto out = open_output(a.out);
  write_label_csv(out, labels);
  finish_output(out, a.out);
  if (!a.preview.empty()) write_pgm(label_preview(labels), a.preview);
}

struct TextureArgs {
  std::string in, features, labels, centroids;
  double threshold = 0.5;
  double radius = 3.0;
};

/// Region pixel lists from a segment CSV; background (-1) pixels are
/// skipped. Without a label file the whole image is region 0.
std::map<std::int64_t, std::vector<NodeId>> read_regions(
    const std::string& path, std::size_t width, std::size_t height) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || detail::trim(line) != "x,y,label") {
    throw std::runtime_error("label CSV: expected header 'x,y,label'");
  }
  std::map<std::int64_t, std::vector<NodeId>> regions;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view trimmed = detail::trim(line);
    if (trimmed.empty()) continue;
    const auto fields = detail::split(trimmed, ',');
    const std::string where = "label CSV line " + std::to_string(lineno);
    if (fields.size() != 3) throw std::runtime_error(where + ": expected x,y,label");
    const std::uint64_t x = detail::parse_u64(fields[0], where);
    const std::uint64_t y = detail::parse_u64(fields[1], where);
    const double label = detail::parse_double(fields[2], where);
    if (x >= width || y >= height) {
      throw std::runtime_error(where + ": pixel outside image");
    }
    const auto l = static_cast<std::int64_t>(label);
    if (l < 0) continue;
    regions[l].push_back(static_cast<NodeId>(y * width + x));
  }
  if (regions.empty()) throw std::runtime_error("label CSV names no regions");
  return regions;
}

void run_texture(const TextureArgs& a) {
  const GrayImage img = read_pnm(a.in);
  const SpatialGraph g = build_pixel_similarity_network(img, a.threshold, a.radius);
  std::map<std::int64_t, std::vector<NodeId>> regions;
  if (a.labels.empty()) {
    auto& all = regions[0];
    for (NodeId v = 0; v < g.node_count(); ++v) all.push_back(v);
  } else {
    regions = read_regions(a.labels, img.width(), img.height());
  }

  std::vector<LabeledRegionFeature> centroids;
  if (!a.centroids.empty()) {
    std::ifstream in(a.centroids);
    if (!in) throw std::runtime_error("cannot open '" + a.centroids + "'");
    centroids = read_centroids_csv(in);
  }

  auto out = open_output(a.features);
  out << "region,deg_mu,deg_sd,str_mu,str_sd,cc_mu,cc_sd,h2_mu,h2_sd,h3_mu,h3_sd\n";
  std::ostringstream classified;
  classified << "region,label\n";
  for (const auto& [label, pixels] : regions) {
    // Features on the region's induced subgraph, keeping texture local.
    const SpatialGraph sub = induced_subgraph(g, pixels);
    std::vector<NodeId> all(sub.node_count());
    for (NodeId v = 0; v < sub.node_count(); ++v) all[v] = v;
    const RegionFeature f = extract_region_features(sub, all);
    out << label;
    for (double v : f) out << ',' << detail::format_double(v);
    out << '\n';
    if (!centroids.empty()) {
      classified << label << ',' << classify_nearest_centroid(f, centroids) << '\n';
    }
  }
  finish_output(out, a.features);
  if (!centroids.empty()) std::cout << classified.str();
}

struct GenTopoArgs {
  std::string out, positions;
  TopologySpec spec;
};

void run_gen_topo(const GenTopoArgs& a) {
  const SpatialGraph g = generate_topology(a.spec);
  write_edge_list(g, a.out);
  if (!a.positions.empty()) write_positions_csv(g, a.positions);
}

struct SimulateArgs {
  std::string config, out;
  std::int64_t master = -1;
  bool retry = false;
};

void run_simulate(const SimulateArgs& a) {
  std::ifstream in(a.config);
  if (!in) throw std::runtime_error("cannot open '" + a.config + "'");
  SimConfig cfg = parse_sim_config(in);

  SpatialGraph topo = generate_topology(cfg.topo);
  if (a.retry) {
    for (int attempt = 0; attempt < 100 && !is_connected(topo); ++attempt) {
      cfg.topo.seed += 1;
      topo = generate_topology(cfg.topo);
    }
  }
  std::optional<NodeId> master;
  if (a.master >= 0) master = static_cast<NodeId>(a.master);
  const SimResult r = simulate_stream(topo, cfg.workload, cfg.topo.seed, master);
  const double apl = average_path_length(topo);

  std::ostringstream csv;
  write_results_csv_header(csv);
  write_results_csv_row(csv, cfg.topo, r, apl);
  if (a.out.empty()) {
    std::cout << csv.str();
  } else {
    auto out = open_output(a.out);
    out << csv.str();
    finish_output(out, a.out);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Image analysis through spatial complex networks"};
  app.require_subcommand(1);
  app.failure_message([](const CLI::App*, const CLI::Error& e) {
    return std::string("spatnet: ") + e.what() + "\n";
  });

  BuildArgs build;
  CLI::App* cb = app.add_subcommand(
      "build", "Turn an image into a pixel-similarity or orientation-line network");
  cb->add_option("--in", build.in, "Input image (PGM/PPM)")->required();
  cb->add_option("--out", build.out, "Output edge list")->required();
  cb->add_option("--positions", build.positions, "Optional node-position CSV");
  cb->add_option("--type", build.type, "Network type: similarity or line")
      ->capture_default_str();
  cb->add_option("--threshold", build.threshold, "Similarity threshold T in (0,1]")
      ->capture_default_str();
  cb->add_option("--radius", build.radius, "Neighborhood radius in pixels (>= 1)")
      ->capture_default_str();
  cb->add_option("--gray-weight", build.sim.gray_weight,
                 "Gray-level difference weight")
      ->capture_default_str();
  cb->add_option("--gradient-weight", build.sim.gradient_weight,
                 "Gradient-magnitude difference weight")
      ->capture_default_str();
  cb->add_option("--dispersion-weight", build.sim.dispersion_weight,
                 "Local-dispersion difference weight")
      ->capture_default_str();
  cb->add_option("--dispersion-window", build.sim.dispersion_window,
                 "Odd window side for local dispersion")
      ->capture_default_str();
  cb->add_option("--contrast", build.contrast,
                 "Edge-pixel threshold as fraction of max gradient (line type)")
      ->capture_default_str();
  cb->add_option("--mode", build.mode, "Line direction: tangent or normal")
      ->capture_default_str();

  MeasureArgs measure;
  CLI::App* cm = app.add_subcommand(
      "measure", "Node measurements and degree histogram of a stored network");
  cm->add_option("--graph", measure.graph, "Input edge list")->required();
  cm->add_option("--features", measure.features,
                 "Output CSV: node,degree,strength,clustering,hdeg2,hdeg3");
  cm->add_option("--histogram", measure.histogram, "Output CSV: degree,count");

  SaliencyArgs saliency;
  CLI::App* cs = app.add_subcommand(
      "saliency", "Random-walk saliency over the orientation-line network");
  cs->add_option("--in", saliency.in, "Input image (PGM/PPM)")->required();
  cs->add_option("--out", saliency.out, "Output saliency map (PGM)");
  cs->add_option("--csv", saliency.csv, "Output CSV: node,x,y,q,q_n");
  cs->add_option("--tol", saliency.tol, "Power-iteration L1 stop tolerance")
      ->capture_default_str();
  cs->add_option("--max-iter", saliency.max_iter, "Iteration cap per component")
      ->capture_default_str();
  cs->add_option("--mode", saliency.mode, "Line direction: tangent or normal")
      ->capture_default_str();
  cs->add_option("--contrast", saliency.contrast,
                 "Edge-pixel threshold as fraction of max gradient")
      ->capture_default_str();
  cs->add_option("--indices", saliency.indices,
                 "Walk-bias CSV node,s (edge-pixel index, default 1.0)");

  SegmentArgs segment;
  CLI::App* cg = app.add_subcommand(
      "segment", "Community-detection segmentation of the similarity network");
  cg->add_option("--in", segment.in, "Input image (PGM/PPM)")->required();
  cg->add_option("--out", segment.out, "Output label CSV: x,y,label")->required();
  cg->add_option("--preview", segment.preview, "Optional label preview (PGM)");
  cg->add_option("--method", segment.method,
                 "greedy_modularity or label_propagation")
      ->capture_default_str();
  cg->add_option("--seed", segment.seed, "Label-propagation shuffle seed")
      ->capture_default_str();
  cg->add_option("--min-size", segment.min_size,
                 "Merge communities smaller than this into their strongest neighbor")
      ->capture_default_str();
  cg->add_option("--threshold", segment.threshold, "Similarity threshold T in (0,1]")
      ->capture_default_str();
  cg->add_option("--radius", segment.radius, "Neighborhood radius in pixels (>= 1)")
      ->capture_default_str();

  TextureArgs texture;
  CLI::App* ct = app.add_subcommand(
      "texture", "Region texture features from the similarity network");
  ct->add_option("--in", texture.in, "Input image (PGM/PPM)")->required();
  ct->add_option("--features", texture.features, "Output region-feature CSV")
      ->required();
  ct->add_option("--labels", texture.labels,
                 "Region label CSV x,y,label (default: whole image as region 0)");
  ct->add_option("--centroids", texture.centroids,
                 "Labeled centroid CSV; classifies each region to stdout");
  ct->add_option("--threshold", texture.threshold, "Similarity threshold T in (0,1]")
      ->capture_default_str();
  ct->add_option("--radius", texture.radius, "Neighborhood radius in pixels (>= 1)")
      ->capture_default_str();

  GenTopoArgs gen;
  CLI::App* cgen = app.add_subcommand(
      "gen-topo", "Generate a processor-interconnection topology");
  cgen->add_option("--model", gen.spec.model,
                   "random, small_world, scale_free, or lattice")
      ->required()
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, TopologyModel>{
              {"random", TopologyModel::random},
              {"small_world", TopologyModel::small_world},
              {"scale_free", TopologyModel::scale_free},
              {"lattice", TopologyModel::lattice}},
          CLI::ignore_case));
  cgen->add_option("--n", gen.spec.n, "Node count")->required();
  cgen->add_option("--seed", gen.spec.seed, "Generator seed")->capture_default_str();
  cgen->add_option("--p", gen.spec.p, "Edge probability (random)")
      ->capture_default_str();
  cgen->add_option("--k", gen.spec.k, "Even ring degree (small_world)")
      ->capture_default_str();
  cgen->add_option("--p-rew", gen.spec.p_rew, "Rewiring probability (small_world)")
      ->capture_default_str();
  cgen->add_option("--m", gen.spec.m, "Edges per new node (scale_free)")
      ->capture_default_str();
  cgen->add_option("--rows", gen.spec.rows, "Lattice rows")->capture_default_str();
  cgen->add_option("--cols", gen.spec.cols, "Lattice cols")->capture_default_str();
  cgen->add_option("--out", gen.out, "Output edge list")->required();
  cgen->add_option("--positions", gen.positions,
                   "Optional node-position CSV (lattice only)");

  SimulateArgs sim;
  CLI::App* csim = app.add_subcommand(
      "simulate", "Simulate distributed frame processing on a topology");
  csim->add_option("--config", sim.config, "Flat key = value config file")
      ->required();
  csim->add_option("--out", sim.out, "Results CSV (default: stdout)");
  csim->add_option("--master", sim.master,
                   "Master node id (default: highest degree)");
  csim->add_flag("--retry", sim.retry,
                 "Regenerate with seed+1 (up to 100 times) if disconnected");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cb->parsed()) run_build(build);
    if (cm->parsed()) run_measure(measure);
    if (cs->parsed()) run_saliency(saliency);
    if (cg->parsed()) run_segment(segment);
    if (ct->parsed()) run_texture(texture);
    if (cgen->parsed()) run_gen_topo(gen);
    if (csim->parsed()) run_simulate(sim);
  } catch (const std::exception& e) {
    std::cerr << "spatnet: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
