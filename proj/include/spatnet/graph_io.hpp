#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "spatnet/detail/text.hpp"
#include "spatnet/graph.hpp"

namespace spatnet {

/// Edge-list text format. First line `# nodes N directed {0|1}`, then one
/// `u v w` triple per line. Undirected edges are written once with u < v;
/// weights are written with 17 significant digits so a round-trip is exact.
inline void write_edge_list(const SpatialGraph& g, std::ostream& out) {
  out << "# nodes " << g.node_count() << " directed " << (g.directed() ? 1 : 0)
      << "\n";
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (const SpatialGraph::Edge& e : g.neighbors(u)) {
      if (!g.directed() && e.to < u) continue;
      out << u << ' ' << e.to << ' ' << detail::format_double_sci(e.weight)
          << "\n";
    }
  }
}

inline void write_edge_list(const SpatialGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_edge_list(g, out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline SpatialGraph read_edge_list(std::istream& in, const std::string& name) {
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error(name + ": empty edge-list file");
  }
  std::istringstream header(line);
  std::string hash, nodes_kw, directed_kw;
  std::size_t n = 0;
  int directed_flag = -1;
  header >> hash >> nodes_kw >> n >> directed_kw >> directed_flag;
  if (hash != "#" || nodes_kw != "nodes" || directed_kw != "directed" ||
      (directed_flag != 0 && directed_flag != 1)) {
    throw std::runtime_error(name + ": malformed header line: '" + line + "'");
  }
  // The format does not record the self-loop flag; read permissively.
  SpatialGraph g(directed_flag == 1, /*allow_self_loops=*/true);
  for (std::size_t i = 0; i < n; ++i) g.add_node();
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const auto trimmed = detail::trim(line);
    if (trimmed.empty()) continue;
    std::istringstream row{std::string(trimmed)};
    std::uint64_t u = 0, v = 0;
    std::string wtext;
    if (!(row >> u >> v >> wtext)) {
      throw std::runtime_error(name + ":" + std::to_string(lineno) +
                               ": malformed edge line");
    }
    g.add_edge(static_cast<NodeId>(u), static_cast<NodeId>(v),
               detail::parse_double(wtext, "edge weight"));
  }
  return g;
}

inline SpatialGraph read_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_edge_list(in, path);
}

/// Companion positions file, CSV `id,x,y` with a header row.
inline void write_positions_csv(const SpatialGraph& g, std::ostream& out) {
  out << "id,x,y\n";
  for (NodeId u = 0; u < g.node_count(); ++u) {
    const Position& p = g.position(u);
    out << u << ',' << detail::format_double(p.x) << ','
        << detail::format_double(p.y) << "\n";
  }
}

inline void write_positions_csv(const SpatialGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_positions_csv(g, out);
}

inline std::vector<Position> read_positions_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  std::vector<Position> positions;
  bool first = true;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto trimmed = detail::trim(line);
    if (trimmed.empty()) continue;
    if (first && trimmed == "id,x,y") {
      first = false;
      continue;
    }
    first = false;
    const auto fields = detail::split(trimmed, ',');
    if (fields.size() != 3) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected id,x,y");
    }
    const auto id = detail::parse_u64(fields[0], "node id");
    if (id != positions.size()) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": ids must be dense from 0");
    }
    positions.push_back(Position{detail::parse_double(fields[1], "x"),
                                 detail::parse_double(fields[2], "y")});
  }
  return positions;
}

/// Rebuilds a graph from an edge list plus an optional positions file.
inline SpatialGraph load_graph(const std::string& edge_path,
                               const std::string& positions_path = {}) {
  SpatialGraph flat = read_edge_list(edge_path);
  if (positions_path.empty()) return flat;
  const auto positions = read_positions_csv(positions_path);
  if (positions.size() != flat.node_count()) {
    throw std::runtime_error(positions_path + ": " +
                             std::to_string(positions.size()) +
                             " positions for " +
                             std::to_string(flat.node_count()) + " nodes");
  }
  SpatialGraph g(flat.directed(), /*allow_self_loops=*/true);
  g.reserve_nodes(flat.node_count());
  for (const Position& p : positions) g.add_node(p);
  for (NodeId u = 0; u < flat.node_count(); ++u) {
    for (const SpatialGraph::Edge& e : flat.neighbors(u)) {
      if (!flat.directed() && e.to < u) continue;
      g.add_edge(u, e.to, e.weight);
    }
  }
  return g;
}

}  // namespace spatnet
