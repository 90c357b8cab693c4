#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>

#include "spatnet/detail/text.hpp"
#include "spatnet/simulate.hpp"
#include "spatnet/topology.hpp"

namespace spatnet {

struct SimConfig {
  TopologySpec topo;
  Workload workload;
};

/// Parses flat `key = value` lines. `#` starts a comment, blank lines are
/// skipped. model and N are required; everything else falls back to the
/// TopologySpec/Workload defaults. Keys: model, N, p, k, p_rew, m, rows,
/// cols, seed, frames, t_proc, t_hop, frame_bits, bandwidth (inf allowed),
/// arrival (batch|interval), interval.
inline SimConfig parse_sim_config(std::istream& in) {
  SimConfig cfg;
  std::set<std::string> seen;
  bool have_model = false;
  bool have_n = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto fail = [lineno](const std::string& msg) {
      throw std::runtime_error("config line " + std::to_string(lineno) + ": " + msg);
    };
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    const std::string_view trimmed = detail::trim(line);
    if (trimmed.empty()) continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string_view::npos) fail("expected key = value");
    const std::string key{detail::trim(trimmed.substr(0, eq))};
    const std::string value{detail::trim(trimmed.substr(eq + 1))};
    if (key.empty() || value.empty()) fail("expected key = value");
    if (!seen.insert(key).second) fail("duplicate key '" + key + "'");

    try {
      const auto as_u64 = [&] { return detail::parse_u64(value, key); };
      const auto as_u32 = [&] { return static_cast<std::uint32_t>(detail::parse_u64(value, key)); };
      const auto as_double = [&] { return detail::parse_double(value, key); };
      if (key == "model") {
        cfg.topo.model = parse_topology_model(value);
        have_model = true;
      } else if (key == "N") {
        cfg.topo.n = as_u32();
        have_n = true;
      } else if (key == "p") {
        cfg.topo.p = as_double();
      } else if (key == "k") {
        cfg.topo.k = as_u32();
      } else if (key == "p_rew") {
        cfg.topo.p_rew = as_double();
      } else if (key == "m") {
        cfg.topo.m = as_u32();
      } else if (key == "rows") {
        cfg.topo.rows = as_u32();
      } else if (key == "cols") {
        cfg.topo.cols = as_u32();
      } else if (key == "seed") {
        cfg.topo.seed = as_u64();
      } else if (key == "frames") {
        cfg.workload.frames = as_u64();
      } else if (key == "t_proc") {
        cfg.workload.t_proc = as_double();
      } else if (key == "t_hop") {
        cfg.workload.t_hop = as_double();
      } else if (key == "frame_bits") {
        cfg.workload.frame_bits = as_double();
      } else if (key == "bandwidth") {
        cfg.workload.bandwidth = as_double();
      } else if (key == "arrival") {
        if (value == "batch") {
          cfg.workload.arrival = ArrivalMode::batch;
        } else if (value == "interval") {
          cfg.workload.arrival = ArrivalMode::interval;
        } else {
          throw std::invalid_argument("arrival must be batch or interval");
        }
      } else if (key == "interval") {
        cfg.workload.interval = as_double();
      } else {
        throw std::invalid_argument("unknown key '" + key + "'");
      }
    } catch (const std::exception& e) {
      fail(e.what());
    }
  }
  if (!have_model) throw std::runtime_error("config: missing required key 'model'");
  if (!have_n) throw std::runtime_error("config: missing required key 'N'");
  return cfg;
}

inline void write_results_csv_header(std::ostream& out) {
  out << "model,N,seed,makespan,speedup,avg_path_len\n";
}

inline void write_results_csv_row(std::ostream& out, const TopologySpec& topo,
                                  const SimResult& r, double avg_path_len) {
  out << topology_model_name(topo.model) << ',' << topo.n << ',' << topo.seed
      << ',' << detail::format_double(r.makespan) << ','
      << detail::format_double(r.speedup) << ','
      << detail::format_double(avg_path_len) << '\n';
}

}  // namespace spatnet
