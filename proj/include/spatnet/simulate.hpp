#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "spatnet/graph.hpp"

namespace spatnet {

enum class ArrivalMode { batch, interval };

/// Frame stream and cost model. Communication cost of sending one frame
/// from the master to a processor is hops * t_hop + frame_bits/bandwidth;
/// both terms may be zero and bandwidth may be infinite.
struct Workload {
  std::uint64_t frames = 100;
  double t_proc = 1.0;
  double t_hop = 0.0;
  double frame_bits = 0.0;
  double bandwidth = std::numeric_limits<double>::infinity();
  ArrivalMode arrival = ArrivalMode::batch;
  double interval = 0.0;  // inter-arrival gap when arrival == interval

  void validate() const {
    if (frames == 0) throw std::invalid_argument("frames must be positive");
    if (!(t_proc > 0.0) || !std::isfinite(t_proc)) {
      throw std::invalid_argument("t_proc must be positive");
    }
    if (!(t_hop >= 0.0) || !std::isfinite(t_hop)) {
      throw std::invalid_argument("t_hop must be non-negative");
    }
    if (!(frame_bits >= 0.0) || !std::isfinite(frame_bits)) {
      throw std::invalid_argument("frame_bits must be non-negative");
    }
    if (!(bandwidth > 0.0)) {
      throw std::invalid_argument("bandwidth must be positive (may be inf)");
    }
    if (arrival == ArrivalMode::interval &&
        (!(interval > 0.0) || !std::isfinite(interval))) {
      throw std::invalid_argument("interval must be positive");
    }
  }
};

struct SimResult {
  double makespan = 0.0;
  double speedup = 0.0;
  NodeId master = 0;
  std::vector<double> busy_time;
  std::vector<std::uint64_t> frames_per_node;
};

/// (F * t_proc) / makespan: ratio of the serial processing time to the
/// achieved makespan.
inline double speedup(const SimResult& r, const Workload& w) {
  if (!(r.makespan > 0.0)) {
    throw std::invalid_argument("speedup undefined for zero makespan");
  }
  return static_cast<double>(w.frames) * w.t_proc / r.makespan;
}

/// List-scheduling simulation of a frame stream dispatched by a master
/// node. Frames are assigned in arrival order to the processor with the
/// earliest predicted completion max(arrival, free_time) + transfer +
/// t_proc (ties: lowest node id); every processor handles one frame at a
/// time. The master incurs no transfer cost.
inline SimResult simulate_stream(const SpatialGraph& g, const Workload& w,
                                 std::uint64_t /*seed*/ = 0,
                                 std::optional<NodeId> master_override = {}) {
  w.validate();
  const std::size_t n = g.node_count();
  if (n == 0) throw std::invalid_argument("topology has no processors");
  if (!is_connected(g)) throw std::invalid_argument("topology is disconnected");

  NodeId master = 0;
  if (master_override) {
    if (*master_override >= n) throw std::out_of_range("master id out of range");
    master = *master_override;
  } else {
    for (NodeId v = 1; v < n; ++v) {
      if (g.degree(v) > g.degree(master)) master = v;
    }
  }

  const auto hops = shortest_path_lengths(g, master);
  std::vector<double> transfer(n);
  for (NodeId v = 0; v < n; ++v) {
    transfer[v] = v == master
                      ? 0.0
                      : static_cast<double>(*hops[v]) * w.t_hop +
                            w.frame_bits / w.bandwidth;
  }

  SimResult result;
  result.master = master;
  result.busy_time.assign(n, 0.0);
  result.frames_per_node.assign(n, 0);
  std::vector<double> free_time(n, 0.0);
  double makespan = 0.0;
  for (std::uint64_t f = 0; f < w.frames; ++f) {
    const double arrival = w.arrival == ArrivalMode::batch
                               ? 0.0
                               : static_cast<double>(f) * w.interval;
    NodeId best = 0;
    double best_done = std::numeric_limits<double>::infinity();
    for (NodeId v = 0; v < n; ++v) {
      const double done =
          std::max(arrival, free_time[v]) + transfer[v] + w.t_proc;
      if (done < best_done) {
        best_done = done;
        best = v;
      }
    }
    free_time[best] = best_done;
    result.busy_time[best] += w.t_proc;
    ++result.frames_per_node[best];
    makespan = std::max(makespan, best_done);
  }
  result.makespan = makespan;
  result.speedup = speedup(result, w);
  return result;
}

/// Mean BFS hop distance over unordered node pairs; 0 for a single node.
inline double average_path_length(const SpatialGraph& g) {
  const std::size_t n = g.node_count();
  if (n == 0) throw std::invalid_argument("empty graph");
  if (n == 1) return 0.0;
  if (!is_connected(g)) {
    throw std::invalid_argument("average path length of a disconnected graph");
  }
  double sum = 0.0;
  for (NodeId v = 0; v < n; ++v) {
    const auto dist = shortest_path_lengths(g, v);
    for (NodeId u = v + 1; u < n; ++u) sum += static_cast<double>(*dist[u]);
  }
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  return sum / pairs;
}

}  // namespace spatnet
