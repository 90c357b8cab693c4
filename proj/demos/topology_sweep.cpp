// Speed-up of distributed frame processing across interconnection models.
// The same workload runs on four 64-node topologies; shorter average path
// lengths keep the per-hop transfer cost down and the speed-up up.

#include <cstdio>

#include "spatnet/simulate.hpp"
#include "spatnet/topology.hpp"

using namespace spatnet;

int main() {
  Workload w;
  w.frames = 500;
  w.t_proc = 1.0;
  w.t_hop = 0.05;

  TopologySpec specs[] = {
      {TopologyModel::random, 64, 7, 0.1, 4, 0.1, 2, 0, 0},
      {TopologyModel::small_world, 64, 7, 0.1, 4, 0.1, 2, 0, 0},
      {TopologyModel::scale_free, 64, 7, 0.1, 4, 0.1, 2, 0, 0},
      {TopologyModel::lattice, 64, 7, 0.1, 4, 0.1, 2, 8, 8},
  };

  std::printf("%-12s %8s %10s %14s\n", "model", "speedup", "makespan",
              "avg_path_len");
  for (TopologySpec spec : specs) {
    SpatialGraph g = generate_topology(spec);
    for (int tries = 0; tries < 100 && !is_connected(g); ++tries) {
      spec.seed += 1;
      g = generate_topology(spec);
    }
    const SimResult r = simulate_stream(g, w, spec.seed);
    std::printf("%-12s %8.3f %10.3f %14.3f\n", topology_model_name(spec.model),
                r.speedup, r.makespan, average_path_length(g));
  }
  return 0;
}
