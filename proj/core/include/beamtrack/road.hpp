#pragma once

#include <string>
#include <vector>

#include "beamtrack/kinematics.hpp"
#include "beamtrack/rng.hpp"

namespace beamtrack {

struct RoadNode {
  double x = 0.0;
  double y = 0.0;
};

// Directed edge with a branch probability. At a node with several outgoing
// edges the probabilities must sum to one.
struct RoadEdge {
  int from = 0;
  int to = 0;
  double probability = 1.0;
};

struct RoadNetwork {
  std::vector<RoadNode> nodes;
  std::vector<RoadEdge> edges;

  std::vector<int> outgoing_edges(int node) const;
  double edge_length(int edge) const;

  // Structural checks plus the coverage constraint: every waypoint must lie
  // within d_max of the transceiver. Throws std::invalid_argument.
  void validate(double d_max_m) const;
};

RoadNetwork load_road_network(const std::string& path);

// Speed along the path: a Gaussian random walk with one step per epoch,
// clipped to [0, v_max].
struct SpeedProcess {
  double initial_mps = 15.0;
  double sigma_mps = 2.0;
  double v_max_mps = 30.0;
};

struct TrajectoryPoint {
  UserKinematicState state;
  int edge = -1;      // edge the position lies on
  double arc_m = 0.0; // distance travelled along the path
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;   // one per epoch
  std::vector<int> corner_epochs;        // first epoch on each new edge
};

// Samples one trajectory with one position per epoch. If fixed_path is
// non-empty it must name a connected node sequence starting at start_node and
// branch randomness is not consumed; otherwise branches are drawn from the
// edge probabilities until the walk reaches a terminal node or covers the
// maximum distance reachable in n_epochs. A user that runs out of road parks
// at the final waypoint. Velocities and accelerations are recovered from the
// position sequence by central finite differences (one-sided at the ends) so
// that straight constant-speed motion stays exactly consistent with the
// constant-acceleration propagation model.
Trajectory sample_trajectory(const RoadNetwork& net, int start_node,
                             const std::vector<int>& fixed_path,
                             const SpeedProcess& speed, int n_epochs,
                             double epoch_period_s, Rng& rng);

}  // namespace beamtrack
