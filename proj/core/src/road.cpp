#include "beamtrack/road.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace beamtrack {

std::vector<int> RoadNetwork::outgoing_edges(int node) const {
  std::vector<int> out;
  for (int e = 0; e < static_cast<int>(edges.size()); ++e)
    if (edges[e].from == node) out.push_back(e);
  return out;
}

double RoadNetwork::edge_length(int edge) const {
  const RoadEdge& e = edges.at(edge);
  return std::hypot(nodes[e.to].x - nodes[e.from].x,
                    nodes[e.to].y - nodes[e.from].y);
}

void RoadNetwork::validate(double d_max_m) const {
  if (nodes.empty()) throw std::invalid_argument("road: no nodes");
  for (const RoadNode& n : nodes) {
    if (std::hypot(n.x, n.y) > d_max_m + 1e-9)
      throw std::invalid_argument("road: waypoint outside the coverage disc");
  }
  for (const RoadEdge& e : edges) {
    if (e.from < 0 || e.from >= static_cast<int>(nodes.size()) || e.to < 0 ||
        e.to >= static_cast<int>(nodes.size()))
      throw std::invalid_argument("road: edge references a missing node");
    if (e.from == e.to) throw std::invalid_argument("road: self-loop edge");
    if (!(e.probability > 0.0))
      throw std::invalid_argument("road: edge probability must be positive");
  }
  for (int n = 0; n < static_cast<int>(nodes.size()); ++n) {
    const std::vector<int> out = outgoing_edges(n);
    if (out.empty()) continue;
    double sum = 0.0;
    for (int e : out) sum += edges[e].probability;
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument(
          "road: branch probabilities at a node must sum to 1");
    for (int e : out)
      if (edge_length(e) <= 0.0)
        throw std::invalid_argument("road: zero-length edge");
  }
}

RoadNetwork load_road_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("road: cannot open " + path);
  nlohmann::json j;
  in >> j;

  RoadNetwork net;
  for (const auto& n : j.at("nodes"))
    net.nodes.push_back({n.at("x").get<double>(), n.at("y").get<double>()});
  for (const auto& e : j.at("edges")) {
    RoadEdge edge;
    edge.from = e.at("from").get<int>();
    edge.to = e.at("to").get<int>();
    edge.probability = e.value("probability", 1.0);
    net.edges.push_back(edge);
  }
  return net;
}

namespace {

// Node sequence of the walk, as edge indices.
std::vector<int> build_edge_path(const RoadNetwork& net, int start_node,
                                 const std::vector<int>& fixed_path,
                                 double max_distance_m, Rng& rng) {
  std::vector<int> path;
  if (!fixed_path.empty()) {
    if (fixed_path.front() != start_node)
      throw std::invalid_argument("road: fixed path must start at start_node");
    for (std::size_t i = 0; i + 1 < fixed_path.size(); ++i) {
      int found = -1;
      for (int e : net.outgoing_edges(fixed_path[i]))
        if (net.edges[e].to == fixed_path[i + 1]) found = e;
      if (found < 0)
        throw std::invalid_argument("road: fixed path uses a missing edge");
      path.push_back(found);
    }
    if (path.empty())
      throw std::invalid_argument("road: fixed path has no edges");
    return path;
  }

  double length = 0.0;
  int node = start_node;
  while (length < max_distance_m) {
    const std::vector<int> out = net.outgoing_edges(node);
    if (out.empty()) break;
    int chosen = out.back();
    if (out.size() > 1) {
      double u = rng.uniform();
      double acc = 0.0;
      for (int e : out) {
        acc += net.edges[e].probability;
        if (u < acc) {
          chosen = e;
          break;
        }
      }
    }
    path.push_back(chosen);
    length += net.edge_length(chosen);
    node = net.edges[chosen].to;
  }
  if (path.empty())
    throw std::invalid_argument("road: start node has no outgoing edges");
  return path;
}

}  // namespace

Trajectory sample_trajectory(const RoadNetwork& net, int start_node,
                             const std::vector<int>& fixed_path,
                             const SpeedProcess& speed, int n_epochs,
                             double epoch_period_s, Rng& rng) {
  if (n_epochs <= 0) throw std::invalid_argument("trajectory: n_epochs <= 0");
  if (epoch_period_s <= 0.0)
    throw std::invalid_argument("trajectory: epoch period <= 0");
  if (start_node < 0 || start_node >= static_cast<int>(net.nodes.size()))
    throw std::invalid_argument("trajectory: start node out of range");

  const double max_distance = speed.v_max_mps * epoch_period_s * n_epochs;
  const std::vector<int> path =
      build_edge_path(net, start_node, fixed_path, max_distance, rng);

  // Cumulative arc length at the end of each path edge.
  std::vector<double> cum(path.size());
  double total = 0.0;
  for (std::size_t i = 0; i < path.size(); ++i) {
    total += net.edge_length(path[i]);
    cum[i] = total;
  }

  // Speed random walk, then positions by arc length. The speed drawn for
  // step l covers the motion from epoch l-1 to epoch l.
  std::vector<double> arc(n_epochs, 0.0);
  double v = std::clamp(speed.initial_mps, 0.0, speed.v_max_mps);
  for (int l = 1; l < n_epochs; ++l) {
    v = std::clamp(v + speed.sigma_mps * rng.normal(), 0.0, speed.v_max_mps);
    arc[l] = arc[l - 1] + v * epoch_period_s;
  }

  Trajectory traj;
  traj.points.resize(n_epochs);
  for (int l = 0; l < n_epochs; ++l) {
    double s = std::min(arc[l], total);
    std::size_t seg = 0;
    while (seg + 1 < path.size() && s > cum[seg]) ++seg;
    const double seg_start = seg == 0 ? 0.0 : cum[seg - 1];
    const double seg_len = cum[seg] - seg_start;
    const double t = std::clamp((s - seg_start) / seg_len, 0.0, 1.0);
    const RoadEdge& e = net.edges[path[seg]];
    TrajectoryPoint& p = traj.points[l];
    p.state.x = net.nodes[e.from].x + t * (net.nodes[e.to].x - net.nodes[e.from].x);
    p.state.y = net.nodes[e.from].y + t * (net.nodes[e.to].y - net.nodes[e.from].y);
    p.edge = path[seg];
    p.arc_m = s;
  }

  const double dt = epoch_period_s;
  auto& pts = traj.points;
  for (int l = 0; l < n_epochs; ++l) {
    const int lo = std::max(0, l - 1);
    const int hi = std::min(n_epochs - 1, l + 1);
    if (hi > lo) {
      pts[l].state.vx = (pts[hi].state.x - pts[lo].state.x) / ((hi - lo) * dt);
      pts[l].state.vy = (pts[hi].state.y - pts[lo].state.y) / ((hi - lo) * dt);
    }
  }
  for (int l = 0; l < n_epochs; ++l) {
    const int c = std::clamp(l, 1, n_epochs - 2);
    if (n_epochs < 3) break;
    pts[l].state.ax = (pts[c + 1].state.x - 2.0 * pts[c].state.x +
                       pts[c - 1].state.x) / (dt * dt);
    pts[l].state.ay = (pts[c + 1].state.y - 2.0 * pts[c].state.y +
                       pts[c - 1].state.y) / (dt * dt);
  }

  for (int l = 1; l < n_epochs; ++l)
    if (pts[l].edge != pts[l - 1].edge) traj.corner_epochs.push_back(l);
  return traj;
}

}  // namespace beamtrack
