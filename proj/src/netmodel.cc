#include "critnet/netmodel.h"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <string>

#include "critnet/errors.h"

namespace critnet {

Topology::Topology(int num_nodes, std::vector<Link> links)
    : num_nodes_(num_nodes), links_(std::move(links)) {
  if (num_nodes < 0) throw ValidationError("negative node count");
  std::set<std::pair<NodeId, NodeId>> seen;
  for (size_t i = 0; i < links_.size(); ++i) {
    Link& link = links_[i];
    if (link.u == link.v) {
      throw ValidationError("self-loop on node " + std::to_string(link.u));
    }
    if (link.u > link.v) std::swap(link.u, link.v);
    if (link.u < 0 || link.v >= num_nodes) {
      throw ValidationError("link " + std::to_string(i) + " references an unknown node");
    }
    if (!(link.capacity > 0) || !std::isfinite(link.capacity)) {
      throw ValidationError("link " + std::to_string(link.u) + "-" + std::to_string(link.v) +
                            " has non-positive capacity");
    }
    if (!seen.insert({link.u, link.v}).second) {
      throw ValidationError("duplicate link " + std::to_string(link.u) + "-" +
                            std::to_string(link.v));
    }
  }

  out_arcs_.assign(num_nodes, {});
  in_arcs_.assign(num_nodes, {});
  for (LinkId l = 0; l < num_links(); ++l) {
    for (ArcId arc : {ForwardArc(l), ReverseArc(l)}) {
      out_arcs_[arc_tail(arc)].push_back(arc);
      in_arcs_[arc_head(arc)].push_back(arc);
    }
  }
  for (NodeId node = 0; node < num_nodes; ++node) {
    std::sort(out_arcs_[node].begin(), out_arcs_[node].end(),
              [this](ArcId a, ArcId b) { return arc_head(a) < arc_head(b); });
    std::sort(in_arcs_[node].begin(), in_arcs_[node].end(),
              [this](ArcId a, ArcId b) { return arc_tail(a) < arc_tail(b); });
  }
}

NodeId Topology::arc_tail(ArcId arc) const {
  const Link& link = links_[LinkOfArc(arc)];
  return arc % 2 == 0 ? link.u : link.v;
}

NodeId Topology::arc_head(ArcId arc) const {
  const Link& link = links_[LinkOfArc(arc)];
  return arc % 2 == 0 ? link.v : link.u;
}

std::optional<LinkId> Topology::FindLink(NodeId a, NodeId b) const {
  std::optional<ArcId> arc = FindArc(a, b);
  if (!arc) return std::nullopt;
  return LinkOfArc(*arc);
}

std::optional<ArcId> Topology::FindArc(NodeId tail, NodeId head) const {
  if (tail < 0 || tail >= num_nodes_) return std::nullopt;
  for (ArcId arc : out_arcs_[tail]) {
    if (arc_head(arc) == head) return arc;
  }
  return std::nullopt;
}

bool Topology::IsConnected(const std::vector<LinkId>& removed) const {
  if (num_nodes_ <= 1) return true;
  std::vector<char> dead(links_.size(), 0);
  for (LinkId l : removed) dead[l] = 1;
  std::vector<char> seen(num_nodes_, 0);
  std::vector<NodeId> stack = {0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    NodeId node = stack.back();
    stack.pop_back();
    for (ArcId arc : out_arcs_[node]) {
      if (dead[LinkOfArc(arc)]) continue;
      NodeId next = arc_head(arc);
      if (!seen[next]) {
        seen[next] = 1;
        ++reached;
        stack.push_back(next);
      }
    }
  }
  return reached == num_nodes_;
}

Topology Topology::WithCapacities(const std::vector<double>& capacities) const {
  std::vector<Link> links = links_;
  for (size_t i = 0; i < links.size(); ++i) links[i].capacity = capacities[i];
  return Topology(num_nodes_, std::move(links));
}

TrafficMatrix::TrafficMatrix(int num_nodes)
    : num_nodes_(num_nodes), volumes_(static_cast<size_t>(num_nodes) * num_nodes, 0.0) {}

TrafficMatrix TrafficMatrix::FromDemands(int num_nodes, const std::vector<Demand>& demands) {
  TrafficMatrix tm(num_nodes);
  for (const Demand& d : demands) tm.Set(d.src, d.dst, tm.at(d.src, d.dst) + d.volume);
  return tm;
}

void TrafficMatrix::Set(NodeId src, NodeId dst, double volume) {
  if (src < 0 || dst < 0 || src >= num_nodes_ || dst >= num_nodes_) {
    throw ValidationError("demand " + std::to_string(src) + "->" + std::to_string(dst) +
                          " references an unknown node");
  }
  if (src == dst && volume != 0.0) {
    throw ValidationError("demand with src == dst (" + std::to_string(src) + ")");
  }
  if (!std::isfinite(volume) || volume < 0) {
    throw ValidationError("demand " + std::to_string(src) + "->" + std::to_string(dst) +
                          " has a negative or non-finite volume");
  }
  volumes_[src * num_nodes_ + dst] = volume;
}

std::vector<Demand> TrafficMatrix::demands() const {
  std::vector<Demand> out;
  for (NodeId s = 0; s < num_nodes_; ++s) {
    for (NodeId t = 0; t < num_nodes_; ++t) {
      double volume = at(s, t);
      if (volume > 0) out.push_back({s, t, volume});
    }
  }
  return out;
}

double TrafficMatrix::total() const {
  double sum = 0.0;
  for (double v : volumes_) sum += v;
  return sum;
}

TrafficMatrix TrafficMatrix::Scaled(double factor) const {
  TrafficMatrix out = *this;
  for (double& v : out.volumes_) v *= factor;
  return out;
}

NetworkInstance::NetworkInstance(Topology topology_in, TrafficMatrix tm_in, uint64_t seed_in)
    : topology(std::move(topology_in)), tm(std::move(tm_in)), seed(seed_in) {
  if (tm.num_nodes() != topology.num_nodes()) {
    throw ValidationError("traffic matrix has " + std::to_string(tm.num_nodes()) +
                          " nodes, topology has " + std::to_string(topology.num_nodes()));
  }
}

PrunedTopology PruneDegreeOne(const Topology& topology) {
  const int n = topology.num_nodes();
  std::vector<int> degree(n);
  std::vector<char> removed(n, 0);
  std::queue<NodeId> queue;
  for (NodeId v = 0; v < n; ++v) {
    degree[v] = topology.degree(v);
    if (degree[v] <= 1) queue.push(v);
  }
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop();
    if (removed[v]) continue;
    removed[v] = 1;
    for (ArcId arc : topology.out_arcs(v)) {
      NodeId w = topology.arc_head(arc);
      if (!removed[w] && --degree[w] <= 1) queue.push(w);
    }
  }

  PrunedTopology result;
  std::vector<NodeId> new_id(n, -1);
  for (NodeId v = 0; v < n; ++v) {
    if (removed[v]) continue;
    new_id[v] = static_cast<NodeId>(result.original_id.size());
    result.original_id.push_back(v);
  }
  if (result.original_id.empty()) {
    throw ValidationError("degree-one pruning removed every node (input is a forest)");
  }
  std::vector<Link> links;
  for (const Link& link : topology.links()) {
    if (removed[link.u] || removed[link.v]) continue;
    links.push_back({new_id[link.u], new_id[link.v], link.capacity});
  }
  result.topology = Topology(static_cast<int>(result.original_id.size()), std::move(links));
  return result;
}

}  // namespace critnet
