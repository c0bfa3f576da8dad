#ifndef CRITNET_NETMODEL_H
#define CRITNET_NETMODEL_H

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace critnet {

using NodeId = int32_t;
using LinkId = int32_t;
// Every undirected link l is routed as two directed arcs: 2l (u -> v) and
// 2l + 1 (v -> u). Each arc has the full link capacity.
using ArcId = int32_t;

inline LinkId LinkOfArc(ArcId arc) { return arc / 2; }
inline ArcId ForwardArc(LinkId link) { return 2 * link; }
inline ArcId ReverseArc(LinkId link) { return 2 * link + 1; }

struct Link {
  NodeId u = 0;  // u < v
  NodeId v = 0;
  double capacity = 1.0;

  bool operator==(const Link&) const = default;
};

// Undirected capacitated graph over dense node ids 0..n-1. Immutable once
// constructed; the constructor canonicalizes each link to u < v and rejects
// self-loops, duplicate pairs and non-positive capacities. Connectivity is not
// enforced here (see IsConnected / loaders).
class Topology {
 public:
  Topology() = default;
  Topology(int num_nodes, std::vector<Link> links);

  int num_nodes() const { return num_nodes_; }
  int num_links() const { return static_cast<int>(links_.size()); }
  int num_arcs() const { return 2 * num_links(); }

  const std::vector<Link>& links() const { return links_; }
  const Link& link(LinkId id) const { return links_[id]; }

  NodeId arc_tail(ArcId arc) const;
  NodeId arc_head(ArcId arc) const;
  double arc_capacity(ArcId arc) const { return links_[LinkOfArc(arc)].capacity; }

  // Arcs leaving / entering a node, ordered by the node at the other end.
  const std::vector<ArcId>& out_arcs(NodeId node) const { return out_arcs_[node]; }
  const std::vector<ArcId>& in_arcs(NodeId node) const { return in_arcs_[node]; }

  int degree(NodeId node) const { return static_cast<int>(out_arcs_[node].size()); }
  std::optional<LinkId> FindLink(NodeId a, NodeId b) const;
  std::optional<ArcId> FindArc(NodeId tail, NodeId head) const;

  // Connectivity of the graph with the given links removed.
  bool IsConnected(const std::vector<LinkId>& removed = {}) const;

  // Same graph with every capacity replaced.
  Topology WithCapacities(const std::vector<double>& capacities) const;

  bool operator==(const Topology& other) const {
    return num_nodes_ == other.num_nodes_ && links_ == other.links_;
  }

 private:
  int num_nodes_ = 0;
  std::vector<Link> links_;
  std::vector<std::vector<ArcId>> out_arcs_;
  std::vector<std::vector<ArcId>> in_arcs_;
};

struct Demand {
  NodeId src = 0;
  NodeId dst = 0;
  double volume = 0.0;
};

// Dense n x n demand matrix. Demands with the same (src, dst) pair are merged
// by addition when built from a list.
class TrafficMatrix {
 public:
  TrafficMatrix() = default;
  explicit TrafficMatrix(int num_nodes);
  static TrafficMatrix FromDemands(int num_nodes, const std::vector<Demand>& demands);

  int num_nodes() const { return num_nodes_; }
  double at(NodeId src, NodeId dst) const { return volumes_[src * num_nodes_ + dst]; }
  void Set(NodeId src, NodeId dst, double volume);

  // Positive entries in row-major (src, dst) order.
  std::vector<Demand> demands() const;
  double total() const;
  TrafficMatrix Scaled(double factor) const;

  bool operator==(const TrafficMatrix&) const = default;

 private:
  int num_nodes_ = 0;
  std::vector<double> volumes_;
};

struct NetworkInstance {
  Topology topology;
  TrafficMatrix tm;
  uint64_t seed = 0;

  NetworkInstance() = default;
  NetworkInstance(Topology topology, TrafficMatrix tm, uint64_t seed = 0);
};

// ---------------------------------------------------------------------------
// File formats

enum class TopologyFormat { kAuto, kEdgeList, kGraphMl };

struct LoadOptions {
  TopologyFormat format = TopologyFormat::kAuto;
  bool allow_disconnected = false;
};

// Edge list: one link per line, "u v [capacity]", '#' starts a comment.
// Numeric node labels are densified in ascending numeric order, other labels
// in order of first appearance.
Topology ParseEdgeList(std::istream& in, const LoadOptions& options = {});

// GraphML subset: <node id>, <edge source target> and an optional edge data
// key whose attr.name is "capacity" (default 1.0). Nodes are numbered in
// declaration order.
Topology ParseGraphMl(std::istream& in, const LoadOptions& options = {});

Topology LoadTopology(const std::string& path, const LoadOptions& options = {});
void WriteEdgeList(const Topology& topology, std::ostream& out);
void SaveTopology(const Topology& topology, const std::string& path);

// Triple list "src dst volume", one per line.
TrafficMatrix ParseTrafficMatrix(std::istream& in, int num_nodes);
TrafficMatrix LoadTrafficMatrix(const std::string& path, int num_nodes);
void WriteTrafficMatrix(const TrafficMatrix& tm, std::ostream& out);
void SaveTrafficMatrix(const TrafficMatrix& tm, const std::string& path);

// ---------------------------------------------------------------------------
// Transformations and generators

struct PrunedTopology {
  Topology topology;
  // original_id[new_id] is the node's id in the input topology.
  std::vector<NodeId> original_id;
};

// Repeatedly strips nodes of degree <= 1. Throws ValidationError when
// nothing is left (tree input).
PrunedTopology PruneDegreeOne(const Topology& topology);

struct WaxmanParams {
  double alpha = 0.4;
  double beta = 0.6;
  int max_attempts = 10000;
  // Reject samples with a node of degree below this.
  int min_degree = 2;
};

// Waxman random graph on the unit square with unit capacities, resampled
// until connected and every node has at least min_degree links.
Topology GenerateRandomTopology(int num_nodes, const WaxmanParams& params, uint64_t seed);

struct GravityOptions {
  // All node masses equal to 1; for debugging.
  bool uniform_masses = false;
};

// demand(i, j) proportional to m_i * m_j with masses log-uniform in [0.1, 1],
// scaled so the demands sum to total_volume.
TrafficMatrix GenerateGravityTm(const Topology& topology, double total_volume, uint64_t seed,
                                const GravityOptions& options = {});

// Each capacity drawn uniformly from {base/4, base/2, 3 base/4, base}.
Topology AssignRandomCapacities(const Topology& topology, double base_capacity,
                                uint64_t seed);

}  // namespace critnet

#endif  // CRITNET_NETMODEL_H
