#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "critnet/errors.h"
#include "critnet/routing.h"

namespace critnet {
namespace {

constexpr double kConservationTolerance = 1e-6;

// Finds one directed cycle among arcs with positive flow; empty if none.
std::vector<ArcId> FindCycle(const Topology& topology, const std::vector<double>& flow) {
  const int n = topology.num_nodes();
  // 0 = unvisited, 1 = on the DFS stack, 2 = finished
  std::vector<int> state(n, 0);
  std::vector<ArcId> via(n, -1);
  std::vector<size_t> next_arc(n, 0);
  for (NodeId root = 0; root < n; ++root) {
    if (state[root] != 0) continue;
    std::vector<NodeId> stack = {root};
    state[root] = 1;
    while (!stack.empty()) {
      NodeId node = stack.back();
      const auto& arcs = topology.out_arcs(node);
      if (next_arc[node] == arcs.size()) {
        state[node] = 2;
        stack.pop_back();
        continue;
      }
      ArcId arc = arcs[next_arc[node]++];
      if (flow[arc] <= 0.0) continue;
      NodeId head = topology.arc_head(arc);
      if (state[head] == 0) {
        via[head] = arc;
        state[head] = 1;
        stack.push_back(head);
      } else if (state[head] == 1) {
        std::vector<ArcId> cycle = {arc};
        for (NodeId v = node; v != head; v = topology.arc_tail(via[v])) cycle.push_back(via[v]);
        return cycle;
      }
    }
  }
  return {};
}

// Cancels every directed cycle in the support of `flow` by subtracting its
// bottleneck. Leaves an acyclic flow with the same node balances.
void CancelCycles(const Topology& topology, std::vector<double>& flow, double zero) {
  for (double& f : flow) {
    if (f <= zero) f = 0.0;
  }
  while (true) {
    std::vector<ArcId> cycle = FindCycle(topology, flow);
    if (cycle.empty()) return;
    double bottleneck = std::numeric_limits<double>::infinity();
    for (ArcId arc : cycle) bottleneck = std::min(bottleneck, flow[arc]);
    for (ArcId arc : cycle) {
      flow[arc] -= bottleneck;
      if (flow[arc] <= zero) flow[arc] = 0.0;
    }
  }
}

// Widest path from source to target over arcs with positive flow. Returns the
// bottleneck, or 0 when the target is unreachable.
double WidestBottleneck(const Topology& topology, const std::vector<double>& flow,
                        NodeId source, NodeId target) {
  const int n = topology.num_nodes();
  std::vector<double> width(n, 0.0);
  std::vector<char> done(n, 0);
  width[source] = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < n; ++iter) {
    NodeId best = -1;
    for (NodeId v = 0; v < n; ++v) {
      if (!done[v] && width[v] > 0 && (best < 0 || width[v] > width[best])) best = v;
    }
    if (best < 0) break;
    done[best] = 1;
    if (best == target) break;
    for (ArcId arc : topology.out_arcs(best)) {
      if (flow[arc] <= 0.0) continue;
      NodeId head = topology.arc_head(arc);
      width[head] = std::max(width[head], std::min(width[best], flow[arc]));
    }
  }
  return std::isinf(width[target]) ? 0.0 : width[target];
}

// Lexicographically smallest path whose arcs all carry at least `threshold`.
// The flow support is acyclic, so greedy descent yields a simple path.
std::vector<NodeId> SmallestWidePath(const Topology& topology, const std::vector<double>& flow,
                                     NodeId source, NodeId target, double threshold) {
  const int n = topology.num_nodes();
  std::vector<char> reaches(n, 0);
  std::vector<NodeId> stack = {target};
  reaches[target] = 1;
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    for (ArcId arc : topology.in_arcs(v)) {
      NodeId tail = topology.arc_tail(arc);
      if (flow[arc] >= threshold && !reaches[tail]) {
        reaches[tail] = 1;
        stack.push_back(tail);
      }
    }
  }
  std::vector<NodeId> path = {source};
  std::vector<char> visited(n, 0);
  visited[source] = 1;
  NodeId node = source;
  while (node != target) {
    NodeId next = -1;
    for (ArcId arc : topology.out_arcs(node)) {
      NodeId head = topology.arc_head(arc);
      if (flow[arc] >= threshold && reaches[head] && !visited[head]) {
        next = head;
        break;
      }
    }
    if (next < 0) return {};
    visited[next] = 1;
    path.push_back(next);
    node = next;
  }
  return path;
}

}  // namespace

std::vector<std::vector<std::pair<std::vector<NodeId>, double>>> DecomposeSourceFlow(
    const Topology& topology, NodeId source, const std::vector<SourceSink>& sinks,
    std::vector<double> arc_flow) {
  double scale = 0.0;
  for (const auto& sink : sinks) scale = std::max(scale, sink.amount);
  const double zero = 1e-12 * std::max(1.0, scale);
  CancelCycles(topology, arc_flow, zero);

  std::vector<std::vector<std::pair<std::vector<NodeId>, double>>> out(sinks.size());
  for (size_t s = 0; s < sinks.size(); ++s) {
    double remaining = sinks[s].amount;
    while (remaining > zero) {
      double width = WidestBottleneck(topology, arc_flow, source, sinks[s].node);
      if (width <= zero) break;
      double threshold = width * (1 - 1e-12);
      std::vector<NodeId> path =
          SmallestWidePath(topology, arc_flow, source, sinks[s].node, threshold);
      if (path.empty()) break;
      double amount = std::min(width, remaining);
      for (size_t i = 0; i + 1 < path.size(); ++i) {
        ArcId arc = *topology.FindArc(path[i], path[i + 1]);
        arc_flow[arc] -= amount;
        if (arc_flow[arc] <= zero) arc_flow[arc] = 0.0;
      }
      remaining -= amount;
      out[s].emplace_back(std::move(path), amount);
    }
    if (remaining > kConservationTolerance) {
      throw ValidationError("flow towards node " + std::to_string(sinks[s].node) +
                            " falls short by " + std::to_string(remaining));
    }
  }
  return out;
}

std::vector<ArcFlow> ArcFlowsFromPaths(const Topology& topology, const DemandRouting& demand) {
  std::map<ArcId, double> flows;
  for (const PathFlow& path : demand.paths) {
    for (size_t i = 0; i + 1 < path.nodes.size(); ++i) {
      std::optional<ArcId> arc = topology.FindArc(path.nodes[i], path.nodes[i + 1]);
      if (!arc) {
        throw ValidationError("path uses missing link " + std::to_string(path.nodes[i]) + "-" +
                              std::to_string(path.nodes[i + 1]));
      }
      flows[*arc] += path.ratio * demand.volume;
    }
  }
  std::vector<ArcFlow> out;
  for (const auto& [arc, flow] : flows) {
    if (flow > 0) out.push_back({arc, flow});
  }
  return out;
}

RoutingDecision DecomposeToPaths(const Topology& topology, const RoutingDecision& decision) {
  RoutingDecision out = decision;
  for (DemandRouting& demand : out.demands) {
    std::vector<double> balance(topology.num_nodes(), 0.0);
    std::vector<double> flow(topology.num_arcs(), 0.0);
    for (const ArcFlow& af : demand.arc_flows) {
      if (af.flow < -1e-9) {
        throw ValidationError("negative flow on arc " + std::to_string(af.arc));
      }
      flow[af.arc] += std::max(0.0, af.flow);
      balance[topology.arc_tail(af.arc)] += af.flow;
      balance[topology.arc_head(af.arc)] -= af.flow;
    }
    for (NodeId v = 0; v < topology.num_nodes(); ++v) {
      double expected = v == demand.src ? demand.volume : v == demand.dst ? -demand.volume : 0.0;
      if (std::abs(balance[v] - expected) > kConservationTolerance) {
        throw ValidationError("demand " + std::to_string(demand.src) + "->" +
                              std::to_string(demand.dst) + " violates flow conservation at node " +
                              std::to_string(v));
      }
    }
    demand.paths.clear();
    if (demand.volume <= 0) continue;
    auto peeled = DecomposeSourceFlow(topology, demand.src, {{demand.dst, demand.volume}}, flow);
    double total = 0.0;
    for (const auto& [nodes, amount] : peeled[0]) total += amount;
    for (auto& [nodes, amount] : peeled[0]) demand.paths.push_back({nodes, amount / total});
    demand.arc_flows = ArcFlowsFromPaths(topology, demand);
  }
  return out;
}

}  // namespace critnet
