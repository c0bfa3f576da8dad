#include "critnet/routing.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <queue>

#include "critnet/errors.h"
#include "critnet/flow_lp.h"
#include "critnet/lp.h"

namespace critnet {

std::string ToString(Scheme scheme) { return scheme == Scheme::kMcf ? "mcf" : "ospf"; }

Scheme ParseScheme(const std::string& text) {
  if (text == "mcf" || text == "MCF") return Scheme::kMcf;
  if (text == "ospf" || text == "OSPF") return Scheme::kOspf;
  throw ValidationError("unknown routing scheme '" + text + "' (expected mcf or ospf)");
}

bool RoutingDecision::decomposed() const {
  return std::all_of(demands.begin(), demands.end(), [](const DemandRouting& d) {
    return d.volume <= 0 || !d.paths.empty();
  });
}

RoutingResult SolveMcfMinMlu(const NetworkInstance& instance,
                             const std::vector<LinkId>& disabled) {
  const Topology& topology = instance.topology;
  RoutingResult result;
  result.decision.scheme = Scheme::kMcf;
  std::vector<Commodity> commodities = CommoditiesBySource(instance.tm);
  if (commodities.empty()) return result;

  std::vector<char> arc_disabled = ArcMask(topology, disabled);
  CheckReachable(topology, arc_disabled, commodities);

  lp::Problem problem;
  FlowBlock flows(&problem, topology, commodities, arc_disabled);
  lp::VarIndex mlu = problem.AddVariable(1.0);
  for (ArcId arc = 0; arc < topology.num_arcs(); ++arc) {
    if (arc_disabled[arc]) continue;
    lp::RowIndex row = problem.AddRow(lp::RowSense::kLessEqual, 0.0);
    flows.AddArcLoad(&problem, row, arc);
    problem.AddCoefficient(row, mlu, -topology.arc_capacity(arc));
  }
  lp::Solution solution = lp::Solve(problem);
  if (!solution.optimal()) {
    throw SolverError("min-MLU LP ended with status " + lp::ToString(solution.status));
  }

  std::vector<std::vector<double>> per_source;
  for (int k = 0; k < flows.num_commodities(); ++k) per_source.push_back(flows.Flow(solution, k));
  result.decision.demands = DemandsFromSourceFlows(topology, commodities, per_source);
  result.mlu = ComputeLoads(topology, result.decision).mlu;
  return result;
}

namespace {

// Distances to `target` under w = 1/C on the surviving graph.
std::vector<double> DistancesTo(const Topology& topology, const std::vector<char>& arc_disabled,
                                NodeId target) {
  std::vector<double> dist(topology.num_nodes(), std::numeric_limits<double>::infinity());
  using Entry = std::pair<double, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue;
  dist[target] = 0.0;
  queue.push({0.0, target});
  while (!queue.empty()) {
    auto [d, v] = queue.top();
    queue.pop();
    if (d > dist[v]) continue;
    for (ArcId arc : topology.in_arcs(v)) {
      if (arc_disabled[arc]) continue;
      NodeId tail = topology.arc_tail(arc);
      double candidate = d + 1.0 / topology.arc_capacity(arc);
      if (candidate < dist[tail]) {
        dist[tail] = candidate;
        queue.push({candidate, tail});
      }
    }
  }
  return dist;
}

bool SameCost(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a)); }

// Equal-cost successor arcs of every node towards the target, ordered by next hop.
std::vector<std::vector<ArcId>> EcmpSuccessors(const Topology& topology,
                                               const std::vector<char>& arc_disabled,
                                               const std::vector<double>& dist) {
  std::vector<std::vector<ArcId>> next(topology.num_nodes());
  for (NodeId v = 0; v < topology.num_nodes(); ++v) {
    if (std::isinf(dist[v]) || dist[v] == 0.0) continue;
    for (ArcId arc : topology.out_arcs(v)) {
      if (arc_disabled[arc]) continue;
      NodeId head = topology.arc_head(arc);
      if (SameCost(dist[v], 1.0 / topology.arc_capacity(arc) + dist[head])) {
        next[v].push_back(arc);
      }
    }
  }
  return next;
}

void EnumerateEcmpPaths(const Topology& topology, const std::vector<std::vector<ArcId>>& next,
                        NodeId node, NodeId target, double ratio, std::vector<NodeId>& prefix,
                        std::vector<PathFlow>& out) {
  if (node == target) {
    out.push_back({prefix, ratio});
    return;
  }
  const double share = ratio / static_cast<double>(next[node].size());
  for (ArcId arc : next[node]) {
    NodeId head = topology.arc_head(arc);
    prefix.push_back(head);
    EnumerateEcmpPaths(topology, next, head, target, share, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

RoutingResult SolveOspf(const NetworkInstance& instance, const std::vector<LinkId>& disabled) {
  const Topology& topology = instance.topology;
  RoutingResult result;
  result.decision.scheme = Scheme::kOspf;
  std::vector<Demand> demands = instance.tm.demands();
  if (demands.empty()) return result;

  std::vector<char> arc_disabled = ArcMask(topology, disabled);
  CheckReachable(topology, arc_disabled, CommoditiesBySource(instance.tm));

  std::map<NodeId, std::vector<std::vector<ArcId>>> successors;
  std::map<NodeId, std::vector<double>> distances;
  for (const Demand& d : demands) {
    if (!successors.count(d.dst)) {
      distances[d.dst] = DistancesTo(topology, arc_disabled, d.dst);
      successors[d.dst] = EcmpSuccessors(topology, arc_disabled, distances[d.dst]);
    }
  }

  for (const Demand& d : demands) {
    const auto& next = successors[d.dst];
    const auto& dist = distances[d.dst];
    DemandRouting routing;
    routing.src = d.src;
    routing.dst = d.dst;
    routing.volume = d.volume;

    // Per-hop even split, pushed through the shortest-path DAG in order of
    // decreasing distance.
    std::vector<double> node_flow(topology.num_nodes(), 0.0);
    node_flow[d.src] = d.volume;
    std::vector<NodeId> order;
    for (NodeId v = 0; v < topology.num_nodes(); ++v) {
      if (!std::isinf(dist[v])) order.push_back(v);
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](NodeId a, NodeId b) { return dist[a] > dist[b]; });
    std::map<ArcId, double> arc_flow;
    for (NodeId v : order) {
      if (node_flow[v] <= 0 || v == d.dst) continue;
      double share = node_flow[v] / static_cast<double>(next[v].size());
      for (ArcId arc : next[v]) {
        arc_flow[arc] += share;
        node_flow[topology.arc_head(arc)] += share;
      }
    }
    for (const auto& [arc, flow] : arc_flow) routing.arc_flows.push_back({arc, flow});

    std::vector<NodeId> prefix = {d.src};
    EnumerateEcmpPaths(topology, next, d.src, d.dst, 1.0, prefix, routing.paths);
    result.decision.demands.push_back(std::move(routing));
  }
  result.mlu = ComputeLoads(topology, result.decision).mlu;
  return result;
}

RoutingResult SolveRouting(const NetworkInstance& instance, Scheme scheme,
                           const std::vector<LinkId>& disabled) {
  return scheme == Scheme::kMcf ? SolveMcfMinMlu(instance, disabled)
                                : SolveOspf(instance, disabled);
}

LinkLoadProfile ComputeLoads(const Topology& topology, const RoutingDecision& decision) {
  LinkLoadProfile profile;
  profile.arc_load.assign(topology.num_arcs(), 0.0);
  for (const DemandRouting& demand : decision.demands) {
    for (const ArcFlow& af : demand.arc_flows) profile.arc_load[af.arc] += af.flow;
  }
  profile.arc_utilization.resize(topology.num_arcs());
  for (ArcId arc = 0; arc < topology.num_arcs(); ++arc) {
    profile.arc_utilization[arc] = profile.arc_load[arc] / topology.arc_capacity(arc);
  }
  profile.link_load.resize(topology.num_links());
  profile.link_utilization.resize(topology.num_links());
  for (LinkId l = 0; l < topology.num_links(); ++l) {
    profile.link_load[l] = profile.arc_load[ForwardArc(l)] + profile.arc_load[ReverseArc(l)];
    profile.link_utilization[l] = std::max(profile.arc_utilization[ForwardArc(l)],
                                           profile.arc_utilization[ReverseArc(l)]);
    profile.mlu = std::max(profile.mlu, profile.link_utilization[l]);
  }
  return profile;
}

nlohmann::json RoutingToJson(const RoutingDecision& decision) {
  nlohmann::json demands = nlohmann::json::array();
  for (const DemandRouting& d : decision.demands) {
    nlohmann::json paths = nlohmann::json::array();
    for (const PathFlow& p : d.paths) paths.push_back({{"nodes", p.nodes}, {"ratio", p.ratio}});
    demands.push_back({{"src", d.src}, {"dst", d.dst}, {"volume", d.volume}, {"paths", paths}});
  }
  return {{"scheme", ToString(decision.scheme)}, {"demands", demands}};
}

RoutingDecision RoutingFromJson(const Topology& topology, const nlohmann::json& json) {
  RoutingDecision decision;
  try {
    if (json.contains("scheme")) decision.scheme = ParseScheme(json.at("scheme").get<std::string>());
    for (const auto& d : json.at("demands")) {
      DemandRouting demand;
      demand.src = d.at("src").get<NodeId>();
      demand.dst = d.at("dst").get<NodeId>();
      demand.volume = d.at("volume").get<double>();
      for (const auto& p : d.at("paths")) {
        PathFlow path;
        path.nodes = p.at("nodes").get<std::vector<NodeId>>();
        path.ratio = p.at("ratio").get<double>();
        if (path.nodes.empty() || path.nodes.front() != demand.src ||
            path.nodes.back() != demand.dst) {
          throw ValidationError("path does not connect demand endpoints");
        }
        for (NodeId v : path.nodes) {
          if (v < 0 || v >= topology.num_nodes()) throw ValidationError("path node out of range");
        }
        demand.paths.push_back(std::move(path));
      }
      demand.arc_flows = ArcFlowsFromPaths(topology, demand);
      decision.demands.push_back(std::move(demand));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("routing JSON: ") + e.what());
  }
  return decision;
}

void SaveRouting(const RoutingDecision& decision, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << RoutingToJson(decision).dump(1) << '\n';
}

RoutingDecision LoadRouting(const Topology& topology, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open routing file '" + path + "'");
  nlohmann::json json;
  try {
    json = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("routing JSON: ") + e.what());
  }
  return RoutingFromJson(topology, json);
}

}  // namespace critnet
