#ifndef CRITNET_ROUTING_H
#define CRITNET_ROUTING_H

#include <string>
#include <vector>

#include "critnet/netmodel.h"
#include "json.hpp"

namespace critnet {

enum class Scheme { kMcf, kOspf };

std::string ToString(Scheme scheme);
Scheme ParseScheme(const std::string& text);

struct PathFlow {
  std::vector<NodeId> nodes;
  double ratio = 0.0;  // share of the demand's volume

  bool operator==(const PathFlow&) const = default;
};

struct ArcFlow {
  ArcId arc = 0;
  double flow = 0.0;  // traffic volume units

  bool operator==(const ArcFlow&) const = default;
};

struct DemandRouting {
  NodeId src = 0;
  NodeId dst = 0;
  double volume = 0.0;
  // Empty until the decision is path-decomposed.
  std::vector<PathFlow> paths;
  // r(d, e): sparse, sorted by arc, strictly positive entries.
  std::vector<ArcFlow> arc_flows;
};

struct RoutingDecision {
  Scheme scheme = Scheme::kMcf;
  std::vector<DemandRouting> demands;

  // True when every demand carries a path set.
  bool decomposed() const;
};

struct LinkLoadProfile {
  std::vector<double> arc_load;
  std::vector<double> arc_utilization;
  // Sum over both directions: the traffic volume traversing the link.
  std::vector<double> link_load;
  // Max over both directions.
  std::vector<double> link_utilization;
  double mlu = 0.0;
};

struct RoutingResult {
  RoutingDecision decision;
  double mlu = 0.0;
};

// Minimum-MLU multicommodity flow on the topology with `disabled` links
// removed. Demands sharing a source are routed as one commodity; the
// per-demand split is recovered by path decomposition. The returned mlu is the
// one achieved by the returned decision.
//
// Throws InfeasibleError naming the first demand whose endpoints are
// disconnected and SolverError on LP failure.
RoutingResult SolveMcfMinMlu(const NetworkInstance& instance,
                             const std::vector<LinkId>& disabled = {});

// Shortest paths under w_e = 1 / C_e with even per-hop ECMP splitting.
RoutingResult SolveOspf(const NetworkInstance& instance,
                        const std::vector<LinkId>& disabled = {});

RoutingResult SolveRouting(const NetworkInstance& instance, Scheme scheme,
                           const std::vector<LinkId>& disabled = {});

// Re-derives every demand's path set from its arc flows. Cycles are dropped;
// paths are peeled widest-first with lexicographic tie-breaking. Throws
// ValidationError when an arc flow violates conservation by more than 1e-6.
RoutingDecision DecomposeToPaths(const Topology& topology, const RoutingDecision& decision);

LinkLoadProfile ComputeLoads(const Topology& topology, const RoutingDecision& decision);

// Arc flows implied by a demand's paths.
std::vector<ArcFlow> ArcFlowsFromPaths(const Topology& topology, const DemandRouting& demand);

struct SourceSink {
  NodeId node;
  double amount;
};

// Splits a single-source flow (arc-indexed, may contain cycles) into paths
// towards each sink. Returns, per sink in the given order, (path, flow) pairs.
std::vector<std::vector<std::pair<std::vector<NodeId>, double>>> DecomposeSourceFlow(
    const Topology& topology, NodeId source, const std::vector<SourceSink>& sinks,
    std::vector<double> arc_flow);

nlohmann::json RoutingToJson(const RoutingDecision& decision);
// Arc flows are rebuilt from the paths.
RoutingDecision RoutingFromJson(const Topology& topology, const nlohmann::json& json);
void SaveRouting(const RoutingDecision& decision, const std::string& path);
RoutingDecision LoadRouting(const Topology& topology, const std::string& path);

}  // namespace critnet

#endif  // CRITNET_ROUTING_H
