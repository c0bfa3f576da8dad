#include "critnet/flow_lp.h"

#include <map>
#include <string>

#include "critnet/errors.h"

namespace critnet {

double Commodity::total() const {
  double sum = 0.0;
  for (const auto& sink : sinks) sum += sink.amount;
  return sum;
}

std::vector<Commodity> CommoditiesBySource(int num_nodes, const std::vector<Demand>& demands) {
  std::map<NodeId, std::map<NodeId, double>> grouped;
  for (const Demand& d : demands) {
    if (d.volume > 0) grouped[d.src][d.dst] += d.volume;
  }
  std::vector<Commodity> out;
  for (const auto& [src, sinks] : grouped) {
    Commodity commodity;
    commodity.source = src;
    for (const auto& [dst, volume] : sinks) commodity.sinks.push_back({dst, volume});
    out.push_back(std::move(commodity));
  }
  (void)num_nodes;
  return out;
}

std::vector<Commodity> CommoditiesBySource(const TrafficMatrix& tm) {
  return CommoditiesBySource(tm.num_nodes(), tm.demands());
}

std::vector<char> ArcMask(const Topology& topology, const std::vector<LinkId>& links) {
  std::vector<char> mask(topology.num_arcs(), 0);
  for (LinkId l : links) {
    mask[ForwardArc(l)] = 1;
    mask[ReverseArc(l)] = 1;
  }
  return mask;
}

void CheckReachable(const Topology& topology, const std::vector<char>& arc_disabled,
                    const std::vector<Commodity>& commodities) {
  for (const Commodity& commodity : commodities) {
    std::vector<char> seen(topology.num_nodes(), 0);
    std::vector<NodeId> stack = {commodity.source};
    seen[commodity.source] = 1;
    while (!stack.empty()) {
      NodeId node = stack.back();
      stack.pop_back();
      for (ArcId arc : topology.out_arcs(node)) {
        if (arc_disabled[arc] || LinkOfArc(arc) == commodity.avoid_link) continue;
        NodeId next = topology.arc_head(arc);
        if (!seen[next]) {
          seen[next] = 1;
          stack.push_back(next);
        }
      }
    }
    for (const auto& sink : commodity.sinks) {
      if (!seen[sink.node]) {
        throw InfeasibleError("demand " + std::to_string(commodity.source) + "->" +
                              std::to_string(sink.node) + " has no surviving path");
      }
    }
  }
}

FlowBlock::FlowBlock(lp::Problem* problem, const Topology& topology,
                     std::vector<Commodity> commodities, const std::vector<char>& arc_disabled)
    : num_arcs_(topology.num_arcs()), commodities_(std::move(commodities)) {
  const int n = topology.num_nodes();
  vars_.assign(commodities_.size(), std::vector<lp::VarIndex>(num_arcs_, -1));
  for (size_t k = 0; k < commodities_.size(); ++k) {
    const Commodity& commodity = commodities_[k];
    for (ArcId arc = 0; arc < num_arcs_; ++arc) {
      if (arc_disabled[arc] || LinkOfArc(arc) == commodity.avoid_link) continue;
      // Flow back into the source is never useful.
      if (topology.arc_head(arc) == commodity.source) continue;
      vars_[k][arc] = problem ? problem->AddVariable(0.0) : num_variables_;
      ++num_variables_;
    }
    std::vector<double> sink_amount(n, 0.0);
    for (const auto& sink : commodity.sinks) sink_amount[sink.node] += sink.amount;
    for (NodeId v = 0; v < n; ++v) {
      if (v == commodity.source) continue;
      bool touched = false;
      for (ArcId arc : topology.in_arcs(v)) touched = touched || vars_[k][arc] >= 0;
      if (!touched && sink_amount[v] == 0.0) continue;
      ++conservation_rows_;
      if (!problem) continue;
      lp::RowIndex row = problem->AddRow(lp::RowSense::kEqual, sink_amount[v]);
      for (ArcId arc : topology.in_arcs(v)) {
        if (vars_[k][arc] >= 0) problem->AddCoefficient(row, vars_[k][arc], 1.0);
      }
      for (ArcId arc : topology.out_arcs(v)) {
        if (vars_[k][arc] >= 0) problem->AddCoefficient(row, vars_[k][arc], -1.0);
      }
    }
  }
}

void FlowBlock::AddArcLoad(lp::Problem* problem, lp::RowIndex row, ArcId arc,
                           double scale) const {
  for (int k = 0; k < num_commodities(); ++k) AddCommodityArcLoad(problem, row, k, arc, scale);
}

void FlowBlock::AddCommodityArcLoad(lp::Problem* problem, lp::RowIndex row, int k, ArcId arc,
                                    double scale) const {
  if (vars_[k][arc] >= 0) problem->AddCoefficient(row, vars_[k][arc], scale);
}

std::vector<double> FlowBlock::Flow(const lp::Solution& solution, int k) const {
  std::vector<double> flow(num_arcs_, 0.0);
  for (ArcId arc = 0; arc < num_arcs_; ++arc) {
    if (vars_[k][arc] >= 0) flow[arc] = solution.values[vars_[k][arc]];
  }
  return flow;
}

std::vector<DemandRouting> DemandsFromSourceFlows(
    const Topology& topology, const std::vector<Commodity>& commodities,
    const std::vector<std::vector<double>>& flows) {
  std::vector<DemandRouting> out;
  for (size_t k = 0; k < commodities.size(); ++k) {
    const Commodity& commodity = commodities[k];
    auto per_sink = DecomposeSourceFlow(topology, commodity.source, commodity.sinks, flows[k]);
    for (size_t s = 0; s < commodity.sinks.size(); ++s) {
      DemandRouting demand;
      demand.src = commodity.source;
      demand.dst = commodity.sinks[s].node;
      demand.volume = commodity.sinks[s].amount;
      double routed = 0.0;
      for (const auto& [nodes, flow] : per_sink[s]) routed += flow;
      for (const auto& [nodes, flow] : per_sink[s]) demand.paths.push_back({nodes, flow / routed});
      demand.arc_flows = ArcFlowsFromPaths(topology, demand);
      out.push_back(std::move(demand));
    }
  }
  return out;
}

}  // namespace critnet
