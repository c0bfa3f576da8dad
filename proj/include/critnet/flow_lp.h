#ifndef CRITNET_FLOW_LP_H
#define CRITNET_FLOW_LP_H

#include <vector>

#include "critnet/lp.h"
#include "critnet/netmodel.h"
#include "critnet/routing.h"

namespace critnet {

// A source-aggregated commodity: all traffic leaving `source`, delivered to
// the listed sinks.
struct Commodity {
  NodeId source = 0;
  std::vector<SourceSink> sinks;
  // Link this commodity may not use (protection routing), or -1.
  LinkId avoid_link = -1;

  double total() const;
};

// Groups the positive demands of a traffic matrix by source node.
std::vector<Commodity> CommoditiesBySource(const TrafficMatrix& tm);
std::vector<Commodity> CommoditiesBySource(int num_nodes, const std::vector<Demand>& demands);

// Per-arc flag: 1 when the arc belongs to one of `links`.
std::vector<char> ArcMask(const Topology& topology, const std::vector<LinkId>& links);

// Throws InfeasibleError naming the first sink that cannot be reached from its
// commodity's source over arcs that are not masked.
void CheckReachable(const Topology& topology, const std::vector<char>& arc_disabled,
                    const std::vector<Commodity>& commodities);

// The flow part of a multicommodity LP: one non-negative variable per
// (commodity, usable arc) plus flow conservation rows. The source node's
// conservation row is implied by the others and omitted.
//
// With a null problem nothing is added; only the variable and row counts are
// computed.
class FlowBlock {
 public:
  FlowBlock(lp::Problem* problem, const Topology& topology,
            std::vector<Commodity> commodities, const std::vector<char>& arc_disabled);

  int num_commodities() const { return static_cast<int>(commodities_.size()); }
  const Commodity& commodity(int k) const { return commodities_[k]; }

  // -1 when the arc is unusable for this commodity.
  lp::VarIndex var(int k, ArcId arc) const { return vars_[k][arc]; }

  // Adds scale * sum_k x_k(arc) to `row`.
  void AddArcLoad(lp::Problem* problem, lp::RowIndex row, ArcId arc, double scale = 1.0) const;
  // Same, restricted to one commodity.
  void AddCommodityArcLoad(lp::Problem* problem, lp::RowIndex row, int k, ArcId arc,
                           double scale = 1.0) const;

  std::vector<double> Flow(const lp::Solution& solution, int k) const;

  int conservation_rows() const { return conservation_rows_; }
  int num_variables() const { return num_variables_; }

 private:
  int num_arcs_;
  std::vector<Commodity> commodities_;
  std::vector<std::vector<lp::VarIndex>> vars_;
  int conservation_rows_ = 0;
  int num_variables_ = 0;
};

// Turns source-aggregated arc flows into per-demand routings with paths.
std::vector<DemandRouting> DemandsFromSourceFlows(
    const Topology& topology, const std::vector<Commodity>& commodities,
    const std::vector<std::vector<double>>& flows);

}  // namespace critnet

#endif  // CRITNET_FLOW_LP_H
