#ifndef CRITNET_GRAPHENC_H
#define CRITNET_GRAPHENC_H

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "critnet/failure.h"
#include "critnet/netmodel.h"
#include "critnet/routing.h"
#include "json.hpp"

namespace critnet {

enum class GraphNodeType { kLink, kFlow, kPath, kFailure };
enum class GraphEdgeType { kLinkLink, kFlowPath, kPathLink, kLinkFailure };

std::string ToString(GraphNodeType type);
std::string ToString(GraphEdgeType type);

inline constexpr int kFeatureWidth = 16;
// The node type is one-hot encoded in the last four slots, in enum order.
inline constexpr int kTypeSlot = 12;

// Slot layout of the populated features.
//   Link:    [0] utilization / max, [1] capacity / max, [2] traversed volume / max
//   Flow:    [0] demand / max
//   Path:    [0] split ratio
//   Failure: no populated slots
using Features = std::array<double, kFeatureWidth>;

struct GraphNode {
  int id = 0;
  GraphNodeType type = GraphNodeType::kLink;
  Features feat{};
};

struct GraphEdge {
  int s = 0;
  int d = 0;
  GraphEdgeType type = GraphEdgeType::kLinkLink;

  bool operator==(const GraphEdge&) const = default;
};

struct GraphScenario {
  int fid = 0;  // id of the Failure node
  int scenario_id = 0;
  std::vector<LinkId> links;

  bool operator==(const GraphScenario&) const = default;
};

// Heterogeneous graph: Link nodes (ids 0..|E|-1, node id = link id), then one
// Flow node per demand, one Path node per path and one Failure node per
// scenario. LinkLink edges appear in both directions; the other edge types run
// Flow -> Path -> Link -> Failure.
struct InputGraph {
  std::vector<GraphNode> nodes;
  std::vector<GraphEdge> edges;
  std::vector<GraphScenario> scenarios;

  int CountNodes(GraphNodeType type) const;
  int CountEdges(GraphEdgeType type) const;
};

// Structure only; features carry just the type one-hot. Throws
// ValidationError when the decision is not path-decomposed.
InputGraph BuildInputGraph(const NetworkInstance& instance, const RoutingDecision& decision,
                           const std::vector<FailureScenario>& scenarios);

// Fills the populated slots from the decision's loads. A normalizer of zero
// leaves its slot at zero.
void EncodeFeatures(const NetworkInstance& instance, const RoutingDecision& decision,
                    InputGraph* graph);

// BuildInputGraph followed by EncodeFeatures.
InputGraph EncodeInstance(const NetworkInstance& instance, const RoutingDecision& decision,
                          const std::vector<FailureScenario>& scenarios);

nlohmann::json GraphToJson(const InputGraph& graph);
// Throws ParseError on schema violations.
InputGraph GraphFromJson(const nlohmann::json& json);
void SaveGraph(const InputGraph& graph, const std::string& path);
InputGraph LoadGraph(const std::string& path);

// Predictions CSV: header scenario_id,impact_pred,critical_prob.
std::vector<Prediction> ReadPredictionsCsv(std::istream& in);
std::vector<Prediction> LoadPredictions(const std::string& path);
void WritePredictionsCsv(const std::vector<Prediction>& predictions, std::ostream& out);
void SavePredictions(const std::vector<Prediction>& predictions, const std::string& path);

// The predictions for the given scenarios, in scenario order. Throws
// ValidationError naming the first scenario id without a prediction.
std::vector<Prediction> MatchPredictions(const std::vector<Prediction>& predictions,
                                         const std::vector<FailureScenario>& scenarios);

}  // namespace critnet

#endif  // CRITNET_GRAPHENC_H
