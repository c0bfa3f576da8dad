#include "critnet/graphenc.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "critnet/errors.h"
#include "critnet/format.h"
#include "csv_util.h"

namespace critnet {

std::string ToString(GraphNodeType type) {
  switch (type) {
    case GraphNodeType::kLink:
      return "Link";
    case GraphNodeType::kFlow:
      return "Flow";
    case GraphNodeType::kPath:
      return "Path";
    case GraphNodeType::kFailure:
      return "Failure";
  }
  return "unknown";
}

std::string ToString(GraphEdgeType type) {
  switch (type) {
    case GraphEdgeType::kLinkLink:
      return "LinkLink";
    case GraphEdgeType::kFlowPath:
      return "FlowPath";
    case GraphEdgeType::kPathLink:
      return "PathLink";
    case GraphEdgeType::kLinkFailure:
      return "LinkFailure";
  }
  return "unknown";
}

namespace {

GraphNodeType ParseNodeType(const std::string& text) {
  for (auto type : {GraphNodeType::kLink, GraphNodeType::kFlow, GraphNodeType::kPath,
                    GraphNodeType::kFailure}) {
    if (text == ToString(type)) return type;
  }
  throw ParseError("unknown node type '" + text + "'");
}

GraphEdgeType ParseEdgeType(const std::string& text) {
  for (auto type : {GraphEdgeType::kLinkLink, GraphEdgeType::kFlowPath, GraphEdgeType::kPathLink,
                    GraphEdgeType::kLinkFailure}) {
    if (text == ToString(type)) return type;
  }
  throw ParseError("unknown edge type '" + text + "'");
}

// Node types an edge of the given type connects.
std::pair<GraphNodeType, GraphNodeType> Endpoints(GraphEdgeType type) {
  switch (type) {
    case GraphEdgeType::kLinkLink:
      return {GraphNodeType::kLink, GraphNodeType::kLink};
    case GraphEdgeType::kFlowPath:
      return {GraphNodeType::kFlow, GraphNodeType::kPath};
    case GraphEdgeType::kPathLink:
      return {GraphNodeType::kPath, GraphNodeType::kLink};
    case GraphEdgeType::kLinkFailure:
      return {GraphNodeType::kLink, GraphNodeType::kFailure};
  }
  return {GraphNodeType::kLink, GraphNodeType::kLink};
}

int AddNode(InputGraph& graph, GraphNodeType type) {
  GraphNode node;
  node.id = static_cast<int>(graph.nodes.size());
  node.type = type;
  node.feat[kTypeSlot + static_cast<int>(type)] = 1.0;
  graph.nodes.push_back(node);
  return node.id;
}

double SafeRatio(double value, double max) { return max > 0 ? value / max : 0.0; }

}  // namespace

int InputGraph::CountNodes(GraphNodeType type) const {
  return static_cast<int>(std::count_if(nodes.begin(), nodes.end(),
                                        [type](const GraphNode& n) { return n.type == type; }));
}

int InputGraph::CountEdges(GraphEdgeType type) const {
  return static_cast<int>(std::count_if(edges.begin(), edges.end(),
                                        [type](const GraphEdge& e) { return e.type == type; }));
}

InputGraph BuildInputGraph(const NetworkInstance& instance, const RoutingDecision& decision,
                           const std::vector<FailureScenario>& scenarios) {
  const Topology& topology = instance.topology;
  if (!decision.decomposed()) {
    throw ValidationError("input graph construction needs a path-decomposed routing");
  }
  InputGraph graph;
  for (LinkId l = 0; l < topology.num_links(); ++l) AddNode(graph, GraphNodeType::kLink);

  // Two links are adjacent when they share an endpoint.
  std::set<std::pair<int, int>> adjacent;
  for (NodeId v = 0; v < topology.num_nodes(); ++v) {
    const auto& arcs = topology.out_arcs(v);
    for (size_t i = 0; i < arcs.size(); ++i) {
      for (size_t j = 0; j < arcs.size(); ++j) {
        if (i != j) adjacent.insert({LinkOfArc(arcs[i]), LinkOfArc(arcs[j])});
      }
    }
  }
  for (const auto& [a, b] : adjacent) graph.edges.push_back({a, b, GraphEdgeType::kLinkLink});

  std::vector<int> flow_ids;
  for (const DemandRouting& demand : decision.demands) {
    if (demand.volume <= 0) continue;
    flow_ids.push_back(AddNode(graph, GraphNodeType::kFlow));
  }
  size_t flow = 0;
  for (const DemandRouting& demand : decision.demands) {
    if (demand.volume <= 0) continue;
    for (const PathFlow& path : demand.paths) {
      int path_id = AddNode(graph, GraphNodeType::kPath);
      graph.edges.push_back({flow_ids[flow], path_id, GraphEdgeType::kFlowPath});
      for (size_t i = 0; i + 1 < path.nodes.size(); ++i) {
        std::optional<LinkId> link = topology.FindLink(path.nodes[i], path.nodes[i + 1]);
        if (!link) throw ValidationError("path uses a missing link");
        graph.edges.push_back({path_id, *link, GraphEdgeType::kPathLink});
      }
    }
    ++flow;
  }

  for (const FailureScenario& scenario : scenarios) {
    int fid = AddNode(graph, GraphNodeType::kFailure);
    for (LinkId l : scenario.links) {
      if (l < 0 || l >= topology.num_links()) {
        throw ValidationError("scenario " + std::to_string(scenario.id) + " names unknown link");
      }
      graph.edges.push_back({l, fid, GraphEdgeType::kLinkFailure});
    }
    graph.scenarios.push_back({fid, scenario.id, scenario.links});
  }
  return graph;
}

void EncodeFeatures(const NetworkInstance& instance, const RoutingDecision& decision,
                    InputGraph* graph) {
  const Topology& topology = instance.topology;
  LinkLoadProfile loads = ComputeLoads(topology, decision);
  double max_util = 0.0;
  double max_capacity = 0.0;
  double max_volume = 0.0;
  for (LinkId l = 0; l < topology.num_links(); ++l) {
    max_util = std::max(max_util, loads.link_utilization[l]);
    max_capacity = std::max(max_capacity, topology.link(l).capacity);
    max_volume = std::max(max_volume, loads.link_load[l]);
  }
  double max_demand = 0.0;
  for (const DemandRouting& d : decision.demands) max_demand = std::max(max_demand, d.volume);

  for (LinkId l = 0; l < topology.num_links(); ++l) {
    Features& feat = graph->nodes[l].feat;
    feat[0] = SafeRatio(loads.link_utilization[l], max_util);
    feat[1] = SafeRatio(topology.link(l).capacity, max_capacity);
    feat[2] = SafeRatio(loads.link_load[l], max_volume);
  }
  // Flow and Path nodes were created in decision order.
  size_t next = topology.num_links();
  for (const DemandRouting& d : decision.demands) {
    if (d.volume <= 0) continue;
    graph->nodes[next++].feat[0] = SafeRatio(d.volume, max_demand);
  }
  for (const DemandRouting& d : decision.demands) {
    if (d.volume <= 0) continue;
    for (const PathFlow& path : d.paths) graph->nodes[next++].feat[0] = path.ratio;
  }
}

InputGraph EncodeInstance(const NetworkInstance& instance, const RoutingDecision& decision,
                          const std::vector<FailureScenario>& scenarios) {
  InputGraph graph = BuildInputGraph(instance, decision, scenarios);
  EncodeFeatures(instance, decision, &graph);
  return graph;
}

nlohmann::json GraphToJson(const InputGraph& graph) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const GraphNode& n : graph.nodes) {
    nodes.push_back({{"id", n.id}, {"type", ToString(n.type)}, {"feat", n.feat}});
  }
  nlohmann::json edges = nlohmann::json::array();
  for (const GraphEdge& e : graph.edges) {
    edges.push_back({{"s", e.s}, {"d", e.d}, {"etype", ToString(e.type)}});
  }
  nlohmann::json scenarios = nlohmann::json::array();
  for (const GraphScenario& s : graph.scenarios) {
    scenarios.push_back({{"fid", s.fid}, {"scenario_id", s.scenario_id}, {"links", s.links}});
  }
  return {{"nodes", nodes}, {"edges", edges}, {"scenarios", scenarios}};
}

InputGraph GraphFromJson(const nlohmann::json& json) {
  InputGraph graph;
  try {
    for (const auto& n : json.at("nodes")) {
      GraphNode node;
      node.id = n.at("id").get<int>();
      node.type = ParseNodeType(n.at("type").get<std::string>());
      std::vector<double> feat = n.at("feat").get<std::vector<double>>();
      if (feat.size() != kFeatureWidth) {
        throw ParseError("node " + std::to_string(node.id) + " has " +
                         std::to_string(feat.size()) + " features, expected " +
                         std::to_string(kFeatureWidth));
      }
      std::copy(feat.begin(), feat.end(), node.feat.begin());
      graph.nodes.push_back(node);
    }
    for (const auto& e : json.at("edges")) {
      graph.edges.push_back(
          {e.at("s").get<int>(), e.at("d").get<int>(), ParseEdgeType(e.at("etype").get<std::string>())});
    }
    for (const auto& s : json.at("scenarios")) {
      graph.scenarios.push_back({s.at("fid").get<int>(), s.at("scenario_id").get<int>(),
                                 s.at("links").get<std::vector<LinkId>>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("graph JSON: ") + e.what());
  }

  const int n = static_cast<int>(graph.nodes.size());
  for (int i = 0; i < n; ++i) {
    if (graph.nodes[i].id != i) {
      throw ParseError("graph JSON: node ids must be 0..n-1 in order (found " +
                       std::to_string(graph.nodes[i].id) + " at position " + std::to_string(i) +
                       ")");
    }
  }
  for (const GraphEdge& e : graph.edges) {
    if (e.s < 0 || e.s >= n || e.d < 0 || e.d >= n) {
      throw ParseError("graph JSON: edge endpoint out of range");
    }
    auto [from, to] = Endpoints(e.type);
    if (graph.nodes[e.s].type != from || graph.nodes[e.d].type != to) {
      throw ParseError("graph JSON: " + ToString(e.type) + " edge " + std::to_string(e.s) + "->" +
                       std::to_string(e.d) + " joins the wrong node types");
    }
  }
  for (const GraphScenario& s : graph.scenarios) {
    if (s.fid < 0 || s.fid >= n || graph.nodes[s.fid].type != GraphNodeType::kFailure) {
      throw ParseError("graph JSON: scenario " + std::to_string(s.scenario_id) +
                       " does not point at a failure node");
    }
  }
  return graph;
}

void SaveGraph(const InputGraph& graph, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << GraphToJson(graph).dump() << '\n';
}

InputGraph LoadGraph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open graph file '" + path + "'");
  nlohmann::json json;
  try {
    json = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("graph JSON: ") + e.what());
  }
  return GraphFromJson(json);
}

std::vector<Prediction> ReadPredictionsCsv(std::istream& in) {
  std::vector<Prediction> predictions;
  std::set<int> seen;
  std::string line;
  int line_number = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_number;
    if (internal::IsBlank(line)) continue;
    std::vector<std::string> fields = internal::SplitCsvLine(line);
    if (!header_seen && !fields.empty() && fields[0] == "scenario_id") {
      header_seen = true;
      continue;
    }
    header_seen = true;
    if (fields.size() != 3) throw ParseError("expected 3 fields", line_number);
    Prediction p;
    double id = 0;
    if (!ParseDouble(fields[0], &id) || id != std::floor(id) || id < 0) {
      throw ParseError("bad scenario id '" + fields[0] + "'", line_number);
    }
    p.scenario_id = static_cast<int>(id);
    if (!ParseDouble(fields[1], &p.impact_pred) || !std::isfinite(p.impact_pred) ||
        p.impact_pred < 0) {
      throw ParseError("impact_pred must be a finite non-negative number", line_number);
    }
    if (!ParseDouble(fields[2], &p.critical_prob) || !(p.critical_prob >= 0) ||
        !(p.critical_prob <= 1)) {
      throw ParseError("critical_prob must lie in [0, 1]", line_number);
    }
    if (!seen.insert(p.scenario_id).second) {
      throw ParseError("duplicate prediction for scenario " + std::to_string(p.scenario_id),
                       line_number);
    }
    predictions.push_back(p);
  }
  return predictions;
}

std::vector<Prediction> LoadPredictions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open predictions file '" + path + "'");
  return ReadPredictionsCsv(in);
}

void WritePredictionsCsv(const std::vector<Prediction>& predictions, std::ostream& out) {
  out << "scenario_id,impact_pred,critical_prob\n";
  for (const Prediction& p : predictions) {
    out << p.scenario_id << ',' << FormatDouble(p.impact_pred) << ','
        << FormatDouble(p.critical_prob) << '\n';
  }
}

void SavePredictions(const std::vector<Prediction>& predictions, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  WritePredictionsCsv(predictions, out);
}

std::vector<Prediction> MatchPredictions(const std::vector<Prediction>& predictions,
                                         const std::vector<FailureScenario>& scenarios) {
  std::map<int, Prediction> by_id;
  for (const Prediction& p : predictions) by_id[p.scenario_id] = p;
  std::set<int> known;
  std::vector<Prediction> out;
  for (const FailureScenario& s : scenarios) {
    auto it = by_id.find(s.id);
    if (it == by_id.end()) {
      throw ValidationError("no prediction for scenario " + std::to_string(s.id));
    }
    known.insert(s.id);
    out.push_back(it->second);
  }
  for (const Prediction& p : predictions) {
    if (!known.count(p.scenario_id)) {
      throw ValidationError("prediction for unknown scenario " + std::to_string(p.scenario_id));
    }
  }
  return out;
}

}  // namespace critnet
