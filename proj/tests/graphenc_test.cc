#include "critnet/graphenc.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "critnet/errors.h"
#include "gtest/gtest.h"
#include "support/oracles.h"

namespace critnet {
namespace {

NetworkInstance TriangleInstance(double volume) {
  Topology t(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
  return NetworkInstance(t, TrafficMatrix::FromDemands(3, {{0, 1, volume}}));
}

NetworkInstance RandomInstance(int nodes, uint64_t seed) {
  Topology t = AssignRandomCapacities(GenerateRandomTopology(nodes, {}, seed), 1.0, seed);
  return NetworkInstance(t, GenerateGravityTm(t, 1.0, seed));
}

TEST(BuildGraphTest, TriangleCounts) {
  NetworkInstance instance = TriangleInstance(0.6);
  RoutingResult base = SolveMcfMinMlu(instance);
  InputGraph g = EncodeInstance(instance, base.decision, EnumerateFailures(instance.topology, 1));
  EXPECT_EQ(g.nodes.size(), 9u);
  EXPECT_EQ(g.CountNodes(GraphNodeType::kLink), 3);
  EXPECT_EQ(g.CountNodes(GraphNodeType::kFlow), 1);
  EXPECT_EQ(g.CountNodes(GraphNodeType::kPath), 2);
  EXPECT_EQ(g.CountNodes(GraphNodeType::kFailure), 3);
  // Three undirected adjacencies, stored in both directions.
  EXPECT_EQ(g.CountEdges(GraphEdgeType::kLinkLink), 6);
  EXPECT_EQ(g.CountEdges(GraphEdgeType::kFlowPath), 2);
  EXPECT_EQ(g.CountEdges(GraphEdgeType::kPathLink), 3);
  EXPECT_EQ(g.CountEdges(GraphEdgeType::kLinkFailure), 3);
  // Every link carries 0.3.
  for (int l = 0; l < 3; ++l) EXPECT_DOUBLE_EQ(g.nodes[l].feat[0], 1.0);
}

TEST(BuildGraphTest, NoScenarios) {
  NetworkInstance instance = TriangleInstance(0.6);
  RoutingResult base = SolveMcfMinMlu(instance);
  InputGraph g = EncodeInstance(instance, base.decision, {});
  EXPECT_EQ(g.CountNodes(GraphNodeType::kFailure), 0);
  EXPECT_TRUE(g.scenarios.empty());
  EXPECT_NO_THROW(GraphFromJson(GraphToJson(g)));
}

TEST(BuildGraphTest, OspfHasOnePathPerDemandWithoutTies) {
  NetworkInstance instance = TriangleInstance(0.6);
  RoutingResult base = SolveOspf(instance);
  InputGraph g = EncodeInstance(instance, base.decision, {});
  EXPECT_EQ(g.CountNodes(GraphNodeType::kPath), g.CountNodes(GraphNodeType::kFlow));
}

TEST(BuildGraphTest, RequiresDecomposedDecision) {
  NetworkInstance instance = TriangleInstance(0.6);
  RoutingResult base = SolveMcfMinMlu(instance);
  base.decision.demands[0].paths.clear();
  EXPECT_THROW(BuildInputGraph(instance, base.decision, {}), ValidationError);
}

// Structural rules on random instances.
class GraphRulesTest : public ::testing::TestWithParam<int> {};

TEST_P(GraphRulesTest, ConstructionRules) {
  NetworkInstance instance = RandomInstance(8, GetParam());
  const Topology& t = instance.topology;
  RoutingResult base = SolveMcfMinMlu(instance);
  std::vector<FailureScenario> scenarios = EnumerateFailures(t, 2);
  InputGraph g = EncodeInstance(instance, base.decision, scenarios);

  int paths = 0;
  for (const DemandRouting& d : base.decision.demands) paths += d.paths.size();
  EXPECT_EQ(g.CountNodes(GraphNodeType::kLink), t.num_links());
  EXPECT_EQ(g.CountNodes(GraphNodeType::kFlow), static_cast<int>(instance.tm.demands().size()));
  EXPECT_EQ(g.CountNodes(GraphNodeType::kPath), paths);
  EXPECT_EQ(g.CountNodes(GraphNodeType::kFailure), static_cast<int>(scenarios.size()));

  // LinkLink iff the links share an endpoint.
  std::set<std::pair<int, int>> link_link;
  std::map<int, std::set<int>> failure_in;
  for (const GraphEdge& e : g.edges) {
    if (e.type == GraphEdgeType::kLinkLink) link_link.insert({e.s, e.d});
    if (e.type == GraphEdgeType::kLinkFailure) failure_in[e.d].insert(e.s);
  }
  for (LinkId a = 0; a < t.num_links(); ++a) {
    for (LinkId b = 0; b < t.num_links(); ++b) {
      const Link& x = t.link(a);
      const Link& y = t.link(b);
      bool share = a != b && (x.u == y.u || x.u == y.v || x.v == y.u || x.v == y.v);
      EXPECT_EQ(link_link.count({a, b}) == 1, share) << a << " " << b;
    }
  }
  for (const GraphScenario& s : g.scenarios) {
    EXPECT_EQ(g.nodes[s.fid].type, GraphNodeType::kFailure);
    std::set<int> expected(s.links.begin(), s.links.end());
    EXPECT_EQ(failure_in[s.fid], expected);
  }

  // Features: width 16, normalized into [0, 1], one-hot type.
  bool saw_max_util = false;
  for (const GraphNode& n : g.nodes) {
    for (double f : n.feat) {
      EXPECT_GE(f, 0.0);
      EXPECT_LE(f, 1.0);
    }
    for (int k = 0; k < 4; ++k) {
      EXPECT_EQ(n.feat[kTypeSlot + k], k == static_cast<int>(n.type) ? 1.0 : 0.0);
    }
    if (n.type == GraphNodeType::kLink && n.feat[0] == 1.0) saw_max_util = true;
  }
  EXPECT_TRUE(saw_max_util);
}

INSTANTIATE_TEST_SUITE_P(Seeds, GraphRulesTest, ::testing::Range(1, 6));

TEST(EncodeFeaturesTest, UniformCapacities) {
  Topology t = GenerateRandomTopology(6, {}, 2);
  NetworkInstance instance(t, GenerateGravityTm(t, 1.0, 2));
  InputGraph g = EncodeInstance(instance, SolveMcfMinMlu(instance).decision, {});
  for (const GraphNode& n : g.nodes) {
    if (n.type == GraphNodeType::kLink) EXPECT_EQ(n.feat[1], 1.0);
  }
}

TEST(EncodeFeaturesTest, ZeroTrafficLeavesSlotsZero) {
  Topology t(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
  NetworkInstance instance(t, TrafficMatrix(3));
  InputGraph g = EncodeInstance(instance, SolveMcfMinMlu(instance).decision, {});
  for (const GraphNode& n : g.nodes) {
    EXPECT_EQ(n.feat[0], 0.0);
    EXPECT_EQ(n.feat[2], 0.0);
  }
}

// Relabelling the nodes of the topology yields an isomorphic input graph.
Topology Relabel(const Topology& t, const std::vector<NodeId>& perm) {
  std::vector<Link> links;
  for (const Link& l : t.links()) links.push_back({perm[l.u], perm[l.v], l.capacity});
  std::reverse(links.begin(), links.end());
  return Topology(t.num_nodes(), links);
}

TEST(IsomorphismTest, RelabelledInstanceHashesEqual) {
  NetworkInstance instance = RandomInstance(8, 9);
  const Topology& t = instance.topology;
  std::vector<NodeId> perm(t.num_nodes());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), std::mt19937(3));
  std::vector<Demand> demands;
  for (const Demand& d : instance.tm.demands()) demands.push_back({perm[d.src], perm[d.dst], d.volume});
  NetworkInstance relabelled(Relabel(t, perm), TrafficMatrix::FromDemands(t.num_nodes(), demands));

  // OSPF with even ECMP splits is label independent; MCF optima are not unique.
  InputGraph a = EncodeInstance(instance, SolveOspf(instance).decision, EnumerateFailures(t, 1));
  InputGraph b = EncodeInstance(relabelled, SolveOspf(relabelled).decision,
                                EnumerateFailures(relabelled.topology, 1));
  EXPECT_EQ(testing::WlHash(a), testing::WlHash(b));

  NetworkInstance heavier(t, instance.tm.Scaled(1.0));
  heavier.tm.Set(0, 1, heavier.tm.at(0, 1) + 5.0);
  InputGraph c = EncodeInstance(heavier, SolveOspf(heavier).decision, EnumerateFailures(t, 1));
  EXPECT_NE(testing::WlHash(a), testing::WlHash(c));
}

TEST(GraphJsonTest, RoundTripAndSchema) {
  NetworkInstance instance = RandomInstance(6, 4);
  InputGraph g = EncodeInstance(instance, SolveMcfMinMlu(instance).decision,
                                EnumerateFailures(instance.topology, 2));
  nlohmann::json json = GraphToJson(g);
  EXPECT_EQ(json.at("nodes").at(0).at("type"), "Link");
  EXPECT_EQ(json.at("nodes").at(0).at("feat").size(), 16u);
  EXPECT_EQ(json.at("edges").at(0).at("etype"), "LinkLink");
  ASSERT_TRUE(json.at("scenarios").at(0).contains("fid"));

  InputGraph back = GraphFromJson(nlohmann::json::parse(json.dump()));
  ASSERT_EQ(back.nodes.size(), g.nodes.size());
  for (size_t i = 0; i < g.nodes.size(); ++i) {
    EXPECT_EQ(back.nodes[i].type, g.nodes[i].type);
    EXPECT_EQ(back.nodes[i].feat, g.nodes[i].feat);
  }
  EXPECT_EQ(back.edges, g.edges);
  EXPECT_EQ(back.scenarios, g.scenarios);
}

TEST(GraphJsonTest, SchemaViolations) {
  NetworkInstance instance = TriangleInstance(0.6);
  InputGraph g = EncodeInstance(instance, SolveMcfMinMlu(instance).decision,
                                EnumerateFailures(instance.topology, 1));
  nlohmann::json good = GraphToJson(g);

  nlohmann::json short_feat = good;
  short_feat["nodes"][0]["feat"].erase(0);
  EXPECT_THROW(GraphFromJson(short_feat), ParseError);

  nlohmann::json bad_type = good;
  bad_type["nodes"][0]["type"] = "Router";
  EXPECT_THROW(GraphFromJson(bad_type), ParseError);

  nlohmann::json dangling = good;
  dangling["edges"][0]["d"] = 99;
  EXPECT_THROW(GraphFromJson(dangling), ParseError);

  nlohmann::json wrong_fid = good;
  wrong_fid["scenarios"][0]["fid"] = 0;  // a Link node
  EXPECT_THROW(GraphFromJson(wrong_fid), ParseError);

  EXPECT_THROW(GraphFromJson(nlohmann::json::array()), ParseError);
}

TEST(PredictionsTest, ParseRow) {
  std::istringstream in("scenario_id,impact_pred,critical_prob\n7,1.83,0.99\n");
  std::vector<Prediction> p = ReadPredictionsCsv(in);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0].scenario_id, 7);
  EXPECT_DOUBLE_EQ(p[0].impact_pred, 1.83);
  EXPECT_DOUBLE_EQ(p[0].critical_prob, 0.99);
}

TEST(PredictionsTest, RoundTripAndEmpty) {
  std::vector<Prediction> p = {{0, 1.5, 0.25}, {3, 2.0, 1.0}};
  std::ostringstream out;
  WritePredictionsCsv(p, out);
  std::istringstream in(out.str());
  std::vector<Prediction> back = ReadPredictionsCsv(in);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].scenario_id, 3);
  EXPECT_EQ(back[1].impact_pred, 2.0);

  std::istringstream header_only("scenario_id,impact_pred,critical_prob\n");
  EXPECT_TRUE(ReadPredictionsCsv(header_only).empty());
}

TEST(PredictionsTest, Errors) {
  std::istringstream prob("1,1.0,1.5\n");
  EXPECT_THROW(ReadPredictionsCsv(prob), ParseError);
  std::istringstream negative("1,-0.5,0.5\n");
  EXPECT_THROW(ReadPredictionsCsv(negative), ParseError);
  std::istringstream duplicate("1,1,0.5\n1,2,0.5\n");
  EXPECT_THROW(ReadPredictionsCsv(duplicate), ParseError);
  std::istringstream fields("1,1\n");
  EXPECT_THROW(ReadPredictionsCsv(fields), ParseError);
}

TEST(PredictionsTest, MatchNamesMissingScenario) {
  std::vector<FailureScenario> scenarios = {{0, {0}}, {1, {1}}, {2, {2}}};
  std::vector<Prediction> preds = {{0, 1.0, 0.1}, {2, 1.0, 0.1}};
  try {
    MatchPredictions(preds, scenarios);
    FAIL() << "expected an error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("scenario 1"), std::string::npos) << e.what();
  }
  std::vector<Prediction> extra = {{0, 1, 0}, {1, 1, 0}, {2, 1, 0}, {9, 1, 0}};
  EXPECT_THROW(MatchPredictions(extra, scenarios), ValidationError);
  std::vector<Prediction> shuffled = {{2, 3, 0}, {0, 1, 0}, {1, 2, 0}};
  std::vector<Prediction> matched = MatchPredictions(shuffled, scenarios);
  EXPECT_EQ(matched[1].impact_pred, 2);
}

}  // namespace
}  // namespace critnet
