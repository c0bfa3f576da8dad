#include "critnet/routing.h"

#include <cmath>

#include "critnet/errors.h"
#include "gtest/gtest.h"
#include "support/oracles.h"

namespace critnet {
namespace {

NetworkInstance TriangleInstance(double volume) {
  Topology t(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
  return NetworkInstance(t, TrafficMatrix::FromDemands(3, {{0, 1, volume}}));
}

// Conservation and non-negativity of every demand's arc flows.
void ExpectValidDecision(const Topology& t, const RoutingDecision& decision) {
  for (const DemandRouting& d : decision.demands) {
    std::vector<double> net(t.num_nodes(), 0.0);
    for (const ArcFlow& af : d.arc_flows) {
      EXPECT_GE(af.flow, -1e-9);
      net[t.arc_tail(af.arc)] += af.flow;
      net[t.arc_head(af.arc)] -= af.flow;
    }
    for (NodeId v = 0; v < t.num_nodes(); ++v) {
      double expect = v == d.src ? d.volume : v == d.dst ? -d.volume : 0.0;
      EXPECT_NEAR(net[v], expect, 1e-6);
    }
    double ratios = 0.0;
    for (const PathFlow& p : d.paths) {
      ratios += p.ratio;
      EXPECT_EQ(p.nodes.front(), d.src);
      EXPECT_EQ(p.nodes.back(), d.dst);
    }
    if (d.volume > 0) EXPECT_NEAR(ratios, 1.0, 1e-6);
  }
}

TEST(McfTest, TriangleSplitsEvenly) {
  NetworkInstance instance = TriangleInstance(0.6);
  RoutingResult r = SolveMcfMinMlu(instance);
  EXPECT_NEAR(r.mlu, 0.3, 1e-9);
  ASSERT_EQ(r.decision.demands.size(), 1u);
  const DemandRouting& d = r.decision.demands[0];
  ASSERT_EQ(d.paths.size(), 2u);
  EXPECT_NEAR(d.paths[0].ratio, 0.5, 1e-9);
  EXPECT_NEAR(d.paths[1].ratio, 0.5, 1e-9);
  LinkLoadProfile loads = ComputeLoads(instance.topology, r.decision);
  for (double u : loads.link_utilization) EXPECT_NEAR(u, 0.3, 1e-9);
  ExpectValidDecision(instance.topology, r.decision);
}

TEST(McfTest, TriangleWithFailedLink) {
  RoutingResult r = SolveMcfMinMlu(TriangleInstance(0.6), {0});
  EXPECT_NEAR(r.mlu, 0.6, 1e-9);
  ASSERT_EQ(r.decision.demands[0].paths.size(), 1u);
  EXPECT_EQ(r.decision.demands[0].paths[0].nodes, (std::vector<NodeId>{0, 2, 1}));
}

TEST(McfTest, ZeroDemand) {
  Topology t(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
  RoutingResult r = SolveMcfMinMlu(NetworkInstance(t, TrafficMatrix(3)));
  EXPECT_EQ(r.mlu, 0.0);
  EXPECT_TRUE(r.decision.demands.empty());
}

TEST(McfTest, DisconnectedDemandNamesPair) {
  try {
    SolveMcfMinMlu(TriangleInstance(0.6), {0, 1});
    FAIL() << "expected infeasibility";
  } catch (const InfeasibleError& e) {
    std::string what = e.what();
    EXPECT_NE(what.find('0'), std::string::npos);
    EXPECT_NE(what.find('1'), std::string::npos);
  }
}

// The source-aggregated LP against a per-demand LP solved by the dense oracle.
class McfOracleTest : public ::testing::TestWithParam<int> {};

TEST_P(McfOracleTest, MatchesBruteForce) {
  const int seed = GetParam();
  Topology t = GenerateRandomTopology(4 + seed % 4, {}, seed);
  t = AssignRandomCapacities(t, 1.0, seed);
  NetworkInstance instance(t, GenerateGravityTm(t, 1.0, seed));
  RoutingResult r = SolveMcfMinMlu(instance);
  auto exact = testing::BruteForceMcfMlu(t, instance.tm);
  ASSERT_TRUE(exact.has_value());
  EXPECT_NEAR(r.mlu, *exact, 1e-7);
  EXPECT_NEAR(ComputeLoads(t, r.decision).mlu, r.mlu, 1e-9);
  ExpectValidDecision(t, r.decision);
}

INSTANTIATE_TEST_SUITE_P(Seeds, McfOracleTest, ::testing::Range(1, 21));

TEST(OspfTest, TriangleUsesDirectLink) {
  NetworkInstance instance = TriangleInstance(0.6);
  RoutingResult r = SolveOspf(instance);
  EXPECT_NEAR(r.mlu, 0.6, 1e-12);
  ASSERT_EQ(r.decision.demands[0].paths.size(), 1u);
  EXPECT_EQ(r.decision.demands[0].paths[0].ratio, 1.0);
  LinkLoadProfile loads = ComputeLoads(instance.topology, r.decision);
  EXPECT_EQ(loads.link_utilization, (std::vector<double>{0.6, 0.0, 0.0}));
}

TEST(OspfTest, TriangleReroutes) {
  RoutingResult r = SolveOspf(TriangleInstance(0.6), {0});
  EXPECT_NEAR(r.mlu, 0.6, 1e-12);
  EXPECT_EQ(r.decision.demands[0].paths[0].nodes, (std::vector<NodeId>{0, 2, 1}));
}

TEST(OspfTest, EcmpSplitsOnFourCycle) {
  Topology t(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {0, 3, 1}});
  NetworkInstance instance(t, TrafficMatrix::FromDemands(4, {{0, 2, 1.0}}));
  RoutingResult r = SolveOspf(instance);
  ASSERT_EQ(r.decision.demands[0].paths.size(), 2u);
  EXPECT_DOUBLE_EQ(r.decision.demands[0].paths[0].ratio, 0.5);
  EXPECT_DOUBLE_EQ(r.decision.demands[0].paths[1].ratio, 0.5);
  EXPECT_DOUBLE_EQ(r.mlu, 0.5);
}

TEST(OspfTest, WeightsAreInverseCapacity) {
  // Direct link of capacity 0.25 has weight 4; the two-hop detour costs 2.
  Topology t(3, {{0, 1, 0.25}, {1, 2, 1}, {0, 2, 1}});
  NetworkInstance instance(t, TrafficMatrix::FromDemands(3, {{0, 1, 0.5}}));
  RoutingResult r = SolveOspf(instance);
  EXPECT_EQ(r.decision.demands[0].paths[0].nodes, (std::vector<NodeId>{0, 2, 1}));
}

TEST(OspfTest, PerHopSplitting) {
  // Two shortest paths 0-1-3 and 0-2-3; node 4 is off every shortest path.
  Topology t(5, {{0, 1, 1}, {0, 2, 1}, {1, 3, 1}, {2, 3, 1}, {2, 4, 1}, {1, 4, 1}});
  NetworkInstance instance(t, TrafficMatrix::FromDemands(5, {{0, 3, 1.0}}));
  RoutingResult r = SolveOspf(instance);
  double total = 0.0;
  for (const PathFlow& p : r.decision.demands[0].paths) {
    EXPECT_EQ(p.nodes.size(), 3u);
    total += p.ratio;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  ExpectValidDecision(t, r.decision);
}

TEST(DecomposeTest, RemovesCycles) {
  Topology t(4, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {1, 3, 1}});
  RoutingDecision decision;
  DemandRouting d;
  d.src = 0;
  d.dst = 1;
  d.volume = 1.0;
  // 0 -> 1 carries the demand; 1 -> 3 -> 1 is a pure cycle.
  d.arc_flows = {{*t.FindArc(0, 1), 1.0}, {*t.FindArc(1, 3), 0.4}, {*t.FindArc(3, 1), 0.4}};
  std::sort(d.arc_flows.begin(), d.arc_flows.end(),
            [](const ArcFlow& a, const ArcFlow& b) { return a.arc < b.arc; });
  decision.demands.push_back(d);
  RoutingDecision out = DecomposeToPaths(t, decision);
  ASSERT_EQ(out.demands[0].paths.size(), 1u);
  EXPECT_EQ(out.demands[0].paths[0].nodes, (std::vector<NodeId>{0, 1}));
  EXPECT_NEAR(out.demands[0].paths[0].ratio, 1.0, 1e-12);
}

TEST(DecomposeTest, ConservationViolation) {
  Topology t(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}});
  RoutingDecision decision;
  DemandRouting d;
  d.src = 0;
  d.dst = 1;
  d.volume = 1.0;
  d.arc_flows = {{*t.FindArc(0, 1), 0.5}};
  decision.demands.push_back(d);
  EXPECT_THROW(DecomposeToPaths(t, decision), ValidationError);
}

TEST(LoadsTest, EmptyDecision) {
  Topology t(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}});
  LinkLoadProfile loads = ComputeLoads(t, RoutingDecision{});
  EXPECT_EQ(loads.mlu, 0.0);
  EXPECT_EQ(loads.link_load, (std::vector<double>{0, 0, 0}));
}

TEST(LoadsTest, LinkLoadSumsDirections) {
  Topology t(2, {{0, 1, 2.0}});
  NetworkInstance instance(t, TrafficMatrix::FromDemands(2, {{0, 1, 1.0}, {1, 0, 0.5}}));
  RoutingResult r = SolveOspf(instance);
  LinkLoadProfile loads = ComputeLoads(t, r.decision);
  EXPECT_DOUBLE_EQ(loads.link_load[0], 1.5);
  EXPECT_DOUBLE_EQ(loads.link_utilization[0], 0.5);
  EXPECT_DOUBLE_EQ(loads.arc_utilization[ReverseArc(0)], 0.25);
}

TEST(RoutingJsonTest, RoundTrip) {
  Topology t = GenerateRandomTopology(7, {}, 5);
  NetworkInstance instance(t, GenerateGravityTm(t, 2.0, 5));
  RoutingResult r = SolveMcfMinMlu(instance);
  RoutingDecision back = RoutingFromJson(t, RoutingToJson(r.decision));
  ASSERT_EQ(back.demands.size(), r.decision.demands.size());
  for (size_t i = 0; i < back.demands.size(); ++i) {
    EXPECT_EQ(back.demands[i].paths, r.decision.demands[i].paths);
  }
  EXPECT_NEAR(ComputeLoads(t, back).mlu, r.mlu, 1e-12);
  EXPECT_TRUE(back.decomposed());
}

TEST(RoutingJsonTest, RejectsBrokenPath) {
  Topology t(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}});
  nlohmann::json json = {
      {"demands", {{{"src", 0}, {"dst", 1}, {"volume", 1.0},
                    {"paths", {{{"nodes", {0, 2}}, {"ratio", 1.0}}}}}}}};
  EXPECT_THROW(RoutingFromJson(t, json), ValidationError);
  EXPECT_THROW(RoutingFromJson(t, nlohmann::json::object()), ParseError);
}

TEST(SchemeTest, Parse) {
  EXPECT_EQ(ParseScheme("mcf"), Scheme::kMcf);
  EXPECT_EQ(ParseScheme("ospf"), Scheme::kOspf);
  EXPECT_THROW(ParseScheme("rip"), ValidationError);
}

}  // namespace
}  // namespace critnet
