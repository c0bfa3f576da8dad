#include "critnet/failure.h"

#include <cmath>
#include <sstream>

#include "critnet/errors.h"
#include "gtest/gtest.h"
#include "support/oracles.h"

namespace critnet {
namespace {

Topology Triangle() { return Topology(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}}); }

NetworkInstance TriangleInstance(double volume) {
  return NetworkInstance(Triangle(), TrafficMatrix::FromDemands(3, {{0, 1, volume}}));
}

ImpactRecord Record(int id, double impact) {
  ImpactRecord r;
  r.scenario_id = id;
  r.links = {id};
  r.mlu_base = 1.0;
  r.mlu_failed = impact;
  r.impact = impact;
  return r;
}

TEST(EnumerateTest, TriangleOnlySingles) {
  std::vector<FailureScenario> s = EnumerateFailures(Triangle(), 2);
  ASSERT_EQ(s.size(), 3u);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(s[i].id, i);
    EXPECT_EQ(s[i].links, (std::vector<LinkId>{i}));
  }
}

TEST(EnumerateTest, OrderedBySizeThenLexicographic) {
  Topology k4(4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {1, 2, 1}, {1, 3, 1}, {2, 3, 1}});
  std::vector<FailureScenario> s = EnumerateFailures(k4, 3);
  for (size_t i = 1; i < s.size(); ++i) {
    EXPECT_TRUE(s[i - 1].links.size() < s[i].links.size() ||
                (s[i - 1].links.size() == s[i].links.size() && s[i - 1].links < s[i].links));
  }
}

TEST(EnumerateTest, TableCounts) {
  Topology abilene = LoadTopology(std::string(CRITNET_DATA_DIR) + "/abilene.graphml");
  EXPECT_EQ(EnumerateFailures(abilene, 2).size(), 94u);
  Topology geant = PruneDegreeOne(LoadTopology(std::string(CRITNET_DATA_DIR) + "/geant2010.graphml")).topology;
  EXPECT_EQ(EnumerateFailures(geant, 2).size(), 1255u);
}

class EnumerateOracleTest : public ::testing::TestWithParam<int> {};

TEST_P(EnumerateOracleTest, MatchesBitmaskScan) {
  const int seed = GetParam();
  Topology t = GenerateRandomTopology(5 + seed % 6, {}, seed);
  for (int f = 1; f <= 3; ++f) {
    std::set<std::vector<LinkId>> expected = testing::BitmaskFailures(t, f);
    std::set<std::vector<LinkId>> got;
    for (const FailureScenario& s : EnumerateFailures(t, f)) got.insert(s.links);
    EXPECT_EQ(got, expected) << "f=" << f;
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, EnumerateOracleTest, ::testing::Range(1, 16));

TEST(LinksTest, FormatAndParse) {
  EXPECT_EQ(FormatLinks({3, 17}), "3;17");
  EXPECT_EQ(ParseLinks("3;17"), (std::vector<LinkId>{3, 17}));
  EXPECT_THROW(ParseLinks("3;x"), ParseError);
  EXPECT_THROW(ParseLinks(""), ParseError);
}

TEST(ImpactOracleTest, TriangleMcf) {
  NetworkInstance instance = TriangleInstance(0.6);
  RoutingResult base = SolveMcfMinMlu(instance);
  ImpactRecord r = ImpactOracle(instance, base, {0, {0}}, Scheme::kMcf);
  EXPECT_NEAR(r.mlu_base, 0.3, 1e-12);
  EXPECT_NEAR(r.mlu_failed, 0.6, 1e-12);
  EXPECT_NEAR(r.impact, 2.0, 1e-9);
  EXPECT_EQ(r.source, ImpactSource::kOracleMcf);
}

TEST(ImpactOracleTest, TriangleOspf) {
  NetworkInstance instance = TriangleInstance(0.6);
  RoutingResult base = SolveOspf(instance);
  EXPECT_DOUBLE_EQ(ImpactOracle(instance, base, {0, {0}}, Scheme::kOspf).impact, 1.0);
  // Link 1 carries no flow; OSPF routing is unchanged.
  EXPECT_DOUBLE_EQ(ImpactOracle(instance, base, {1, {1}}, Scheme::kOspf).impact, 1.0);
}

TEST(ImpactOracleTest, Errors) {
  NetworkInstance zero(Triangle(), TrafficMatrix(3));
  RoutingResult base = SolveMcfMinMlu(zero);
  EXPECT_THROW(ImpactOracle(zero, base, {0, {0}}, Scheme::kMcf), ValidationError);
  NetworkInstance instance = TriangleInstance(0.6);
  RoutingResult mcf = SolveMcfMinMlu(instance);
  EXPECT_THROW(ImpactOracle(instance, mcf, {0, {0, 1}}, Scheme::kMcf), InfeasibleError);
}

TEST(ImpactSimplifiedTest, TriangleMatchesOracle) {
  NetworkInstance instance = TriangleInstance(0.6);
  RoutingResult base = SolveMcfMinMlu(instance);
  ImpactRecord r = ImpactSimplified(instance, base, {0, {0}});
  EXPECT_NEAR(r.impact, 2.0, 1e-9);
  EXPECT_EQ(r.source, ImpactSource::kSimplified);
}

TEST(ImpactSimplifiedTest, UnaffectedScenarioIsExactlyOne) {
  // Square with a chord; the single demand 0 -> 1 never touches link 2-3.
  Topology t(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {0, 3, 1}, {0, 2, 1}});
  NetworkInstance instance(t, TrafficMatrix::FromDemands(4, {{0, 1, 0.1}}));
  RoutingResult base = SolveOspf(instance);
  ImpactRecord r = ImpactSimplified(instance, base, {0, {*t.FindLink(2, 3)}});
  EXPECT_EQ(r.impact, 1.0);
  EXPECT_EQ(r.mlu_failed, r.mlu_base);
}

TEST(ImpactSimplifiedTest, NeedsDecomposedBase) {
  NetworkInstance instance = TriangleInstance(0.6);
  RoutingResult base = SolveMcfMinMlu(instance);
  for (DemandRouting& d : base.decision.demands) d.paths.clear();
  EXPECT_THROW(ImpactSimplified(instance, base, {0, {0}}), ValidationError);
}

// Freezing unaffected flows can only restrict the reroute, so the simplified
// MLU is never below the optimum, and impacts are at least 1.
class ImpactPropertyTest : public ::testing::TestWithParam<int> {};

TEST_P(ImpactPropertyTest, SimplifiedBoundsOracle) {
  const int seed = GetParam();
  Topology t = AssignRandomCapacities(GenerateRandomTopology(7, {}, seed), 1.0, seed);
  NetworkInstance instance(t, GenerateGravityTm(t, 1.0, seed));
  RoutingResult base = SolveMcfMinMlu(instance);
  for (const FailureScenario& s : EnumerateFailures(t, 2)) {
    ImpactRecord exact = ImpactOracle(instance, base, s, Scheme::kMcf);
    ImpactRecord approx = ImpactSimplified(instance, base, s);
    EXPECT_GE(exact.impact, 1 - 1e-7);
    EXPECT_GE(approx.mlu_failed, exact.mlu_failed - 1e-7);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, ImpactPropertyTest, ::testing::Range(1, 9));

TEST(SweepTest, ThreadCountDoesNotChangeOutput) {
  Topology t = AssignRandomCapacities(GenerateRandomTopology(9, {}, 4), 1.0, 4);
  NetworkInstance instance(t, GenerateGravityTm(t, 1.0, 4));
  std::vector<FailureScenario> scenarios = EnumerateFailures(t, 2);
  RoutingResult base = SolveMcfMinMlu(instance);
  SweepOptions one;
  SweepOptions four;
  four.threads = 4;
  std::vector<ImpactRecord> a = SweepImpacts(instance, base, scenarios, one);
  std::vector<ImpactRecord> b = SweepImpacts(instance, base, scenarios, four);
  ASSERT_EQ(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].scenario_id, scenarios[i].id);
    EXPECT_EQ(a[i].impact, b[i].impact);
  }
}

TEST(ClassifyTest, Examples) {
  std::vector<CriticalityLabel> a = Classify(std::vector<double>{2.0, 2.0, 1.0});
  EXPECT_EQ(a[0].type, Criticality::kWorst);
  EXPECT_EQ(a[1].type, Criticality::kWorst);
  EXPECT_EQ(a[2].type, Criticality::kNormal);
  EXPECT_DOUBLE_EQ(a[2].ratio, 0.5);

  EXPECT_EQ(Classify(std::vector<double>{1.0})[0].type, Criticality::kWorst);

  std::vector<CriticalityLabel> b = Classify(std::vector<double>{1.0, 0.94, 0.81, 0.5});
  EXPECT_EQ(b[0].type, Criticality::kWorst);
  EXPECT_EQ(b[1].type, Criticality::kSignificant);
  EXPECT_EQ(b[2].type, Criticality::kSignificant);
  EXPECT_EQ(b[3].type, Criticality::kNormal);
}

TEST(ClassifyTest, BoundariesAreInclusive) {
  std::vector<CriticalityLabel> c = Classify(std::vector<double>{1.0, 0.95, 0.8, 0.7999});
  EXPECT_EQ(c[1].type, Criticality::kWorst);
  EXPECT_EQ(c[2].type, Criticality::kSignificant);
  EXPECT_EQ(c[3].type, Criticality::kNormal);
}

TEST(ClassifyTest, Errors) {
  EXPECT_THROW(Classify(std::vector<double>{}), ValidationError);
  EXPECT_THROW(Classify(std::vector<double>{0.0, 0.0}), ValidationError);
}

TEST(SelectCriticalTest, OrderedByScoreThenId) {
  std::vector<ImpactRecord> records = {Record(0, 0.5), Record(1, 0.94), Record(2, 1.0),
                                       Record(3, 0.81), Record(4, 0.94)};
  CriticalSet set = SelectCritical(records, Classify(records));
  EXPECT_EQ(set.scenario_ids, (std::vector<int>{2, 1, 4, 3}));
  EXPECT_EQ(set.scores, (std::vector<double>{1.0, 0.94, 0.94, 0.81}));
}

TEST(SelectCriticalTest, AllNormalIsEmpty) {
  std::vector<ImpactRecord> records = {Record(0, 1.0), Record(1, 0.5)};
  std::vector<CriticalityLabel> labels(2);  // all Normal
  EXPECT_TRUE(SelectCritical(records, labels).empty());
}

TEST(SelectCriticalTest, FromPredictions) {
  std::vector<Prediction> preds = {{0, 1.2, 0.9}, {1, 2.0, 0.4}, {2, 1.5, 0.5}, {3, 1.5, 0.7}};
  CriticalSet set = SelectCriticalFromPredictions(preds);
  EXPECT_EQ(set.scenario_ids, (std::vector<int>{2, 3, 0}));
}

TEST(ImpactCsvTest, RoundTrip) {
  NetworkInstance instance = TriangleInstance(0.6);
  RoutingResult base = SolveMcfMinMlu(instance);
  std::vector<ImpactRecord> records =
      SweepImpacts(instance, base, EnumerateFailures(instance.topology, 2));
  std::vector<CriticalityLabel> labels = Classify(records);
  std::ostringstream out;
  WriteImpactCsv(records, labels, out);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')),
            "scenario_id,links,mlu_base,mlu_failed,impact,label,source");
  std::istringstream in(out.str());
  std::vector<ImpactRow> rows = ReadImpactCsv(in);
  ASSERT_EQ(rows.size(), records.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].record.scenario_id, records[i].scenario_id);
    EXPECT_EQ(rows[i].record.links, records[i].links);
    EXPECT_EQ(rows[i].record.impact, records[i].impact);
    EXPECT_EQ(rows[i].record.mlu_failed, records[i].mlu_failed);
    EXPECT_EQ(rows[i].record.source, records[i].source);
    ASSERT_TRUE(rows[i].label.has_value());
    EXPECT_EQ(*rows[i].label, labels[i].type);
  }
}

TEST(ImpactCsvTest, BlankLabelAndErrors) {
  std::istringstream ok("scenario_id,links,mlu_base,mlu_failed,impact,label,source\n"
                        "4,1;2,0.5,1,2,,simplified\n");
  std::vector<ImpactRow> rows = ReadImpactCsv(ok);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_FALSE(rows[0].label.has_value());
  EXPECT_EQ(rows[0].record.links, (std::vector<LinkId>{1, 2}));

  std::istringstream bad_source("scenario_id,links,mlu_base,mlu_failed,impact,label,source\n"
                                "0,1,1,1,1,worst,guess\n");
  EXPECT_THROW(ReadImpactCsv(bad_source), ParseError);
  std::istringstream short_row("scenario_id,links,mlu_base,mlu_failed,impact,label,source\n0,1\n");
  EXPECT_THROW(ReadImpactCsv(short_row), ParseError);
}

TEST(NamesTest, RoundTrip) {
  for (Criticality c : {Criticality::kWorst, Criticality::kSignificant, Criticality::kNormal}) {
    EXPECT_EQ(ParseCriticality(ToString(c)), c);
  }
  for (ImpactSource s : {ImpactSource::kOracleMcf, ImpactSource::kOracleOspf,
                         ImpactSource::kSimplified, ImpactSource::kPredicted}) {
    EXPECT_EQ(ParseImpactSource(ToString(s)), s);
  }
}

}  // namespace
}  // namespace critnet
