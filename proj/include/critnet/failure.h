#ifndef CRITNET_FAILURE_H
#define CRITNET_FAILURE_H

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "critnet/netmodel.h"
#include "critnet/routing.h"

namespace critnet {

struct FailureScenario {
  int id = 0;
  std::vector<LinkId> links;  // sorted, non-empty

  bool operator==(const FailureScenario&) const = default;
};

// All link subsets of size 1..max_failures whose removal leaves the topology
// connected. Ordered by size, then lexicographically; ids are positions in
// that order.
std::vector<FailureScenario> EnumerateFailures(const Topology& topology, int max_failures);

// "3;17" style rendering used in CSV files.
std::string FormatLinks(const std::vector<LinkId>& links);
std::vector<LinkId> ParseLinks(const std::string& text);

enum class ImpactSource { kOracleMcf, kOracleOspf, kSimplified, kPredicted };

std::string ToString(ImpactSource source);
ImpactSource ParseImpactSource(const std::string& text);

struct ImpactRecord {
  int scenario_id = 0;
  std::vector<LinkId> links;
  double mlu_base = 0.0;
  double mlu_failed = 0.0;
  double impact = 0.0;  // mlu_failed / mlu_base
  ImpactSource source = ImpactSource::kOracleMcf;
};

// Exact impact: the routing of `scheme` is recomputed from scratch on the
// surviving graph and compared with base.mlu, which must come from the same
// scheme. Throws ValidationError when base.mlu is zero and InfeasibleError
// when the scenario disconnects the topology.
ImpactRecord ImpactOracle(const NetworkInstance& instance, const RoutingResult& base,
                          const FailureScenario& scenario, Scheme scheme);

// Heuristic impact: path flows that avoid the failed links stay where they
// are; the volume on affected paths is rerouted by one min-MLU LP over the
// surviving arcs with the frozen loads as background.
ImpactRecord ImpactSimplified(const NetworkInstance& instance, const RoutingResult& base,
                              const FailureScenario& scenario);

enum class Evaluator { kOracle, kSimplified };

struct SweepOptions {
  Evaluator evaluator = Evaluator::kOracle;
  // Ignored by the simplified evaluator.
  Scheme scheme = Scheme::kMcf;
  // 0 means one per hardware thread.
  int threads = 1;
};

// Evaluates every scenario; the output is in input order regardless of the
// thread count.
std::vector<ImpactRecord> SweepImpacts(const NetworkInstance& instance, const RoutingResult& base,
                                       const std::vector<FailureScenario>& scenarios,
                                       const SweepOptions& options = {});

enum class Criticality { kWorst, kSignificant, kNormal };

std::string ToString(Criticality criticality);
Criticality ParseCriticality(const std::string& text);

inline constexpr double kWorstRatio = 0.95;
inline constexpr double kSignificantRatio = 0.8;

struct CriticalityLabel {
  Criticality type = Criticality::kNormal;
  double ratio = 0.0;  // impact / max impact in the set
};

// Throws ValidationError on empty input or a non-positive maximum.
std::vector<CriticalityLabel> Classify(const std::vector<double>& impacts);
std::vector<CriticalityLabel> Classify(const std::vector<ImpactRecord>& records);

struct CriticalSet {
  // Scenario ids by descending score; ties by ascending id.
  std::vector<int> scenario_ids;
  std::vector<double> scores;

  size_t size() const { return scenario_ids.size(); }
  bool empty() const { return scenario_ids.empty(); }
};

// Worst and Significant scenarios, scored by impact.
CriticalSet SelectCritical(const std::vector<ImpactRecord>& records,
                           const std::vector<CriticalityLabel>& labels);

// One row of a learned predictor's output.
struct Prediction {
  int scenario_id = 0;
  double impact_pred = 0.0;
  double critical_prob = 0.0;
};

// Scenarios the classifier flags (critical_prob >= min_prob), ranked by the
// regression output.
CriticalSet SelectCriticalFromPredictions(const std::vector<Prediction>& predictions,
                                          double min_prob = 0.5);

// CSV with header scenario_id,links,mlu_base,mlu_failed,impact,label,source.
// `labels` may be empty, leaving the label column blank.
void WriteImpactCsv(const std::vector<ImpactRecord>& records,
                    const std::vector<CriticalityLabel>& labels, std::ostream& out);
void SaveImpactCsv(const std::vector<ImpactRecord>& records,
                   const std::vector<CriticalityLabel>& labels, const std::string& path);

struct ImpactRow {
  ImpactRecord record;
  std::optional<Criticality> label;
};

std::vector<ImpactRow> ReadImpactCsv(std::istream& in);
std::vector<ImpactRow> LoadImpactCsv(const std::string& path);

}  // namespace critnet

#endif  // CRITNET_FAILURE_H
