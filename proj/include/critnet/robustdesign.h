#ifndef CRITNET_ROBUSTDESIGN_H
#define CRITNET_ROBUSTDESIGN_H

#include <iosfwd>
#include <string>
#include <vector>

#include "critnet/failure.h"
#include "critnet/netmodel.h"
#include "critnet/routing.h"
#include "json.hpp"

namespace critnet {

// ---------------------------------------------------------------------------
// Impact predictors

// Source of failure impacts for the design solvers: the exact oracle, the
// simplified reroute heuristic, or a predictions file written by an external
// model.
class Predictor {
 public:
  enum class Kind { kOracle, kSimplified, kFile };

  static Predictor Oracle(Scheme scheme);
  static Predictor Simplified();
  static Predictor FromPredictions(std::vector<Prediction> predictions, std::string origin = "");
  static Predictor FromFile(const std::string& path);
  // "oracle", "oracle:mcf", "oracle:ospf", "simplified" or "file:<path>".
  // A bare "oracle" uses `default_scheme`.
  static Predictor Parse(const std::string& spec, Scheme default_scheme = Scheme::kMcf);

  Kind kind() const { return kind_; }
  Scheme scheme() const { return scheme_; }
  std::string Describe() const;

  // Impact of every scenario, in scenario order. File predictors report
  // impact_pred with source kPredicted; missing scenarios are an error.
  std::vector<ImpactRecord> Evaluate(const NetworkInstance& instance, const RoutingResult& base,
                                     const std::vector<FailureScenario>& scenarios,
                                     int threads = 1) const;

  // Critical scenarios ranked by predicted impact. Oracle and simplified
  // predictors use the Worst/Significant labels of their impacts; a file
  // predictor uses its classifier output (critical_prob >= 0.5) and ranks by
  // impact_pred. `records` must come from Evaluate on the same scenarios.
  CriticalSet Critical(const std::vector<FailureScenario>& scenarios,
                       const std::vector<ImpactRecord>& records) const;

 private:
  Kind kind_ = Kind::kOracle;
  Scheme scheme_ = Scheme::kMcf;
  std::vector<Prediction> predictions_;
  std::string origin_;
};

// ---------------------------------------------------------------------------
// Robust validation

struct ValidationReport {
  int worst_scenario_id = -1;
  double worst_mlu = 0.0;
  double worst_impact = 0.0;
  double mlu_base = 0.0;
  // Highest impact according to the predictor, before verification.
  int predicted_worst_scenario_id = -1;
  double predicted_worst_impact = 0.0;
  int scenarios_total = 0;
  int scenarios_evaluated = 0;
  // Exact re-evaluations in the pruned run vs. an exhaustive one, and the LP
  // rows those evaluations build (zero for OSPF, which solves no LP).
  int lp_solves_pruned = 0;
  int lp_solves_full = 0;
  long long lp_rows_pruned = 0;
  long long lp_rows_full = 0;
  std::vector<int> verified_ids;
};

// Ranks all scenarios with the predictor and re-evaluates the top k with the
// exact oracle of the base routing's scheme. k <= 0 verifies every
// predicted-critical scenario (at least one). Throws ValidationError on an
// empty scenario set.
ValidationReport RobustValidate(const NetworkInstance& instance, const RoutingResult& base,
                                const std::vector<FailureScenario>& scenarios,
                                const Predictor& predictor, int k = 0, int threads = 1);

// Exact oracle on every scenario.
ValidationReport RobustValidateExhaustive(const NetworkInstance& instance,
                                          const RoutingResult& base,
                                          const std::vector<FailureScenario>& scenarios,
                                          int threads = 1);

nlohmann::json ToJson(const ValidationReport& report);

// ---------------------------------------------------------------------------
// Network upgrade

struct LpSize {
  long long variables = 0;
  long long rows = 0;
};

struct UpgradePlan {
  std::vector<double> added;  // a_e per link
  double cost = 0.0;          // sum of added
  double threshold = 0.0;
  std::vector<int> constrained_ids;  // scenarios with congestion rows in the LP
  // Max over the validated scenarios of the min-MLU on the upgraded network.
  double worst_mlu = 0.0;
  std::vector<int> validated_ids;
  int certification_rounds = 0;
  LpSize pruned_size;
  LpSize full_size;
};

// F(x^w) / MLU(x^w) from oracle records of the failure-free optimal routing.
// Throws ValidationError when the records are empty or mlu_base is zero, and
// when the value departs from 1 / mlu_base by more than 1e-9 (relative).
double UpgradeThreshold(const std::vector<ImpactRecord>& records);

struct UpgradeOptions {
  // Re-check every scenario outside the constrained set on the upgraded
  // network and add violators until none remain. Defaults to on for
  // non-oracle predictors.
  enum class Certify { kAuto, kAlways, kNever } certify = Certify::kAuto;
  int max_rounds = 50;
  // Round each a_e up to a multiple of this step after solving; 0 disables.
  double integer_step = 0.0;
  int threads = 1;
};

// Cost-minimal capacity additions keeping MCF routing congestion-free
// (MLU <= 1) under every constrained scenario. The constrained set is
// {x : impact(x) >= 1 / MLU(phi)} with impacts from the predictor.
UpgradePlan UpgradeOptimize(const NetworkInstance& instance,
                            const std::vector<FailureScenario>& scenarios,
                            const Predictor& predictor, const UpgradeOptions& options = {});

// The same LP with congestion rows for every scenario.
UpgradePlan UpgradeOptimizeFull(const NetworkInstance& instance,
                                const std::vector<FailureScenario>& scenarios,
                                const UpgradeOptions& options = {});

// Topology with capacities C_e + a_e.
Topology ApplyUpgrade(const Topology& topology, const std::vector<double>& added);

void WriteUpgradeCsv(const UpgradePlan& plan, std::ostream& out);
nlohmann::json ToJson(const UpgradePlan& plan);

// ---------------------------------------------------------------------------
// Fault-tolerant traffic engineering

enum class Certification { kNone, kSubset, kAll };

std::string ToString(Certification certification);

struct TePlan {
  RoutingDecision base;
  // Arc loads of the base routing.
  std::vector<double> base_load;
  // protection[a]: arc flows carrying C_l from tail(a) to head(a) around the
  // link l of arc a. Both arcs of l activate when l fails.
  std::vector<std::vector<double>> protection;
  double objective = 0.0;
  double u_critical = 0.0;
  std::vector<int> critical_ids;
  std::vector<int> single_ids;
  Certification certification = Certification::kNone;
  int iterations = 0;
  // Scenarios still above MLU 1 when certification gave up.
  std::vector<int> violations;
  double worst_mlu = 0.0;  // over all scenarios, after certification
  long long congestion_rows = 0;
  long long conservation_rows = 0;
  long long full_congestion_rows = 0;
};

struct TeOptions {
  // Enforce U_C <= 1.
  bool cap_critical = true;
  int max_iterations = 20;
  int threads = 1;
};

// Load on every arc when the scenario's links fail: base load plus the
// protection flows of each failed link.
std::vector<double> PostFailureLoads(const Topology& topology, const TePlan& plan,
                                     const std::vector<LinkId>& failed);
double PostFailureMlu(const Topology& topology, const TePlan& plan,
                      const std::vector<LinkId>& failed);

// Minimizes U_C + (1/|E|) sum of U'_x over single failures. Scenarios in
// `critical_ids` bound U_C; single-link scenarios bound their own U'_x.
// Throws InfeasibleError when the cap on U_C cannot be met.
TePlan TeSolve(const NetworkInstance& instance, const std::vector<FailureScenario>& scenarios,
               const std::vector<int>& critical_ids, const TeOptions& options = {});

// Minimizes the worst-case MLU U over every scenario (no pruning). The plan's
// objective is U.
TePlan TeSolveFull(const NetworkInstance& instance, const std::vector<FailureScenario>& scenarios,
                   const TeOptions& options = {});

// Evaluates the plan on every scenario; violators (MLU > 1 + 1e-6) join the
// critical set and the LP is solved again, up to options.max_iterations
// times. Returns the last plan with its certification status.
TePlan TeCertifyAndIterate(const NetworkInstance& instance, TePlan plan,
                           const std::vector<FailureScenario>& scenarios,
                           const TeOptions& options = {});

// Critical set from the predictor, TeSolve, then certification.
TePlan TeRun(const NetworkInstance& instance, const std::vector<FailureScenario>& scenarios,
             const Predictor& predictor, const TeOptions& options = {});

nlohmann::json ToJson(const Topology& topology, const TePlan& plan);

}  // namespace critnet

#endif  // CRITNET_ROBUSTDESIGN_H
