#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <set>

#include "critnet/errors.h"
#include "critnet/flow_lp.h"
#include "critnet/format.h"
#include "critnet/lp.h"
#include "critnet/robustdesign.h"
#include "parallel.h"

namespace critnet {
namespace {

constexpr double kCongestionSlack = 1e-6;

// min sum a_e  s.t. for every scenario x and surviving arc e:
//   sum_d r_x(d, e) - a_link(e) <= C_e
// The congestion bound U <= 1 is tight at the optimum and is fixed to 1.
struct UpgradeLp {
  std::vector<double> added;
  LpSize size;
};

UpgradeLp SolveUpgradeLp(const NetworkInstance& instance,
                         const std::vector<const FailureScenario*>& constrained, bool solve) {
  const Topology& topology = instance.topology;
  std::vector<Commodity> commodities = CommoditiesBySource(instance.tm);
  UpgradeLp result;
  result.added.assign(topology.num_links(), 0.0);

  lp::Problem problem;
  lp::Problem* target = solve ? &problem : nullptr;
  std::vector<lp::VarIndex> add_var(topology.num_links(), -1);
  if (target) {
    for (LinkId l = 0; l < topology.num_links(); ++l) add_var[l] = problem.AddVariable(1.0);
  }
  result.size.variables = topology.num_links();

  for (const FailureScenario* scenario : constrained) {
    std::vector<char> disabled = ArcMask(topology, scenario->links);
    CheckReachable(topology, disabled, commodities);
    FlowBlock flows(target, topology, commodities, disabled);
    result.size.variables += flows.num_variables();
    result.size.rows += flows.conservation_rows();
    for (ArcId arc = 0; arc < topology.num_arcs(); ++arc) {
      if (disabled[arc]) continue;
      ++result.size.rows;
      if (!target) continue;
      lp::RowIndex row = problem.AddRow(lp::RowSense::kLessEqual, topology.arc_capacity(arc));
      flows.AddArcLoad(&problem, row, arc);
      problem.AddCoefficient(row, add_var[LinkOfArc(arc)], -1.0);
    }
  }
  if (!solve || constrained.empty()) return result;

  lp::Solution solution = lp::Solve(problem);
  if (!solution.optimal()) {
    throw SolverError("upgrade LP ended with status " + lp::ToString(solution.status));
  }
  for (LinkId l = 0; l < topology.num_links(); ++l) {
    result.added[l] = std::max(0.0, solution.values[add_var[l]]);
  }
  return result;
}

std::vector<double> RoundUp(const std::vector<double>& added, double step) {
  std::vector<double> out = added;
  for (double& a : out) {
    // Values within solver noise of a multiple are not bumped to the next one.
    double units = std::ceil(a / step - 1e-9);
    a = std::max(0.0, units) * step;
  }
  return out;
}

double Sum(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum;
}

// Min-MLU of each scenario on the upgraded network.
std::vector<double> UpgradedMlus(const NetworkInstance& instance, const std::vector<double>& added,
                                 const std::vector<const FailureScenario*>& scenarios,
                                 int threads) {
  NetworkInstance upgraded(ApplyUpgrade(instance.topology, added), instance.tm, instance.seed);
  std::vector<double> mlus(scenarios.size());
  internal::ParallelFor(scenarios.size(), threads, [&](size_t i) {
    mlus[i] = SolveMcfMinMlu(upgraded, scenarios[i]->links).mlu;
  });
  return mlus;
}

UpgradePlan Optimize(const NetworkInstance& instance, const std::vector<FailureScenario>& scenarios,
                     std::vector<const FailureScenario*> constrained, double threshold,
                     bool certify, const UpgradeOptions& options) {
  UpgradePlan plan;
  plan.threshold = threshold;

  std::vector<const FailureScenario*> all;
  for (const FailureScenario& s : scenarios) all.push_back(&s);
  plan.full_size = SolveUpgradeLp(instance, all, /*solve=*/false).size;

  std::vector<double> added;
  std::vector<double> validated_mlus;
  std::vector<const FailureScenario*> validated;
  while (true) {
    added = SolveUpgradeLp(instance, constrained, /*solve=*/true).added;
    if (options.integer_step > 0) added = RoundUp(added, options.integer_step);
    if (!certify) break;

    std::vector<double> mlus = UpgradedMlus(instance, added, all, options.threads);
    std::set<int> in_set;
    for (const FailureScenario* s : constrained) in_set.insert(s->id);
    std::vector<const FailureScenario*> violators;
    for (size_t i = 0; i < all.size(); ++i) {
      if (mlus[i] > 1 + kCongestionSlack && !in_set.count(all[i]->id)) violators.push_back(all[i]);
    }
    validated = all;
    validated_mlus = mlus;
    if (violators.empty() || plan.certification_rounds >= options.max_rounds) break;
    ++plan.certification_rounds;
    constrained.insert(constrained.end(), violators.begin(), violators.end());
    std::sort(constrained.begin(), constrained.end(),
              [](const FailureScenario* a, const FailureScenario* b) { return a->id < b->id; });
  }
  if (!certify) {
    validated = constrained;
    validated_mlus = UpgradedMlus(instance, added, validated, options.threads);
  }

  plan.added = added;
  plan.cost = Sum(added);
  for (const FailureScenario* s : constrained) plan.constrained_ids.push_back(s->id);
  for (const FailureScenario* s : validated) plan.validated_ids.push_back(s->id);
  for (double mlu : validated_mlus) plan.worst_mlu = std::max(plan.worst_mlu, mlu);
  plan.pruned_size = SolveUpgradeLp(instance, constrained, /*solve=*/false).size;
  return plan;
}

}  // namespace

double UpgradeThreshold(const std::vector<ImpactRecord>& records) {
  if (records.empty()) throw ValidationError("upgrade threshold needs at least one scenario");
  const ImpactRecord* worst = &records.front();
  for (const ImpactRecord& r : records) {
    if (r.impact > worst->impact) worst = &r;
  }
  if (!(worst->mlu_base > 0) || !(worst->mlu_failed > 0)) {
    throw ValidationError("upgrade threshold is undefined for zero traffic");
  }
  double threshold = worst->impact / worst->mlu_failed;
  double identity = 1.0 / worst->mlu_base;
  if (std::abs(threshold - identity) > 1e-9 * std::max(1.0, identity)) {
    throw ValidationError("upgrade threshold " + FormatDouble(threshold) +
                          " disagrees with 1/MLU(no failure) = " + FormatDouble(identity));
  }
  return threshold;
}

UpgradePlan UpgradeOptimize(const NetworkInstance& instance,
                            const std::vector<FailureScenario>& scenarios,
                            const Predictor& predictor, const UpgradeOptions& options) {
  if (predictor.kind() == Predictor::Kind::kOracle && predictor.scheme() != Scheme::kMcf) {
    throw ValidationError("network upgrade assumes optimal (mcf) rerouting");
  }
  RoutingResult base = SolveMcfMinMlu(instance);
  if (!(base.mlu > 0)) throw ValidationError("upgrade threshold is undefined for zero traffic");
  const double threshold = 1.0 / base.mlu;

  std::vector<ImpactRecord> records = predictor.Evaluate(instance, base, scenarios, options.threads);
  std::vector<const FailureScenario*> constrained;
  for (size_t i = 0; i < scenarios.size(); ++i) {
    // Inclusive by a relative 1e-9: a scenario exactly at MLU 1 costs nothing
    // to keep.
    if (records[i].impact >= threshold * (1 - 1e-9)) constrained.push_back(&scenarios[i]);
  }
  bool certify = options.certify == UpgradeOptions::Certify::kAlways ||
                 (options.certify == UpgradeOptions::Certify::kAuto &&
                  predictor.kind() != Predictor::Kind::kOracle);
  return Optimize(instance, scenarios, std::move(constrained), threshold, certify, options);
}

UpgradePlan UpgradeOptimizeFull(const NetworkInstance& instance,
                                const std::vector<FailureScenario>& scenarios,
                                const UpgradeOptions& options) {
  RoutingResult base = SolveMcfMinMlu(instance);
  double threshold = base.mlu > 0 ? 1.0 / base.mlu : 0.0;
  std::vector<const FailureScenario*> all;
  for (const FailureScenario& s : scenarios) all.push_back(&s);
  return Optimize(instance, scenarios, std::move(all), threshold, /*certify=*/false, options);
}

Topology ApplyUpgrade(const Topology& topology, const std::vector<double>& added) {
  if (added.size() != static_cast<size_t>(topology.num_links())) {
    throw ValidationError("upgrade vector does not match the link count");
  }
  std::vector<double> capacities;
  for (LinkId l = 0; l < topology.num_links(); ++l) {
    capacities.push_back(topology.link(l).capacity + added[l]);
  }
  return topology.WithCapacities(capacities);
}

void WriteUpgradeCsv(const UpgradePlan& plan, std::ostream& out) {
  out << "link,a_e\n";
  for (size_t l = 0; l < plan.added.size(); ++l) {
    out << l << ',' << FormatDouble(plan.added[l]) << '\n';
  }
}

nlohmann::json ToJson(const UpgradePlan& plan) {
  return {{"cost", plan.cost},
          {"threshold", plan.threshold},
          {"worst_mlu", plan.worst_mlu},
          {"added", plan.added},
          {"constrained_ids", plan.constrained_ids},
          {"validated_ids", plan.validated_ids},
          {"certification_rounds", plan.certification_rounds},
          {"lp_pruned", {{"variables", plan.pruned_size.variables}, {"rows", plan.pruned_size.rows}}},
          {"lp_full", {{"variables", plan.full_size.variables}, {"rows", plan.full_size.rows}}}};
}

}  // namespace critnet
