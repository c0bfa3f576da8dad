#include <algorithm>
#include <cmath>
#include <set>

#include "critnet/errors.h"
#include "critnet/flow_lp.h"
#include "critnet/lp.h"
#include "critnet/robustdesign.h"
#include "parallel.h"

namespace critnet {

std::string ToString(Certification certification) {
  switch (certification) {
    case Certification::kNone:
      return "none";
    case Certification::kSubset:
      return "certified-subset";
    case Certification::kAll:
      return "certified-all";
  }
  return "unknown";
}

namespace {

constexpr double kCongestionSlack = 1e-6;

enum class TeMode { kPruned, kFull };

// Links that fail in at least one scenario; only they need protection.
std::vector<char> FailingLinks(const Topology& topology,
                               const std::vector<FailureScenario>& scenarios) {
  std::vector<char> failing(topology.num_links(), 0);
  for (const FailureScenario& s : scenarios) {
    for (LinkId l : s.links) failing[l] = 1;
  }
  return failing;
}

TePlan SolveTe(const NetworkInstance& instance, const std::vector<FailureScenario>& scenarios,
               const std::vector<int>& critical_ids, TeMode mode, const TeOptions& options) {
  const Topology& topology = instance.topology;
  const int num_arcs = topology.num_arcs();
  std::vector<char> none(num_arcs, 0);

  std::vector<Commodity> base_commodities = CommoditiesBySource(instance.tm);
  // One protection commodity per arc of every link that can fail: C_l from the
  // arc's tail to its head without using l.
  std::vector<char> failing = FailingLinks(topology, scenarios);
  std::vector<Commodity> protection_commodities;
  std::vector<int> protection_of_arc(num_arcs, -1);
  for (ArcId arc = 0; arc < num_arcs; ++arc) {
    LinkId l = LinkOfArc(arc);
    if (!failing[l]) continue;
    Commodity c;
    c.source = topology.arc_tail(arc);
    c.sinks = {{topology.arc_head(arc), topology.link(l).capacity}};
    c.avoid_link = l;
    protection_of_arc[arc] = static_cast<int>(protection_commodities.size());
    protection_commodities.push_back(std::move(c));
  }
  CheckReachable(topology, none, protection_commodities);

  lp::Problem problem;
  FlowBlock base(&problem, topology, base_commodities, none);
  FlowBlock protection(&problem, topology, protection_commodities, none);

  std::set<int> critical(critical_ids.begin(), critical_ids.end());
  std::vector<const FailureScenario*> bound_critical;
  std::vector<const FailureScenario*> singles;
  for (const FailureScenario& s : scenarios) {
    if (mode == TeMode::kFull || critical.count(s.id)) bound_critical.push_back(&s);
    if (mode == TeMode::kPruned && s.links.size() == 1) singles.push_back(&s);
  }

  lp::VarIndex u_critical = -1;
  if (!bound_critical.empty()) u_critical = problem.AddVariable(1.0);
  std::vector<lp::VarIndex> u_single;
  for (size_t i = 0; i < singles.size(); ++i) {
    u_single.push_back(problem.AddVariable(1.0 / topology.num_links()));
  }

  long long congestion_rows = 0;
  auto add_rows = [&](const FailureScenario& scenario, lp::VarIndex bound) {
    for (ArcId e = 0; e < num_arcs; ++e) {
      lp::RowIndex row = problem.AddRow(lp::RowSense::kLessEqual, 0.0);
      base.AddArcLoad(&problem, row, e);
      for (LinkId l : scenario.links) {
        for (ArcId a : {ForwardArc(l), ReverseArc(l)}) {
          protection.AddCommodityArcLoad(&problem, row, protection_of_arc[a], e);
        }
      }
      problem.AddCoefficient(row, bound, -topology.arc_capacity(e));
      ++congestion_rows;
    }
  };
  for (const FailureScenario* s : bound_critical) add_rows(*s, u_critical);
  for (size_t i = 0; i < singles.size(); ++i) add_rows(*singles[i], u_single[i]);
  if (mode == TeMode::kPruned && options.cap_critical && u_critical >= 0) {
    lp::RowIndex cap = problem.AddRow(lp::RowSense::kLessEqual, 1.0);
    problem.AddCoefficient(cap, u_critical, 1.0);
  }

  lp::Solution solution = lp::Solve(problem);
  if (solution.status == lp::SolveStatus::kInfeasible) {
    throw InfeasibleError(
        "critical failure set cannot be protected with congestion at most 1 (U_C <= 1 infeasible)");
  }
  if (!solution.optimal()) {
    throw SolverError("TE LP ended with status " + lp::ToString(solution.status));
  }

  TePlan plan;
  plan.objective = solution.objective;
  plan.u_critical = u_critical >= 0 ? solution.values[u_critical] : 0.0;
  for (const FailureScenario* s : bound_critical) plan.critical_ids.push_back(s->id);
  for (const FailureScenario* s : singles) plan.single_ids.push_back(s->id);
  plan.congestion_rows = congestion_rows;
  plan.conservation_rows = base.conservation_rows() + protection.conservation_rows();
  plan.full_congestion_rows = static_cast<long long>(num_arcs) * scenarios.size();

  std::vector<std::vector<double>> base_flows;
  plan.base_load.assign(num_arcs, 0.0);
  for (int k = 0; k < base.num_commodities(); ++k) {
    base_flows.push_back(base.Flow(solution, k));
    for (ArcId e = 0; e < num_arcs; ++e) plan.base_load[e] += base_flows.back()[e];
  }
  plan.base.scheme = Scheme::kMcf;
  plan.base.demands = DemandsFromSourceFlows(topology, base_commodities, base_flows);
  // Loads from the decomposed paths, so that the plan and its routing agree.
  plan.base_load = ComputeLoads(topology, plan.base).arc_load;

  plan.protection.assign(num_arcs, std::vector<double>(num_arcs, 0.0));
  for (ArcId a = 0; a < num_arcs; ++a) {
    if (protection_of_arc[a] >= 0) plan.protection[a] = protection.Flow(solution, protection_of_arc[a]);
  }
  return plan;
}

std::vector<double> ScenarioMlus(const Topology& topology, const TePlan& plan,
                                 const std::vector<FailureScenario>& scenarios, int threads) {
  std::vector<double> mlus(scenarios.size());
  internal::ParallelFor(scenarios.size(), threads, [&](size_t i) {
    mlus[i] = PostFailureMlu(topology, plan, scenarios[i].links);
  });
  return mlus;
}

}  // namespace

std::vector<double> PostFailureLoads(const Topology& topology, const TePlan& plan,
                                     const std::vector<LinkId>& failed) {
  std::vector<double> load = plan.base_load;
  for (LinkId l : failed) {
    for (ArcId a : {ForwardArc(l), ReverseArc(l)}) {
      for (ArcId e = 0; e < topology.num_arcs(); ++e) load[e] += plan.protection[a][e];
    }
  }
  return load;
}

double PostFailureMlu(const Topology& topology, const TePlan& plan,
                      const std::vector<LinkId>& failed) {
  std::vector<double> load = PostFailureLoads(topology, plan, failed);
  double mlu = 0.0;
  for (ArcId e = 0; e < topology.num_arcs(); ++e) {
    mlu = std::max(mlu, load[e] / topology.arc_capacity(e));
  }
  return mlu;
}

TePlan TeSolve(const NetworkInstance& instance, const std::vector<FailureScenario>& scenarios,
               const std::vector<int>& critical_ids, const TeOptions& options) {
  return SolveTe(instance, scenarios, critical_ids, TeMode::kPruned, options);
}

TePlan TeSolveFull(const NetworkInstance& instance, const std::vector<FailureScenario>& scenarios,
                   const TeOptions& options) {
  TePlan plan = SolveTe(instance, scenarios, {}, TeMode::kFull, options);
  std::vector<double> mlus = ScenarioMlus(instance.topology, plan, scenarios, options.threads);
  for (double m : mlus) plan.worst_mlu = std::max(plan.worst_mlu, m);
  return plan;
}

TePlan TeCertifyAndIterate(const NetworkInstance& instance, TePlan plan,
                           const std::vector<FailureScenario>& scenarios,
                           const TeOptions& options) {
  const Topology& topology = instance.topology;
  int iterations = 0;
  while (true) {
    std::vector<double> mlus = ScenarioMlus(topology, plan, scenarios, options.threads);
    std::set<int> critical(plan.critical_ids.begin(), plan.critical_ids.end());
    std::vector<int> violations;
    std::vector<int> additions;
    plan.worst_mlu = 0.0;
    for (size_t i = 0; i < scenarios.size(); ++i) {
      plan.worst_mlu = std::max(plan.worst_mlu, mlus[i]);
      if (mlus[i] > 1 + kCongestionSlack) {
        violations.push_back(scenarios[i].id);
        if (!critical.count(scenarios[i].id)) additions.push_back(scenarios[i].id);
      }
    }
    plan.iterations = iterations;
    plan.violations = violations;
    if (violations.empty()) {
      plan.certification = Certification::kAll;
      return plan;
    }
    // Violators already in the critical set cannot be fixed by re-solving.
    if (additions.empty() || iterations >= options.max_iterations) {
      plan.certification = Certification::kSubset;
      return plan;
    }
    std::vector<int> next = plan.critical_ids;
    next.insert(next.end(), additions.begin(), additions.end());
    std::sort(next.begin(), next.end());
    plan = TeSolve(instance, scenarios, next, options);
    ++iterations;
  }
}

TePlan TeRun(const NetworkInstance& instance, const std::vector<FailureScenario>& scenarios,
             const Predictor& predictor, const TeOptions& options) {
  RoutingResult base = SolveMcfMinMlu(instance);
  std::vector<ImpactRecord> records = predictor.Evaluate(instance, base, scenarios, options.threads);
  CriticalSet critical = predictor.Critical(scenarios, records);
  std::vector<int> ids = critical.scenario_ids;
  std::sort(ids.begin(), ids.end());
  TePlan plan = TeSolve(instance, scenarios, ids, options);
  return TeCertifyAndIterate(instance, std::move(plan), scenarios, options);
}

nlohmann::json ToJson(const Topology& topology, const TePlan& plan) {
  nlohmann::json protection = nlohmann::json::array();
  for (ArcId a = 0; a < topology.num_arcs(); ++a) {
    nlohmann::json flows = nlohmann::json::array();
    for (ArcId e = 0; e < topology.num_arcs(); ++e) {
      if (plan.protection[a][e] > 0) {
        flows.push_back({{"tail", topology.arc_tail(e)},
                         {"head", topology.arc_head(e)},
                         {"flow", plan.protection[a][e]}});
      }
    }
    if (flows.empty()) continue;
    protection.push_back({{"link", LinkOfArc(a)},
                          {"tail", topology.arc_tail(a)},
                          {"head", topology.arc_head(a)},
                          {"volume", topology.arc_capacity(a)},
                          {"arc_flows", flows}});
  }
  return {{"objective", plan.objective},
          {"u_critical", plan.u_critical},
          {"worst_mlu", plan.worst_mlu},
          {"certification", ToString(plan.certification)},
          {"iterations", plan.iterations},
          {"critical_ids", plan.critical_ids},
          {"violations", plan.violations},
          {"congestion_rows", plan.congestion_rows},
          {"conservation_rows", plan.conservation_rows},
          {"full_congestion_rows", plan.full_congestion_rows},
          {"routing", RoutingToJson(plan.base)},
          {"protection", protection}};
}

}  // namespace critnet
