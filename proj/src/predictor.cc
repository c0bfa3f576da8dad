#include <algorithm>

#include "critnet/errors.h"
#include "critnet/flow_lp.h"
#include "critnet/graphenc.h"
#include "critnet/robustdesign.h"
#include "parallel.h"

namespace critnet {

Predictor Predictor::Oracle(Scheme scheme) {
  Predictor p;
  p.kind_ = Kind::kOracle;
  p.scheme_ = scheme;
  return p;
}

Predictor Predictor::Simplified() {
  Predictor p;
  p.kind_ = Kind::kSimplified;
  return p;
}

Predictor Predictor::FromPredictions(std::vector<Prediction> predictions, std::string origin) {
  Predictor p;
  p.kind_ = Kind::kFile;
  p.predictions_ = std::move(predictions);
  p.origin_ = std::move(origin);
  return p;
}

Predictor Predictor::FromFile(const std::string& path) {
  return FromPredictions(LoadPredictions(path), path);
}

Predictor Predictor::Parse(const std::string& spec, Scheme default_scheme) {
  if (spec == "oracle") return Oracle(default_scheme);
  if (spec.rfind("oracle:", 0) == 0) return Oracle(ParseScheme(spec.substr(7)));
  if (spec == "simplified") return Simplified();
  if (spec.rfind("file:", 0) == 0 && spec.size() > 5) return FromFile(spec.substr(5));
  throw ValidationError("unknown predictor '" + spec +
                        "' (expected oracle, oracle:mcf, oracle:ospf, simplified or file:<path>)");
}

std::string Predictor::Describe() const {
  switch (kind_) {
    case Kind::kOracle:
      return "oracle:" + ToString(scheme_);
    case Kind::kSimplified:
      return "simplified";
    case Kind::kFile:
      return "file:" + origin_;
  }
  return "unknown";
}

std::vector<ImpactRecord> Predictor::Evaluate(const NetworkInstance& instance,
                                              const RoutingResult& base,
                                              const std::vector<FailureScenario>& scenarios,
                                              int threads) const {
  switch (kind_) {
    case Kind::kOracle: {
      if (base.decision.scheme != scheme_) {
        throw ValidationError("predictor " + Describe() + " needs a " + ToString(scheme_) +
                              " base routing");
      }
      SweepOptions options;
      options.evaluator = Evaluator::kOracle;
      options.scheme = scheme_;
      options.threads = threads;
      return SweepImpacts(instance, base, scenarios, options);
    }
    case Kind::kSimplified: {
      SweepOptions options;
      options.evaluator = Evaluator::kSimplified;
      options.threads = threads;
      return SweepImpacts(instance, base, scenarios, options);
    }
    case Kind::kFile:
      break;
  }
  std::vector<Prediction> matched = MatchPredictions(predictions_, scenarios);
  std::vector<ImpactRecord> records;
  for (size_t i = 0; i < scenarios.size(); ++i) {
    ImpactRecord record;
    record.scenario_id = scenarios[i].id;
    record.links = scenarios[i].links;
    record.mlu_base = base.mlu;
    record.impact = matched[i].impact_pred;
    record.mlu_failed = record.impact * base.mlu;
    record.source = ImpactSource::kPredicted;
    records.push_back(std::move(record));
  }
  return records;
}

CriticalSet Predictor::Critical(const std::vector<FailureScenario>& scenarios,
                                const std::vector<ImpactRecord>& records) const {
  if (kind_ == Kind::kFile) {
    return SelectCriticalFromPredictions(MatchPredictions(predictions_, scenarios));
  }
  if (records.empty()) return {};
  return SelectCritical(records, Classify(records));
}

namespace {

long long McfRows(const NetworkInstance& instance, const FailureScenario& scenario) {
  std::vector<char> disabled = ArcMask(instance.topology, scenario.links);
  FlowBlock block(nullptr, instance.topology, CommoditiesBySource(instance.tm), disabled);
  long long arcs = instance.topology.num_arcs() - 2 * static_cast<long long>(scenario.links.size());
  return block.conservation_rows() + arcs;
}

// Highest mlu_failed; ties go to the smallest scenario id.
const ImpactRecord* Worst(const std::vector<const ImpactRecord*>& records) {
  const ImpactRecord* worst = nullptr;
  for (const ImpactRecord* r : records) {
    if (!worst || r->mlu_failed > worst->mlu_failed ||
        (r->mlu_failed == worst->mlu_failed && r->scenario_id < worst->scenario_id)) {
      worst = r;
    }
  }
  return worst;
}

ValidationReport Summarize(const NetworkInstance& instance, const RoutingResult& base,
                           const std::vector<FailureScenario>& scenarios,
                           const std::vector<const ImpactRecord*>& verified) {
  ValidationReport report;
  report.mlu_base = base.mlu;
  report.scenarios_total = static_cast<int>(scenarios.size());
  report.scenarios_evaluated = static_cast<int>(verified.size());
  const ImpactRecord* worst = Worst(verified);
  report.worst_scenario_id = worst->scenario_id;
  report.worst_mlu = worst->mlu_failed;
  report.worst_impact = worst->impact;
  for (const ImpactRecord* r : verified) report.verified_ids.push_back(r->scenario_id);

  if (base.decision.scheme == Scheme::kMcf) {
    std::vector<int> ids = report.verified_ids;
    std::sort(ids.begin(), ids.end());
    for (const FailureScenario& s : scenarios) {
      long long rows = McfRows(instance, s);
      report.lp_rows_full += rows;
      if (std::binary_search(ids.begin(), ids.end(), s.id)) report.lp_rows_pruned += rows;
    }
    report.lp_solves_full = report.scenarios_total;
    report.lp_solves_pruned = report.scenarios_evaluated;
  }
  return report;
}

}  // namespace

ValidationReport RobustValidate(const NetworkInstance& instance, const RoutingResult& base,
                                const std::vector<FailureScenario>& scenarios,
                                const Predictor& predictor, int k, int threads) {
  if (scenarios.empty()) throw ValidationError("robust validation needs at least one scenario");
  if (!(base.mlu > 0)) {
    throw ValidationError("robust validation needs a positive failure-free MLU");
  }
  std::vector<ImpactRecord> predicted = predictor.Evaluate(instance, base, scenarios, threads);
  CriticalSet critical = predictor.Critical(scenarios, predicted);

  // Predicted-critical scenarios first, then the rest by predicted impact.
  std::vector<size_t> order;
  std::vector<char> taken(scenarios.size(), 0);
  std::vector<int> index_of_id;
  for (size_t i = 0; i < scenarios.size(); ++i) {
    if (scenarios[i].id >= static_cast<int>(index_of_id.size())) {
      index_of_id.resize(scenarios[i].id + 1, -1);
    }
    index_of_id[scenarios[i].id] = static_cast<int>(i);
  }
  for (int id : critical.scenario_ids) {
    size_t i = index_of_id[id];
    order.push_back(i);
    taken[i] = 1;
  }
  std::vector<size_t> rest;
  for (size_t i = 0; i < scenarios.size(); ++i) {
    if (!taken[i]) rest.push_back(i);
  }
  std::stable_sort(rest.begin(), rest.end(), [&](size_t a, size_t b) {
    return predicted[a].impact > predicted[b].impact;
  });
  order.insert(order.end(), rest.begin(), rest.end());

  size_t budget = k > 0 ? static_cast<size_t>(k) : std::max<size_t>(1, critical.size());
  budget = std::min(budget, scenarios.size());
  order.resize(budget);

  // The oracle of the base scheme has already produced exact values.
  const bool exact = predictor.kind() == Predictor::Kind::kOracle &&
                     predictor.scheme() == base.decision.scheme;
  std::vector<ImpactRecord> checked(order.size());
  if (exact) {
    for (size_t j = 0; j < order.size(); ++j) checked[j] = predicted[order[j]];
  } else {
    internal::ParallelFor(order.size(), threads, [&](size_t j) {
      checked[j] = ImpactOracle(instance, base, scenarios[order[j]], base.decision.scheme);
    });
  }
  std::vector<const ImpactRecord*> verified;
  for (const ImpactRecord& r : checked) verified.push_back(&r);
  ValidationReport report = Summarize(instance, base, scenarios, verified);

  const ImpactRecord* top = nullptr;
  for (const ImpactRecord& r : predicted) {
    if (!top || r.impact > top->impact) top = &r;
  }
  report.predicted_worst_scenario_id = top->scenario_id;
  report.predicted_worst_impact = top->impact;
  return report;
}

ValidationReport RobustValidateExhaustive(const NetworkInstance& instance,
                                          const RoutingResult& base,
                                          const std::vector<FailureScenario>& scenarios,
                                          int threads) {
  if (scenarios.empty()) throw ValidationError("robust validation needs at least one scenario");
  SweepOptions options;
  options.scheme = base.decision.scheme;
  options.threads = threads;
  std::vector<ImpactRecord> records = SweepImpacts(instance, base, scenarios, options);
  std::vector<const ImpactRecord*> all;
  for (const ImpactRecord& r : records) all.push_back(&r);
  ValidationReport report = Summarize(instance, base, scenarios, all);
  report.predicted_worst_scenario_id = report.worst_scenario_id;
  report.predicted_worst_impact = report.worst_impact;
  return report;
}

nlohmann::json ToJson(const ValidationReport& report) {
  return {{"worst_scenario_id", report.worst_scenario_id},
          {"worst_mlu", report.worst_mlu},
          {"worst_impact", report.worst_impact},
          {"mlu_base", report.mlu_base},
          {"predicted_worst_scenario_id", report.predicted_worst_scenario_id},
          {"predicted_worst_impact", report.predicted_worst_impact},
          {"scenarios_total", report.scenarios_total},
          {"scenarios_evaluated", report.scenarios_evaluated},
          {"lp_solves_pruned", report.lp_solves_pruned},
          {"lp_solves_full", report.lp_solves_full},
          {"lp_rows_pruned", report.lp_rows_pruned},
          {"lp_rows_full", report.lp_rows_full},
          {"verified_ids", report.verified_ids}};
}

}  // namespace critnet
