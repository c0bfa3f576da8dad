#include "critnet/failure.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "critnet/errors.h"
#include "critnet/flow_lp.h"
#include "critnet/format.h"
#include "critnet/lp.h"
#include "csv_util.h"
#include "parallel.h"

namespace critnet {
namespace {

using LinkSets = std::vector<std::vector<LinkId>>;

// Depth-first over link ids visits the sets of each size in lexicographic
// order. A disconnecting set is not extended: adding links cannot reconnect.
void EnumerateFrom(const Topology& topology, int max_size, LinkId next,
                   std::vector<LinkId>& current, std::vector<LinkSets>& by_size) {
  for (LinkId l = next; l < topology.num_links(); ++l) {
    current.push_back(l);
    if (topology.IsConnected(current)) {
      by_size[current.size()].push_back(current);
      if (static_cast<int>(current.size()) < max_size) {
        EnumerateFrom(topology, max_size, l + 1, current, by_size);
      }
    }
    current.pop_back();
  }
}

void CheckBase(const RoutingResult& base) {
  if (!(base.mlu > 0)) {
    throw ValidationError("failure impact is undefined when the failure-free MLU is zero");
  }
}

void CheckScenario(const Topology& topology, const FailureScenario& scenario) {
  if (scenario.links.empty()) throw ValidationError("empty failure scenario");
  for (LinkId l : scenario.links) {
    if (l < 0 || l >= topology.num_links()) {
      throw ValidationError("scenario " + std::to_string(scenario.id) + " names unknown link " +
                            std::to_string(l));
    }
  }
  if (!topology.IsConnected(scenario.links)) {
    throw InfeasibleError("scenario " + std::to_string(scenario.id) + " (links " +
                          FormatLinks(scenario.links) + ") disconnects the topology");
  }
}

ImpactRecord MakeRecord(const FailureScenario& scenario, double mlu_base, double mlu_failed,
                        ImpactSource source) {
  ImpactRecord record;
  record.scenario_id = scenario.id;
  record.links = scenario.links;
  record.mlu_base = mlu_base;
  record.mlu_failed = mlu_failed;
  record.impact = mlu_failed / mlu_base;
  record.source = source;
  return record;
}

bool UsesAny(const Topology& topology, const std::vector<NodeId>& nodes,
             const std::vector<char>& link_failed) {
  for (size_t i = 0; i + 1 < nodes.size(); ++i) {
    std::optional<LinkId> link = topology.FindLink(nodes[i], nodes[i + 1]);
    if (link && link_failed[*link]) return true;
  }
  return false;
}

}  // namespace

std::vector<FailureScenario> EnumerateFailures(const Topology& topology, int max_failures) {
  if (max_failures < 1) throw ValidationError("max failures must be at least 1");
  std::vector<LinkSets> by_size(max_failures + 1);
  std::vector<LinkId> current;
  EnumerateFrom(topology, max_failures, 0, current, by_size);
  std::vector<FailureScenario> out;
  for (auto& sets : by_size) {
    for (auto& links : sets) {
      out.push_back({static_cast<int>(out.size()), std::move(links)});
    }
  }
  return out;
}

std::string FormatLinks(const std::vector<LinkId>& links) {
  std::string out;
  for (size_t i = 0; i < links.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(links[i]);
  }
  return out;
}

std::vector<LinkId> ParseLinks(const std::string& text) {
  std::vector<LinkId> links;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ';')) {
    size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != token.size() || value < 0) {
      throw ParseError("bad link list '" + text + "'");
    }
    links.push_back(value);
  }
  if (links.empty()) throw ParseError("empty link list");
  std::sort(links.begin(), links.end());
  if (std::adjacent_find(links.begin(), links.end()) != links.end()) {
    throw ParseError("duplicate link in '" + text + "'");
  }
  return links;
}

std::string ToString(ImpactSource source) {
  switch (source) {
    case ImpactSource::kOracleMcf:
      return "oracle-mcf";
    case ImpactSource::kOracleOspf:
      return "oracle-ospf";
    case ImpactSource::kSimplified:
      return "simplified";
    case ImpactSource::kPredicted:
      return "predicted";
  }
  return "unknown";
}

ImpactSource ParseImpactSource(const std::string& text) {
  for (ImpactSource source : {ImpactSource::kOracleMcf, ImpactSource::kOracleOspf,
                              ImpactSource::kSimplified, ImpactSource::kPredicted}) {
    if (text == ToString(source)) return source;
  }
  throw ParseError("unknown impact source '" + text + "'");
}

ImpactRecord ImpactOracle(const NetworkInstance& instance, const RoutingResult& base,
                          const FailureScenario& scenario, Scheme scheme) {
  CheckBase(base);
  CheckScenario(instance.topology, scenario);
  RoutingResult failed = SolveRouting(instance, scheme, scenario.links);
  return MakeRecord(scenario, base.mlu, failed.mlu,
                    scheme == Scheme::kMcf ? ImpactSource::kOracleMcf : ImpactSource::kOracleOspf);
}

ImpactRecord ImpactSimplified(const NetworkInstance& instance, const RoutingResult& base,
                              const FailureScenario& scenario) {
  CheckBase(base);
  const Topology& topology = instance.topology;
  CheckScenario(topology, scenario);
  if (!base.decision.decomposed()) {
    throw ValidationError("simplified reroute needs a path-decomposed base routing");
  }

  std::vector<char> link_failed(topology.num_links(), 0);
  for (LinkId l : scenario.links) link_failed[l] = 1;

  std::vector<double> background(topology.num_arcs(), 0.0);
  std::vector<Demand> affected;
  for (const DemandRouting& demand : base.decision.demands) {
    double blocked = 0.0;
    for (const PathFlow& path : demand.paths) {
      double volume = path.ratio * demand.volume;
      if (UsesAny(topology, path.nodes, link_failed)) {
        blocked += volume;
        continue;
      }
      for (size_t i = 0; i + 1 < path.nodes.size(); ++i) {
        background[*topology.FindArc(path.nodes[i], path.nodes[i + 1])] += volume;
      }
    }
    if (blocked > 0) affected.push_back({demand.src, demand.dst, blocked});
  }
  if (affected.empty()) {
    return MakeRecord(scenario, base.mlu, base.mlu, ImpactSource::kSimplified);
  }

  std::vector<Commodity> commodities = CommoditiesBySource(topology.num_nodes(), affected);
  std::vector<char> arc_disabled = ArcMask(topology, scenario.links);
  CheckReachable(topology, arc_disabled, commodities);

  lp::Problem problem;
  FlowBlock flows(&problem, topology, commodities, arc_disabled);
  lp::VarIndex mlu = problem.AddVariable(1.0);
  for (ArcId arc = 0; arc < topology.num_arcs(); ++arc) {
    if (arc_disabled[arc]) continue;
    lp::RowIndex row = problem.AddRow(lp::RowSense::kLessEqual, -background[arc]);
    flows.AddArcLoad(&problem, row, arc);
    problem.AddCoefficient(row, mlu, -topology.arc_capacity(arc));
  }
  lp::Solution solution = lp::Solve(problem);
  if (!solution.optimal()) {
    throw SolverError("reroute LP ended with status " + lp::ToString(solution.status));
  }

  std::vector<double> load = background;
  for (int k = 0; k < flows.num_commodities(); ++k) {
    std::vector<double> flow = flows.Flow(solution, k);
    for (ArcId arc = 0; arc < topology.num_arcs(); ++arc) load[arc] += flow[arc];
  }
  double mlu_failed = 0.0;
  for (ArcId arc = 0; arc < topology.num_arcs(); ++arc) {
    mlu_failed = std::max(mlu_failed, load[arc] / topology.arc_capacity(arc));
  }
  return MakeRecord(scenario, base.mlu, mlu_failed, ImpactSource::kSimplified);
}

std::vector<ImpactRecord> SweepImpacts(const NetworkInstance& instance, const RoutingResult& base,
                                       const std::vector<FailureScenario>& scenarios,
                                       const SweepOptions& options) {
  std::vector<ImpactRecord> records(scenarios.size());
  internal::ParallelFor(scenarios.size(), options.threads, [&](size_t i) {
    records[i] = options.evaluator == Evaluator::kOracle
                     ? ImpactOracle(instance, base, scenarios[i], options.scheme)
                     : ImpactSimplified(instance, base, scenarios[i]);
  });
  return records;
}

std::string ToString(Criticality criticality) {
  switch (criticality) {
    case Criticality::kWorst:
      return "worst";
    case Criticality::kSignificant:
      return "significant";
    case Criticality::kNormal:
      return "normal";
  }
  return "unknown";
}

Criticality ParseCriticality(const std::string& text) {
  std::string lower = text;
  std::transform(lower.begin(), lower.end(), lower.begin(), ::tolower);
  for (Criticality c : {Criticality::kWorst, Criticality::kSignificant, Criticality::kNormal}) {
    if (lower == ToString(c)) return c;
  }
  throw ParseError("unknown criticality label '" + text + "'");
}

std::vector<CriticalityLabel> Classify(const std::vector<double>& impacts) {
  if (impacts.empty()) throw ValidationError("cannot classify an empty scenario set");
  double max_impact = *std::max_element(impacts.begin(), impacts.end());
  if (!(max_impact > 0)) throw ValidationError("maximum impact must be positive");
  std::vector<CriticalityLabel> labels;
  labels.reserve(impacts.size());
  for (double impact : impacts) {
    CriticalityLabel label;
    label.ratio = impact / max_impact;
    label.type = label.ratio >= kWorstRatio         ? Criticality::kWorst
                 : label.ratio >= kSignificantRatio ? Criticality::kSignificant
                                                    : Criticality::kNormal;
    labels.push_back(label);
  }
  return labels;
}

std::vector<CriticalityLabel> Classify(const std::vector<ImpactRecord>& records) {
  std::vector<double> impacts;
  impacts.reserve(records.size());
  for (const ImpactRecord& r : records) impacts.push_back(r.impact);
  return Classify(impacts);
}

namespace {

CriticalSet Ranked(std::vector<std::pair<int, double>> entries) {
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  CriticalSet set;
  for (const auto& [id, score] : entries) {
    set.scenario_ids.push_back(id);
    set.scores.push_back(score);
  }
  return set;
}

}  // namespace

CriticalSet SelectCritical(const std::vector<ImpactRecord>& records,
                           const std::vector<CriticalityLabel>& labels) {
  if (records.size() != labels.size()) {
    throw ValidationError("record and label counts differ");
  }
  std::vector<std::pair<int, double>> entries;
  for (size_t i = 0; i < records.size(); ++i) {
    if (labels[i].type != Criticality::kNormal) {
      entries.emplace_back(records[i].scenario_id, records[i].impact);
    }
  }
  return Ranked(std::move(entries));
}

CriticalSet SelectCriticalFromPredictions(const std::vector<Prediction>& predictions,
                                          double min_prob) {
  std::vector<std::pair<int, double>> entries;
  for (const Prediction& p : predictions) {
    if (p.critical_prob >= min_prob) entries.emplace_back(p.scenario_id, p.impact_pred);
  }
  return Ranked(std::move(entries));
}

void WriteImpactCsv(const std::vector<ImpactRecord>& records,
                    const std::vector<CriticalityLabel>& labels, std::ostream& out) {
  if (!labels.empty() && labels.size() != records.size()) {
    throw ValidationError("record and label counts differ");
  }
  out << "scenario_id,links,mlu_base,mlu_failed,impact,label,source\n";
  for (size_t i = 0; i < records.size(); ++i) {
    const ImpactRecord& r = records[i];
    out << r.scenario_id << ',' << FormatLinks(r.links) << ',' << FormatDouble(r.mlu_base) << ','
        << FormatDouble(r.mlu_failed) << ',' << FormatDouble(r.impact) << ','
        << (labels.empty() ? "" : ToString(labels[i].type)) << ',' << ToString(r.source) << '\n';
  }
}

void SaveImpactCsv(const std::vector<ImpactRecord>& records,
                   const std::vector<CriticalityLabel>& labels, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  WriteImpactCsv(records, labels, out);
}

std::vector<ImpactRow> ReadImpactCsv(std::istream& in) {
  std::vector<ImpactRow> rows;
  std::string line;
  int line_number = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_number;
    if (internal::IsBlank(line)) continue;
    std::vector<std::string> fields = internal::SplitCsvLine(line);
    if (!header_seen) {
      header_seen = true;
      if (fields.size() != 7 || fields[0] != "scenario_id") {
        throw ParseError("expected impact CSV header", line_number);
      }
      continue;
    }
    if (fields.size() != 7) throw ParseError("expected 7 fields", line_number);
    ImpactRow row;
    try {
      size_t used = 0;
      row.record.scenario_id = std::stoi(fields[0], &used);
      if (used != fields[0].size()) throw ParseError("bad scenario id", line_number);
      row.record.links = ParseLinks(fields[1]);
      row.record.source = ParseImpactSource(fields[6]);
      if (!fields[5].empty()) row.label = ParseCriticality(fields[5]);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_number);
    } catch (const std::exception&) {
      throw ParseError("bad scenario id '" + fields[0] + "'", line_number);
    }
    if (!ParseDouble(fields[2], &row.record.mlu_base) ||
        !ParseDouble(fields[3], &row.record.mlu_failed) ||
        !ParseDouble(fields[4], &row.record.impact)) {
      throw ParseError("bad numeric field", line_number);
    }
    rows.push_back(std::move(row));
  }
  if (!header_seen) throw ParseError("impact CSV is empty");
  return rows;
}

std::vector<ImpactRow> LoadImpactCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open impact file '" + path + "'");
  return ReadImpactCsv(in);
}

}  // namespace critnet
