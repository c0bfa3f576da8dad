#include "cli.h"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "critnet/errors.h"
#include "critnet/failure.h"
#include "critnet/format.h"
#include "critnet/graphenc.h"
#include "critnet/netmodel.h"
#include "critnet/robustdesign.h"
#include "critnet/routing.h"
#include "json.hpp"

namespace critnet {
namespace {

struct RunConfig {
  std::string topology;
  std::string tm;
  double tm_total = 0.0;
  uint64_t seed = 0;
  std::string routing = "mcf";
  int f = 2;
  std::string predictor = "oracle";
  std::string out_dir = ".";
  int threads = 0;
  bool prune = false;

  // gen
  int nodes = 0;
  double alpha = 0.4;
  double beta = 0.6;
  int min_degree = 2;
  double capacity_base = 0.0;

  // impact / encode
  std::string evaluator = "oracle";
  bool no_labels = false;

  // critical
  std::string impact_file;

  // validate / upgrade / te
  int k = 0;
  bool exhaustive = false;
  bool full = false;
  double integer_step = 0.0;
  std::string certify = "auto";
  bool no_cap = false;
  int max_iterations = 20;

  // report
  std::vector<std::string> impact_files;
  std::string oracle_file;
  std::string simplified_file;
  std::vector<std::string> plan_files;
};

const std::vector<std::string> kSchemes = {"mcf", "ospf"};

std::filesystem::path OutPath(const RunConfig& config, const std::string& name) {
  std::filesystem::create_directories(config.out_dir);
  return std::filesystem::path(config.out_dir) / name;
}

std::ofstream OpenOut(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void WriteJson(const std::filesystem::path& path, const nlohmann::json& json) {
  std::ofstream out = OpenOut(path);
  out << json.dump(2) << '\n';
}

nlohmann::json ReadJson(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

Topology LoadConfiguredTopology(const RunConfig& config) {
  Topology topology = LoadTopology(config.topology);
  if (config.prune) topology = PruneDegreeOne(topology).topology;
  return topology;
}

NetworkInstance LoadInstance(const RunConfig& config) {
  Topology topology = LoadConfiguredTopology(config);
  TrafficMatrix tm = config.tm.empty()
                         ? GenerateGravityTm(topology, config.tm_total, config.seed)
                         : LoadTrafficMatrix(config.tm, topology.num_nodes());
  return NetworkInstance(std::move(topology), std::move(tm), config.seed);
}

// ---------------------------------------------------------------------------
// Subcommands

int RunGen(const RunConfig& config, std::ostream& out) {
  WaxmanParams params;
  params.alpha = config.alpha;
  params.beta = config.beta;
  params.min_degree = config.min_degree;
  Topology topology = GenerateRandomTopology(config.nodes, params, config.seed);
  if (config.capacity_base > 0) {
    topology = AssignRandomCapacities(topology, config.capacity_base, config.seed + 1);
  }
  double total = config.tm_total > 0 ? config.tm_total : 1.0;
  TrafficMatrix tm = GenerateGravityTm(topology, total, config.seed + 2);
  SaveTopology(topology, OutPath(config, "topology.txt").string());
  SaveTrafficMatrix(tm, OutPath(config, "tm.txt").string());
  out << "generated " << topology.num_nodes() << " nodes, " << topology.num_links()
      << " links, " << tm.demands().size() << " demands\n";
  return kExitOk;
}

int RunRoute(const RunConfig& config, std::ostream& out) {
  NetworkInstance instance = LoadInstance(config);
  RoutingResult result = SolveRouting(instance, ParseScheme(config.routing));
  SaveRouting(result.decision, OutPath(config, "routing.json").string());

  const Topology& topology = instance.topology;
  LinkLoadProfile loads = ComputeLoads(topology, result.decision);
  std::ofstream csv = OpenOut(OutPath(config, "loads.csv"));
  csv << "link,u,v,capacity,load,utilization\n";
  for (LinkId l = 0; l < topology.num_links(); ++l) {
    const Link& link = topology.link(l);
    csv << l << ',' << link.u << ',' << link.v << ',' << FormatDouble(link.capacity) << ','
        << FormatDouble(loads.link_load[l]) << ',' << FormatDouble(loads.link_utilization[l])
        << '\n';
  }
  out << "mlu " << FormatDouble(result.mlu) << '\n';
  return kExitOk;
}

int RunFailures(const RunConfig& config, std::ostream& out) {
  Topology topology = LoadConfiguredTopology(config);
  std::vector<FailureScenario> scenarios = EnumerateFailures(topology, config.f);
  std::ofstream csv = OpenOut(OutPath(config, "scenarios.csv"));
  csv << "scenario_id,links\n";
  for (const FailureScenario& s : scenarios) csv << s.id << ',' << FormatLinks(s.links) << '\n';
  out << scenarios.size() << " scenarios\n";
  return kExitOk;
}

void PrintLabelCounts(const std::vector<CriticalityLabel>& labels, std::ostream& out) {
  std::map<Criticality, int> counts;
  for (const CriticalityLabel& label : labels) ++counts[label.type];
  out << "worst " << counts[Criticality::kWorst] << ", significant "
      << counts[Criticality::kSignificant] << ", normal " << counts[Criticality::kNormal]
      << '\n';
}

int RunImpact(const RunConfig& config, std::ostream& out) {
  NetworkInstance instance = LoadInstance(config);
  std::vector<FailureScenario> scenarios = EnumerateFailures(instance.topology, config.f);
  SweepOptions options;
  options.scheme = ParseScheme(config.routing);
  options.evaluator = config.evaluator == "simplified" ? Evaluator::kSimplified : Evaluator::kOracle;
  options.threads = config.threads;
  // The simplified reroute starts from the optimal routing's paths.
  Scheme base_scheme = options.evaluator == Evaluator::kSimplified ? Scheme::kMcf : options.scheme;
  RoutingResult base = SolveRouting(instance, base_scheme);
  std::vector<ImpactRecord> records = SweepImpacts(instance, base, scenarios, options);
  std::vector<CriticalityLabel> labels;
  if (!records.empty()) labels = Classify(records);
  SaveImpactCsv(records, labels, OutPath(config, "impact.csv").string());
  out << records.size() << " scenarios evaluated, ";
  PrintLabelCounts(labels, out);
  return kExitOk;
}

int RunCritical(const RunConfig& config, std::ostream& out) {
  std::vector<ImpactRow> rows = LoadImpactCsv(config.impact_file);
  std::vector<ImpactRecord> records;
  for (const ImpactRow& row : rows) records.push_back(row.record);
  if (records.empty()) throw ValidationError("impact file has no scenarios");
  std::vector<CriticalityLabel> labels = Classify(records);
  SaveImpactCsv(records, labels, OutPath(config, "labels.csv").string());

  CriticalSet critical = SelectCritical(records, labels);
  std::map<int, size_t> index;
  for (size_t i = 0; i < records.size(); ++i) index[records[i].scenario_id] = i;
  std::ofstream csv = OpenOut(OutPath(config, "critical.csv"));
  csv << "rank,scenario_id,links,impact,ratio,label\n";
  for (size_t r = 0; r < critical.size(); ++r) {
    size_t i = index.at(critical.scenario_ids[r]);
    csv << r + 1 << ',' << records[i].scenario_id << ',' << FormatLinks(records[i].links) << ','
        << FormatDouble(records[i].impact) << ',' << FormatDouble(labels[i].ratio) << ','
        << ToString(labels[i].type) << '\n';
  }
  for (size_t i = 0; i < records.size(); ++i) {
    out << records[i].scenario_id << ' ' << ToString(labels[i].type) << '\n';
  }
  out << critical.size() << " critical of " << records.size() << ": ";
  PrintLabelCounts(labels, out);
  return kExitOk;
}

int RunEncode(const RunConfig& config, std::ostream& out) {
  NetworkInstance instance = LoadInstance(config);
  std::vector<FailureScenario> scenarios = EnumerateFailures(instance.topology, config.f);
  Scheme scheme = ParseScheme(config.routing);
  RoutingResult base = SolveRouting(instance, scheme);
  InputGraph graph = EncodeInstance(instance, base.decision, scenarios);
  SaveGraph(graph, OutPath(config, "graph.json").string());
  out << graph.nodes.size() << " nodes, " << graph.edges.size() << " edges, "
      << graph.scenarios.size() << " failure nodes\n";
  if (config.no_labels) return kExitOk;

  SweepOptions options;
  options.scheme = scheme;
  options.threads = config.threads;
  std::vector<ImpactRecord> records = SweepImpacts(instance, base, scenarios, options);
  std::vector<CriticalityLabel> labels;
  if (!records.empty()) labels = Classify(records);
  SaveImpactCsv(records, labels, OutPath(config, "labels.csv").string());
  return kExitOk;
}

int RunValidate(const RunConfig& config, std::ostream& out) {
  NetworkInstance instance = LoadInstance(config);
  std::vector<FailureScenario> scenarios = EnumerateFailures(instance.topology, config.f);
  Scheme scheme = ParseScheme(config.routing);
  RoutingResult base = SolveRouting(instance, scheme);
  ValidationReport report;
  nlohmann::json json;
  if (config.exhaustive) {
    report = RobustValidateExhaustive(instance, base, scenarios, config.threads);
    json = ToJson(report);
    json["predictor"] = "exhaustive";
  } else {
    Predictor predictor = Predictor::Parse(config.predictor, scheme);
    report = RobustValidate(instance, base, scenarios, predictor, config.k, config.threads);
    json = ToJson(report);
    json["predictor"] = predictor.Describe();
  }
  json["routing"] = ToString(scheme);
  WriteJson(OutPath(config, "validation.json"), json);
  out << "worst scenario " << report.worst_scenario_id << ", mlu "
      << FormatDouble(report.worst_mlu) << ", impact " << FormatDouble(report.worst_impact)
      << " (" << report.scenarios_evaluated << " of " << report.scenarios_total
      << " scenarios verified)\n";
  return kExitOk;
}

int RunUpgrade(const RunConfig& config, std::ostream& out) {
  NetworkInstance instance = LoadInstance(config);
  std::vector<FailureScenario> scenarios = EnumerateFailures(instance.topology, config.f);
  UpgradeOptions options;
  options.integer_step = config.integer_step;
  options.threads = config.threads;
  if (config.certify == "always") options.certify = UpgradeOptions::Certify::kAlways;
  if (config.certify == "never") options.certify = UpgradeOptions::Certify::kNever;

  UpgradePlan plan;
  nlohmann::json json;
  if (config.full) {
    plan = UpgradeOptimizeFull(instance, scenarios, options);
    json = ToJson(plan);
    json["predictor"] = "full";
  } else {
    Predictor predictor = Predictor::Parse(config.predictor, Scheme::kMcf);
    plan = UpgradeOptimize(instance, scenarios, predictor, options);
    json = ToJson(plan);
    json["predictor"] = predictor.Describe();
  }
  std::ofstream csv = OpenOut(OutPath(config, "upgrade.csv"));
  WriteUpgradeCsv(plan, csv);
  WriteJson(OutPath(config, "upgrade.json"), json);
  out << "cost " << FormatDouble(plan.cost) << " (" << plan.constrained_ids.size()
      << " constrained scenarios, worst mlu " << FormatDouble(plan.worst_mlu) << ")\n";
  return kExitOk;
}

int RunTe(const RunConfig& config, std::ostream& out) {
  NetworkInstance instance = LoadInstance(config);
  std::vector<FailureScenario> scenarios = EnumerateFailures(instance.topology, config.f);
  TeOptions options;
  options.cap_critical = !config.no_cap;
  options.max_iterations = config.max_iterations;
  options.threads = config.threads;

  TePlan plan;
  nlohmann::json json;
  if (config.full) {
    plan = TeSolveFull(instance, scenarios, options);
    json = ToJson(instance.topology, plan);
    json["predictor"] = "full";
  } else {
    Predictor predictor = Predictor::Parse(config.predictor, Scheme::kMcf);
    plan = TeRun(instance, scenarios, predictor, options);
    json = ToJson(instance.topology, plan);
    json["predictor"] = predictor.Describe();
  }
  WriteJson(OutPath(config, "te.json"), json);
  out << "objective " << FormatDouble(plan.objective) << ", worst mlu "
      << FormatDouble(plan.worst_mlu) << ", " << ToString(plan.certification) << ", "
      << plan.congestion_rows << " of " << plan.full_congestion_rows << " congestion rows\n";
  return config.full || plan.certification == Certification::kAll ? kExitOk : kExitInvalid;
}

// Fig. 2 style distributions, simplified-vs-oracle errors and constraint
// counts, all from files written by the other subcommands.
int RunReport(const RunConfig& config, std::ostream& out) {
  if (config.impact_files.empty() && config.oracle_file.empty() && config.plan_files.empty()) {
    throw CLI::ValidationError("report needs --impact, --oracle/--simplified or --plan");
  }
  if (!config.impact_files.empty()) {
    std::ofstream dist = OpenOut(OutPath(config, "impact_distribution.csv"));
    std::ofstream summary = OpenOut(OutPath(config, "impact_summary.csv"));
    dist << "file,rank,scenario_id,impact,ratio,label\n";
    summary << "file,scenarios,worst,significant,normal,critical_fraction\n";
    for (const std::string& file : config.impact_files) {
      std::vector<ImpactRecord> records;
      for (const ImpactRow& row : LoadImpactCsv(file)) records.push_back(row.record);
      if (records.empty()) throw ValidationError(file + " has no scenarios");
      std::vector<CriticalityLabel> labels = Classify(records);
      std::vector<size_t> order(records.size());
      for (size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::stable_sort(order.begin(), order.end(),
                       [&](size_t a, size_t b) { return labels[a].ratio > labels[b].ratio; });
      std::map<Criticality, int> counts;
      for (size_t r = 0; r < order.size(); ++r) {
        size_t i = order[r];
        ++counts[labels[i].type];
        dist << file << ',' << r + 1 << ',' << records[i].scenario_id << ','
             << FormatDouble(records[i].impact) << ',' << FormatDouble(labels[i].ratio) << ','
             << ToString(labels[i].type) << '\n';
      }
      double fraction =
          static_cast<double>(counts[Criticality::kWorst] + counts[Criticality::kSignificant]) /
          records.size();
      summary << file << ',' << records.size() << ',' << counts[Criticality::kWorst] << ','
              << counts[Criticality::kSignificant] << ',' << counts[Criticality::kNormal] << ','
              << FormatDouble(fraction) << '\n';
      out << file << ": critical fraction " << FormatDouble(fraction) << '\n';
    }
  }
  if (!config.oracle_file.empty()) {
    if (config.simplified_file.empty()) {
      throw CLI::ValidationError("--oracle needs --simplified");
    }
    std::map<int, ImpactRecord> oracle;
    for (const ImpactRow& row : LoadImpactCsv(config.oracle_file)) {
      oracle[row.record.scenario_id] = row.record;
    }
    std::ofstream csv = OpenOut(OutPath(config, "simplified_error.csv"));
    csv << "scenario_id,links,oracle,simplified,rel_error\n";
    int total = 0;
    int within = 0;
    for (const ImpactRow& row : LoadImpactCsv(config.simplified_file)) {
      auto it = oracle.find(row.record.scenario_id);
      if (it == oracle.end()) {
        throw ValidationError("scenario " + std::to_string(row.record.scenario_id) +
                              " is missing from " + config.oracle_file);
      }
      double exact = it->second.impact;
      double error = std::abs(row.record.impact - exact) / exact;
      ++total;
      if (error < 0.1) ++within;
      csv << row.record.scenario_id << ',' << FormatLinks(row.record.links) << ','
          << FormatDouble(exact) << ',' << FormatDouble(row.record.impact) << ','
          << FormatDouble(error) << '\n';
    }
    out << within << " of " << total << " scenarios within 10% of the oracle\n";
  }
  if (!config.plan_files.empty()) {
    std::ofstream csv = OpenOut(OutPath(config, "constraint_counts.csv"));
    csv << "file,kind,pruned_rows,full_rows,ratio\n";
    for (const std::string& file : config.plan_files) {
      nlohmann::json json = ReadJson(file);
      std::string kind;
      long long pruned = 0;
      long long full = 0;
      if (json.contains("lp_rows_pruned")) {
        kind = "validate";
        pruned = json.at("lp_rows_pruned");
        full = json.at("lp_rows_full");
      } else if (json.contains("lp_pruned")) {
        kind = "upgrade";
        pruned = json.at("lp_pruned").at("rows");
        full = json.at("lp_full").at("rows");
      } else if (json.contains("congestion_rows")) {
        kind = "te";
        pruned = json.at("congestion_rows");
        full = json.at("full_congestion_rows");
      } else {
        throw ParseError(file + ": not a validate, upgrade or te output");
      }
      double ratio = full > 0 ? static_cast<double>(pruned) / full : 0.0;
      csv << file << ',' << kind << ',' << pruned << ',' << full << ',' << FormatDouble(ratio)
          << '\n';
      out << file << ": " << pruned << " of " << full << " rows\n";
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// Flags

void AddOutput(CLI::App* sub, RunConfig* config) {
  sub->add_option("--out-dir", config->out_dir, "Directory for output files")
      ->envname("CRITNET_OUT_DIR");
  sub->add_option("--threads", config->threads, "Scenario sweep threads (0 = all cores)")
      ->check(CLI::NonNegativeNumber);
}

void AddInstance(CLI::App* sub, RunConfig* config) {
  sub->add_option("--topology", config->topology, "Edge list or GraphML file")
      ->required()
      ->check(CLI::ExistingFile);
  CLI::Option* seed = sub->add_option("--seed", config->seed, "Generator seed");
  CLI::Option* tm = sub->add_option("--tm", config->tm, "Traffic matrix file (src dst volume)")
                        ->check(CLI::ExistingFile);
  CLI::Option* total = sub->add_option("--tm-total", config->tm_total,
                                       "Generate a gravity matrix with this total volume")
                           ->check(CLI::PositiveNumber)
                           ->needs(seed);
  tm->excludes(total);
  // Pruning renumbers nodes, so it only combines with a generated matrix.
  sub->add_flag("--prune-degree-one", config->prune, "Strip degree-one nodes first")
      ->excludes(tm);
  sub->callback([tm, total] {
    if (tm->count() == 0 && total->count() == 0) {
      throw CLI::RequiredError("--tm or --tm-total");
    }
  });
}

void AddRouting(CLI::App* sub, RunConfig* config) {
  sub->add_option("--routing", config->routing, "Routing scheme")
      ->check(CLI::IsMember(kSchemes))
      ->capture_default_str();
}

void AddFailures(CLI::App* sub, RunConfig* config) {
  sub->add_option("--f", config->f, "Maximum simultaneous link failures")
      ->check(CLI::Range(1, 8))
      ->capture_default_str();
}

void AddPredictor(CLI::App* sub, RunConfig* config) {
  sub->add_option("--predictor", config->predictor,
                  "oracle, oracle:mcf, oracle:ospf, simplified or file:<predictions.csv>")
      ->capture_default_str();
}

}  // namespace

int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  CLI::App app{"Failure impact analysis and failure-aware network design", "critnet"};
  app.set_config("--config", "", "Read long options from a key = value file");
  app.require_subcommand(1, 1);

  CLI::App* gen = app.add_subcommand("gen", "Generate a random topology and traffic matrix");
  gen->add_option("--nodes", config.nodes, "Node count")->required()->check(CLI::Range(2, 100000));
  gen->add_option("--seed", config.seed, "Generator seed")->required();
  gen->add_option("--alpha", config.alpha, "Waxman alpha")->capture_default_str();
  gen->add_option("--beta", config.beta, "Waxman beta")->capture_default_str();
  gen->add_option("--min-degree", config.min_degree, "Minimum node degree")->capture_default_str();
  gen->add_option("--capacity-base", config.capacity_base,
                  "Draw capacities from {1/4,1/2,3/4,1} x base (default: unit capacities)");
  gen->add_option("--tm-total", config.tm_total, "Total gravity demand (default 1)")
      ->check(CLI::PositiveNumber);
  AddOutput(gen, &config);

  CLI::App* route = app.add_subcommand("route", "Route the traffic matrix");
  AddInstance(route, &config);
  AddRouting(route, &config);
  AddOutput(route, &config);

  CLI::App* failures = app.add_subcommand("failures", "Enumerate connected failure scenarios");
  failures->add_option("--topology", config.topology, "Edge list or GraphML file")
      ->required()
      ->check(CLI::ExistingFile);
  failures->add_flag("--prune-degree-one", config.prune, "Strip degree-one nodes first");
  AddFailures(failures, &config);
  AddOutput(failures, &config);

  CLI::App* impact = app.add_subcommand("impact", "Failure impact of every scenario");
  AddInstance(impact, &config);
  AddRouting(impact, &config);
  AddFailures(impact, &config);
  impact->add_option("--evaluator", config.evaluator, "oracle or simplified")
      ->check(CLI::IsMember({"oracle", "simplified"}))
      ->capture_default_str();
  AddOutput(impact, &config);

  CLI::App* critical = app.add_subcommand("critical", "Label an impact table and rank the critical set");
  critical->add_option("--impact", config.impact_file, "Impact CSV")
      ->required()
      ->check(CLI::ExistingFile);
  AddOutput(critical, &config);

  CLI::App* encode = app.add_subcommand("encode", "Write the input graph and label CSV");
  AddInstance(encode, &config);
  AddRouting(encode, &config);
  AddFailures(encode, &config);
  encode->add_flag("--no-labels", config.no_labels, "Skip the oracle labels");
  AddOutput(encode, &config);

  CLI::App* validate = app.add_subcommand("validate", "Worst-case MLU over the failure set");
  AddInstance(validate, &config);
  AddRouting(validate, &config);
  AddFailures(validate, &config);
  AddPredictor(validate, &config);
  validate->add_option("--k", config.k, "Scenarios to verify (0 = the predicted critical set)")
      ->check(CLI::NonNegativeNumber);
  validate->add_flag("--exhaustive", config.exhaustive, "Evaluate every scenario exactly");
  AddOutput(validate, &config);

  CLI::App* upgrade = app.add_subcommand("upgrade", "Cheapest capacity additions");
  AddInstance(upgrade, &config);
  AddFailures(upgrade, &config);
  AddPredictor(upgrade, &config);
  upgrade->add_flag("--full", config.full, "Constrain every scenario");
  upgrade->add_option("--integer-step", config.integer_step, "Round additions up to this step")
      ->check(CLI::NonNegativeNumber);
  upgrade->add_option("--certify", config.certify, "auto, always or never")
      ->check(CLI::IsMember({"auto", "always", "never"}))
      ->capture_default_str();
  AddOutput(upgrade, &config);

  CLI::App* te = app.add_subcommand("te", "Failure-aware routing with link protection");
  AddInstance(te, &config);
  AddFailures(te, &config);
  AddPredictor(te, &config);
  te->add_flag("--full", config.full, "Minimize the worst case over every scenario");
  te->add_flag("--no-cap", config.no_cap, "Allow critical-scenario MLU above 1");
  te->add_option("--max-iterations", config.max_iterations, "Certification rounds")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  AddOutput(te, &config);

  CLI::App* report = app.add_subcommand("report", "Aggregate CSVs from earlier outputs");
  report->add_option("--impact", config.impact_files, "Impact CSVs for the distribution table")
      ->check(CLI::ExistingFile);
  report->add_option("--oracle", config.oracle_file, "Oracle impact CSV")
      ->check(CLI::ExistingFile);
  report->add_option("--simplified", config.simplified_file, "Simplified impact CSV")
      ->check(CLI::ExistingFile);
  report->add_option("--plan", config.plan_files, "validation.json, upgrade.json or te.json")
      ->check(CLI::ExistingFile);
  AddOutput(report, &config);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) return RunGen(config, out);
    if (route->parsed()) return RunRoute(config, out);
    if (failures->parsed()) return RunFailures(config, out);
    if (impact->parsed()) return RunImpact(config, out);
    if (critical->parsed()) return RunCritical(config, out);
    if (encode->parsed()) return RunEncode(config, out);
    if (validate->parsed()) return RunValidate(config, out);
    if (upgrade->parsed()) return RunUpgrade(config, out);
    if (te->parsed()) return RunTe(config, out);
    if (report->parsed()) return RunReport(config, out);
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace critnet
