#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>

#include <CLI11.hpp>

#include "cegest/catalogue.hpp"
#include "cegest/ceg.hpp"
#include "cegest/errors.hpp"
#include "cegest/estimators.hpp"
#include "cegest/eval.hpp"
#include "cegest/graph_store.hpp"
#include "cegest/oracle.hpp"
#include "cegest/query.hpp"
#include "cegest/sketch.hpp"
#include "cegest/workload.hpp"

namespace fs = std::filesystem;
using namespace cegest;

namespace {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kMalformedInput = 3,
  kMissingStatistic = 4,
  kSketchBudget = 5,
};

struct RunConfig {
  std::string graph;
  std::string query;
  std::string workload;
  std::string templates;
  std::string catalogue;
  std::size_t h = 2;
  std::uint64_t seed = 0;
  std::size_t walk_budget = 1000;
  std::size_t sketch_k = 1;
  std::string methods = "all";
  std::string out;
  std::string dump_ceg;
  std::size_t per_template = 10;
  std::string mode = "uniform-labels";
  std::string mean = "arithmetic";
};

// Carries the stage name into the diagnostic.
struct StageError {
  std::string stage;
  int code;
  std::string message;
};

template <class F>
auto stage(const std::string& name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError& e) {
    throw StageError{name, kMalformedInput, e.what()};
  } catch (const ValidationError& e) {
    throw StageError{name, kMalformedInput, e.what()};
  } catch (const ConfigError& e) {
    throw StageError{name, kUsage, e.what()};
  } catch (const MissingStatisticError& e) {
    throw StageError{name, kMissingStatistic, e.what()};
  } catch (const SketchPlanError& e) {
    throw StageError{name, kSketchBudget, e.what()};
  } catch (const std::exception& e) {
    throw StageError{name, kFailure, e.what()};
  }
}

void require(const std::string& value, const std::string& flag) {
  if (value.empty()) throw StageError{"arguments", kUsage, flag + " is required"};
}

CatalogueConfig catalogue_config(const RunConfig& c) {
  CatalogueConfig cc;
  cc.h = c.h;
  cc.seed = c.seed;
  cc.walk_budget = c.walk_budget;
  cc.graph_identity = c.graph;
  return cc;
}

MeanKind mean_kind(const std::string& s) {
  if (s == "arithmetic") return MeanKind::kArithmetic;
  if (s == "geometric") return MeanKind::kGeometric;
  throw ConfigError("unknown mean '" + s + "'");
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

int cmd_build_catalogue(const RunConfig& c) {
  require(c.graph, "--graph");
  require(c.out, "--out");
  const auto g = stage("load graph", [&] { return load_graph_file(c.graph); });
  const auto cat = stage("build catalogue", [&] {
    if (c.workload.empty()) return build_exhaustive_catalogue(g, catalogue_config(c));
    std::vector<QueryGraph> queries;
    for (auto& e : load_workload_file(c.workload)) queries.push_back(std::move(e.query));
    return build_catalogue(g, queries, catalogue_config(c));
  });
  stage("write catalogue", [&] { save_catalogue_file(cat, c.out); });
  std::cout << "patterns " << cat.counts().size() << "\ndegree-stats " << cat.degree_stats().size()
            << "\nclosing-rates " << cat.closing_stats().size() << "\nseed " << c.seed << '\n';
  return kOk;
}

int cmd_estimate(const RunConfig& c) {
  require(c.query, "--query");
  const auto q = stage("load query", [&] { return load_query_file(c.query); });
  const auto methods = stage("methods", [&] { return parse_methods(c.methods); });
  const auto mean = stage("methods", [&] { return mean_kind(c.mean); });
  std::optional<LabeledGraph> g;
  if (!c.graph.empty()) g = stage("load graph", [&] { return load_graph_file(c.graph); });

  Catalogue cat;
  if (!c.catalogue.empty()) {
    cat = stage("load catalogue", [&] { return load_catalogue_file(c.catalogue); });
  } else {
    require(c.graph, "--graph or --catalogue");
    cat = stage("build catalogue", [&] { return build_catalogue(*g, {q}, catalogue_config(c)); });
  }

  std::optional<MatchCount> truth;
  const bool needs_truth = std::any_of(methods.begin(), methods.end(),
                                       [](const MethodSpec& m) { return m.type == MethodSpec::Type::kPStar; });
  if (needs_truth || c.sketch_k > 1) require(c.graph, "--graph (P* and sketches read the data)");
  if (g) truth = stage("oracle count", [&] { return count_hom(*g, q); });

  if (!c.dump_ceg.empty()) {
    stage("dump CEG", [&] {
      std::set<CegKind> kinds;
      for (const auto& m : methods) kinds.insert(m.ceg_kind);
      for (const auto kind : kinds) {
        const Ceg ceg = kind == CegKind::kO     ? build_ceg_o(q, cat)
                        : kind == CegKind::kOCR ? build_ceg_ocr(q, cat)
                                                : build_ceg_m(q, cat);
        const std::string path = c.dump_ceg + "." + to_string(kind) + ".dot";
        auto out = open_output(path);
        write_dot(ceg, out);
        std::cerr << "wrote " << path << '\n';
      }
    });
  }

  std::cout << "seed " << c.seed << '\n';
  if (truth) std::cout << "trueCount " << *truth << '\n';
  for (const auto& m : methods) {
    const Estimate e = stage("estimate " + m.id(), [&]() -> Estimate {
      if (m.type == MethodSpec::Type::kPStar) return estimate_pstar(q, cat, m.ceg_kind, *truth);
      if (c.sketch_k > 1) {
        SketchBase base;
        if (m.type == MethodSpec::Type::kHeuristic) base = {SketchBase::Type::kOptimistic, m.ceg_kind, m.choice};
        return estimate_with_sketch(q, *g, cat, c.sketch_k, base, c.seed).estimate;
      }
      if (m.type == MethodSpec::Type::kMolp) return estimate_molp(q, cat);
      return estimate_optimistic(q, cat, m.ceg_kind, m.choice, mean);
    });
    std::cout << m.id() << ' ' << to_string(e.value) << ' ' << to_decimal(e.value);
    if (e.overlapping_cycles) std::cout << " overlapping-cycles";
    std::cout << '\n';
  }
  return kOk;
}

int cmd_gen_workload(const RunConfig& c) {
  require(c.graph, "--graph");
  require(c.templates, "--templates");
  require(c.out, "--out");
  const auto g = stage("load graph", [&] { return load_graph_file(c.graph); });
  const auto templates = stage("load templates", [&] { return load_workload_file(c.templates); });
  InstantiationOptions options;
  options.mode = stage("arguments", [&] { return parse_instantiation_mode(c.mode); });
  const auto workload =
      stage("instantiate", [&] { return generate_workload(templates, g, c.per_template, c.seed, options); });
  stage("write workload", [&] {
    auto out = open_output(c.out);
    out << "# seed " << c.seed << '\n';
    write_workload(workload, out);
  });
  std::cout << "queries " << workload.size() << "\nseed " << c.seed << '\n';
  return kOk;
}

int cmd_oracle_count(const RunConfig& c) {
  require(c.graph, "--graph");
  require(c.query, "--query");
  const auto g = stage("load graph", [&] { return load_graph_file(c.graph); });
  const auto q = stage("load query", [&] { return load_query_file(c.query); });
  std::cout << stage("oracle count", [&] { return count_hom(g, q); }) << '\n';
  return kOk;
}

int cmd_eval(const RunConfig& c) {
  require(c.graph, "--graph");
  require(c.workload, "--workload");
  require(c.out, "--out");
  EvalConfig config;
  config.catalogue = catalogue_config(c);
  config.methods = stage("methods", [&] { return parse_methods(c.methods); });
  config.mean = stage("methods", [&] { return mean_kind(c.mean); });
  config.sketch_k = c.sketch_k;
  config.sketch_seed = c.seed;
  if (c.h < 2) throw StageError{"arguments", kUsage, "h must be at least 2"};
  if (c.sketch_k == 0) throw StageError{"arguments", kSketchBudget, "sketch K must be at least 1"};

  const auto g = stage("load graph", [&] { return load_graph_file(c.graph); });
  const auto workload = stage("load workload", [&] { return load_workload_file(c.workload); });
  const auto result = stage("evaluate", [&] { return run_workload(g, workload, config); });
  stage("write results", [&] {
    fs::create_directories(c.out);
    auto csv = open_output((fs::path(c.out) / "results.csv").string());
    write_records_csv(result.records, csv);
    auto json = open_output((fs::path(c.out) / "summary.json").string());
    write_summary_json(result, config, json);
  });
  std::cout << "queries " << result.queries.size() << "\nrecords " << result.records.size() << "\nfailures "
            << result.failures.size() << "\nseed " << c.seed << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cardinality estimation over labeled graphs"};
  app.set_help_flag("--help", "print this help");
  app.require_subcommand(1);
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.set_config("--config", "", "key=value file; flags override it");

  RunConfig c;
  app.add_option("--graph", c.graph, "edge list: src dst label per line");
  app.add_option("--query", c.query, "query file");
  app.add_option("--workload", c.workload, "workload file");
  app.add_option("--templates", c.templates, "workload of templates with ? labels");
  app.add_option("--catalogue", c.catalogue, "prebuilt catalogue (estimate)");
  app.add_option("--h", c.h, "largest pattern size in the catalogue")->check(CLI::Range(2, 32));
  app.add_option("--seed", c.seed, "seed for every random choice");
  app.add_option("--walk-budget", c.walk_budget, "walks per closing rate, 0 enumerates");
  app.add_option("--sketch-k", c.sketch_k, "bound sketch partition budget")->check(CLI::PositiveNumber);
  app.add_option("--methods", c.methods, "comma list of method ids or 'all'");
  app.add_option("--out", c.out, "output file or directory");
  app.add_option("--dump-ceg", c.dump_ceg, "write <prefix>.<kind>.dot per CEG kind used");
  app.add_option("--per-template", c.per_template, "instances per template");
  app.add_option("--mode", c.mode, "uniform-labels or edge-at-a-time");
  app.add_option("--mean", c.mean, "avg-aggr mean: arithmetic or geometric");

  auto* build = app.add_subcommand("build-catalogue", "build and save a statistics catalogue");
  auto* estimate = app.add_subcommand("estimate", "print estimates for one query");
  auto* gen = app.add_subcommand("gen-workload", "instantiate query templates");
  auto* count = app.add_subcommand("oracle-count", "print the exact match count");
  auto* eval = app.add_subcommand("eval", "run a workload and write results.csv and summary.json");
  for (auto* sub : {build, estimate, gen, count, eval}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*build) return cmd_build_catalogue(c);
    if (*estimate) return cmd_estimate(c);
    if (*gen) return cmd_gen_workload(c);
    if (*count) return cmd_oracle_count(c);
    return cmd_eval(c);
  } catch (const StageError& e) {
    std::cerr << "error [" << e.stage << "]: " << e.message << '\n';
    return e.code;
  }
}
