#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "cegest/catalogue.hpp"
#include "cegest/estimators.hpp"
#include "cegest/graph_store.hpp"
#include "cegest/query.hpp"

namespace cegest {

struct QError {
  /// max(c/e, e/c); +inf when e = 0.
  double qerror;
  /// log10(qerror), negative for underestimates; -inf when e = 0.
  double signed_log;
};

/// Throws ValidationError for c = 0.
QError qerror(MatchCount true_count, const Rational& estimate);

struct QErrorRecord {
  std::string query_id;
  std::string template_name;
  std::string method;
  std::string ceg_kind;
  std::string hop;
  std::string aggr;
  std::size_t sketch_k = 1;
  MatchCount true_count = 0;
  Rational estimate;
  double qerror = 0;
  double signed_log = 0;
  double elapsed_ms = 0;
  bool failed = false;
  std::string error;

  bool zero_estimate() const { return !failed && true_count > 0 && estimate == 0; }
  bool usable() const { return !failed && true_count > 0 && estimate > 0; }
};

struct QErrorSummary {
  std::size_t n = 0;
  double p25 = 0;
  double p50 = 0;
  double p75 = 0;
  double trimmed_mean = 0;
  std::size_t zero_estimates = 0;
  std::size_t failed = 0;
  std::size_t invalid = 0;
};

/// Percentiles by linear interpolation at rank (n-1)p over the sorted values;
/// the trimmed mean drops the floor(n/10) values of largest magnitude, the
/// larger signed value first on ties.
QErrorSummary summarize(std::span<const double> signed_logs);
/// Summary over the usable records; zero estimates, failures and c = 0 rows are tallied separately.
QErrorSummary summarize(std::span<const QErrorRecord> records);

struct EvalConfig {
  CatalogueConfig catalogue;
  std::vector<MethodSpec> methods = all_methods();
  std::size_t sketch_k = 1;
  std::uint64_t sketch_seed = 0;
  MeanKind mean = MeanKind::kArithmetic;
};

struct QueryInfo {
  std::string id;
  std::string template_name;
  MatchCount true_count = 0;
  /// Number of (bottom, top) paths in the query's CEG_O, when it could be built.
  std::string ceg_o_paths;
};

struct EvalFailure {
  std::string query_id;
  std::string method;
  std::string error;
};

struct EvalResult {
  std::vector<QErrorRecord> records;
  std::vector<QueryInfo> queries;
  std::map<std::string, QErrorSummary> by_method;
  /// template -> method -> summary
  std::map<std::string, std::map<std::string, QErrorSummary>> by_template;
  std::vector<EvalFailure> failures;
  /// Queries where a P* record had a larger q-error than a heuristic on the same CEG kind.
  std::size_t pstar_violations = 0;
  std::size_t catalogue_bytes = 0;
  std::size_t catalogue_patterns = 0;
};

/// Builds one catalogue for the workload, counts every query once, and runs
/// every method on every query. A failing estimator yields a failed row.
EvalResult run_workload(const LabeledGraph& g, const std::vector<WorkloadEntry>& workload, const EvalConfig& config);

void write_records_csv(const std::vector<QErrorRecord>& records, std::ostream& out);
void write_summary_json(const EvalResult& result, const EvalConfig& config, std::ostream& out);

}  // namespace cegest
