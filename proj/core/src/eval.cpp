#include "cegest/eval.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "cegest/errors.hpp"
#include "cegest/oracle.hpp"
#include "cegest/sketch.hpp"

namespace cegest {

using json = nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_double(double d) {
  if (std::isnan(d)) return "";
  if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, d);
  return std::string(buf, ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

double percentile(const std::vector<double>& sorted, double p) {
  const double idx = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(idx));
  const auto hi = static_cast<std::size_t>(std::ceil(idx));
  return sorted[lo] + (sorted[hi] - sorted[lo]) * (idx - static_cast<double>(lo));
}

json summary_json(const QErrorSummary& s) {
  return {{"n", s.n},
          {"p25", s.n ? json(s.p25) : json(nullptr)},
          {"p50", s.n ? json(s.p50) : json(nullptr)},
          {"p75", s.n ? json(s.p75) : json(nullptr)},
          {"trimmedMean", s.n ? json(s.trimmed_mean) : json(nullptr)},
          {"zeroEstimates", s.zero_estimates},
          {"failed", s.failed},
          {"invalid", s.invalid}};
}

Estimate run_method(const MethodSpec& m, const QueryGraph& q, const LabeledGraph& g, const Catalogue& cat,
                    MatchCount truth, const EvalConfig& config, std::size_t& sketch_k) {
  sketch_k = 1;
  const bool sketched = config.sketch_k > 1 && m.type != MethodSpec::Type::kPStar;
  if (sketched) {
    SketchBase base;
    if (m.type == MethodSpec::Type::kHeuristic) {
      base.type = SketchBase::Type::kOptimistic;
      base.ceg_kind = m.ceg_kind;
      base.choice = m.choice;
    }
    auto r = estimate_with_sketch(q, g, cat, config.sketch_k, base, config.sketch_seed);
    sketch_k = r.plan.k;
    return std::move(r.estimate);
  }
  switch (m.type) {
    case MethodSpec::Type::kHeuristic: return estimate_optimistic(q, cat, m.ceg_kind, m.choice, config.mean);
    case MethodSpec::Type::kPStar: return estimate_pstar(q, cat, m.ceg_kind, truth);
    case MethodSpec::Type::kMolp: return estimate_molp(q, cat);
  }
  throw std::logic_error("unhandled method type");
}

// P* must not lose to any heuristic on the same CEG kind.
std::size_t count_pstar_violations(const std::vector<QErrorRecord>& rows, std::size_t begin, std::size_t end) {
  std::size_t violations = 0;
  for (std::size_t i = begin; i < end; ++i) {
    const auto& p = rows[i];
    if (p.failed || p.aggr != "pstar" || p.true_count == 0) continue;
    const auto pq = exact_qerror(p.estimate, p.true_count);
    for (std::size_t j = begin; j < end; ++j) {
      const auto& h = rows[j];
      if (h.failed || h.aggr == "pstar" || h.ceg_kind != p.ceg_kind || h.hop.empty() || h.sketch_k != 1) continue;
      const auto hq = exact_qerror(h.estimate, h.true_count);
      if (hq && (!pq || *hq < *pq)) {
        ++violations;
        break;
      }
    }
  }
  return violations;
}

}  // namespace

QError qerror(MatchCount true_count, const Rational& estimate) {
  if (true_count == 0) throw ValidationError("q-error is undefined for a true count of 0");
  if (estimate < 0) throw ValidationError("negative estimate");
  if (estimate == 0) return {kInf, -kInf};
  const Rational c(true_count);
  const bool under = estimate < c;
  const Rational ratio = under ? c / estimate : estimate / c;
  const double magnitude = log2_of(ratio) / std::log2(10.0);
  return {to_double(ratio), under ? -magnitude : magnitude};
}

QErrorSummary summarize(std::span<const double> signed_logs) {
  QErrorSummary s;
  s.n = signed_logs.size();
  if (s.n == 0) {
    s.p25 = s.p50 = s.p75 = s.trimmed_mean = kNaN;
    return s;
  }
  std::vector<double> sorted(signed_logs.begin(), signed_logs.end());
  std::sort(sorted.begin(), sorted.end());
  s.p25 = percentile(sorted, 0.25);
  s.p50 = percentile(sorted, 0.50);
  s.p75 = percentile(sorted, 0.75);

  std::vector<double> by_magnitude = sorted;
  std::stable_sort(by_magnitude.begin(), by_magnitude.end(), [](double a, double b) {
    if (std::abs(a) != std::abs(b)) return std::abs(a) > std::abs(b);
    return a > b;
  });
  const std::size_t drop = s.n / 10;
  const double sum = std::accumulate(by_magnitude.begin() + static_cast<std::ptrdiff_t>(drop), by_magnitude.end(), 0.0);
  s.trimmed_mean = sum / static_cast<double>(s.n - drop);
  return s;
}

QErrorSummary summarize(std::span<const QErrorRecord> records) {
  std::vector<double> values;
  std::size_t zero = 0, failed = 0, invalid = 0;
  for (const auto& r : records) {
    if (r.failed) {
      ++failed;
    } else if (r.true_count == 0) {
      ++invalid;
    } else if (r.estimate == 0) {
      ++zero;
    } else {
      values.push_back(r.signed_log);
    }
  }
  QErrorSummary s = summarize(std::span<const double>(values));
  s.zero_estimates = zero;
  s.failed = failed;
  s.invalid = invalid;
  return s;
}

EvalResult run_workload(const LabeledGraph& g, const std::vector<WorkloadEntry>& workload, const EvalConfig& config) {
  EvalResult result;
  Catalogue cat = build_catalogue(g, {}, config.catalogue);
  std::unordered_map<std::string, MatchCount> truth_cache;

  for (const auto& entry : workload) {
    const QueryGraph& q = entry.query;
    QueryInfo info{entry.id, entry.template_name, 0, ""};
    std::string stats_error;
    try {
      extend_catalogue(cat, g, q, config.catalogue);
    } catch (const std::exception& e) {
      stats_error = std::string("catalogue: ") + e.what();
    }
    const std::string text = q.to_string();
    if (const auto it = truth_cache.find(text); it != truth_cache.end()) {
      info.true_count = it->second;
    } else {
      try {
        info.true_count = count_hom(g, q);
        truth_cache.emplace(text, info.true_count);
      } catch (const std::exception& e) {
        stats_error = std::string("oracle: ") + e.what();
      }
    }
    if (stats_error.empty()) {
      try {
        BigInt paths = 0;
        for (const auto& a : aggregate_paths(build_ceg_o(q, cat))) paths += a.paths;
        info.ceg_o_paths = paths.str();
      } catch (const std::exception&) {
      }
    }

    const std::size_t first_row = result.records.size();
    for (const auto& m : config.methods) {
      QErrorRecord r;
      r.query_id = entry.id;
      r.template_name = entry.template_name;
      r.method = m.id();
      r.ceg_kind = to_string(m.ceg_kind);
      if (m.type == MethodSpec::Type::kHeuristic) {
        r.hop = to_string(m.choice.hop);
        r.aggr = to_string(m.choice.aggr);
      } else if (m.type == MethodSpec::Type::kPStar) {
        r.aggr = "pstar";
      }
      r.true_count = info.true_count;
      const auto start = std::chrono::steady_clock::now();
      try {
        if (!stats_error.empty()) throw MissingStatisticError(stats_error);
        r.estimate = run_method(m, q, g, cat, info.true_count, config, r.sketch_k).value;
      } catch (const std::exception& e) {
        r.failed = true;
        r.error = e.what();
      }
      r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      if (r.failed) {
        r.qerror = r.signed_log = kNaN;
        result.failures.push_back({r.query_id, r.method, r.error});
      } else if (r.true_count == 0) {
        r.qerror = r.signed_log = kNaN;
      } else {
        const auto qe = qerror(r.true_count, r.estimate);
        r.qerror = qe.qerror;
        r.signed_log = qe.signed_log;
      }
      result.records.push_back(std::move(r));
    }
    result.pstar_violations += count_pstar_violations(result.records, first_row, result.records.size());
    result.queries.push_back(std::move(info));
  }

  std::map<std::string, std::vector<QErrorRecord>> per_method;
  std::map<std::string, std::map<std::string, std::vector<QErrorRecord>>> per_template;
  for (const auto& r : result.records) {
    per_method[r.method].push_back(r);
    if (!r.template_name.empty()) per_template[r.template_name][r.method].push_back(r);
  }
  for (const auto& [m, rows] : per_method) result.by_method[m] = summarize(std::span<const QErrorRecord>(rows));
  for (const auto& [t, methods] : per_template) {
    for (const auto& [m, rows] : methods) result.by_template[t][m] = summarize(std::span<const QErrorRecord>(rows));
  }
  result.catalogue_bytes = cat.memory_footprint();
  result.catalogue_patterns = cat.counts().size();
  return result;
}

void write_records_csv(const std::vector<QErrorRecord>& records, std::ostream& out) {
  out << "queryId,template,method,cegKind,hop,aggr,sketchK,trueCount,estimate,qerror,signedLog,elapsedMs\n";
  for (const auto& r : records) {
    out << csv_field(r.query_id) << ',' << csv_field(r.template_name) << ',' << r.method << ',' << r.ceg_kind << ','
        << r.hop << ',' << r.aggr << ',' << r.sketch_k << ',' << r.true_count << ','
        << (r.failed ? "" : to_decimal(r.estimate)) << ',' << format_double(r.qerror) << ','
        << format_double(r.signed_log) << ',' << format_double(r.elapsed_ms) << '\n';
  }
}

void write_summary_json(const EvalResult& result, const EvalConfig& config, std::ostream& out) {
  json doc;
  doc["seed"] = config.catalogue.seed;
  doc["h"] = config.catalogue.h;
  doc["walkBudget"] = config.catalogue.walk_budget;
  doc["sketchK"] = config.sketch_k;
  doc["catalogue"] = {{"patterns", result.catalogue_patterns}, {"bytes", result.catalogue_bytes}};
  json methods = json::object();
  for (const auto& [m, s] : result.by_method) methods[m] = summary_json(s);
  doc["methods"] = std::move(methods);
  json templates = json::object();
  for (const auto& [t, ms] : result.by_template) {
    json per = json::object();
    for (const auto& [m, s] : ms) per[m] = summary_json(s);
    templates[t] = std::move(per);
  }
  doc["templates"] = std::move(templates);
  json queries = json::array();
  for (const auto& q : result.queries) {
    queries.push_back(
        {{"id", q.id}, {"template", q.template_name}, {"trueCount", q.true_count}, {"cegOPaths", q.ceg_o_paths}});
  }
  doc["queries"] = std::move(queries);
  json failures = json::array();
  for (const auto& f : result.failures) {
    failures.push_back({{"queryId", f.query_id}, {"method", f.method}, {"error", f.error}});
  }
  doc["failures"] = std::move(failures);
  doc["pstarViolations"] = result.pstar_violations;
  out << doc.dump(2) << '\n';
}

}  // namespace cegest
