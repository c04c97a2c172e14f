#include "cegest/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cegest/errors.hpp"

namespace cegest {

namespace {

struct Filtered {
  BigInt paths;
  Rational sum;
  double log2_sum = 0;
  BigInt zero_paths;
  const PathEstimate* min = nullptr;
  const PathEstimate* max = nullptr;
};

Filtered filter(const std::vector<HopAggregate>& aggs, HopFilter hop) {
  if (aggs.empty()) throw MissingStatisticError("CEG has no path from the bottom to the top vertex");
  std::size_t lo = 0;
  std::size_t hi = aggs.size();
  if (hop == HopFilter::kMaxHop) lo = aggs.size() - 1;
  if (hop == HopFilter::kMinHop) hi = 1;
  Filtered f;
  for (std::size_t i = lo; i < hi; ++i) {
    const auto& a = aggs[i];
    f.paths += a.paths;
    f.sum += a.sum;
    f.log2_sum += a.log2_sum;
    f.zero_paths += a.zero_paths;
    if (!f.min || a.min.estimate < f.min->estimate) f.min = &a.min;
    if (!f.max || a.max.estimate > f.max->estimate) f.max = &a.max;
  }
  return f;
}

Estimate from_filtered(const Ceg& ceg, const Filtered& f, HeuristicChoice choice, MeanKind mean) {
  Estimate e;
  e.method = to_string(ceg.kind()) + "/" + choice.id();
  e.ceg_kind = ceg.kind();
  e.considered_paths = f.paths;
  e.overlapping_cycles = ceg.overlapping_cycles();
  switch (choice.aggr) {
    case Aggregator::kMax:
      e.value = f.max->estimate;
      e.chosen_path = *f.max;
      break;
    case Aggregator::kMin:
      e.value = f.min->estimate;
      e.chosen_path = *f.min;
      break;
    case Aggregator::kAvg:
      if (mean == MeanKind::kArithmetic) {
        e.value = f.sum / Rational(f.paths);
      } else if (f.zero_paths > 0) {
        e.value = 0;
      } else {
        e.value = Rational(std::exp2(f.log2_sum / f.paths.convert_to<double>()));
        // Rounding must not push the mean outside the path range.
        e.value = std::clamp(e.value, f.min->estimate, f.max->estimate);
      }
      break;
  }
  return e;
}

void require_optimistic(const Ceg& ceg) {
  if (!ceg.edge_subsets()) throw ValidationError("optimistic estimators need a CEG_O or CEG_OCR");
}

Ceg build_optimistic(const QueryGraph& q, const Catalogue& cat, CegKind kind) {
  if (kind == CegKind::kO) return build_ceg_o(q, cat);
  if (kind == CegKind::kOCR) return build_ceg_ocr(q, cat);
  throw ValidationError("optimistic estimators need a CEG_O or CEG_OCR");
}

}  // namespace

std::string to_string(HopFilter hop) {
  switch (hop) {
    case HopFilter::kMaxHop: return "max-hop";
    case HopFilter::kMinHop: return "min-hop";
    case HopFilter::kAllHops: return "all-hops";
  }
  return "?";
}

std::string to_string(Aggregator aggr) {
  switch (aggr) {
    case Aggregator::kMax: return "max";
    case Aggregator::kMin: return "min";
    case Aggregator::kAvg: return "avg";
  }
  return "?";
}

std::string HeuristicChoice::id() const { return to_string(hop) + "-" + to_string(aggr); }

HeuristicChoice parse_heuristic(const std::string& id) {
  for (const auto& c : all_heuristics()) {
    if (c.id() == id) return c;
  }
  throw ConfigError("unknown heuristic '" + id + "'");
}

std::vector<HeuristicChoice> all_heuristics() {
  std::vector<HeuristicChoice> out;
  for (const auto hop : {HopFilter::kMaxHop, HopFilter::kMinHop, HopFilter::kAllHops}) {
    for (const auto aggr : {Aggregator::kMax, Aggregator::kMin, Aggregator::kAvg}) out.push_back({hop, aggr});
  }
  return out;
}

Estimate estimate_optimistic(const Ceg& ceg, HeuristicChoice choice, MeanKind mean) {
  require_optimistic(ceg);
  const auto aggs = aggregate_paths(ceg);
  return from_filtered(ceg, filter(aggs, choice.hop), choice, mean);
}

Estimate estimate_optimistic(const QueryGraph& q, const Catalogue& cat, CegKind kind, HeuristicChoice choice,
                             MeanKind mean) {
  return estimate_optimistic(build_optimistic(q, cat, kind), choice, mean);
}

std::vector<Estimate> estimate_all_optimistic(const Ceg& ceg, MeanKind mean) {
  require_optimistic(ceg);
  const auto aggs = aggregate_paths(ceg);
  std::vector<Estimate> out;
  for (const auto& c : all_heuristics()) out.push_back(from_filtered(ceg, filter(aggs, c.hop), c, mean));
  return out;
}

PathEstimate representative_path(const Ceg& ceg, HeuristicChoice choice) {
  const auto aggs = aggregate_paths(ceg);
  const auto f = filter(aggs, choice.hop);
  return choice.aggr == Aggregator::kMin ? *f.min : *f.max;
}

std::optional<Rational> exact_qerror(const Rational& estimate, MatchCount true_count) {
  if (estimate <= 0 || true_count == 0) return std::nullopt;
  const Rational c(true_count);
  return estimate >= c ? estimate / c : c / estimate;
}

Estimate estimate_pstar(const Ceg& ceg, MatchCount true_count) {
  require_optimistic(ceg);
  const auto values = distinct_path_estimates(ceg);
  if (values.empty()) throw MissingStatisticError("CEG has no path from the bottom to the top vertex");
  // Values are ascending, so a strict improvement test keeps the smaller estimate on ties.
  const Rational* best = nullptr;
  std::optional<Rational> best_q;
  for (const auto& v : values) {
    const auto q = exact_qerror(v, true_count);
    if (!best) {
      best = &v;
      best_q = q;
      continue;
    }
    if (q && (!best_q || *q < *best_q)) {
      best = &v;
      best_q = q;
    }
  }
  Estimate e;
  e.method = to_string(ceg.kind()) + "/pstar";
  e.ceg_kind = ceg.kind();
  e.value = *best;
  e.considered_paths = 0;
  for (const auto& a : aggregate_paths(ceg)) e.considered_paths += a.paths;
  e.overlapping_cycles = ceg.overlapping_cycles();
  return e;
}

Estimate estimate_pstar(const QueryGraph& q, const Catalogue& cat, CegKind kind, MatchCount true_count) {
  return estimate_pstar(build_optimistic(q, cat, kind), true_count);
}

Estimate estimate_molp(const QueryGraph& q, const Catalogue& cat) {
  Estimate e;
  e.method = "molp";
  e.ceg_kind = CegKind::kM;
  for (const EdgeMask p : connected_subsets(q, cat.h())) {
    const auto c = cat.count(q, p);
    if (!c) throw MissingStatisticError("catalogue has no count for pattern " + q.induced(p).to_string());
    if (*c == 0) {
      e.value = 0;
      return e;
    }
  }
  const Ceg ceg = build_ceg_m(q, cat, false);
  auto path = min_weight_path(ceg);
  e.value = path.estimate;
  e.considered_paths = 1;
  e.chosen_path = std::move(path);
  return e;
}

std::string MethodSpec::id() const {
  switch (type) {
    case Type::kHeuristic: return to_string(ceg_kind) + "/" + choice.id();
    case Type::kPStar: return to_string(ceg_kind) + "/pstar";
    case Type::kMolp: return "molp";
  }
  return "?";
}

MethodSpec parse_method(const std::string& id) {
  if (id == "molp") return {};
  const auto slash = id.find('/');
  if (slash == std::string::npos) throw ConfigError("unknown method '" + id + "'");
  const std::string kind = id.substr(0, slash);
  const std::string rest = id.substr(slash + 1);
  MethodSpec m;
  if (kind == "O") {
    m.ceg_kind = CegKind::kO;
  } else if (kind == "OCR") {
    m.ceg_kind = CegKind::kOCR;
  } else {
    throw ConfigError("unknown method '" + id + "'");
  }
  if (rest == "pstar") {
    m.type = MethodSpec::Type::kPStar;
  } else {
    m.type = MethodSpec::Type::kHeuristic;
    m.choice = parse_heuristic(rest);
  }
  return m;
}

std::vector<MethodSpec> all_methods() {
  std::vector<MethodSpec> out;
  for (const auto kind : {CegKind::kO, CegKind::kOCR}) {
    for (const auto& c : all_heuristics()) out.push_back({MethodSpec::Type::kHeuristic, kind, c});
  }
  for (const auto kind : {CegKind::kO, CegKind::kOCR}) out.push_back({MethodSpec::Type::kPStar, kind, {}});
  out.push_back({});
  return out;
}

std::vector<MethodSpec> parse_methods(const std::string& list) {
  std::vector<MethodSpec> out;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    if (item == "all") {
      for (auto& m : all_methods()) out.push_back(m);
    } else {
      out.push_back(parse_method(item));
    }
  }
  if (out.empty()) throw ConfigError("no methods given");
  return out;
}

}  // namespace cegest
