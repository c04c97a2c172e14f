#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cegest/catalogue.hpp"
#include "cegest/ceg.hpp"
#include "cegest/query.hpp"
#include "cegest/rational.hpp"

namespace cegest {

enum class HopFilter { kMaxHop, kMinHop, kAllHops };
enum class Aggregator { kMax, kMin, kAvg };

struct HeuristicChoice {
  HopFilter hop;
  Aggregator aggr;

  /// e.g. "max-hop-max", "all-hops-avg".
  std::string id() const;
  friend bool operator==(const HeuristicChoice&, const HeuristicChoice&) = default;
};

std::string to_string(HopFilter hop);
std::string to_string(Aggregator aggr);
HeuristicChoice parse_heuristic(const std::string& id);

/// The nine hop/aggregator combinations, hop-major.
std::vector<HeuristicChoice> all_heuristics();

/// How avg-aggr combines path estimates.
enum class MeanKind { kArithmetic, kGeometric };

struct Estimate {
  Rational value;
  std::string method;
  CegKind ceg_kind = CegKind::kO;
  BigInt considered_paths;
  /// The path realizing the value for min/max aggregators, P*, and MOLP.
  std::optional<PathEstimate> chosen_path;
  bool overlapping_cycles = false;

  double decimal() const { return to_double(value); }
};

/// Hop filter then aggregation over the (bottom, top) paths of an optimistic CEG.
Estimate estimate_optimistic(const Ceg& ceg, HeuristicChoice choice, MeanKind mean = MeanKind::kArithmetic);
Estimate estimate_optimistic(const QueryGraph& q, const Catalogue& cat, CegKind kind, HeuristicChoice choice,
                             MeanKind mean = MeanKind::kArithmetic);

/// All nine heuristics from one CEG, in all_heuristics() order.
std::vector<Estimate> estimate_all_optimistic(const Ceg& ceg, MeanKind mean = MeanKind::kArithmetic);

/// The path a heuristic commits to: its min or max path, and the max path of
/// the filtered set for avg-aggr.
PathEstimate representative_path(const Ceg& ceg, HeuristicChoice choice);

/// Oracle choice: the path estimate with the smallest q-error against the
/// true count; ties go to the smaller estimate.
Estimate estimate_pstar(const Ceg& ceg, MatchCount true_count);
Estimate estimate_pstar(const QueryGraph& q, const Catalogue& cat, CegKind kind, MatchCount true_count);

/// Minimum-weight (empty set, all vars) path of CEG_M. Returns 0 without
/// building the CEG when any catalogue pattern of Q is empty.
Estimate estimate_molp(const QueryGraph& q, const Catalogue& cat);

/// q-error max(c/e, e/c); empty for e = 0 or c = 0.
std::optional<Rational> exact_qerror(const Rational& estimate, MatchCount true_count);

/// A method identifier: "<O|OCR>/<heuristic>", "<O|OCR>/pstar", or "molp".
struct MethodSpec {
  enum class Type { kHeuristic, kPStar, kMolp };
  Type type = Type::kMolp;
  CegKind ceg_kind = CegKind::kM;
  HeuristicChoice choice{HopFilter::kMaxHop, Aggregator::kMax};

  std::string id() const;
  friend bool operator==(const MethodSpec&, const MethodSpec&) = default;
};

MethodSpec parse_method(const std::string& id);
/// Comma-separated method ids; "all" expands to every heuristic on O and
/// OCR, both P* variants, and MOLP.
std::vector<MethodSpec> parse_methods(const std::string& list);
std::vector<MethodSpec> all_methods();

}  // namespace cegest
