#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cegest/catalogue.hpp"
#include "cegest/ceg.hpp"
#include "cegest/estimators.hpp"
#include "cegest/graph_store.hpp"
#include "cegest/query.hpp"

namespace cegest {

struct EdgeTag {
  bool bound;
  /// Variables the edge adds to the subquery.
  VarMask extension;
};

/// Tags each path edge as bound or unbound and records its extension variables.
std::vector<EdgeTag> classify_edges(const Ceg& ceg, const PathEstimate& path);

/// Join variables of the query that no bound edge of the path extends.
VarMask sketch_attributes(const Ceg& ceg, const PathEstimate& path);

struct SketchPlan {
  VarMask attributes = 0;  // S
  std::size_t k = 1;
  std::size_t parts = 1;  // per attribute
  std::uint64_t seed = 0;
  /// Per query edge: S restricted to the edge's variables, and its piece count.
  std::vector<VarMask> partition_attributes;
  std::vector<std::size_t> pieces;
};

/// Checks that K is parts^|S| for an integer parts >= 2. K = 1 or S empty
/// yields the single-component plan.
SketchPlan plan_sketch(const QueryGraph& q, VarMask attributes, std::size_t k, std::uint64_t seed = 0);

std::size_t sketch_bucket(VertexId v, std::uint64_t seed, std::size_t parts);

/// One subquery of the sketch: each query edge i reads label "<label>#qe<i>"
/// of `graph`, which holds the tuples of that edge's relation falling into
/// this component's buckets.
struct SketchComponent {
  /// Bucket per attribute of S, in ascending variable order.
  std::vector<std::size_t> buckets;
  LabeledGraph graph;
  QueryGraph query;
};

std::vector<SketchComponent> make_sketch(const QueryGraph& q, const LabeledGraph& g, const SketchPlan& plan);

struct SketchBase {
  enum class Type { kMolp, kOptimistic };
  Type type = Type::kMolp;
  CegKind ceg_kind = CegKind::kO;
  HeuristicChoice choice{HopFilter::kMaxHop, Aggregator::kMax};
};

struct SketchEstimate {
  Estimate estimate;
  SketchPlan plan;
  /// Formula value per component; empty when the plan has one component.
  std::vector<Rational> component_values;
};

/// Picks the base estimator's path on the unpartitioned CEG, partitions the
/// data on that path's sketch attributes, and sums the path's formula
/// evaluated on each component's statistics.
SketchEstimate estimate_with_sketch(const QueryGraph& q, const LabeledGraph& g, const Catalogue& cat, std::size_t k,
                                    const SketchBase& base, std::uint64_t seed = 0);

}  // namespace cegest
