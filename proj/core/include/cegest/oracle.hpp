#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cegest/graph_store.hpp"
#include "cegest/query.hpp"

namespace cegest {

/// Number of homomorphic matches (join result tuples).
using MatchCount = std::uint64_t;

/// Exact number of assignments vars -> vertices mapping every query edge onto
/// a data edge with the same label and direction. Distinct variables may bind
/// the same vertex.
MatchCount count_hom(const LabeledGraph& g, const QueryGraph& q);

/// True iff the query has at least one match.
bool has_match(const LabeledGraph& g, const QueryGraph& q);

/// |pi_vars(matches)|: distinct bindings of `vars` that extend to a full match.
MatchCount count_projection(const LabeledGraph& g, const QueryGraph& q, VarMask vars);

/// deg(X, Y, Q): max over X-bindings of the number of distinct Y-bindings among
/// matches. Requires X subset of Y subset of vars(Q).
MatchCount group_degree(const LabeledGraph& g, const QueryGraph& q, VarMask x, VarMask y);

/// Calls `visit` once per distinct binding of `vars` that extends to a match.
/// The span is indexed by query variable; entries outside `vars` are unspecified.
void for_each_projection(const LabeledGraph& g, const QueryGraph& q, VarMask vars,
                         const std::function<void(std::span<const VertexId>)>& visit);

enum class WalkDirection { kForward, kBackward, kAny };

/// One hop of a label walk. `label == "*"` matches every label.
struct WalkStep {
  std::string label;
  WalkDirection direction = WalkDirection::kForward;
};

inline constexpr std::string_view kAnyLabel = "*";

using Walk = std::vector<VertexId>;

struct WalkSample {
  std::vector<Walk> walks;
  /// Samples drawn, including dead ends.
  std::size_t attempts = 0;
};

/// Draws `samples` random walks realizing `steps`: the first hop is a uniform
/// edge among those matching steps[0]; every later hop is uniform among the
/// admissible continuations. Dead ends count as attempts but yield no walk.
WalkSample sample_label_paths(const LabeledGraph& g, std::span<const WalkStep> steps, std::size_t samples,
                              std::uint64_t seed);

/// Every walk realizing `steps` (one attempt per walk).
WalkSample enumerate_label_paths(const LabeledGraph& g, std::span<const WalkStep> steps);

}  // namespace cegest
