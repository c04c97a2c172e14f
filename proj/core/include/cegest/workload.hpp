#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cegest/graph_store.hpp"
#include "cegest/query.hpp"

namespace cegest {

enum class InstantiationMode { kUniformLabels, kEdgeAtATime };

InstantiationMode parse_instantiation_mode(const std::string& s);

struct InstantiationOptions {
  InstantiationMode mode = InstantiationMode::kUniformLabels;
  /// Label draws for uniform-labels; embedding attempts for edge-at-a-time.
  std::size_t attempts = 100;
  std::chrono::milliseconds time_limit{2000};
};

/// Assigns labels to the template's `?` edges. Uniform-labels draws every
/// label uniformly and keeps the first non-empty instance; edge-at-a-time
/// grows a random embedding and copies the matched data edges' labels.
/// Returns nothing when the attempt or time budget runs out.
std::optional<QueryGraph> instantiate_template(const QueryGraph& tmpl, const LabeledGraph& g, std::uint64_t seed,
                                               const InstantiationOptions& options = {});

/// Up to `per_template` instances of each template, ids "<template>-<i>".
/// Every instance draws from its own seed derived from `seed`.
std::vector<WorkloadEntry> generate_workload(const std::vector<WorkloadEntry>& templates, const LabeledGraph& g,
                                             std::size_t per_template, std::uint64_t seed,
                                             const InstantiationOptions& options = {});

/// Uniform random labeled multigraph (duplicates collapse).
LabeledGraph random_graph(std::size_t vertices, std::size_t edges, std::size_t labels, std::uint64_t seed);

struct CorrelatedGraphOptions {
  std::size_t vertices = 4000;
  std::size_t background_edges = 6000;
  std::size_t stars = 150;
  std::size_t star_fanout = 12;
  std::size_t squares = 700;
  std::size_t labels = 6;
  std::uint64_t seed = 1;
};

/// Skewed graph with planted stars (hubs whose edges share a label pair) and
/// labeled 4-cycles over a random background.
LabeledGraph correlated_graph(const CorrelatedGraphOptions& options);

/// Label names "L0", "L1", ...
std::string synthetic_label(std::size_t i);

}  // namespace cegest
