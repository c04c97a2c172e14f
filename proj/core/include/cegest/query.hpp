#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace cegest {

using EdgeMask = std::uint32_t;
using VarMask = std::uint32_t;

inline constexpr std::size_t kMaxQueryEdges = 32;
inline constexpr std::size_t kMaxQueryVars = 32;
/// Label placeholder used by query templates.
inline constexpr std::string_view kUnassignedLabel = "?";

struct QueryEdge {
  int src;
  int dst;
  std::string label;

  friend bool operator==(const QueryEdge&, const QueryEdge&) = default;
};

/// Connected conjunctive query over binary relations, written as a directed
/// edge-labeled graph over variables.
class QueryGraph {
 public:
  QueryGraph() = default;
  /// Validates connectivity, distinct names, and the absence of duplicate edges.
  QueryGraph(std::vector<std::string> vars, std::vector<QueryEdge> edges);

  const std::vector<std::string>& vars() const { return vars_; }
  const std::vector<QueryEdge>& edges() const { return edges_; }
  std::size_t num_vars() const { return vars_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  const QueryEdge& edge(std::size_t i) const { return edges_[i]; }

  EdgeMask all_edges() const { return num_edges() == 32 ? ~EdgeMask{0} : (EdgeMask{1} << num_edges()) - 1; }
  VarMask all_vars() const { return num_vars() == 32 ? ~VarMask{0} : (VarMask{1} << num_vars()) - 1; }

  /// Variables touched by the given edges.
  VarMask vars_of(EdgeMask edges) const;
  /// True iff the edges form one component when edges sharing a variable are adjacent.
  bool is_connected(EdgeMask edges) const;
  /// Edges sharing a variable with `e` (excluding `e`).
  EdgeMask adjacent_edges(std::size_t e) const { return adjacency_[e]; }
  /// Variables appearing in at least two edges.
  VarMask join_vars() const;

  bool has_unassigned_labels() const;
  QueryGraph with_labels(const std::vector<std::string>& labels) const;

  /// The query induced by an edge subset, variables renumbered in first-use order.
  QueryGraph induced(EdgeMask edges) const;

  std::string to_string() const;

  friend bool operator==(const QueryGraph& a, const QueryGraph& b) {
    return a.vars_ == b.vars_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<std::string> vars_;
  std::vector<QueryEdge> edges_;
  std::vector<EdgeMask> adjacency_;
};

/// Parses one query: lines `aX -LABEL-> aY`, `#` comments ignored.
QueryGraph parse_query(std::string_view text);
QueryGraph load_query_file(const std::string& path);

/// A connected subset of a query's edges.
class Subquery {
 public:
  Subquery(const QueryGraph& parent, EdgeMask edges);

  const QueryGraph& parent() const { return *parent_; }
  EdgeMask edges() const { return edges_; }
  std::size_t size() const;
  VarMask vars() const { return parent_->vars_of(edges_); }
  std::vector<int> edge_indices() const;

 private:
  const QueryGraph* parent_;
  EdgeMask edges_;
};

/// All connected edge subsets with at most `max_edges` edges, ordered
/// lexicographically by their sorted edge-index lists.
std::vector<Subquery> connected_subqueries(const QueryGraph& q, std::size_t max_edges);

/// Same enumeration returning bare masks.
std::vector<EdgeMask> connected_subsets(const QueryGraph& q, std::size_t max_edges);

struct Cycle {
  EdgeMask edges;
  std::size_t length;
};

struct CycleSet {
  std::vector<Cycle> cycles;
};

/// Simple cycles of the underlying undirected multigraph (self-loops have
/// length 1, parallel edges length 2). Sorted by edge-index list.
CycleSet cycles(const QueryGraph& q);

/// Orders edge masks by their sorted index lists.
bool edge_set_less(EdgeMask a, EdgeMask b);

struct WorkloadEntry {
  std::string id;
  std::string template_name;
  QueryGraph query;
};

/// A workload file is a sequence of `query <id> [<template>]` headers each
/// followed by the query's edge lines. A file without headers is one query.
std::vector<WorkloadEntry> parse_workload(std::string_view text);
std::vector<WorkloadEntry> load_workload_file(const std::string& path);
void write_workload(const std::vector<WorkloadEntry>& workload, std::ostream& out);

}  // namespace cegest
