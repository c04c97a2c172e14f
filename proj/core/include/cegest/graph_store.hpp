#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cegest {

using VertexId = std::uint64_t;
using LabelId = std::uint32_t;

enum class Position { kSrc, kDst };

/// Compressed adjacency for one label in one direction: for every key vertex
/// the sorted list of neighbors reached through that label.
class Adjacency {
 public:
  Adjacency() = default;
  /// `pairs` must be sorted by (key, neighbor) and free of duplicates.
  explicit Adjacency(const std::vector<std::pair<VertexId, VertexId>>& pairs);

  std::span<const VertexId> neighbors(VertexId key) const;
  bool contains(VertexId key, VertexId neighbor) const;

  /// Distinct vertices occurring at the key position, sorted.
  std::span<const VertexId> keys() const { return keys_; }
  std::size_t max_degree() const { return max_degree_; }
  std::size_t size() const { return targets_.size(); }

 private:
  std::vector<VertexId> keys_;
  std::vector<std::size_t> offsets_;
  std::vector<VertexId> targets_;
  std::size_t max_degree_ = 0;
};

/// Read-only view of the tuples of one label as a binary relation (src, dst).
class Relation {
 public:
  Relation() = default;
  Relation(std::string label, std::span<const std::pair<VertexId, VertexId>> tuples, const Adjacency* forward,
           const Adjacency* backward)
      : label_(std::move(label)), tuples_(tuples), forward_(forward), backward_(backward) {}

  const std::string& label() const { return label_; }
  std::span<const std::pair<VertexId, VertexId>> tuples() const { return tuples_; }
  std::size_t size() const { return tuples_.size(); }
  bool empty() const { return tuples_.empty(); }

  /// Adjacency keyed by the given position (kSrc: src -> dsts).
  const Adjacency* index(Position keyed_by) const { return keyed_by == Position::kSrc ? forward_ : backward_; }

 private:
  std::string label_;
  std::span<const std::pair<VertexId, VertexId>> tuples_;
  const Adjacency* forward_ = nullptr;
  const Adjacency* backward_ = nullptr;
};

/// An incident edge as seen from one endpoint, used for label-agnostic walks.
struct IncidentEdge {
  VertexId neighbor;
  LabelId label;
};

/// Edge-labeled directed graph with set semantics. Immutable after construction.
class LabeledGraph {
 public:
  struct LabelData {
    std::string name;
    std::vector<std::pair<VertexId, VertexId>> by_src;  // sorted (src, dst)
    Adjacency forward;                                  // src -> dsts
    Adjacency backward;                                 // dst -> srcs
  };

  LabeledGraph() = default;

  std::span<const VertexId> vertices() const { return vertices_; }
  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_edges() const { return num_edges_; }
  std::size_t num_labels() const { return labels_.size(); }

  /// Labels sorted by name; LabelId indexes this list.
  std::vector<std::string> label_names() const;
  std::optional<LabelId> label_id(std::string_view name) const;
  const LabelData& label_data(LabelId id) const { return labels_[id]; }

  /// Relation view for a label; an unknown label yields an empty relation.
  Relation relation(std::string_view label) const;

  /// Out/in edges of a vertex across all labels, sorted by (neighbor, label).
  std::span<const IncidentEdge> out_edges(VertexId v) const;
  std::span<const IncidentEdge> in_edges(VertexId v) const;

  bool has_edge(VertexId src, VertexId dst, LabelId label) const;

  friend class GraphBuilder;

 private:
  static std::span<const IncidentEdge> lookup(const std::vector<VertexId>& keys,
                                              const std::vector<std::size_t>& offsets,
                                              const std::vector<IncidentEdge>& edges, VertexId v);

  std::vector<VertexId> vertices_;
  std::vector<LabelData> labels_;
  std::map<std::string, LabelId, std::less<>> label_ids_;
  std::size_t num_edges_ = 0;

  std::vector<VertexId> out_keys_, in_keys_;
  std::vector<std::size_t> out_offsets_, in_offsets_;
  std::vector<IncidentEdge> out_edges_, in_edges_;
};

/// Accumulates edges and freezes them into a LabeledGraph. Duplicate triples collapse.
class GraphBuilder {
 public:
  void add_edge(VertexId src, VertexId dst, std::string_view label);
  LabeledGraph build() &&;

 private:
  std::map<std::string, std::vector<std::pair<VertexId, VertexId>>, std::less<>> edges_;
};

/// Parses `src dst label` lines; `#` lines and blank lines are skipped.
LabeledGraph load_graph(std::istream& in);
LabeledGraph load_graph_file(const std::string& path);

/// Writes the graph in the edge-list format, ordered by (label, src, dst).
void write_graph(const LabeledGraph& g, std::ostream& out);

/// Maximum number of tuples sharing one value at `position`; 0 for an empty relation.
std::size_t max_degree(const Relation& r, Position position);

}  // namespace cegest
