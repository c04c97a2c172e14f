#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "cegest/catalogue.hpp"
#include "cegest/query.hpp"
#include "cegest/rational.hpp"

namespace cegest {

enum class CegKind { kO, kOCR, kM, kD };

std::string to_string(CegKind kind);
CegKind parse_ceg_kind(const std::string& s);

enum class CegEdgeKind { kStart, kExtension, kCycleClosing, kProjection };

/// The statistic behind an edge's rate.
struct Provenance {
  // Edge-subset CEGs: rate = |numerator| / |denominator| (denominator empty for start edges).
  EdgeMask numerator = 0;
  EdgeMask denominator = 0;
  // Attribute-subset CEGs: rate = deg(x, y, pattern), masks over query variables.
  EdgeMask pattern = 0;
  VarMask x = 0;
  VarMask y = 0;
  // Cycle-closing edges: one key per closed cycle.
  std::vector<ClosingKey> closing;
};

struct CegEdge {
  std::size_t from;
  std::size_t to;
  Rational rate;
  double log_weight;
  CegEdgeKind kind;
  /// False for edges whose conditioning side is empty (start edges, X = empty set).
  bool bound;
  Provenance provenance;
};

/// One bottom-to-top path with its exact rate product.
struct PathEstimate {
  std::vector<std::size_t> edges;
  Rational estimate{1};
  double log2_estimate = 0;

  std::size_t hops() const { return edges.size(); }
};

/// Weighted directed graph over subqueries. Vertex ids follow creation order;
/// builders create vertices in non-decreasing size, so ids are a topological
/// order whenever the CEG has no projection edges.
class Ceg {
 public:
  Ceg(CegKind kind, QueryGraph q);

  CegKind kind() const { return kind_; }
  bool edge_subsets() const { return kind_ == CegKind::kO || kind_ == CegKind::kOCR; }
  const QueryGraph& query() const { return query_; }

  std::size_t num_vertices() const { return contents_.size(); }
  /// Edge mask (CEG_O/OCR) or variable mask (CEG_M/D) of a vertex.
  std::uint32_t content(std::size_t v) const { return contents_[v]; }
  std::optional<std::size_t> vertex_of(std::uint32_t content) const;
  std::size_t bottom() const { return bottom_; }
  std::size_t top() const { return top_; }

  const std::vector<CegEdge>& edges() const { return edges_; }
  const CegEdge& edge(std::size_t e) const { return edges_[e]; }
  const std::vector<std::size_t>& out_edges(std::size_t v) const { return out_[v]; }
  const std::vector<std::size_t>& in_edges(std::size_t v) const { return in_[v]; }

  bool has_projection_edges() const { return projection_edges_ > 0; }
  /// Set when one hop closed several long cycles and their rates were multiplied.
  bool overlapping_cycles() const { return overlapping_cycles_; }
  void set_overlapping_cycles() { overlapping_cycles_ = true; }

  std::size_t add_vertex(std::uint32_t content);
  std::size_t add_edge(CegEdge edge);
  void set_bottom(std::size_t v) { bottom_ = v; }
  void set_top(std::size_t v) { top_ = v; }

  std::vector<std::size_t> path_vertices(const PathEstimate& p) const;
  std::string vertex_label(std::size_t v) const;
  std::string describe(const CegEdge& e) const;

 private:
  CegKind kind_;
  QueryGraph query_;
  std::vector<std::uint32_t> contents_;
  std::unordered_map<std::uint32_t, std::size_t> index_;
  std::vector<CegEdge> edges_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
  std::size_t bottom_ = 0;
  std::size_t top_ = 0;
  std::size_t projection_edges_ = 0;
  bool overlapping_cycles_ = false;
};

CegEdge make_edge(std::size_t from, std::size_t to, Rational rate, CegEdgeKind kind, bool bound,
                  Provenance provenance = {});

/// Optimistic CEG over connected edge subsets with Markov-table extension rates.
Ceg build_ceg_o(const QueryGraph& q, const Catalogue& cat);

/// CEG_O with cycle-closing rates on hops that close a cycle longer than h.
Ceg build_ceg_ocr(const QueryGraph& q, const Catalogue& cat);

/// Pessimistic CEG over variable subsets with max-degree rates. Queries are
/// limited to 12 variables.
Ceg build_ceg_m(const QueryGraph& q, const Catalogue& cat, bool with_projection_edges = false);

/// One relation of a cover: a catalogue pattern of Q and the variables it covers.
struct CoverEntry {
  EdgeMask pattern;
  VarMask covered;
};

/// A cover entry paired with the conditioning subset A' of its covered set.
struct CoverConstraint {
  std::size_t entry;
  VarMask given;
};

/// Every (entry, A') pair with A' a proper subset of the entry's covered set.
std::vector<CoverConstraint> cover_constraints(const QueryGraph& q, const std::vector<CoverEntry>& cover);

/// CEG restricted to the degree constraints of a cover.
Ceg build_ceg_d(const QueryGraph& q, const Catalogue& cat, const std::vector<CoverEntry>& cover);

inline constexpr std::size_t kDefaultPathCap = 1'000'000;

/// Calls `visit` for every simple bottom-to-top path in depth-first order.
/// Throws EnumerationOverflow once more than `cap` paths are seen (0: no cap).
std::size_t for_each_path(const Ceg& ceg, const std::function<void(const PathEstimate&)>& visit,
                          std::size_t cap = 0);

std::vector<PathEstimate> enumerate_paths(const Ceg& ceg, std::size_t cap = kDefaultPathCap);

/// Aggregates over all bottom-to-top paths that share a hop count.
struct HopAggregate {
  std::size_t hops = 0;
  BigInt paths;
  Rational sum;
  /// Sum of log2 estimates over paths with a non-zero estimate.
  double log2_sum = 0;
  BigInt zero_paths;
  PathEstimate min;
  PathEstimate max;
};

/// Path aggregates per hop count, ascending, computed without enumeration.
/// Requires a CEG without projection edges.
std::vector<HopAggregate> aggregate_paths(const Ceg& ceg);

/// Distinct path estimates, optionally restricted to one hop count.
std::set<Rational> distinct_path_estimates(const Ceg& ceg, std::optional<std::size_t> hops = std::nullopt);

/// A minimum-product bottom-to-top path. On acyclic CEGs ties go to the
/// lexicographically smallest vertex sequence; with projection edges every
/// rate must be 0 or at least 1 and ties go to fewer hops first.
PathEstimate min_weight_path(const Ceg& ceg);

void write_dot(const Ceg& ceg, std::ostream& out);

}  // namespace cegest
