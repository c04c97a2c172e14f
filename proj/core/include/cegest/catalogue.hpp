#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "cegest/graph_store.hpp"
#include "cegest/oracle.hpp"
#include "cegest/query.hpp"
#include "cegest/rational.hpp"

namespace cegest {

/// Canonical encoding of a connected directed edge-labeled pattern. Two
/// patterns share a key iff they are isomorphic.
using PatternKey = std::string;

struct CanonicalForm {
  PatternKey key;
  /// canonical_position[i] = query variable placed at canonical position i.
  std::vector<int> query_var_at;

  /// Maps a mask over query variables to a mask over canonical positions.
  VarMask to_canonical(VarMask query_vars) const;
};

/// Minimal encoding over all vertex orderings of the subquery's variables.
CanonicalForm canonical_form(const QueryGraph& q, EdgeMask edges);
inline PatternKey canonical_key(const Subquery& s) { return canonical_form(s.parent(), s.edges()).key; }

/// Rebuilds the pattern as a query over variables v0..v(n-1).
QueryGraph pattern_query(const PatternKey& key);

/// Identifies a cycle-closing statistic: walks that start with `first`, end
/// with `last`, span `length` hops (any label, any direction in between),
/// closed by a forward `close` edge from the walk's end back to its start.
/// length == 0 denotes the marginal over all lengths.
struct ClosingKey {
  WalkStep first;
  std::string close;
  WalkStep last;
  std::size_t length = 0;

  std::string to_string() const;
  friend bool operator<(const ClosingKey& a, const ClosingKey& b) { return a.tuple() < b.tuple(); }
  friend bool operator==(const ClosingKey& a, const ClosingKey& b) { return a.tuple() == b.tuple(); }

 private:
  std::tuple<std::string, int, std::string, std::string, int, std::size_t> tuple() const {
    return {first.label, static_cast<int>(first.direction), close, last.label, static_cast<int>(last.direction),
            length};
  }
};

/// The walk steps sampled for a closing key.
std::vector<WalkStep> closing_walk(const ClosingKey& key);

/// Closing key for closing `cycle` with query edge `closing_edge`: the walk
/// starts at the closing edge's destination and goes around the cycle.
ClosingKey closing_key_for(const QueryGraph& q, EdgeMask cycle, std::size_t closing_edge);

struct ClosingStat {
  std::uint64_t samples = 0;   // p
  std::uint64_t closures = 0;  // c
  Rational rate() const { return samples == 0 ? Rational(0) : Rational(closures) / samples; }
  friend bool operator==(const ClosingStat&, const ClosingStat&) = default;
};

struct CatalogueMeta {
  std::string graph;
  std::uint64_t seed = 0;
  /// Walks per closing statistic; 0 means every walk was enumerated.
  std::size_t walk_budget = 0;
  friend bool operator==(const CatalogueMeta&, const CatalogueMeta&) = default;
};

/// Markov table of pattern counts plus max-degree and cycle-closing statistics.
class Catalogue {
 public:
  using DegKey = std::tuple<PatternKey, VarMask, VarMask>;

  Catalogue() = default;
  explicit Catalogue(std::size_t h) : h_(h) {}

  std::size_t h() const { return h_; }
  CatalogueMeta& meta() { return meta_; }
  const CatalogueMeta& meta() const { return meta_; }

  const std::map<PatternKey, MatchCount>& counts() const { return counts_; }
  const std::map<DegKey, MatchCount>& degree_stats() const { return deg_; }
  const std::map<ClosingKey, ClosingStat>& closing_stats() const { return closing_; }

  void set_count(const PatternKey& key, MatchCount count) { counts_[key] = count; }
  void set_degree(const PatternKey& key, VarMask x, VarMask y, MatchCount deg) { deg_[{key, x, y}] = deg; }
  void set_closing(const ClosingKey& key, ClosingStat stat) { closing_[key] = stat; }

  std::optional<MatchCount> count(const PatternKey& key) const;
  /// Count of the pattern formed by `edges` of `q`.
  std::optional<MatchCount> count(const QueryGraph& q, EdgeMask edges) const;
  std::optional<MatchCount> count(const Subquery& s) const { return count(s.parent(), s.edges()); }

  /// deg(X, Y, P) keyed by canonical positions.
  std::optional<MatchCount> max_deg(const PatternKey& key, VarMask x, VarMask y) const;
  /// deg(X, Y, P) for P = the subquery, X and Y given as query-variable masks.
  std::optional<MatchCount> max_deg(const Subquery& s, VarMask x, VarMask y) const;

  std::optional<Rational> closing_rate(const ClosingKey& key) const;

  /// Approximate in-memory size of the statistics in bytes.
  std::size_t memory_footprint() const;

  friend bool operator==(const Catalogue&, const Catalogue&) = default;

 private:
  std::size_t h_ = 0;
  CatalogueMeta meta_;
  std::map<PatternKey, MatchCount> counts_;
  std::map<DegKey, MatchCount> deg_;
  std::map<ClosingKey, ClosingStat> closing_;
};

struct CatalogueConfig {
  std::size_t h = 2;
  /// Walks per closing statistic; 0 enumerates every walk.
  std::size_t walk_budget = 1000;
  std::uint64_t seed = 0;
  bool degree_stats = true;
  bool closing_rates = true;
  std::string graph_identity;
  /// Upper bound on labeled patterns generated in exhaustive mode.
  std::size_t exhaustive_limit = 200000;
};

/// Workload-specific catalogue: every connected subquery of at most h edges,
/// and closing rates for every cycle longer than h.
Catalogue build_catalogue(const LabeledGraph& g, const std::vector<QueryGraph>& workload,
                          const CatalogueConfig& config);

/// Catalogue over every connected pattern of at most h edges using the
/// graph's labels. Rejects label sets whose pattern count exceeds the limit.
Catalogue build_exhaustive_catalogue(const LabeledGraph& g, const CatalogueConfig& config);

/// Adds any statistics `q` needs that the catalogue lacks.
void extend_catalogue(Catalogue& cat, const LabeledGraph& g, const QueryGraph& q, const CatalogueConfig& config);

/// Measures one closing statistic on the graph.
ClosingStat measure_closing(const LabeledGraph& g, const ClosingKey& key, std::size_t walk_budget, std::uint64_t seed);

inline constexpr int kCatalogueFormatVersion = 1;

void save_catalogue(const Catalogue& cat, std::ostream& out);
Catalogue load_catalogue(std::istream& in);
void save_catalogue_file(const Catalogue& cat, const std::string& path);
Catalogue load_catalogue_file(const std::string& path);

}  // namespace cegest
