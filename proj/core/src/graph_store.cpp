#include "cegest/graph_store.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>

#include "cegest/errors.hpp"

namespace cegest {

Adjacency::Adjacency(const std::vector<std::pair<VertexId, VertexId>>& pairs) {
  targets_.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (i == 0 || pairs[i].first != pairs[i - 1].first) {
      keys_.push_back(pairs[i].first);
      offsets_.push_back(i);
    }
    targets_.push_back(pairs[i].second);
  }
  offsets_.push_back(pairs.size());
  for (std::size_t k = 0; k + 1 < offsets_.size(); ++k) {
    max_degree_ = std::max(max_degree_, offsets_[k + 1] - offsets_[k]);
  }
}

std::span<const VertexId> Adjacency::neighbors(VertexId key) const {
  const auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
  if (it == keys_.end() || *it != key) return {};
  const auto k = static_cast<std::size_t>(it - keys_.begin());
  return std::span<const VertexId>(targets_).subspan(offsets_[k], offsets_[k + 1] - offsets_[k]);
}

bool Adjacency::contains(VertexId key, VertexId neighbor) const {
  const auto n = neighbors(key);
  return std::binary_search(n.begin(), n.end(), neighbor);
}

std::vector<std::string> LabeledGraph::label_names() const {
  std::vector<std::string> names;
  names.reserve(labels_.size());
  for (const auto& l : labels_) names.push_back(l.name);
  return names;
}

std::optional<LabelId> LabeledGraph::label_id(std::string_view name) const {
  const auto it = label_ids_.find(name);
  if (it == label_ids_.end()) return std::nullopt;
  return it->second;
}

Relation LabeledGraph::relation(std::string_view label) const {
  const auto id = label_id(label);
  if (!id) return Relation(std::string(label), {}, nullptr, nullptr);
  const auto& d = labels_[*id];
  return Relation(d.name, d.by_src, &d.forward, &d.backward);
}

std::span<const IncidentEdge> LabeledGraph::lookup(const std::vector<VertexId>& keys,
                                                   const std::vector<std::size_t>& offsets,
                                                   const std::vector<IncidentEdge>& edges, VertexId v) {
  const auto it = std::lower_bound(keys.begin(), keys.end(), v);
  if (it == keys.end() || *it != v) return {};
  const auto k = static_cast<std::size_t>(it - keys.begin());
  return std::span<const IncidentEdge>(edges).subspan(offsets[k], offsets[k + 1] - offsets[k]);
}

std::span<const IncidentEdge> LabeledGraph::out_edges(VertexId v) const {
  return lookup(out_keys_, out_offsets_, out_edges_, v);
}

std::span<const IncidentEdge> LabeledGraph::in_edges(VertexId v) const {
  return lookup(in_keys_, in_offsets_, in_edges_, v);
}

bool LabeledGraph::has_edge(VertexId src, VertexId dst, LabelId label) const {
  return label < labels_.size() && labels_[label].forward.contains(src, dst);
}

void GraphBuilder::add_edge(VertexId src, VertexId dst, std::string_view label) {
  auto it = edges_.find(label);
  if (it == edges_.end()) it = edges_.emplace(std::string(label), std::vector<std::pair<VertexId, VertexId>>{}).first;
  it->second.emplace_back(src, dst);
}

namespace {

struct Triple {
  VertexId key;
  VertexId neighbor;
  LabelId label;
};

void build_incident(std::vector<Triple>& triples, std::vector<VertexId>& keys, std::vector<std::size_t>& offsets,
                    std::vector<IncidentEdge>& edges) {
  std::sort(triples.begin(), triples.end(), [](const Triple& a, const Triple& b) {
    return std::tie(a.key, a.neighbor, a.label) < std::tie(b.key, b.neighbor, b.label);
  });
  edges.reserve(triples.size());
  for (std::size_t i = 0; i < triples.size(); ++i) {
    if (i == 0 || triples[i].key != triples[i - 1].key) {
      keys.push_back(triples[i].key);
      offsets.push_back(i);
    }
    edges.push_back({triples[i].neighbor, triples[i].label});
  }
  offsets.push_back(triples.size());
}

}  // namespace

LabeledGraph GraphBuilder::build() && {
  LabeledGraph g;
  std::vector<Triple> out, in;
  LabelId id = 0;
  for (auto& [name, pairs] : edges_) {
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

    LabeledGraph::LabelData data;
    data.name = name;
    data.forward = Adjacency(pairs);
    std::vector<std::pair<VertexId, VertexId>> reversed;
    reversed.reserve(pairs.size());
    for (const auto& [s, d] : pairs) {
      reversed.emplace_back(d, s);
      g.vertices_.push_back(s);
      g.vertices_.push_back(d);
      out.push_back({s, d, id});
      in.push_back({d, s, id});
    }
    std::sort(reversed.begin(), reversed.end());
    data.backward = Adjacency(reversed);
    g.num_edges_ += pairs.size();
    data.by_src = std::move(pairs);
    g.label_ids_.emplace(name, id);
    g.labels_.push_back(std::move(data));
    ++id;
  }
  std::sort(g.vertices_.begin(), g.vertices_.end());
  g.vertices_.erase(std::unique(g.vertices_.begin(), g.vertices_.end()), g.vertices_.end());
  build_incident(out, g.out_keys_, g.out_offsets_, g.out_edges_);
  build_incident(in, g.in_keys_, g.in_offsets_, g.in_edges_);
  edges_.clear();
  return g;
}

namespace {

VertexId parse_vertex(std::string_view token, std::size_t line_no) {
  if (!token.empty() && token.front() == '-') throw ParseError("negative vertex id '" + std::string(token) + "'", line_no);
  VertexId v = 0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ParseError("vertex id must be a non-negative integer, got '" + std::string(token) + "'", line_no);
  }
  return v;
}

}  // namespace

LabeledGraph load_graph(std::istream& in) {
  GraphBuilder builder;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string src, dst, label, extra;
    if (!(fields >> src)) continue;
    if (src.front() == '#') continue;
    if (!(fields >> dst >> label) || (fields >> extra)) {
      throw ParseError("expected 'src dst label'", line_no);
    }
    builder.add_edge(parse_vertex(src, line_no), parse_vertex(dst, line_no), label);
  }
  return std::move(builder).build();
}

LabeledGraph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open graph file '" + path + "'");
  return load_graph(in);
}

void write_graph(const LabeledGraph& g, std::ostream& out) {
  for (LabelId id = 0; id < g.num_labels(); ++id) {
    const auto& data = g.label_data(id);
    for (const auto& [s, d] : data.by_src) out << s << ' ' << d << ' ' << data.name << '\n';
  }
}

std::size_t max_degree(const Relation& r, Position position) {
  const auto* index = r.index(position);
  return index ? index->max_degree() : 0;
}

}  // namespace cegest
