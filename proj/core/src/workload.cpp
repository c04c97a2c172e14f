#include "cegest/workload.hpp"

#include <algorithm>
#include <bit>
#include <random>

#include "cegest/errors.hpp"
#include "cegest/oracle.hpp"

namespace cegest {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

template <class T>
const T& pick(const std::vector<T>& items, std::mt19937_64& rng) {
  return items[std::uniform_int_distribution<std::size_t>(0, items.size() - 1)(rng)];
}

// Edge order where every edge after the first shares a variable with an earlier one.
std::vector<std::size_t> connected_order(const QueryGraph& q) {
  std::vector<std::size_t> order{0};
  EdgeMask placed = 1;
  while (order.size() < q.num_edges()) {
    for (std::size_t e = 0; e < q.num_edges(); ++e) {
      if (!(placed & (EdgeMask{1} << e)) && (q.adjacent_edges(e) & placed)) {
        order.push_back(e);
        placed |= EdgeMask{1} << e;
        break;
      }
    }
  }
  return order;
}

bool fixed_label(const QueryEdge& e) { return e.label != kUnassignedLabel; }

std::optional<QueryGraph> try_labels(const QueryGraph& tmpl, const std::vector<std::string>& labels) {
  try {
    return tmpl.with_labels(labels);
  } catch (const ValidationError&) {
    return std::nullopt;  // two parallel edges drew the same label
  }
}

std::optional<QueryGraph> uniform_labels(const QueryGraph& tmpl, const LabeledGraph& g, std::mt19937_64& rng,
                                         const InstantiationOptions& options,
                                         std::chrono::steady_clock::time_point deadline) {
  const auto names = g.label_names();
  if (names.empty()) return std::nullopt;
  for (std::size_t attempt = 0; attempt < options.attempts; ++attempt) {
    if (std::chrono::steady_clock::now() > deadline) return std::nullopt;
    std::vector<std::string> labels;
    for (const auto& e : tmpl.edges()) labels.push_back(fixed_label(e) ? e.label : pick(names, rng));
    auto q = try_labels(tmpl, labels);
    if (q && has_match(g, *q)) return q;
  }
  return std::nullopt;
}

std::optional<QueryGraph> edge_at_a_time(const QueryGraph& tmpl, const LabeledGraph& g, std::mt19937_64& rng,
                                         const InstantiationOptions& options,
                                         std::chrono::steady_clock::time_point deadline) {
  if (g.num_edges() == 0) return std::nullopt;
  const auto order = connected_order(tmpl);
  struct DataEdge {
    VertexId src;
    VertexId dst;
    LabelId label;
  };
  std::vector<DataEdge> all;
  for (LabelId l = 0; l < g.num_labels(); ++l) {
    for (const auto& [s, d] : g.label_data(l).by_src) all.push_back({s, d, l});
  }
  for (std::size_t attempt = 0; attempt < options.attempts; ++attempt) {
    if (std::chrono::steady_clock::now() > deadline) return std::nullopt;
    std::vector<std::optional<VertexId>> binding(tmpl.num_vars());
    std::vector<std::string> labels(tmpl.num_edges());
    bool ok = true;
    for (const auto e : order) {
      const auto& qe = tmpl.edge(e);
      const auto& bs = binding[qe.src];
      const auto& bd = binding[qe.dst];
      std::vector<DataEdge> cands;
      auto admit = [&](VertexId s, VertexId d, LabelId l) {
        if (fixed_label(qe) && g.label_data(l).name != qe.label) return;
        if (qe.src == qe.dst && s != d) return;
        if (bs && *bs != s) return;
        if (bd && *bd != d) return;
        cands.push_back({s, d, l});
      };
      if (bs) {
        for (const auto& out : g.out_edges(*bs)) admit(*bs, out.neighbor, out.label);
      } else if (bd) {
        for (const auto& in : g.in_edges(*bd)) admit(in.neighbor, *bd, in.label);
      } else {
        for (const auto& d : all) admit(d.src, d.dst, d.label);
      }
      if (cands.empty()) {
        ok = false;
        break;
      }
      const auto& chosen = pick(cands, rng);
      binding[qe.src] = chosen.src;
      binding[qe.dst] = chosen.dst;
      labels[e] = g.label_data(chosen.label).name;
    }
    if (!ok) continue;
    if (auto q = try_labels(tmpl, labels)) return q;
  }
  return std::nullopt;
}

}  // namespace

InstantiationMode parse_instantiation_mode(const std::string& s) {
  if (s == "uniform-labels") return InstantiationMode::kUniformLabels;
  if (s == "edge-at-a-time") return InstantiationMode::kEdgeAtATime;
  throw ConfigError("unknown instantiation mode '" + s + "'");
}

std::optional<QueryGraph> instantiate_template(const QueryGraph& tmpl, const LabeledGraph& g, std::uint64_t seed,
                                               const InstantiationOptions& options) {
  std::mt19937_64 rng(seed);
  const auto deadline = std::chrono::steady_clock::now() + options.time_limit;
  if (options.mode == InstantiationMode::kUniformLabels) return uniform_labels(tmpl, g, rng, options, deadline);
  return edge_at_a_time(tmpl, g, rng, options, deadline);
}

std::vector<WorkloadEntry> generate_workload(const std::vector<WorkloadEntry>& templates, const LabeledGraph& g,
                                             std::size_t per_template, std::uint64_t seed,
                                             const InstantiationOptions& options) {
  std::vector<WorkloadEntry> out;
  for (std::size_t t = 0; t < templates.size(); ++t) {
    const auto& tmpl = templates[t];
    const std::string name = tmpl.template_name.empty() ? tmpl.id : tmpl.template_name;
    for (std::size_t i = 0; i < per_template; ++i) {
      const auto instance_seed = splitmix(seed ^ splitmix((t << 32) | i));
      if (auto q = instantiate_template(tmpl.query, g, instance_seed, options)) {
        out.push_back({name + "-" + std::to_string(i), name, std::move(*q)});
      }
    }
  }
  return out;
}

std::string synthetic_label(std::size_t i) { return "L" + std::to_string(i); }

LabeledGraph random_graph(std::size_t vertices, std::size_t edges, std::size_t labels, std::uint64_t seed) {
  if (vertices == 0 || labels == 0) throw ValidationError("random graph needs vertices and labels");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<VertexId> vertex(0, vertices - 1);
  std::uniform_int_distribution<std::size_t> label(0, labels - 1);
  GraphBuilder b;
  for (std::size_t i = 0; i < edges; ++i) {
    const VertexId s = vertex(rng);
    const VertexId d = vertex(rng);
    b.add_edge(s, d, synthetic_label(label(rng)));
  }
  return std::move(b).build();
}

LabeledGraph correlated_graph(const CorrelatedGraphOptions& o) {
  if (o.vertices < 4 || o.labels < 2) throw ValidationError("correlated graph needs at least 4 vertices and 2 labels");
  std::mt19937_64 rng(o.seed);
  std::uniform_int_distribution<VertexId> vertex(0, o.vertices - 1);
  std::uniform_int_distribution<std::size_t> label(0, o.labels - 1);
  // Zipf-like vertex popularity so degrees are skewed.
  std::vector<double> weights(o.vertices);
  for (std::size_t i = 0; i < o.vertices; ++i) weights[i] = 1.0 / static_cast<double>(i + 1);
  std::discrete_distribution<VertexId> skewed(weights.begin(), weights.end());
  GraphBuilder b;
  for (std::size_t i = 0; i < o.background_edges; ++i) b.add_edge(skewed(rng), vertex(rng), synthetic_label(label(rng)));
  for (std::size_t i = 0; i < o.stars; ++i) {
    const VertexId hub = vertex(rng);
    const auto in_label = synthetic_label(i % 2);
    const auto out_label = synthetic_label((2 + i % 2) % o.labels);
    for (std::size_t k = 0; k < o.star_fanout; ++k) {
      b.add_edge(vertex(rng), hub, in_label);
      b.add_edge(hub, vertex(rng), out_label);
    }
  }
  for (std::size_t i = 0; i < o.squares; ++i) {
    const VertexId a = vertex(rng), c = vertex(rng), d = vertex(rng), e = vertex(rng);
    const std::size_t base = i % o.labels;
    b.add_edge(a, c, synthetic_label(base));
    b.add_edge(c, d, synthetic_label((base + 1) % o.labels));
    b.add_edge(d, e, synthetic_label((base + 2) % o.labels));
    b.add_edge(e, a, synthetic_label((base + 3) % o.labels));
  }
  return std::move(b).build();
}

}  // namespace cegest
