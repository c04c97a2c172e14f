#pragma once

// Reference implementations used as test oracles. They work on plain edge
// lists and share no code with the library beyond the query/graph types.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "cegest/graph_store.hpp"
#include "cegest/oracle.hpp"
#include "cegest/query.hpp"

namespace testing {

using Triple = std::tuple<std::uint64_t, std::uint64_t, std::string>;

inline std::string data_path(const std::string& name) { return std::string(CEGEST_DATA_DIR) + "/" + name; }

inline std::vector<Triple> triples(const cegest::LabeledGraph& g) {
  std::vector<Triple> out;
  for (cegest::LabelId l = 0; l < g.num_labels(); ++l) {
    const auto& d = g.label_data(l);
    for (const auto& [s, t] : d.by_src) out.emplace_back(s, t, d.name);
  }
  return out;
}

inline cegest::LabeledGraph make_graph(const std::vector<Triple>& edges) {
  cegest::GraphBuilder b;
  for (const auto& [s, d, l] : edges) b.add_edge(s, d, l);
  return std::move(b).build();
}

// Nested-loop join: pick one data tuple per query edge, keep consistent
// choices. Calls `visit` with the variable binding of every match.
inline void nested_loop_matches(const std::vector<Triple>& data, const cegest::QueryGraph& q,
                                const std::function<void(const std::vector<std::uint64_t>&)>& visit) {
  std::vector<std::uint64_t> binding(q.num_vars());
  std::vector<int> bound(q.num_vars(), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == q.num_edges()) {
      visit(binding);
      return;
    }
    const auto& e = q.edge(i);
    for (const auto& [s, d, l] : data) {
      if (l != e.label) continue;
      if (bound[e.src] && binding[e.src] != s) continue;
      if (bound[e.dst] && binding[e.dst] != d) continue;
      if (e.src == e.dst && s != d) continue;
      const bool set_src = !bound[e.src];
      if (set_src) binding[e.src] = s;
      bound[e.src]++;
      const bool set_dst = !bound[e.dst];
      if (set_dst) binding[e.dst] = d;
      bound[e.dst]++;
      rec(i + 1);
      bound[e.src]--;
      bound[e.dst]--;
    }
  };
  rec(0);
}

inline std::uint64_t brute_count(const std::vector<Triple>& data, const cegest::QueryGraph& q) {
  std::uint64_t n = 0;
  nested_loop_matches(data, q, [&](const auto&) { ++n; });
  return n;
}

inline std::vector<std::uint64_t> project(const std::vector<std::uint64_t>& binding, std::uint32_t vars) {
  std::vector<std::uint64_t> out;
  for (std::size_t v = 0; v < binding.size(); ++v) {
    if (vars & (1u << v)) out.push_back(binding[v]);
  }
  return out;
}

// Group-by over the distinct Y-projections of all matches.
inline std::uint64_t brute_group_degree(const std::vector<Triple>& data, const cegest::QueryGraph& q,
                                        std::uint32_t x, std::uint32_t y) {
  std::set<std::vector<std::uint64_t>> ys;
  nested_loop_matches(data, q, [&](const auto& b) { ys.insert(project(b, y)); });
  std::map<std::vector<std::uint64_t>, std::uint64_t> groups;
  std::uint64_t best = 0;
  for (const auto& t : ys) {
    std::vector<std::uint64_t> key;
    std::size_t idx = 0;
    for (std::size_t v = 0; v < q.num_vars(); ++v) {
      if (!(y & (1u << v))) continue;
      if (x & (1u << v)) key.push_back(t[idx]);
      ++idx;
    }
    best = std::max(best, ++groups[key]);
  }
  return best;
}

inline std::vector<Triple> random_triples(std::mt19937_64& rng, std::size_t vertices, std::size_t edges,
                                          std::size_t labels) {
  std::uniform_int_distribution<std::uint64_t> v(0, vertices - 1);
  std::uniform_int_distribution<std::size_t> l(0, labels - 1);
  std::set<Triple> out;
  for (std::size_t i = 0; i < edges; ++i) out.emplace(v(rng), v(rng), std::string(1, static_cast<char>('A' + l(rng))));
  return {out.begin(), out.end()};
}

// Random connected query: each new edge touches an existing variable, and
// with probability `close` connects two existing ones instead.
inline cegest::QueryGraph random_query(std::mt19937_64& rng, std::size_t edges, std::size_t labels, double close = 0.3) {
  std::vector<std::string> vars{"a0"};
  std::vector<cegest::QueryEdge> out;
  std::set<std::tuple<int, int, std::string>> seen;
  std::uniform_int_distribution<std::size_t> l(0, labels - 1);
  std::bernoulli_distribution flip(0.5), closing(close);
  while (out.size() < edges) {
    const int n = static_cast<int>(vars.size());
    const int a = std::uniform_int_distribution<int>(0, n - 1)(rng);
    int b;
    if (n >= 3 && closing(rng)) {
      b = std::uniform_int_distribution<int>(0, n - 1)(rng);
      if (b == a) continue;
    } else {
      b = n;
      vars.push_back("a" + std::to_string(n));
    }
    std::string label(1, static_cast<char>('A' + l(rng)));
    auto e = flip(rng) ? cegest::QueryEdge{a, b, label} : cegest::QueryEdge{b, a, label};
    if (!seen.emplace(e.src, e.dst, e.label).second) {
      if (b == n) vars.pop_back();
      continue;
    }
    out.push_back(e);
  }
  return cegest::QueryGraph(vars, out);
}

// Connectivity by repeated relaxation over edge pairs.
inline bool brute_connected(const cegest::QueryGraph& q, cegest::EdgeMask m) {
  if (!m) return false;
  cegest::EdgeMask reach = m & (~m + 1);
  for (bool grew = true; grew;) {
    grew = false;
    for (std::size_t i = 0; i < q.num_edges(); ++i) {
      if (!(m >> i & 1) || (reach >> i & 1)) continue;
      for (std::size_t j = 0; j < q.num_edges(); ++j) {
        if (!(reach >> j & 1)) continue;
        const auto &a = q.edge(i), &b = q.edge(j);
        if (a.src == b.src || a.src == b.dst || a.dst == b.src || a.dst == b.dst) {
          reach |= cegest::EdgeMask{1} << i;
          grew = true;
          break;
        }
      }
    }
  }
  return reach == m;
}

// All walks, by recursion over the tuple list. A tuple may be traversed in
// either direction when the step allows it; both traversals count.
inline std::multiset<cegest::Walk> brute_walks(const std::vector<Triple>& data, const std::vector<cegest::WalkStep>& steps) {
  std::multiset<cegest::Walk> out;
  std::function<void(cegest::Walk&)> rec = [&](cegest::Walk& w) {
    if (w.size() == steps.size() + 1) {
      out.insert(w);
      return;
    }
    const auto& s = steps[w.size() - 1];
    for (const auto& t : data) {
      const auto& [a, b, l] = t;
      if (s.label != cegest::kAnyLabel && s.label != l) continue;
      if (s.direction != cegest::WalkDirection::kBackward && a == w.back()) {
        w.push_back(b);
        rec(w);
        w.pop_back();
      }
      if (s.direction != cegest::WalkDirection::kForward && b == w.back()) {
        w.push_back(a);
        rec(w);
        w.pop_back();
      }
    }
  };
  std::set<cegest::VertexId> vs;
  for (const auto& [a, b, l] : data) {
    vs.insert(a);
    vs.insert(b);
  }
  for (const auto v : vs) {
    cegest::Walk w{v};
    rec(w);
  }
  return out;
}

}  // namespace testing
