#include "cegest/oracle.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "cegest/errors.hpp"

namespace cegest {

namespace {

MatchCount checked_add(MatchCount a, MatchCount b) {
  MatchCount r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("match count exceeds 64 bits");
  return r;
}

MatchCount checked_mul(MatchCount a, MatchCount b) {
  MatchCount r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("match count exceeds 64 bits");
  return r;
}

// Backtracking matcher that binds one variable at a time and splits the
// remaining edges into components that are independent given the bound
// variables. Component results are memoized on the values of their boundary
// variables, which makes acyclic queries polynomial.
class MatchEngine {
 public:
  MatchEngine(const LabeledGraph& g, const QueryGraph& q) : g_(g), q_(q), values_(q.num_vars(), 0) {
    labels_.reserve(q.num_edges());
    for (const auto& e : q.edges()) labels_.push_back(g.label_id(e.label));
    incident_.assign(q.num_vars(), 0);
    for (std::size_t i = 0; i < q.num_edges(); ++i) {
      incident_[q.edge(i).src] |= EdgeMask{1} << i;
      incident_[q.edge(i).dst] |= EdgeMask{1} << i;
    }
  }

  // Distinct bindings of `output` vars extending to matches of `remaining`.
  MatchCount count(EdgeMask remaining, VarMask bound, VarMask output) {
    remaining = check_closed_edges(remaining, bound);
    if (remaining == kFailed) return 0;
    MatchCount total = 1;
    for (const EdgeMask comp : components(remaining, bound)) {
      const MatchCount c = count_component(comp, bound, output);
      if (c == 0) return 0;
      total = checked_mul(total, c);
    }
    return total;
  }

  bool exists(EdgeMask remaining, VarMask bound) {
    remaining = check_closed_edges(remaining, bound);
    if (remaining == kFailed) return false;
    for (const EdgeMask comp : components(remaining, bound)) {
      if (!exists_component(comp, bound)) return false;
    }
    return true;
  }

  // Enumerates distinct bindings of `target` vars that extend to a match.
  void enumerate(VarMask target, VarMask bound, const std::function<void(std::span<const VertexId>)>& visit) {
    const VarMask pending = target & ~bound;
    if (pending == 0) {
      if (exists(q_.all_edges(), bound)) visit(values_);
      return;
    }
    const int v = pick_var(pending, bound, q_.all_edges());
    for (const VertexId x : candidates(v, bound, q_.all_edges())) {
      values_[v] = x;
      enumerate(target, bound | (VarMask{1} << v), visit);
    }
  }

  std::vector<VertexId>& values() { return values_; }

 private:
  static constexpr EdgeMask kFailed = ~EdgeMask{0};

  VarMask vars_of_edge(std::size_t e) const {
    return (VarMask{1} << q_.edge(e).src) | (VarMask{1} << q_.edge(e).dst);
  }

  bool edge_holds(std::size_t e) const {
    const auto& label = labels_[e];
    if (!label) return false;
    return g_.has_edge(values_[q_.edge(e).src], values_[q_.edge(e).dst], *label);
  }

  // Removes edges whose endpoints are both bound, returning kFailed if one is violated.
  EdgeMask check_closed_edges(EdgeMask remaining, VarMask bound) const {
    EdgeMask open = 0;
    for (EdgeMask rest = remaining; rest; rest &= rest - 1) {
      const auto e = static_cast<std::size_t>(std::countr_zero(rest));
      if ((vars_of_edge(e) & ~bound) == 0) {
        if (!edge_holds(e)) return kFailed;
      } else {
        open |= EdgeMask{1} << e;
      }
    }
    return open;
  }

  // Edges are connected iff they share an unbound variable.
  std::vector<EdgeMask> components(EdgeMask remaining, VarMask bound) const {
    std::vector<EdgeMask> out;
    while (remaining) {
      EdgeMask comp = remaining & (~remaining + 1);
      VarMask comp_vars = vars_of_edge(std::countr_zero(comp)) & ~bound;
      bool grew = true;
      while (grew) {
        grew = false;
        for (EdgeMask rest = remaining & ~comp; rest; rest &= rest - 1) {
          const auto e = static_cast<std::size_t>(std::countr_zero(rest));
          if (vars_of_edge(e) & comp_vars) {
            comp |= EdgeMask{1} << e;
            comp_vars |= vars_of_edge(e) & ~bound;
            grew = true;
          }
        }
      }
      out.push_back(comp);
      remaining &= ~comp;
    }
    return out;
  }

  VarMask vars_of(EdgeMask edges) const { return q_.vars_of(edges); }

  std::string memo_key(EdgeMask comp, VarMask bound, VarMask output, bool existence) const {
    const VarMask boundary = vars_of(comp) & bound;
    std::string key;
    key.reserve(16 + 8 * static_cast<std::size_t>(std::popcount(boundary)));
    auto put = [&key](std::uint64_t v) { key.append(reinterpret_cast<const char*>(&v), sizeof v); };
    put((static_cast<std::uint64_t>(comp) << 32) | (existence ? 0 : (output & vars_of(comp) & ~bound)));
    put(existence ? 1 : 0);
    for (VarMask rest = boundary; rest; rest &= rest - 1) put(values_[std::countr_zero(rest)]);
    return key;
  }

  MatchCount count_component(EdgeMask comp, VarMask bound, VarMask output) {
    const VarMask free_output = output & vars_of(comp) & ~bound;
    if (free_output == 0) return exists_component(comp, bound) ? 1 : 0;
    const auto key = memo_key(comp, bound, output, false);
    if (const auto it = count_memo_.find(key); it != count_memo_.end()) return it->second;
    const int v = pick_var(free_output, bound, comp);
    const auto saved = values_[v];
    MatchCount total = 0;
    for (const VertexId x : candidates(v, bound, comp)) {
      values_[v] = x;
      total = checked_add(total, count(comp, bound | (VarMask{1} << v), output));
    }
    values_[v] = saved;
    count_memo_.emplace(key, total);
    return total;
  }

  bool exists_component(EdgeMask comp, VarMask bound) {
    const auto key = memo_key(comp, bound, 0, true);
    if (const auto it = exists_memo_.find(key); it != exists_memo_.end()) return it->second;
    const int v = pick_var(vars_of(comp) & ~bound, bound, comp);
    const auto saved = values_[v];
    bool found = false;
    for (const VertexId x : candidates(v, bound, comp)) {
      values_[v] = x;
      if (exists(comp, bound | (VarMask{1} << v))) {
        found = true;
        break;
      }
    }
    values_[v] = saved;
    exists_memo_.emplace(key, found);
    return found;
  }

  // Smallest neighbor list or domain through which `v` is constrained.
  std::size_t constraint_size(int v, VarMask bound, EdgeMask edges) const {
    std::size_t best = std::numeric_limits<std::size_t>::max();
    bool anchored = false;
    for (EdgeMask rest = incident_[v] & edges; rest; rest &= rest - 1) {
      const auto e = static_cast<std::size_t>(std::countr_zero(rest));
      const auto& edge = q_.edge(e);
      if (!labels_[e]) return 0;
      const auto& data = g_.label_data(*labels_[e]);
      const int other = edge.src == v ? edge.dst : edge.src;
      if (other != v && (bound & (VarMask{1} << other))) {
        const auto n = edge.src == v ? data.backward.neighbors(values_[other]).size()
                                     : data.forward.neighbors(values_[other]).size();
        if (!anchored || n < best) best = n;
        anchored = true;
      } else if (!anchored) {
        best = std::min(best, edge.src == v ? data.forward.keys().size() : data.backward.keys().size());
      }
    }
    return anchored ? best : best + (std::size_t{1} << 40);
  }

  int pick_var(VarMask choices, VarMask bound, EdgeMask edges) const {
    int best = -1;
    std::size_t best_size = 0;
    for (VarMask rest = choices; rest; rest &= rest - 1) {
      const int v = std::countr_zero(rest);
      const auto size = constraint_size(v, bound, edges);
      if (best < 0 || size < best_size) {
        best = v;
        best_size = size;
      }
    }
    return best;
  }

  std::vector<VertexId> candidates(int v, VarMask bound, EdgeMask edges) const {
    // Each incident edge yields either a neighbor list (other end bound) or a domain.
    std::vector<std::span<const VertexId>> lists;
    for (EdgeMask rest = incident_[v] & edges; rest; rest &= rest - 1) {
      const auto e = static_cast<std::size_t>(std::countr_zero(rest));
      const auto& edge = q_.edge(e);
      if (!labels_[e]) return {};
      const auto& data = g_.label_data(*labels_[e]);
      if (edge.src == v && edge.dst == v) {
        lists.push_back(data.forward.keys());
        continue;
      }
      const int other = edge.src == v ? edge.dst : edge.src;
      if (bound & (VarMask{1} << other)) {
        lists.push_back(edge.src == v ? data.backward.neighbors(values_[other])
                                      : data.forward.neighbors(values_[other]));
      } else {
        lists.push_back(edge.src == v ? data.forward.keys() : data.backward.keys());
      }
    }
    if (lists.empty()) return {};
    std::sort(lists.begin(), lists.end(), [](auto a, auto b) { return a.size() < b.size(); });
    std::vector<VertexId> out;
    out.reserve(lists.front().size());
    for (const VertexId x : lists.front()) {
      bool ok = true;
      for (std::size_t i = 1; i < lists.size() && ok; ++i) ok = std::binary_search(lists[i].begin(), lists[i].end(), x);
      if (ok) out.push_back(x);
    }
    return out;
  }

  const LabeledGraph& g_;
  const QueryGraph& q_;
  std::vector<std::optional<LabelId>> labels_;
  std::vector<EdgeMask> incident_;
  std::vector<VertexId> values_;
  std::unordered_map<std::string, MatchCount> count_memo_;
  std::unordered_map<std::string, bool> exists_memo_;
};

}  // namespace

MatchCount count_hom(const LabeledGraph& g, const QueryGraph& q) {
  MatchEngine engine(g, q);
  return engine.count(q.all_edges(), 0, q.all_vars());
}

bool has_match(const LabeledGraph& g, const QueryGraph& q) {
  MatchEngine engine(g, q);
  return engine.exists(q.all_edges(), 0);
}

MatchCount count_projection(const LabeledGraph& g, const QueryGraph& q, VarMask vars) {
  if (vars & ~q.all_vars()) throw ValidationError("projection refers to unknown variables");
  if (vars == q.all_vars()) return count_hom(g, q);
  return group_degree(g, q, 0, vars);
}

namespace {

// With few matches, group the distinct Y-projections of all matches by X
// directly. Binding non-adjacent variables first ranges over the cross
// product of their domains.
std::optional<MatchCount> direct_group_degree(MatchEngine& engine, const QueryGraph& q, VarMask x, VarMask y) {
  constexpr MatchCount kDirectLimit = 2'000'000;
  if (engine.count(q.all_edges(), 0, q.all_vars()) > kDirectLimit) return std::nullopt;
  std::vector<int> order;  // X vars first, then Y minus X
  for (VarMask rest = x; rest; rest &= rest - 1) order.push_back(std::countr_zero(rest));
  for (VarMask rest = y & ~x; rest; rest &= rest - 1) order.push_back(std::countr_zero(rest));
  const std::size_t width = order.size(), prefix = static_cast<std::size_t>(std::popcount(x));
  std::vector<VertexId> rows;
  engine.enumerate(q.all_vars(), 0, [&](std::span<const VertexId> binding) {
    for (const int v : order) rows.push_back(binding[v]);
  });
  const std::size_t n = rows.size() / width;
  auto row = [&](std::size_t i, std::size_t len) { return std::span<const VertexId>(rows.data() + i * width, len); };
  auto same = [&](std::size_t a, std::size_t b, std::size_t len) {
    const auto ra = row(a, len), rb = row(b, len);
    return std::equal(ra.begin(), ra.end(), rb.begin());
  };
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const auto ra = row(a, width), rb = row(b, width);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  });
  MatchCount best = 0, run = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && same(idx[i], idx[i - 1], width)) continue;
    run = (i > 0 && same(idx[i], idx[i - 1], prefix)) ? run + 1 : 1;
    best = std::max(best, run);
  }
  return best;
}

}  // namespace

MatchCount group_degree(const LabeledGraph& g, const QueryGraph& q, VarMask x, VarMask y) {
  if ((x & ~y) != 0 || (y & ~q.all_vars()) != 0) throw ValidationError("group_degree requires X subset of Y subset of vars(Q)");
  MatchEngine engine(g, q);
  if (y == 0) return engine.exists(q.all_edges(), 0) ? 1 : 0;
  if (y == q.all_vars() && x == 0) return engine.count(q.all_edges(), 0, y);
  if (const auto d = direct_group_degree(engine, q, x, y)) return *d;
  if (x == 0) return engine.count(q.all_edges(), 0, y);

  MatchEngine inner(g, q);
  MatchCount best = 0;
  engine.enumerate(x, 0, [&](std::span<const VertexId> binding) {
    std::copy(binding.begin(), binding.end(), inner.values().begin());
    best = std::max(best, inner.count(q.all_edges(), x, y));
  });
  return best;
}

void for_each_projection(const LabeledGraph& g, const QueryGraph& q, VarMask vars,
                         const std::function<void(std::span<const VertexId>)>& visit) {
  if (vars & ~q.all_vars()) throw ValidationError("projection refers to unknown variables");
  MatchEngine engine(g, q);
  engine.enumerate(vars, 0, visit);
}

namespace {

bool label_matches(const LabeledGraph& g, const WalkStep& step, LabelId label) {
  return step.label == kAnyLabel || g.label_data(label).name == step.label;
}

// Admissible next vertices from `at` for one step; one entry per (edge, orientation).
void continuations(const LabeledGraph& g, const WalkStep& step, VertexId at, std::vector<VertexId>& out) {
  out.clear();
  const bool any = step.label == kAnyLabel;
  const auto id = any ? std::nullopt : g.label_id(step.label);
  if (!any && !id) return;
  if (step.direction != WalkDirection::kBackward) {
    if (any) {
      for (const auto& e : g.out_edges(at)) out.push_back(e.neighbor);
    } else {
      const auto n = g.label_data(*id).forward.neighbors(at);
      out.insert(out.end(), n.begin(), n.end());
    }
  }
  if (step.direction != WalkDirection::kForward) {
    if (any) {
      for (const auto& e : g.in_edges(at)) out.push_back(e.neighbor);
    } else {
      const auto n = g.label_data(*id).backward.neighbors(at);
      out.insert(out.end(), n.begin(), n.end());
    }
  }
}

// Every (start, next) pair realizing the first step, in deterministic order.
std::vector<std::pair<VertexId, VertexId>> first_hops(const LabeledGraph& g, const WalkStep& step) {
  std::vector<std::pair<VertexId, VertexId>> out;
  for (LabelId l = 0; l < g.num_labels(); ++l) {
    if (!label_matches(g, step, l)) continue;
    for (const auto& [s, d] : g.label_data(l).by_src) {
      if (step.direction != WalkDirection::kBackward) out.emplace_back(s, d);
      if (step.direction != WalkDirection::kForward) out.emplace_back(d, s);
    }
  }
  return out;
}

void validate_steps(std::span<const WalkStep> steps) {
  if (steps.empty()) throw ValidationError("label sequence must be non-empty");
}

void enumerate_from(const LabeledGraph& g, std::span<const WalkStep> steps, std::size_t depth, Walk& walk,
                    WalkSample& out) {
  if (depth == steps.size()) {
    out.walks.push_back(walk);
    ++out.attempts;
    return;
  }
  std::vector<VertexId> next;
  continuations(g, steps[depth], walk.back(), next);
  for (const VertexId v : next) {
    walk.push_back(v);
    enumerate_from(g, steps, depth + 1, walk, out);
    walk.pop_back();
  }
}

}  // namespace

WalkSample sample_label_paths(const LabeledGraph& g, std::span<const WalkStep> steps, std::size_t samples,
                              std::uint64_t seed) {
  validate_steps(steps);
  if (samples == 0) throw ValidationError("sample count must be at least 1");
  WalkSample out;
  const auto starts = first_hops(g, steps[0]);
  if (starts.empty()) {
    out.attempts = samples;
    return out;
  }
  std::mt19937_64 rng(seed);
  std::vector<VertexId> next;
  for (std::size_t i = 0; i < samples; ++i) {
    ++out.attempts;
    const auto& [s, d] = starts[std::uniform_int_distribution<std::size_t>(0, starts.size() - 1)(rng)];
    Walk walk{s, d};
    bool dead = false;
    for (std::size_t k = 1; k < steps.size(); ++k) {
      continuations(g, steps[k], walk.back(), next);
      if (next.empty()) {
        dead = true;
        break;
      }
      walk.push_back(next[std::uniform_int_distribution<std::size_t>(0, next.size() - 1)(rng)]);
    }
    if (!dead) out.walks.push_back(std::move(walk));
  }
  return out;
}

WalkSample enumerate_label_paths(const LabeledGraph& g, std::span<const WalkStep> steps) {
  validate_steps(steps);
  WalkSample out;
  for (const auto& [s, d] : first_hops(g, steps[0])) {
    Walk walk{s, d};
    enumerate_from(g, steps, 1, walk, out);
  }
  return out;
}

}  // namespace cegest
