#include "cegest/ceg.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <ostream>
#include <queue>
#include <sstream>
#include <tuple>

#include "cegest/errors.hpp"

namespace cegest {

namespace {

constexpr std::size_t kMaxCegMVars = 12;
constexpr std::size_t kMaxDistinctValues = 1'000'000;

std::string label_list(const QueryGraph& q, EdgeMask edges) {
  std::string out;
  for (EdgeMask rest = edges; rest; rest &= rest - 1) {
    if (!out.empty()) out += '.';
    out += q.edge(std::countr_zero(rest)).label;
  }
  return out;
}

std::string var_list(const QueryGraph& q, VarMask vars) {
  std::string out = "{";
  for (VarMask rest = vars; rest; rest &= rest - 1) {
    if (out.size() > 1) out += ',';
    out += q.vars()[std::countr_zero(rest)];
  }
  return out + "}";
}

// Pattern counts of Q's subqueries, looked up once per edge mask.
class CountCache {
 public:
  CountCache(const QueryGraph& q, const Catalogue& cat) : q_(q), cat_(cat) {}

  MatchCount operator()(EdgeMask edges) {
    if (const auto it = cache_.find(edges); it != cache_.end()) return it->second;
    const auto c = cat_.count(q_, edges);
    if (!c) throw MissingStatisticError("catalogue has no count for pattern " + q_.induced(edges).to_string());
    cache_.emplace(edges, *c);
    return *c;
  }

 private:
  const QueryGraph& q_;
  const Catalogue& cat_;
  std::unordered_map<EdgeMask, MatchCount> cache_;
};

MatchCount required_deg(const Catalogue& cat, const QueryGraph& q, const CanonicalForm& form, EdgeMask pattern,
                        VarMask x, VarMask y) {
  const auto d = cat.max_deg(form.key, form.to_canonical(x), form.to_canonical(y));
  if (!d) {
    throw MissingStatisticError("catalogue has no degree statistic deg(" + var_list(q, x) + ", " + var_list(q, y) +
                                ") for pattern " + q.induced(pattern).to_string());
  }
  return *d;
}

std::vector<VarMask> subsets_of(VarMask m) {
  std::vector<VarMask> out;
  for (VarMask s = m;; s = (s - 1) & m) {
    out.push_back(s);
    if (s == 0) break;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

// Vertices for attribute-subset CEGs: every variable subset, by size then mask.
void add_attr_vertices(Ceg& ceg) {
  const QueryGraph& q = ceg.query();
  if (q.num_vars() > kMaxCegMVars) {
    throw ValidationError("attribute-subset CEGs support at most " + std::to_string(kMaxCegMVars) + " variables");
  }
  std::vector<VarMask> all = subsets_of(q.all_vars());
  std::stable_sort(all.begin(), all.end(), [](VarMask a, VarMask b) { return std::popcount(a) < std::popcount(b); });
  for (const VarMask m : all) ceg.add_vertex(m);
  ceg.set_bottom(0);
  ceg.set_top(*ceg.vertex_of(q.all_vars()));
}

Ceg build_edge_subset_ceg(const QueryGraph& q, const Catalogue& cat, bool closing_rates) {
  const std::size_t h = cat.h();
  const std::size_t m = q.num_edges();
  Ceg ceg(closing_rates ? CegKind::kOCR : CegKind::kO, q);
  CountCache count(q, cat);

  std::vector<EdgeMask> subsets = connected_subsets(q, m);
  std::stable_sort(subsets.begin(), subsets.end(),
                   [](EdgeMask a, EdgeMask b) { return std::popcount(a) < std::popcount(b); });
  ceg.set_bottom(ceg.add_vertex(0));
  for (const EdgeMask s : subsets) ceg.add_vertex(s);
  ceg.set_top(*ceg.vertex_of(q.all_edges()));

  const auto all_cycles = cycles(q).cycles;
  auto closes_new_cycle = [&](EdgeMask from, EdgeMask to) {
    return std::any_of(all_cycles.begin(), all_cycles.end(),
                       [&](const Cycle& c) { return (c.edges & ~to) == 0 && (c.edges & ~from) != 0; });
  };

  const std::size_t start_size = std::min(h, m);
  std::vector<EdgeMask> starts;
  for (const EdgeMask s : subsets) {
    if (static_cast<std::size_t>(std::popcount(s)) == start_size) starts.push_back(s);
  }
  if (std::any_of(starts.begin(), starts.end(), [&](EdgeMask s) { return closes_new_cycle(0, s); })) {
    std::erase_if(starts, [&](EdgeMask s) { return !closes_new_cycle(0, s); });
  }
  for (const EdgeMask s : starts) {
    Provenance p;
    p.numerator = s;
    ceg.add_edge(make_edge(ceg.bottom(), *ceg.vertex_of(s), Rational(count(s)), CegEdgeKind::kStart, false, p));
  }

  const std::vector<EdgeMask> extensions = connected_subsets(q, h);
  struct Candidate {
    std::size_t target;
    EdgeMask to;
    EdgeMask ext;
    EdgeMask inter;
  };
  for (const EdgeMask s : subsets) {
    std::vector<Candidate> cands;
    for (const EdgeMask ext : extensions) {
      const EdgeMask inter = ext & s;
      const EdgeMask diff = ext & ~s;
      if (!inter || !diff || !q.is_connected(inter)) continue;
      const EdgeMask to = s | diff;
      if (static_cast<std::size_t>(std::popcount(ext)) != std::min<std::size_t>(h, std::popcount(to))) continue;
      cands.push_back({*ceg.vertex_of(to), to, ext, inter});
    }
    if (std::any_of(cands.begin(), cands.end(), [&](const Candidate& c) { return closes_new_cycle(s, c.to); })) {
      std::erase_if(cands, [&](const Candidate& c) { return !closes_new_cycle(s, c.to); });
    }
    std::stable_sort(cands.begin(), cands.end(),
                     [](const Candidate& a, const Candidate& b) { return a.target < b.target; });

    const std::size_t from = *ceg.vertex_of(s);
    std::size_t last_closing_target = ceg.num_vertices();
    for (const auto& c : cands) {
      if (closing_rates) {
        std::vector<const Cycle*> long_closed;
        for (const auto& cyc : all_cycles) {
          if (cyc.length > h && (cyc.edges & ~c.to) == 0 && (cyc.edges & ~s) != 0) long_closed.push_back(&cyc);
        }
        if (!long_closed.empty()) {
          const EdgeMask diff = c.to & ~s;
          // Closing several edges at once has no closing statistic.
          if (std::popcount(diff) != 1) continue;
          if (last_closing_target == c.target) continue;
          last_closing_target = c.target;
          const auto closing_edge = static_cast<std::size_t>(std::countr_zero(diff));
          Provenance p;
          Rational rate(1);
          for (const Cycle* cyc : long_closed) {
            const ClosingKey key = closing_key_for(q, cyc->edges, closing_edge);
            const auto r = cat.closing_rate(key);
            if (!r) throw MissingStatisticError("catalogue has no closing rate " + key.to_string());
            rate *= *r;
            p.closing.push_back(key);
          }
          if (long_closed.size() > 1) ceg.set_overlapping_cycles();
          ceg.add_edge(make_edge(from, c.target, rate, CegEdgeKind::kCycleClosing, true, std::move(p)));
          continue;
        }
      }
      const MatchCount num = count(c.ext);
      const MatchCount den = count(c.inter);
      Provenance p;
      p.numerator = c.ext;
      p.denominator = c.inter;
      const Rational rate = den == 0 ? Rational(0) : Rational(BigInt(num), BigInt(den));
      ceg.add_edge(make_edge(from, c.target, rate, CegEdgeKind::kExtension, true, std::move(p)));
    }
  }
  return ceg;
}

std::vector<std::size_t> topological_order(const Ceg& ceg) {
  std::vector<std::size_t> indegree(ceg.num_vertices(), 0);
  for (const auto& e : ceg.edges()) ++indegree[e.to];
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t v = 0; v < ceg.num_vertices(); ++v) {
    if (indegree[v] == 0) ready.push(v);
  }
  std::vector<std::size_t> order;
  while (!ready.empty()) {
    const auto v = ready.top();
    ready.pop();
    order.push_back(v);
    for (const auto e : ceg.out_edges(v)) {
      if (--indegree[ceg.edge(e).to] == 0) ready.push(ceg.edge(e).to);
    }
  }
  if (order.size() != ceg.num_vertices()) throw ValidationError("CEG has a cycle; path aggregation needs a DAG");
  return order;
}

PathEstimate extend(const PathEstimate& p, std::size_t edge_id, const CegEdge& e) {
  PathEstimate out = p;
  out.edges.push_back(edge_id);
  out.estimate *= e.rate;
  out.log2_estimate += e.log_weight;
  return out;
}

PathEstimate path_from_edges(const Ceg& ceg, std::vector<std::size_t> edges) {
  PathEstimate p;
  for (const auto e : edges) {
    p.estimate *= ceg.edge(e).rate;
    p.log2_estimate += ceg.edge(e).log_weight;
  }
  p.edges = std::move(edges);
  return p;
}

PathEstimate min_path_dag(const Ceg& ceg) {
  const auto order = topological_order(ceg);
  // best[v]: minimum product from v to the top.
  std::vector<std::optional<Rational>> best(ceg.num_vertices());
  best[ceg.top()] = Rational(1);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto v = *it;
    if (v == ceg.top()) continue;
    for (const auto e : ceg.out_edges(v)) {
      const auto& edge = ceg.edge(e);
      if (!best[edge.to]) continue;
      Rational cand = edge.rate * *best[edge.to];
      if (!best[v] || cand < *best[v]) best[v] = std::move(cand);
    }
  }
  if (!best[ceg.bottom()]) throw MissingStatisticError("CEG top is unreachable from the bottom vertex");
  const Rational opt = *best[ceg.bottom()];

  // Walk forward taking the smallest next vertex that still admits an optimal completion.
  std::vector<std::size_t> edges;
  Rational acc(1);
  std::size_t at = ceg.bottom();
  while (at != ceg.top()) {
    std::optional<std::size_t> pick;
    for (const auto e : ceg.out_edges(at)) {
      const auto& edge = ceg.edge(e);
      if (!best[edge.to] || acc * edge.rate * *best[edge.to] != opt) continue;
      if (!pick || edge.to < ceg.edge(*pick).to) pick = e;
    }
    edges.push_back(*pick);
    acc *= ceg.edge(*pick).rate;
    at = ceg.edge(*pick).to;
  }
  return path_from_edges(ceg, std::move(edges));
}

std::vector<bool> reachable(const Ceg& ceg, std::size_t from, bool forward) {
  std::vector<bool> seen(ceg.num_vertices(), false);
  std::vector<std::size_t> stack{from};
  seen[from] = true;
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    for (const auto e : forward ? ceg.out_edges(v) : ceg.in_edges(v)) {
      const auto w = forward ? ceg.edge(e).to : ceg.edge(e).from;
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }
  return seen;
}

struct Label {
  Rational value;
  std::size_t state;
  std::vector<std::size_t> vertices;
  std::vector<std::size_t> edges;
};

bool label_less(const Label& a, const Label& b) {
  if (a.value != b.value) return a.value < b.value;
  if (a.edges.size() != b.edges.size()) return a.edges.size() < b.edges.size();
  return a.vertices < b.vertices;
}

// Dijkstra keyed by (product, hops, vertex sequence). Non-zero rates are at
// least 1 so keys grow along every edge. States are (vertex, passed a zero
// edge); only paths through a zero edge reach the second layer.
PathEstimate min_path_cyclic(const Ceg& ceg) {
  for (const auto& e : ceg.edges()) {
    if (e.rate != 0 && e.rate < 1) {
      throw ValidationError("minimum path with projection edges needs rates of 0 or at least 1");
    }
  }
  const auto from_bottom = reachable(ceg, ceg.bottom(), true);
  const auto to_top = reachable(ceg, ceg.top(), false);
  if (!from_bottom[ceg.top()]) throw MissingStatisticError("CEG top is unreachable from the bottom vertex");
  const bool zero = std::any_of(ceg.edges().begin(), ceg.edges().end(), [&](const CegEdge& e) {
    return e.rate == 0 && from_bottom[e.from] && to_top[e.to];
  });

  const std::size_t n = ceg.num_vertices();
  auto cmp = [](const Label& a, const Label& b) { return label_less(b, a); };
  std::priority_queue<Label, std::vector<Label>, decltype(cmp)> pq(cmp);
  std::vector<bool> settled(2 * n, false);
  pq.push({Rational(1), ceg.bottom(), {ceg.bottom()}, {}});
  const std::size_t goal = zero ? n + ceg.top() : ceg.top();
  while (!pq.empty()) {
    Label cur = pq.top();
    pq.pop();
    if (settled[cur.state]) continue;
    settled[cur.state] = true;
    if (cur.state == goal) return path_from_edges(ceg, std::move(cur.edges));
    const std::size_t v = cur.state % n;
    const bool passed = cur.state >= n;
    for (const auto e : ceg.out_edges(v)) {
      const auto& edge = ceg.edge(e);
      if (!zero && edge.rate == 0) continue;
      if (std::find(cur.vertices.begin(), cur.vertices.end(), edge.to) != cur.vertices.end()) continue;
      const std::size_t next = (passed || edge.rate == 0 ? n : 0) + edge.to;
      if (settled[next]) continue;
      Label l{zero ? Rational(0) : cur.value * edge.rate, next, cur.vertices, cur.edges};
      l.vertices.push_back(edge.to);
      l.edges.push_back(e);
      pq.push(std::move(l));
    }
  }
  throw MissingStatisticError("CEG top is unreachable from the bottom vertex");
}

void dfs_paths(const Ceg& ceg, std::size_t v, PathEstimate& path, std::vector<bool>& on_path, std::size_t cap,
               std::size_t& count, const std::function<void(const PathEstimate&)>& visit) {
  if (v == ceg.top()) {
    if (cap != 0 && count >= cap) {
      throw EnumerationOverflow("more than " + std::to_string(cap) + " CEG paths");
    }
    ++count;
    visit(path);
    return;
  }
  for (const auto e : ceg.out_edges(v)) {
    const auto& edge = ceg.edge(e);
    if (on_path[edge.to]) continue;
    const Rational saved = path.estimate;
    const double saved_log = path.log2_estimate;
    path.edges.push_back(e);
    path.estimate *= edge.rate;
    path.log2_estimate += edge.log_weight;
    on_path[edge.to] = true;
    dfs_paths(ceg, edge.to, path, on_path, cap, count, visit);
    on_path[edge.to] = false;
    path.edges.pop_back();
    path.estimate = saved;
    path.log2_estimate = saved_log;
  }
}

}  // namespace

std::string to_string(CegKind kind) {
  switch (kind) {
    case CegKind::kO: return "O";
    case CegKind::kOCR: return "OCR";
    case CegKind::kM: return "M";
    case CegKind::kD: return "D";
  }
  return "?";
}

CegKind parse_ceg_kind(const std::string& s) {
  if (s == "O") return CegKind::kO;
  if (s == "OCR") return CegKind::kOCR;
  if (s == "M") return CegKind::kM;
  if (s == "D") return CegKind::kD;
  throw ConfigError("unknown CEG kind '" + s + "'");
}

Ceg::Ceg(CegKind kind, QueryGraph q) : kind_(kind), query_(std::move(q)) {}

std::optional<std::size_t> Ceg::vertex_of(std::uint32_t content) const {
  const auto it = index_.find(content);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Ceg::add_vertex(std::uint32_t content) {
  const auto [it, inserted] = index_.emplace(content, contents_.size());
  if (!inserted) throw ValidationError("duplicate CEG vertex");
  contents_.push_back(content);
  out_.emplace_back();
  in_.emplace_back();
  return it->second;
}

std::size_t Ceg::add_edge(CegEdge edge) {
  if (edge.from >= num_vertices() || edge.to >= num_vertices()) throw ValidationError("CEG edge endpoint out of range");
  if (edge.rate < 0) throw ValidationError("negative extension rate");
  const std::size_t id = edges_.size();
  out_[edge.from].push_back(id);
  in_[edge.to].push_back(id);
  if (edge.kind == CegEdgeKind::kProjection) ++projection_edges_;
  edges_.push_back(std::move(edge));
  return id;
}

std::vector<std::size_t> Ceg::path_vertices(const PathEstimate& p) const {
  std::vector<std::size_t> out{bottom_};
  for (const auto e : p.edges) out.push_back(edges_[e].to);
  return out;
}

std::string Ceg::vertex_label(std::size_t v) const {
  const auto c = contents_[v];
  if (!edge_subsets()) return var_list(query_, c);
  if (c == 0) return "{}";
  std::string out = "{";
  for (EdgeMask rest = c; rest; rest &= rest - 1) {
    const auto& e = query_.edge(std::countr_zero(rest));
    if (out.size() > 1) out += ", ";
    out += query_.vars()[e.src] + " -" + e.label + "-> " + query_.vars()[e.dst];
  }
  return out + "}";
}

std::string Ceg::describe(const CegEdge& e) const {
  std::string out = to_string(e.rate) + " ";
  switch (e.kind) {
    case CegEdgeKind::kProjection: return out + "proj";
    case CegEdgeKind::kCycleClosing: {
      out += "close";
      for (const auto& k : e.provenance.closing) out += " " + k.to_string();
      return out;
    }
    case CegEdgeKind::kStart:
    case CegEdgeKind::kExtension: break;
  }
  if (edge_subsets()) {
    out += "|" + label_list(query_, e.provenance.numerator) + "|";
    if (e.provenance.denominator) out += "/|" + label_list(query_, e.provenance.denominator) + "|";
    return out;
  }
  return out + "deg(" + var_list(query_, e.provenance.x) + "," + var_list(query_, e.provenance.y) + ";" +
         label_list(query_, e.provenance.pattern) + ")";
}

CegEdge make_edge(std::size_t from, std::size_t to, Rational rate, CegEdgeKind kind, bool bound,
                  Provenance provenance) {
  const double w = log2_of(rate);
  return CegEdge{from, to, std::move(rate), w, kind, bound, std::move(provenance)};
}

Ceg build_ceg_o(const QueryGraph& q, const Catalogue& cat) { return build_edge_subset_ceg(q, cat, false); }

Ceg build_ceg_ocr(const QueryGraph& q, const Catalogue& cat) { return build_edge_subset_ceg(q, cat, true); }

Ceg build_ceg_m(const QueryGraph& q, const Catalogue& cat, bool with_projection_edges) {
  Ceg ceg(CegKind::kM, q);
  add_attr_vertices(ceg);
  const VarMask all = q.all_vars();
  std::set<std::tuple<std::size_t, std::size_t, MatchCount>> seen;
  for (const EdgeMask pattern : connected_subsets(q, cat.h())) {
    const auto form = canonical_form(q, pattern);
    const VarMask pvars = q.vars_of(pattern);
    for (const VarMask y : subsets_of(pvars)) {
      if (y == 0) continue;
      for (const VarMask x : subsets_of(y)) {
        if (x == y) continue;
        const MatchCount d = required_deg(cat, q, form, pattern, x, y);
        Provenance p;
        p.pattern = pattern;
        p.x = x;
        p.y = y;
        // Extra variables E outside Y ride along unchanged.
        for (const VarMask e : subsets_of(all & ~y)) {
          const auto from = *ceg.vertex_of(x | e);
          const auto to = *ceg.vertex_of(y | e);
          if (!seen.emplace(from, to, d).second) continue;
          ceg.add_edge(make_edge(from, to, Rational(d),
                                 from == ceg.bottom() ? CegEdgeKind::kStart : CegEdgeKind::kExtension, x != 0, p));
        }
      }
    }
  }
  if (with_projection_edges) {
    for (const VarMask y : subsets_of(all)) {
      for (const VarMask x : subsets_of(y)) {
        if (x == y) continue;
        Provenance p;
        p.x = x;
        p.y = y;
        ceg.add_edge(make_edge(*ceg.vertex_of(y), *ceg.vertex_of(x), Rational(1), CegEdgeKind::kProjection, false, p));
      }
    }
  }
  return ceg;
}

std::vector<CoverConstraint> cover_constraints(const QueryGraph& q, const std::vector<CoverEntry>& cover) {
  VarMask covered = 0;
  for (const auto& c : cover) {
    if (c.pattern == 0 || (c.pattern & ~q.all_edges()) || !q.is_connected(c.pattern)) {
      throw ValidationError("cover pattern must be a connected edge subset of the query");
    }
    if (c.covered == 0 || (c.covered & ~q.vars_of(c.pattern))) {
      throw ValidationError("cover entry must cover a non-empty subset of its pattern's variables");
    }
    covered |= c.covered;
  }
  if (covered != q.all_vars()) throw ValidationError("cover does not cover every query variable");
  std::vector<CoverConstraint> out;
  for (std::size_t j = 0; j < cover.size(); ++j) {
    for (const VarMask given : subsets_of(cover[j].covered)) {
      if (given != cover[j].covered) out.push_back({j, given});
    }
  }
  return out;
}

Ceg build_ceg_d(const QueryGraph& q, const Catalogue& cat, const std::vector<CoverEntry>& cover) {
  const auto constraints = cover_constraints(q, cover);
  Ceg ceg(CegKind::kD, q);
  add_attr_vertices(ceg);
  const VarMask all = q.all_vars();
  for (const auto& c : constraints) {
    const auto& entry = cover[c.entry];
    if (static_cast<std::size_t>(std::popcount(entry.pattern)) > cat.h()) {
      throw MissingStatisticError("cover pattern " + q.induced(entry.pattern).to_string() +
                                  " is larger than the catalogue's h");
    }
    const auto form = canonical_form(q, entry.pattern);
    const MatchCount d = required_deg(cat, q, form, entry.pattern, c.given, entry.covered);
    const VarMask added = entry.covered & ~c.given;
    Provenance p;
    p.pattern = entry.pattern;
    p.x = c.given;
    p.y = entry.covered;
    for (const VarMask e : subsets_of(all & ~entry.covered)) {
      const auto from = *ceg.vertex_of(c.given | e);
      const auto to = *ceg.vertex_of(c.given | e | added);
      ceg.add_edge(make_edge(from, to, Rational(d),
                             from == ceg.bottom() ? CegEdgeKind::kStart : CegEdgeKind::kExtension, c.given != 0, p));
    }
  }
  return ceg;
}

std::size_t for_each_path(const Ceg& ceg, const std::function<void(const PathEstimate&)>& visit, std::size_t cap) {
  PathEstimate path;
  std::vector<bool> on_path(ceg.num_vertices(), false);
  on_path[ceg.bottom()] = true;
  std::size_t count = 0;
  dfs_paths(ceg, ceg.bottom(), path, on_path, cap, count, visit);
  return count;
}

std::vector<PathEstimate> enumerate_paths(const Ceg& ceg, std::size_t cap) {
  std::vector<PathEstimate> out;
  for_each_path(ceg, [&](const PathEstimate& p) { out.push_back(p); }, cap);
  return out;
}

std::vector<HopAggregate> aggregate_paths(const Ceg& ceg) {
  const auto order = topological_order(ceg);
  std::vector<std::map<std::size_t, HopAggregate>> agg(ceg.num_vertices());
  HopAggregate& base = agg[ceg.bottom()][0];
  base.paths = 1;
  base.sum = 1;
  for (const auto v : order) {
    if (agg[v].empty() || v == ceg.top()) continue;
    for (const auto e : ceg.out_edges(v)) {
      const auto& edge = ceg.edge(e);
      for (const auto& [hops, a] : agg[v]) {
        auto [it, fresh] = agg[edge.to].try_emplace(hops + 1);
        HopAggregate& b = it->second;
        b.hops = hops + 1;
        b.paths += a.paths;
        b.sum += a.sum * edge.rate;
        if (edge.rate == 0) {
          b.zero_paths += a.paths;
        } else {
          b.zero_paths += a.zero_paths;
          b.log2_sum += a.log2_sum + (a.paths - a.zero_paths).convert_to<double>() * edge.log_weight;
        }
        const Rational lo = a.min.estimate * edge.rate;
        if (fresh || lo < b.min.estimate) b.min = extend(a.min, e, edge);
        const Rational hi = a.max.estimate * edge.rate;
        if (fresh || hi > b.max.estimate) b.max = extend(a.max, e, edge);
      }
    }
  }
  std::vector<HopAggregate> out;
  for (auto& [hops, a] : agg[ceg.top()]) out.push_back(std::move(a));
  return out;
}

std::set<Rational> distinct_path_estimates(const Ceg& ceg, std::optional<std::size_t> hops) {
  const auto order = topological_order(ceg);
  std::vector<std::map<std::size_t, std::set<Rational>>> values(ceg.num_vertices());
  values[ceg.bottom()][0].insert(Rational(1));
  std::size_t total = 0;
  for (const auto v : order) {
    if (values[v].empty() || v == ceg.top()) continue;
    for (const auto e : ceg.out_edges(v)) {
      const auto& edge = ceg.edge(e);
      for (const auto& [h, vals] : values[v]) {
        auto& into = values[edge.to][h + 1];
        for (const auto& x : vals) {
          if (into.insert(x * edge.rate).second && ++total > kMaxDistinctValues) {
            throw EnumerationOverflow("more than " + std::to_string(kMaxDistinctValues) + " distinct path values");
          }
        }
      }
    }
    if (v != ceg.bottom()) values[v].clear();
  }
  std::set<Rational> out;
  for (const auto& [h, vals] : values[ceg.top()]) {
    if (!hops || *hops == h) out.insert(vals.begin(), vals.end());
  }
  return out;
}

PathEstimate min_weight_path(const Ceg& ceg) {
  return ceg.has_projection_edges() ? min_path_cyclic(ceg) : min_path_dag(ceg);
}

void write_dot(const Ceg& ceg, std::ostream& out) {
  auto quote = [](const std::string& s) {
    std::string r = "\"";
    for (const char c : s) {
      if (c == '"' || c == '\\') r += '\\';
      r += c;
    }
    return r + "\"";
  };
  out << "digraph ceg_" << to_string(ceg.kind()) << " {\n  rankdir=BT;\n";
  for (std::size_t v = 0; v < ceg.num_vertices(); ++v) {
    out << "  v" << v << " [label=" << quote(ceg.vertex_label(v)) << "];\n";
  }
  for (const auto& e : ceg.edges()) {
    out << "  v" << e.from << " -> v" << e.to << " [label=" << quote(ceg.describe(e));
    if (e.kind == CegEdgeKind::kProjection) out << ", style=dashed";
    out << "];\n";
  }
  out << "}\n";
}

}  // namespace cegest
