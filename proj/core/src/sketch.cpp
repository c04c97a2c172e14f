#include "cegest/sketch.hpp"

#include <bit>
#include <map>
#include <tuple>

#include "cegest/errors.hpp"
#include "cegest/oracle.hpp"

namespace cegest {

namespace {

// The subquery formed by `edges`, with variables renumbered in ascending order.
struct SubPattern {
  QueryGraph query;
  std::vector<int> new_index;  // by parent variable, -1 if absent

  VarMask map(VarMask parent_vars) const {
    VarMask out = 0;
    for (VarMask rest = parent_vars; rest; rest &= rest - 1) out |= VarMask{1} << new_index[std::countr_zero(rest)];
    return out;
  }
};

SubPattern sub_pattern(const QueryGraph& q, EdgeMask edges) {
  SubPattern sp;
  sp.new_index.assign(q.num_vars(), -1);
  std::vector<std::string> vars;
  for (VarMask rest = q.vars_of(edges); rest; rest &= rest - 1) {
    const int v = std::countr_zero(rest);
    sp.new_index[v] = static_cast<int>(vars.size());
    vars.push_back(q.vars()[v]);
  }
  std::vector<QueryEdge> out;
  for (EdgeMask rest = edges; rest; rest &= rest - 1) {
    const auto& e = q.edge(std::countr_zero(rest));
    out.push_back({sp.new_index[e.src], sp.new_index[e.dst], e.label});
  }
  sp.query = QueryGraph(std::move(vars), std::move(out));
  return sp;
}

// Evaluates a fixed CEG path's formula against one component's data.
class ComponentFormula {
 public:
  explicit ComponentFormula(const SketchComponent& c) : c_(c) {}

  Rational evaluate(const Ceg& ceg, const PathEstimate& path) {
    Rational value(1);
    for (const auto id : path.edges) {
      const auto& e = ceg.edge(id);
      const auto& p = e.provenance;
      switch (e.kind) {
        case CegEdgeKind::kProjection: break;
        case CegEdgeKind::kCycleClosing: value *= e.rate; break;
        case CegEdgeKind::kStart:
        case CegEdgeKind::kExtension:
          if (!ceg.edge_subsets()) {
            value *= Rational(deg(p.pattern, p.x, p.y));
          } else if (p.denominator == 0) {
            value *= Rational(count(p.numerator));
          } else {
            const auto den = count(p.denominator);
            value *= den == 0 ? Rational(0) : Rational(BigInt(count(p.numerator)), BigInt(den));
          }
          break;
      }
      if (value == 0) break;
    }
    return value;
  }

 private:
  MatchCount count(EdgeMask edges) {
    if (const auto it = counts_.find(edges); it != counts_.end()) return it->second;
    const auto n = count_hom(c_.graph, sub_pattern(c_.query, edges).query);
    counts_.emplace(edges, n);
    return n;
  }

  MatchCount deg(EdgeMask pattern, VarMask x, VarMask y) {
    const auto key = std::make_tuple(pattern, x, y);
    if (const auto it = degs_.find(key); it != degs_.end()) return it->second;
    const auto sp = sub_pattern(c_.query, pattern);
    const auto d = group_degree(c_.graph, sp.query, sp.map(x), sp.map(y));
    degs_.emplace(key, d);
    return d;
  }

  const SketchComponent& c_;
  std::map<EdgeMask, MatchCount> counts_;
  std::map<std::tuple<EdgeMask, VarMask, VarMask>, MatchCount> degs_;
};

std::size_t integer_root(std::size_t k, int s) {
  for (std::size_t p = 2;; ++p) {
    std::size_t pow = 1;
    for (int i = 0; i < s && pow <= k; ++i) pow *= p;
    if (pow == k) return p;
    if (pow > k) return 0;
  }
}

}  // namespace

std::vector<EdgeTag> classify_edges(const Ceg& ceg, const PathEstimate& path) {
  const QueryGraph& q = ceg.query();
  std::vector<EdgeTag> out;
  for (const auto id : path.edges) {
    const auto& e = ceg.edge(id);
    VarMask from = ceg.content(e.from);
    VarMask to = ceg.content(e.to);
    if (ceg.edge_subsets()) {
      from = q.vars_of(from);
      to = q.vars_of(to);
    }
    out.push_back({e.bound, to & ~from});
  }
  return out;
}

VarMask sketch_attributes(const Ceg& ceg, const PathEstimate& path) {
  VarMask s = ceg.query().join_vars();
  for (const auto& t : classify_edges(ceg, path)) {
    if (t.bound) s &= ~t.extension;
  }
  return s;
}

SketchPlan plan_sketch(const QueryGraph& q, VarMask attributes, std::size_t k, std::uint64_t seed) {
  if (k == 0) throw SketchPlanError("sketch budget K must be at least 1");
  if (attributes & ~q.all_vars()) throw ValidationError("sketch attributes are not query variables");
  SketchPlan plan;
  plan.seed = seed;
  const int s = std::popcount(attributes);
  if (k > 1 && s > 0) {
    const std::size_t parts = integer_root(k, s);
    if (parts < 2) {
      throw SketchPlanError("K=" + std::to_string(k) + " is not p^" + std::to_string(s) +
                            " for an integer p >= 2");
    }
    plan.attributes = attributes;
    plan.k = k;
    plan.parts = parts;
  }
  for (const auto& e : q.edges()) {
    const VarMask pa = plan.attributes & ((VarMask{1} << e.src) | (VarMask{1} << e.dst));
    std::size_t pieces = 1;
    for (int i = 0; i < std::popcount(pa); ++i) pieces *= plan.parts;
    plan.partition_attributes.push_back(pa);
    plan.pieces.push_back(pieces);
  }
  return plan;
}

std::size_t sketch_bucket(VertexId v, std::uint64_t seed, std::size_t parts) {
  const std::uint64_t h = ((v ^ seed) * 0x9E3779B97F4A7C15ULL) >> 32;
  return static_cast<std::size_t>(h % parts);
}

std::vector<SketchComponent> make_sketch(const QueryGraph& q, const LabeledGraph& g, const SketchPlan& plan) {
  std::vector<int> attrs;
  for (VarMask rest = plan.attributes; rest; rest &= rest - 1) attrs.push_back(std::countr_zero(rest));
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < q.num_edges(); ++i) labels.push_back(q.edge(i).label + "#qe" + std::to_string(i));
  const QueryGraph relabeled = q.with_labels(labels);

  std::vector<SketchComponent> out;
  for (std::size_t c = 0; c < plan.k; ++c) {
    // Component index in base `parts`, first attribute most significant.
    std::vector<std::size_t> buckets(attrs.size());
    std::size_t rest = c;
    for (std::size_t i = attrs.size(); i-- > 0;) {
      buckets[i] = rest % plan.parts;
      rest /= plan.parts;
    }
    std::vector<int> bucket_of_var(q.num_vars(), -1);
    for (std::size_t i = 0; i < attrs.size(); ++i) bucket_of_var[attrs[i]] = static_cast<int>(buckets[i]);
    auto fits = [&](int var, VertexId v) {
      return bucket_of_var[var] < 0 ||
             sketch_bucket(v, plan.seed, plan.parts) == static_cast<std::size_t>(bucket_of_var[var]);
    };
    GraphBuilder builder;
    for (std::size_t i = 0; i < q.num_edges(); ++i) {
      const auto& e = q.edge(i);
      for (const auto& [s, d] : g.relation(e.label).tuples()) {
        if (fits(e.src, s) && fits(e.dst, d)) builder.add_edge(s, d, labels[i]);
      }
    }
    out.push_back({std::move(buckets), std::move(builder).build(), relabeled});
  }
  return out;
}

SketchEstimate estimate_with_sketch(const QueryGraph& q, const LabeledGraph& g, const Catalogue& cat, std::size_t k,
                                    const SketchBase& base, std::uint64_t seed) {
  SketchEstimate result;
  std::optional<Ceg> ceg;
  PathEstimate path;
  if (base.type == SketchBase::Type::kMolp) {
    result.estimate = estimate_molp(q, cat);
    if (!result.estimate.chosen_path) {
      // A zero statistic already made the estimate 0.
      result.plan = plan_sketch(q, 0, k, seed);
      return result;
    }
    ceg.emplace(build_ceg_m(q, cat, false));
    path = *result.estimate.chosen_path;
  } else {
    ceg.emplace(base.ceg_kind == CegKind::kOCR ? build_ceg_ocr(q, cat) : build_ceg_o(q, cat));
    result.estimate = estimate_optimistic(*ceg, base.choice);
    path = representative_path(*ceg, base.choice);
  }
  result.plan = plan_sketch(q, sketch_attributes(*ceg, path), k, seed);
  if (result.plan.k == 1) return result;

  Rational total(0);
  for (const auto& component : make_sketch(q, g, result.plan)) {
    ComponentFormula formula(component);
    result.component_values.push_back(formula.evaluate(*ceg, path));
    total += result.component_values.back();
  }
  result.estimate.value = total;
  result.estimate.chosen_path = std::move(path);
  return result;
}

}  // namespace cegest
