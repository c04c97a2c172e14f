#include "cegest/catalogue.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cegest/errors.hpp"

namespace cegest {

using json = nlohmann::json;

namespace {

struct Triple {
  int src;
  int dst;
  const std::string* label;
  friend bool operator<(const Triple& a, const Triple& b) {
    if (a.src != b.src) return a.src < b.src;
    if (a.dst != b.dst) return a.dst < b.dst;
    return *a.label < *b.label;
  }
};

std::string encode(std::vector<Triple>& triples) {
  std::sort(triples.begin(), triples.end());
  std::string out;
  for (const auto& t : triples) {
    out += std::to_string(t.src);
    out += '>';
    out += std::to_string(t.dst);
    out += ':';
    out += std::to_string(t.label->size());
    out += ':';
    out += *t.label;
    out += ';';
  }
  return out;
}

char direction_char(WalkDirection d) {
  switch (d) {
    case WalkDirection::kForward: return '>';
    case WalkDirection::kBackward: return '<';
    case WalkDirection::kAny: return '~';
  }
  return '?';
}

std::string direction_name(WalkDirection d) {
  switch (d) {
    case WalkDirection::kForward: return "forward";
    case WalkDirection::kBackward: return "backward";
    case WalkDirection::kAny: return "any";
  }
  return "";
}

WalkDirection parse_direction(const std::string& s) {
  if (s == "forward") return WalkDirection::kForward;
  if (s == "backward") return WalkDirection::kBackward;
  if (s == "any") return WalkDirection::kAny;
  throw ParseError("unknown walk direction '" + s + "'");
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
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

void add_pattern(Catalogue& cat, const LabeledGraph& g, const PatternKey& key, const CatalogueConfig& config) {
  if (cat.count(key)) return;
  const QueryGraph p = pattern_query(key);
  const MatchCount n = count_hom(g, p);
  cat.set_count(key, n);
  if (!config.degree_stats) return;
  for (const VarMask y : subsets_of(p.all_vars())) {
    if (y == 0) continue;
    for (const VarMask x : subsets_of(y)) {
      MatchCount d;
      if (n == 0) {
        d = 0;
      } else if (x == y) {
        d = 1;
      } else if (x == 0 && y == p.all_vars()) {
        d = n;
      } else {
        d = group_degree(g, p, x, y);
      }
      cat.set_degree(key, x, y, d);
    }
  }
}

void refresh_marginals(Catalogue& cat) {
  std::map<ClosingKey, ClosingStat> marginals;
  for (const auto& [key, stat] : cat.closing_stats()) {
    if (key.length == 0) continue;
    ClosingKey m = key;
    m.length = 0;
    auto& acc = marginals[m];
    acc.samples += stat.samples;
    acc.closures += stat.closures;
  }
  for (const auto& [key, stat] : marginals) cat.set_closing(key, stat);
}

void check_h(std::size_t h) {
  if (h < 2) throw ConfigError("catalogue requires h >= 2, got " + std::to_string(h));
}

void stamp_meta(Catalogue& cat, const CatalogueConfig& config) {
  cat.meta().graph = config.graph_identity;
  cat.meta().seed = config.seed;
  cat.meta().walk_budget = config.walk_budget;
}

}  // namespace

VarMask CanonicalForm::to_canonical(VarMask query_vars) const {
  VarMask out = 0;
  for (std::size_t i = 0; i < query_var_at.size(); ++i) {
    if (query_vars & (VarMask{1} << query_var_at[i])) out |= VarMask{1} << i;
  }
  return out;
}

CanonicalForm canonical_form(const QueryGraph& q, EdgeMask edges) {
  std::vector<int> vars;
  for (VarMask rest = q.vars_of(edges); rest; rest &= rest - 1) vars.push_back(std::countr_zero(rest));
  std::vector<int> edge_ids;
  for (EdgeMask rest = edges; rest; rest &= rest - 1) edge_ids.push_back(std::countr_zero(rest));

  std::vector<int> pos_of(q.num_vars(), -1);
  std::vector<int> order(vars.size());
  std::iota(order.begin(), order.end(), 0);
  CanonicalForm best;
  std::vector<Triple> triples(edge_ids.size());
  do {
    // order[i] is the canonical position of vars[i]
    for (std::size_t i = 0; i < vars.size(); ++i) pos_of[vars[i]] = order[i];
    for (std::size_t i = 0; i < edge_ids.size(); ++i) {
      const auto& e = q.edge(edge_ids[i]);
      triples[i] = {pos_of[e.src], pos_of[e.dst], &e.label};
    }
    std::string key = encode(triples);
    if (best.key.empty() || key < best.key) {
      best.key = std::move(key);
      best.query_var_at.assign(vars.size(), 0);
      for (std::size_t i = 0; i < vars.size(); ++i) best.query_var_at[order[i]] = vars[i];
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

QueryGraph pattern_query(const PatternKey& key) {
  std::vector<QueryEdge> edges;
  int max_var = -1;
  std::size_t i = 0;
  auto read_int = [&](char stop) {
    const auto end = key.find(stop, i);
    if (end == std::string::npos) throw ParseError("malformed pattern key '" + key + "'");
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(key.data() + i, key.data() + end, v);
    if (ec != std::errc() || ptr != key.data() + end || v < 0) throw ParseError("malformed pattern key '" + key + "'");
    i = end + 1;
    return v;
  };
  while (i < key.size()) {
    const int src = static_cast<int>(read_int('>'));
    const int dst = static_cast<int>(read_int(':'));
    const auto len = static_cast<std::size_t>(read_int(':'));
    if (i + len >= key.size() || key[i + len] != ';') throw ParseError("malformed pattern key '" + key + "'");
    edges.push_back({src, dst, key.substr(i, len)});
    i += len + 1;
    max_var = std::max({max_var, src, dst});
  }
  if (edges.empty()) throw ParseError("empty pattern key");
  std::vector<std::string> vars;
  for (int v = 0; v <= max_var; ++v) vars.push_back("v" + std::to_string(v));
  return QueryGraph(std::move(vars), std::move(edges));
}

std::string ClosingKey::to_string() const {
  return first.label + direction_char(first.direction) + "|" + close + "|" + last.label +
         direction_char(last.direction) + "|" + std::to_string(length);
}

std::vector<WalkStep> closing_walk(const ClosingKey& key) {
  if (key.length < 2) throw ValidationError("closing walk needs at least two hops: " + key.to_string());
  std::vector<WalkStep> steps;
  steps.push_back(key.first);
  for (std::size_t i = 2; i < key.length; ++i) steps.push_back({std::string(kAnyLabel), WalkDirection::kAny});
  steps.push_back(key.last);
  return steps;
}

ClosingKey closing_key_for(const QueryGraph& q, EdgeMask cycle, std::size_t closing_edge) {
  if (!(cycle & (EdgeMask{1} << closing_edge))) throw ValidationError("closing edge is not on the cycle");
  const auto& close = q.edge(closing_edge);
  EdgeMask rest = cycle & ~(EdgeMask{1} << closing_edge);
  const auto length = static_cast<std::size_t>(std::popcount(rest));
  if (length < 2) throw ValidationError("cycle too short for a closing statistic");
  std::vector<WalkStep> steps;
  int at = close.dst;
  while (rest) {
    int next_edge = -1;
    for (EdgeMask r = rest; r; r &= r - 1) {
      const int e = std::countr_zero(r);
      if (q.edge(e).src == at || q.edge(e).dst == at) {
        next_edge = e;
        break;
      }
    }
    if (next_edge < 0) throw ValidationError("edge set is not a simple cycle");
    const auto& e = q.edge(next_edge);
    const bool forward = e.src == at;
    steps.push_back({e.label, forward ? WalkDirection::kForward : WalkDirection::kBackward});
    at = forward ? e.dst : e.src;
    rest &= ~(EdgeMask{1} << next_edge);
  }
  if (at != close.src) throw ValidationError("edge set is not a simple cycle");
  return ClosingKey{steps.front(), close.label, steps.back(), length};
}

std::optional<MatchCount> Catalogue::count(const PatternKey& key) const {
  const auto it = counts_.find(key);
  if (it == counts_.end()) return std::nullopt;
  return it->second;
}

std::optional<MatchCount> Catalogue::count(const QueryGraph& q, EdgeMask edges) const {
  return count(canonical_form(q, edges).key);
}

std::optional<MatchCount> Catalogue::max_deg(const PatternKey& key, VarMask x, VarMask y) const {
  const auto it = deg_.find({key, x, y});
  if (it == deg_.end()) return std::nullopt;
  return it->second;
}

std::optional<MatchCount> Catalogue::max_deg(const Subquery& s, VarMask x, VarMask y) const {
  if ((x & ~y) || (y & ~s.vars())) return std::nullopt;
  const auto form = canonical_form(s.parent(), s.edges());
  return max_deg(form.key, form.to_canonical(x), form.to_canonical(y));
}

std::optional<Rational> Catalogue::closing_rate(const ClosingKey& key) const {
  const auto it = closing_.find(key);
  if (it == closing_.end()) return std::nullopt;
  return it->second.rate();
}

std::size_t Catalogue::memory_footprint() const {
  // Rough red-black tree node overhead per entry.
  constexpr std::size_t kNode = 32;
  std::size_t total = sizeof(*this);
  for (const auto& [k, v] : counts_) total += kNode + sizeof(k) + k.capacity() + sizeof(v);
  for (const auto& [k, v] : deg_) total += kNode + sizeof(k) + std::get<0>(k).capacity() + sizeof(v);
  for (const auto& [k, v] : closing_) {
    total += kNode + sizeof(k) + k.first.label.capacity() + k.close.capacity() + k.last.label.capacity() + sizeof(v);
  }
  return total;
}

ClosingStat measure_closing(const LabeledGraph& g, const ClosingKey& key, std::size_t walk_budget,
                            std::uint64_t seed) {
  const auto steps = closing_walk(key);
  const auto mixed = fnv1a(key.to_string()) ^ (seed * 0x9E3779B97F4A7C15ULL);
  const WalkSample sample =
      walk_budget == 0 ? enumerate_label_paths(g, steps) : sample_label_paths(g, steps, walk_budget, mixed);
  ClosingStat stat;
  stat.samples = sample.attempts;
  const auto close = g.label_id(key.close);
  if (!close) return stat;
  for (const auto& walk : sample.walks) {
    if (g.has_edge(walk.back(), walk.front(), *close)) ++stat.closures;
  }
  return stat;
}

void extend_catalogue(Catalogue& cat, const LabeledGraph& g, const QueryGraph& q, const CatalogueConfig& config) {
  check_h(config.h);
  if (cat.h() != config.h) throw ConfigError("catalogue was built with a different h");
  for (const EdgeMask s : connected_subsets(q, config.h)) add_pattern(cat, g, canonical_form(q, s).key, config);
  if (!config.closing_rates) return;
  bool added = false;
  for (const auto& c : cycles(q).cycles) {
    if (c.length <= config.h) continue;
    for (EdgeMask rest = c.edges; rest; rest &= rest - 1) {
      const auto key = closing_key_for(q, c.edges, static_cast<std::size_t>(std::countr_zero(rest)));
      if (cat.closing_stats().count(key)) continue;
      cat.set_closing(key, measure_closing(g, key, config.walk_budget, config.seed));
      added = true;
    }
  }
  if (added) refresh_marginals(cat);
}

Catalogue build_catalogue(const LabeledGraph& g, const std::vector<QueryGraph>& workload,
                          const CatalogueConfig& config) {
  check_h(config.h);
  Catalogue cat(config.h);
  stamp_meta(cat, config);
  for (const auto& q : workload) extend_catalogue(cat, g, q, config);
  return cat;
}

Catalogue build_exhaustive_catalogue(const LabeledGraph& g, const CatalogueConfig& config) {
  check_h(config.h);
  Catalogue cat(config.h);
  stamp_meta(cat, config);
  const auto labels = g.label_names();
  std::set<PatternKey> layer;
  std::set<PatternKey> all;
  auto admit = [&](const QueryGraph& p, std::set<PatternKey>& into) {
    auto key = canonical_form(p, p.all_edges()).key;
    if (all.count(key)) return;
    if (all.size() >= config.exhaustive_limit) {
      throw ConfigError("exhaustive catalogue exceeds " + std::to_string(config.exhaustive_limit) +
                        " patterns; use a workload catalogue");
    }
    all.insert(key);
    into.insert(std::move(key));
  };
  for (const auto& l : labels) {
    admit(QueryGraph({"v0", "v1"}, {{0, 1, l}}), layer);
    admit(QueryGraph({"v0"}, {{0, 0, l}}), layer);
  }
  for (std::size_t size = 2; size <= config.h; ++size) {
    std::set<PatternKey> next;
    for (const auto& key : layer) {
      const QueryGraph p = pattern_query(key);
      const int n = static_cast<int>(p.num_vars());
      std::vector<std::string> grown_vars = p.vars();
      grown_vars.push_back("v" + std::to_string(n));
      for (const auto& l : labels) {
        for (int a = 0; a <= n; ++a) {
          for (int b = 0; b <= n; ++b) {
            if (a == n && b == n) continue;
            std::vector<QueryEdge> edges = p.edges();
            const QueryEdge e{a, b, l};
            if (std::find(edges.begin(), edges.end(), e) != edges.end()) continue;
            edges.push_back(e);
            if (a == n || b == n) {
              admit(QueryGraph(grown_vars, std::move(edges)), next);
            } else {
              admit(QueryGraph(p.vars(), std::move(edges)), next);
            }
          }
        }
      }
    }
    layer = std::move(next);
  }
  for (const auto& key : all) add_pattern(cat, g, key, config);
  return cat;
}

void save_catalogue(const Catalogue& cat, std::ostream& out) {
  json doc;
  doc["version"] = kCatalogueFormatVersion;
  doc["h"] = cat.h();
  doc["meta"] = {{"graph", cat.meta().graph}, {"seed", cat.meta().seed}, {"walkBudget", cat.meta().walk_budget}};
  json counts = json::object();
  for (const auto& [k, v] : cat.counts()) counts[k] = v;
  doc["counts"] = std::move(counts);
  json degs = json::array();
  for (const auto& [k, v] : cat.degree_stats()) {
    degs.push_back({{"pattern", std::get<0>(k)}, {"x", std::get<1>(k)}, {"y", std::get<2>(k)}, {"deg", v}});
  }
  doc["degStats"] = std::move(degs);
  json rates = json::array();
  for (const auto& [k, v] : cat.closing_stats()) {
    const Rational r = v.rate();
    rates.push_back({{"first", {{"label", k.first.label}, {"dir", direction_name(k.first.direction)}}},
                     {"close", k.close},
                     {"last", {{"label", k.last.label}, {"dir", direction_name(k.last.direction)}}},
                     {"length", k.length},
                     {"samples", v.samples},
                     {"closures", v.closures},
                     {"rate",
                      {{"num", numerator(r).convert_to<std::uint64_t>()},
                       {"den", denominator(r).convert_to<std::uint64_t>()}}}});
  }
  doc["closingRates"] = std::move(rates);
  out << doc.dump(2) << '\n';
}

Catalogue load_catalogue(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("catalogue is not valid JSON: ") + e.what());
  }
  try {
    const int version = doc.at("version").get<int>();
    if (version != kCatalogueFormatVersion) {
      throw ParseError("unsupported catalogue version " + std::to_string(version));
    }
    Catalogue cat(doc.at("h").get<std::size_t>());
    const auto& meta = doc.at("meta");
    cat.meta().graph = meta.at("graph").get<std::string>();
    cat.meta().seed = meta.at("seed").get<std::uint64_t>();
    cat.meta().walk_budget = meta.at("walkBudget").get<std::size_t>();
    for (const auto& [k, v] : doc.at("counts").items()) {
      pattern_query(k);
      cat.set_count(k, v.get<MatchCount>());
    }
    for (const auto& d : doc.at("degStats")) {
      const auto x = d.at("x").get<VarMask>();
      const auto y = d.at("y").get<VarMask>();
      if (x & ~y) throw ParseError("degree statistic with X not a subset of Y");
      cat.set_degree(d.at("pattern").get<std::string>(), x, y, d.at("deg").get<MatchCount>());
    }
    for (const auto& r : doc.at("closingRates")) {
      ClosingKey key{{r.at("first").at("label").get<std::string>(), parse_direction(r.at("first").at("dir"))},
                     r.at("close").get<std::string>(),
                     {r.at("last").at("label").get<std::string>(), parse_direction(r.at("last").at("dir"))},
                     r.at("length").get<std::size_t>()};
      ClosingStat stat{r.at("samples").get<std::uint64_t>(), r.at("closures").get<std::uint64_t>()};
      const Rational stored(BigInt(r.at("rate").at("num").get<std::uint64_t>()),
                            BigInt(r.at("rate").at("den").get<std::uint64_t>()));
      if (stored != stat.rate()) throw ParseError("closing rate disagrees with its sample counts");
      cat.set_closing(key, stat);
    }
    return cat;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed catalogue: ") + e.what());
  } catch (const ValidationError& e) {
    throw ParseError(std::string("malformed catalogue: ") + e.what());
  }
}

void save_catalogue_file(const Catalogue& cat, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  save_catalogue(cat, out);
}

Catalogue load_catalogue_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return load_catalogue(in);
}

}  // namespace cegest
