#include "cegest/query.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "cegest/errors.hpp"

namespace cegest {

QueryGraph::QueryGraph(std::vector<std::string> vars, std::vector<QueryEdge> edges)
    : vars_(std::move(vars)), edges_(std::move(edges)) {
  if (edges_.empty()) throw ValidationError("query has no edges");
  if (edges_.size() > kMaxQueryEdges) throw ValidationError("query has more than 32 edges");
  if (vars_.size() > kMaxQueryVars) throw ValidationError("query has more than 32 variables");
  std::set<std::string> names(vars_.begin(), vars_.end());
  if (names.size() != vars_.size()) throw ValidationError("duplicate variable name");
  std::vector<bool> used(vars_.size(), false);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const auto& e = edges_[i];
    if (e.src < 0 || e.dst < 0 || static_cast<std::size_t>(e.src) >= vars_.size() ||
        static_cast<std::size_t>(e.dst) >= vars_.size()) {
      throw ValidationError("edge refers to an unknown variable");
    }
    if (e.label.empty()) throw ValidationError("edge with empty label");
    for (std::size_t j = 0; j < i; ++j) {
      if (edges_[j] == e) {
        throw ValidationError("duplicate edge " + vars_[e.src] + " -" + e.label + "-> " + vars_[e.dst]);
      }
    }
    used[e.src] = used[e.dst] = true;
  }
  if (std::find(used.begin(), used.end(), false) != used.end()) {
    throw ValidationError("variable not used by any edge");
  }
  adjacency_.assign(edges_.size(), 0);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    for (std::size_t j = 0; j < edges_.size(); ++j) {
      if (i == j) continue;
      const auto& a = edges_[i];
      const auto& b = edges_[j];
      if (a.src == b.src || a.src == b.dst || a.dst == b.src || a.dst == b.dst) adjacency_[i] |= EdgeMask{1} << j;
    }
  }
  if (!is_connected(all_edges())) throw ValidationError("query is disconnected");
}

VarMask QueryGraph::vars_of(EdgeMask edges) const {
  VarMask vars = 0;
  for (EdgeMask rest = edges; rest; rest &= rest - 1) {
    const auto& e = edges_[std::countr_zero(rest)];
    vars |= (VarMask{1} << e.src) | (VarMask{1} << e.dst);
  }
  return vars;
}

bool QueryGraph::is_connected(EdgeMask edges) const {
  if (edges == 0) return false;
  EdgeMask reached = edges & (~edges + 1);
  EdgeMask frontier = reached;
  while (frontier) {
    EdgeMask next = 0;
    for (EdgeMask rest = frontier; rest; rest &= rest - 1) next |= adjacency_[std::countr_zero(rest)];
    next &= edges & ~reached;
    reached |= next;
    frontier = next;
  }
  return reached == edges;
}

VarMask QueryGraph::join_vars() const {
  std::vector<int> uses(vars_.size(), 0);
  for (const auto& e : edges_) {
    ++uses[e.src];
    if (e.dst != e.src) ++uses[e.dst];
  }
  VarMask joins = 0;
  for (std::size_t v = 0; v < uses.size(); ++v) {
    if (uses[v] >= 2) joins |= VarMask{1} << v;
  }
  return joins;
}

bool QueryGraph::has_unassigned_labels() const {
  return std::any_of(edges_.begin(), edges_.end(), [](const QueryEdge& e) { return e.label == kUnassignedLabel; });
}

QueryGraph QueryGraph::with_labels(const std::vector<std::string>& labels) const {
  if (labels.size() != edges_.size()) throw ValidationError("label count does not match edge count");
  auto edges = edges_;
  for (std::size_t i = 0; i < edges.size(); ++i) edges[i].label = labels[i];
  return QueryGraph(vars_, std::move(edges));
}

QueryGraph QueryGraph::induced(EdgeMask edges) const {
  std::map<int, int> renumber;
  std::vector<std::string> vars;
  std::vector<QueryEdge> out;
  auto map_var = [&](int v) {
    const auto [it, inserted] = renumber.emplace(v, static_cast<int>(vars.size()));
    if (inserted) vars.push_back(vars_[v]);
    return it->second;
  };
  for (EdgeMask rest = edges; rest; rest &= rest - 1) {
    const auto& e = edges_[std::countr_zero(rest)];
    const int s = map_var(e.src);
    const int d = map_var(e.dst);
    out.push_back({s, d, e.label});
  }
  return QueryGraph(std::move(vars), std::move(out));
}

std::string QueryGraph::to_string() const {
  std::string text;
  for (const auto& e : edges_) text += vars_[e.src] + " -" + e.label + "-> " + vars_[e.dst] + "\n";
  return text;
}

namespace {

struct EdgeLine {
  std::string src, label, dst;
};

// `aX -LABEL-> aY`
EdgeLine parse_edge_line(const std::string& line, std::size_t line_no) {
  std::istringstream fields(line);
  std::string src, arrow, dst, extra;
  if (!(fields >> src >> arrow >> dst) || (fields >> extra)) throw ParseError("expected 'aX -LABEL-> aY'", line_no);
  if (arrow.size() < 4 || arrow.front() != '-' || arrow.compare(arrow.size() - 2, 2, "->") != 0) {
    throw ParseError("malformed edge arrow '" + arrow + "'", line_no);
  }
  return {src, arrow.substr(1, arrow.size() - 3), dst};
}

QueryGraph build_query(const std::vector<EdgeLine>& lines) {
  std::vector<std::string> vars;
  std::map<std::string, int> ids;
  auto var_id = [&](const std::string& name) {
    const auto [it, inserted] = ids.emplace(name, static_cast<int>(vars.size()));
    if (inserted) vars.push_back(name);
    return it->second;
  };
  std::vector<QueryEdge> edges;
  for (const auto& l : lines) {
    const int s = var_id(l.src);
    const int d = var_id(l.dst);
    edges.push_back({s, d, l.label});
  }
  return QueryGraph(std::move(vars), std::move(edges));
}

bool is_blank_or_comment(const std::string& line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '#';
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

QueryGraph parse_query(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  std::vector<EdgeLine> lines;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank_or_comment(line)) continue;
    lines.push_back(parse_edge_line(line, line_no));
  }
  return build_query(lines);
}

QueryGraph load_query_file(const std::string& path) { return parse_query(read_file(path)); }

Subquery::Subquery(const QueryGraph& parent, EdgeMask edges) : parent_(&parent), edges_(edges) {
  if ((edges & ~parent.all_edges()) != 0) throw ValidationError("subquery refers to edges outside the query");
  if (!parent.is_connected(edges)) throw ValidationError("subquery is not connected");
}

std::size_t Subquery::size() const { return static_cast<std::size_t>(std::popcount(edges_)); }

std::vector<int> Subquery::edge_indices() const {
  std::vector<int> out;
  for (EdgeMask rest = edges_; rest; rest &= rest - 1) out.push_back(std::countr_zero(rest));
  return out;
}

bool edge_set_less(EdgeMask a, EdgeMask b) {
  while (a && b) {
    const int la = std::countr_zero(a);
    const int lb = std::countr_zero(b);
    if (la != lb) return la < lb;
    a &= a - 1;
    b &= b - 1;
  }
  return a == 0 && b != 0;
}

std::vector<EdgeMask> connected_subsets(const QueryGraph& q, std::size_t max_edges) {
  std::vector<EdgeMask> result;
  std::vector<EdgeMask> layer;
  for (std::size_t e = 0; e < q.num_edges(); ++e) layer.push_back(EdgeMask{1} << e);
  for (std::size_t size = 1; size <= max_edges && !layer.empty(); ++size) {
    result.insert(result.end(), layer.begin(), layer.end());
    if (size == max_edges) break;
    std::unordered_set<EdgeMask> next;
    for (const EdgeMask s : layer) {
      EdgeMask frontier = 0;
      for (EdgeMask rest = s; rest; rest &= rest - 1) frontier |= q.adjacent_edges(std::countr_zero(rest));
      frontier &= ~s;
      for (; frontier; frontier &= frontier - 1) next.insert(s | (frontier & (~frontier + 1)));
    }
    layer.assign(next.begin(), next.end());
  }
  std::sort(result.begin(), result.end(), edge_set_less);
  return result;
}

std::vector<Subquery> connected_subqueries(const QueryGraph& q, std::size_t max_edges) {
  if (max_edges < 1) throw ValidationError("maxEdges must be at least 1");
  std::vector<Subquery> out;
  for (const EdgeMask m : connected_subsets(q, max_edges)) out.emplace_back(q, m);
  return out;
}

namespace {

// Simple paths from `at` to `target` using edges with index > `min_edge`.
void extend_cycle(const QueryGraph& q, std::size_t min_edge, int at, int target, EdgeMask used, VarMask visited,
                  std::set<EdgeMask>& found) {
  for (std::size_t e = min_edge + 1; e < q.num_edges(); ++e) {
    if (used & (EdgeMask{1} << e)) continue;
    const auto& edge = q.edge(e);
    if (edge.src == edge.dst) continue;
    int next;
    if (edge.src == at) {
      next = edge.dst;
    } else if (edge.dst == at) {
      next = edge.src;
    } else {
      continue;
    }
    const EdgeMask with = used | (EdgeMask{1} << e);
    if (next == target) {
      found.insert(with);
      continue;
    }
    if (visited & (VarMask{1} << next)) continue;
    extend_cycle(q, min_edge, next, target, with, visited | (VarMask{1} << next), found);
  }
}

}  // namespace

CycleSet cycles(const QueryGraph& q) {
  std::set<EdgeMask> found;
  for (std::size_t e = 0; e < q.num_edges(); ++e) {
    const auto& edge = q.edge(e);
    const EdgeMask start = EdgeMask{1} << e;
    if (edge.src == edge.dst) {
      found.insert(start);
      continue;
    }
    const VarMask visited = (VarMask{1} << edge.src) | (VarMask{1} << edge.dst);
    extend_cycle(q, e, edge.dst, edge.src, start, visited, found);
  }
  std::vector<EdgeMask> masks(found.begin(), found.end());
  std::sort(masks.begin(), masks.end(), edge_set_less);
  CycleSet set;
  for (const EdgeMask m : masks) set.cycles.push_back({m, static_cast<std::size_t>(std::popcount(m))});
  return set;
}

std::vector<WorkloadEntry> parse_workload(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<WorkloadEntry> out;
  std::string line;
  std::size_t line_no = 0;
  std::string id, template_name;
  std::vector<EdgeLine> lines;
  bool have_header = false;
  auto flush = [&](std::size_t at_line) {
    if (!have_header && lines.empty()) return;
    if (lines.empty()) throw ParseError("query '" + id + "' has no edges", at_line);
    try {
      out.push_back({id.empty() ? "q" + std::to_string(out.size()) : id, template_name, build_query(lines)});
    } catch (const ValidationError& e) {
      throw ParseError("query '" + id + "': " + e.what(), at_line);
    }
    lines.clear();
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank_or_comment(line)) continue;
    std::istringstream fields(line);
    std::string first;
    fields >> first;
    if (first == "query") {
      flush(line_no);
      have_header = true;
      id.clear();
      template_name.clear();
      if (!(fields >> id)) throw ParseError("query header needs an id", line_no);
      fields >> template_name;
      continue;
    }
    lines.push_back(parse_edge_line(line, line_no));
  }
  flush(line_no);
  return out;
}

std::vector<WorkloadEntry> load_workload_file(const std::string& path) { return parse_workload(read_file(path)); }

void write_workload(const std::vector<WorkloadEntry>& workload, std::ostream& out) {
  for (const auto& entry : workload) {
    out << "query " << entry.id;
    if (!entry.template_name.empty()) out << ' ' << entry.template_name;
    out << '\n' << entry.query.to_string();
  }
}

}  // namespace cegest
