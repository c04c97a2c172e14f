#include <doctest.h>

#include <numeric>
#include <sstream>

#include "cegest/catalogue.hpp"
#include "cegest/errors.hpp"
#include "support.hpp"

using namespace cegest;

namespace {

using EdgeList = std::vector<std::tuple<int, int, std::string>>;

EdgeList sorted_edges(const QueryGraph& q, const std::vector<int>& perm) {
  EdgeList out;
  for (const auto& e : q.edges()) out.emplace_back(perm[e.src], perm[e.dst], e.label);
  std::sort(out.begin(), out.end());
  return out;
}

// Tries every bijection between the two variable sets.
bool brute_isomorphic(const QueryGraph& a, const QueryGraph& b) {
  if (a.num_vars() != b.num_vars() || a.num_edges() != b.num_edges()) return false;
  std::vector<int> ident(b.num_vars());
  std::iota(ident.begin(), ident.end(), 0);
  const auto target = sorted_edges(b, ident);
  std::vector<int> perm(a.num_vars());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    if (sorted_edges(a, perm) == target) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

QueryGraph shuffled(const QueryGraph& q, std::mt19937_64& rng) {
  std::vector<int> perm(q.num_vars());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::string> vars(q.num_vars());
  for (std::size_t v = 0; v < q.num_vars(); ++v) vars[perm[v]] = "x" + std::to_string(perm[v]);
  std::vector<QueryEdge> edges;
  for (const auto& e : q.edges()) edges.push_back({perm[e.src], perm[e.dst], e.label});
  std::shuffle(edges.begin(), edges.end(), rng);
  return QueryGraph(vars, edges);
}

}  // namespace

TEST_CASE("F1 Markov table entries") {
  const auto g = load_graph_file(testing::data_path("f1.graph"));
  const auto q = load_query_file(testing::data_path("q3p.query"));
  const auto cat = build_catalogue(g, {q}, {});
  CHECK(cat.count(q, 0b010) == 2u);  // B
  CHECK(cat.count(q, 0b011) == 4u);  // A B
  CHECK(cat.count(q, 0b110) == 3u);  // B C
  CHECK(cat.count(q, 0b001) == 4u);
  CHECK(cat.count(q, 0b100) == 3u);
  CHECK_FALSE(cat.count(q, 0b111).has_value());
}

TEST_CASE("canonical keys identify exactly the isomorphic patterns") {
  std::mt19937_64 rng(7);
  std::vector<QueryGraph> pool;
  for (int i = 0; i < 80; ++i) pool.push_back(testing::random_query(rng, 1 + i % 4, 2, 0.5));
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const auto& a = pool[i];
    const auto ka = canonical_form(a, a.all_edges()).key;
    const auto s = shuffled(a, rng);
    CHECK(canonical_form(s, s.all_edges()).key == ka);
    const auto back = pattern_query(ka);
    CHECK(brute_isomorphic(back, a));
    for (std::size_t j = i + 1; j < pool.size(); ++j) {
      const auto& b = pool[j];
      CHECK((canonical_form(b, b.all_edges()).key == ka) == brute_isomorphic(a, b));
    }
  }
}

TEST_CASE("canonical positions map subquery variables") {
  const auto q = parse_query("a -A-> b\nb -B-> c\nc -C-> d\n");
  const auto cf = canonical_form(q, 0b110);
  const auto p = pattern_query(cf.key);
  // The B edge of the query must land on the B edge of the pattern.
  const VarMask b_src = cf.to_canonical(0b0010);
  const VarMask b_dst = cf.to_canonical(0b0100);
  bool found = false;
  for (const auto& e : p.edges()) {
    if (e.label == "B") found = (VarMask{1} << e.src) == b_src && (VarMask{1} << e.dst) == b_dst;
  }
  CHECK(found);
}

TEST_CASE("catalogue counts and degrees equal the nested-loop join") {
  std::mt19937_64 rng(13);
  for (int round = 0; round < 25; ++round) {
    const auto data = testing::random_triples(rng, 10, 35, 3);
    const auto g = testing::make_graph(data);
    const auto q = testing::random_query(rng, 3 + round % 3, 3, 0.4);
    CatalogueConfig cc;
    cc.h = 2 + round % 2;
    cc.closing_rates = false;
    const auto cat = build_catalogue(g, {q}, cc);
    for (const auto& s : connected_subqueries(q, cc.h)) {
      const auto sub = q.induced(s.edges());
      CHECK(cat.count(s) == testing::brute_count(data, sub));
      const auto vars = s.vars();
      for (VarMask y = vars; y; y = (y - 1) & vars) {
        for (VarMask x = y;; x = (x - 1) & y) {
          const auto d = cat.max_deg(s, x, y);
          REQUIRE(d.has_value());
          // Map query variables to the induced query's first-use numbering.
          std::vector<int> idx(q.num_vars(), -1);
          int next = 0;
          for (EdgeMask r = s.edges(); r; r &= r - 1) {
            const auto& e = q.edge(std::countr_zero(r));
            if (idx[e.src] < 0) idx[e.src] = next++;
            if (idx[e.dst] < 0) idx[e.dst] = next++;
          }
          auto remap = [&](VarMask m) {
            VarMask out = 0;
            for (std::size_t v = 0; v < q.num_vars(); ++v)
              if (m >> v & 1) out |= VarMask{1} << idx[v];
            return out;
          };
          const auto expect = testing::brute_group_degree(data, sub, remap(x), remap(y));
          if (x == y) {
            CHECK(*d == (expect > 0 ? 1u : 0u));
          } else {
            CHECK(*d == expect);
          }
          if (x == 0) break;
        }
      }
    }
  }
}

TEST_CASE("exhaustive catalogue over one label has eight patterns up to two edges") {
  // 1 edge: a->b, loop. 2 edges: chain, in-star, out-star, 2-cycle,
  // edge plus loop at the source, edge plus loop at the target.
  const auto g = testing::make_graph({{1, 2, "A"}, {2, 3, "A"}, {3, 3, "A"}});
  const auto cat = build_exhaustive_catalogue(g, {});
  CHECK(cat.counts().size() == 8);
  CHECK(cat.count(canonical_form(parse_query("a -A-> b\n"), 1).key) == 3u);
  CHECK(cat.count(canonical_form(parse_query("a -A-> a\n"), 1).key) == 1u);
  CHECK(cat.count(canonical_form(parse_query("a -A-> b\nb -A-> c\n"), 3).key) == 3u);  // 1-2-3, 2-3-3, 3-3-3
  CatalogueConfig tiny;
  tiny.exhaustive_limit = 5;
  CHECK_THROWS_AS(build_exhaustive_catalogue(g, tiny), ConfigError);
}

TEST_CASE("closing statistics from exhaustive walks match a walk listing") {
  std::mt19937_64 rng(19);
  const auto q = parse_query("a -A-> b\nb -B-> c\nc -A-> d\nd -B-> a\n");
  for (int round = 0; round < 8; ++round) {
    const auto data = testing::random_triples(rng, 8, 30, 2);
    const auto g = testing::make_graph(data);
    for (std::size_t e = 0; e < 4; ++e) {
      const auto key = closing_key_for(q, 0b1111, e);
      CHECK(key.length == 3);
      const auto stat = measure_closing(g, key, 0, 0);
      const auto walks = testing::brute_walks(data, closing_walk(key));
      std::uint64_t closures = 0;
      for (const auto& w : walks) {
        closures += std::count(data.begin(), data.end(), testing::Triple{w.back(), w.front(), key.close});
      }
      CHECK(stat.samples == walks.size());
      CHECK(stat.closures == closures);
    }
  }
}

TEST_CASE("closing key walks the cycle from the closing edge's target") {
  const auto q = parse_query("a -A-> b\nb -B-> c\nd -C-> c\nd -D-> a\n");
  const auto key = closing_key_for(q, 0b1111, 3);  // close with d -D-> a
  CHECK(key.first.label == "A");
  CHECK(key.first.direction == WalkDirection::kForward);
  CHECK(key.last.label == "C");
  CHECK(key.last.direction == WalkDirection::kBackward);
  CHECK(key.close == "D");
  CHECK(key.length == 3);
}

TEST_CASE("sampled closing rates are reproducible and the catalogue round-trips") {
  std::mt19937_64 rng(23);
  const auto g = testing::make_graph(testing::random_triples(rng, 20, 120, 2));
  const auto q = parse_query("a -A-> b\nb -B-> c\nc -A-> d\nd -B-> a\n");
  CatalogueConfig cc;
  cc.seed = 99;
  cc.walk_budget = 200;
  const auto a = build_catalogue(g, {q}, cc);
  const auto b = build_catalogue(g, {q}, cc);
  CHECK(a == b);
  CHECK_FALSE(a.closing_stats().empty());
  for (const auto& [key, stat] : a.closing_stats()) {
    if (key.length > 0) CHECK(stat.samples == 200);
  }

  std::stringstream buf;
  save_catalogue(a, buf);
  const auto back = load_catalogue(buf);
  CHECK(back == a);

  std::stringstream garbage("{ not json");
  CHECK_THROWS_AS(load_catalogue(garbage), ParseError);
  std::stringstream wrong_version(R"({"version": 99})");
  CHECK_THROWS_AS(load_catalogue(wrong_version), ParseError);
}

TEST_CASE("h below two is rejected") {
  CatalogueConfig cc;
  cc.h = 1;
  CHECK_THROWS_AS(build_catalogue(testing::make_graph({{1, 2, "A"}}), {}, cc), ConfigError);
}

TEST_CASE("closing rates at the extremes") {
  // One labeled 4-cycle: the only A..C walk closes with D.
  const auto g = testing::make_graph({{1, 2, "A"}, {2, 3, "B"}, {3, 4, "C"}, {4, 1, "D"}});
  const auto q = parse_query("a -A-> b\nb -B-> c\nc -C-> d\nd -D-> a\n");
  const auto key = closing_key_for(q, 0b1111, 3);
  const auto full = measure_closing(g, key, 0, 0);
  CHECK(full.samples == 1);
  CHECK(full.rate() == 1);
  const auto open = testing::make_graph({{1, 2, "A"}, {2, 3, "B"}, {3, 4, "C"}});
  const auto none = measure_closing(open, key, 0, 0);
  CHECK(none.closures == 0);
  CHECK(none.rate() == 0);
}
