#include <doctest.h>

#include "cegest/catalogue.hpp"
#include "cegest/errors.hpp"
#include "cegest/oracle.hpp"
#include "cegest/sketch.hpp"
#include "support.hpp"

using namespace cegest;

namespace {

// A path of CEG_M through the given vertex sequence whose first edge is the
// unbound start edge and whose other edges are all bound.
std::optional<PathEstimate> find_path(const Ceg& ceg, const std::vector<VarMask>& seq) {
  std::optional<PathEstimate> found;
  for_each_path(ceg, [&](const PathEstimate& p) {
    if (found) return;
    const auto vs = ceg.path_vertices(p);
    if (vs.size() != seq.size()) return;
    for (std::size_t i = 0; i < vs.size(); ++i)
      if (ceg.content(vs[i]) != seq[i]) return;
    for (std::size_t i = 1; i < p.edges.size(); ++i)
      if (!ceg.edge(p.edges[i]).bound) return;
    if (ceg.edge(p.edges[0]).bound) return;
    found = p;
  });
  return found;
}

}  // namespace

TEST_CASE("sketch attributes of the two worked Q5f paths") {
  const auto g = load_graph_file(testing::data_path("f1.graph"));
  const auto q = load_query_file(testing::data_path("q5f.query"));
  const auto ceg = build_ceg_m(q, build_catalogue(g, {q}, {}));
  // Variables a1..a6 are bits 0..5.
  const auto p1 = find_path(ceg, {0, 0b000110, 0b001110, 0b001111, 0b101111, 0b111111});
  REQUIRE(p1.has_value());
  CHECK(sketch_attributes(ceg, *p1) == 0b000110);
  const auto p2 = find_path(ceg, {0, 0b000011, 0b000111, 0b001111, 0b011111, 0b111111});
  REQUIRE(p2.has_value());
  CHECK(sketch_attributes(ceg, *p2) == 0b000010);

  const auto tags = classify_edges(ceg, *p1);
  REQUIRE(tags.size() == 5);
  CHECK_FALSE(tags[0].bound);
  CHECK(tags[0].extension == 0b000110);
  CHECK(tags[2].extension == 0b000001);
}

TEST_CASE("plans need an integer root of K") {
  const auto q = load_query_file(testing::data_path("q5f.query"));
  const auto two = plan_sketch(q, 0b000110, 4);
  CHECK(two.parts == 2);
  CHECK(two.k == 4);
  // B touches a2 and a3, so it splits into 4 pieces; A and C into 2.
  CHECK(two.pieces == std::vector<std::size_t>{2, 4, 2, 2, 2});
  CHECK(two.partition_attributes[1] == 0b000110);
  CHECK(plan_sketch(q, 0b000110, 16).parts == 4);
  CHECK(plan_sketch(q, 0b000010, 4).parts == 4);
  CHECK_THROWS_AS(plan_sketch(q, 0b000110, 8), SketchPlanError);
  CHECK_THROWS_AS(plan_sketch(q, 0b000110, 0), SketchPlanError);
  CHECK(plan_sketch(q, 0b000110, 1).k == 1);
  CHECK(plan_sketch(q, 0, 16).k == 1);
}

TEST_CASE("components partition the matches") {
  std::mt19937_64 rng(61);
  for (int round = 0; round < 40; ++round) {
    const auto data = testing::random_triples(rng, 15, 70, 3);
    const auto g = testing::make_graph(data);
    const auto q = testing::random_query(rng, 2 + round % 4, 3, 0.3);
    const VarMask s = q.join_vars();
    if (!s) continue;
    const std::size_t k = std::size_t{1} << std::popcount(s);
    const auto plan = plan_sketch(q, s, k, round);
    MatchCount sum = 0;
    const auto parts = make_sketch(q, g, plan);
    CHECK(parts.size() == plan.k);
    for (const auto& c : parts) sum += count_hom(c.graph, c.query);
    CHECK(sum == testing::brute_count(data, q));
  }
}

TEST_CASE("sketched MOLP stays between the truth and the plain bound") {
  std::mt19937_64 rng(67);
  for (int round = 0; round < 30; ++round) {
    const auto data = testing::random_triples(rng, 15, 70, 3);
    const auto g = testing::make_graph(data);
    const auto q = testing::random_query(rng, 2 + round % 4, 3, 0.3);
    const auto cat = build_catalogue(g, {q}, {});
    const auto plain = estimate_molp(q, cat).value;
    const auto truth = testing::brute_count(data, q);
    for (const std::size_t k : {4, 16}) {
      try {
        const auto r = estimate_with_sketch(q, g, cat, k, {}, 5);
        CHECK(r.estimate.value >= truth);
        CHECK(r.estimate.value <= plain);
        if (r.plan.k > 1) CHECK(r.component_values.size() == r.plan.k);
      } catch (const SketchPlanError&) {
        // K has no integer root for this path's attribute count.
      }
    }
  }
}

TEST_CASE("sketching an optimistic estimator on F1") {
  const auto g = load_graph_file(testing::data_path("f1.graph"));
  const auto q = load_query_file(testing::data_path("q3p.query"));
  const auto cat = build_catalogue(g, {q}, {});
  SketchBase base;
  base.type = SketchBase::Type::kOptimistic;
  const auto one = estimate_with_sketch(q, g, cat, 1, base);
  CHECK(one.estimate.value == 6);
  CHECK(one.plan.k == 1);
  const auto r = estimate_with_sketch(q, g, cat, 4, base, 3);
  Rational sum = 0;
  for (const auto& v : r.component_values) sum += v;
  CHECK(sum == r.estimate.value);
  CHECK(r.estimate.value > 0);
}
