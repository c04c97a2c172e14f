#include <doctest.h>

#include "cegest/catalogue.hpp"
#include "cegest/errors.hpp"
#include "cegest/estimators.hpp"
#include "support.hpp"

using namespace cegest;

namespace {

// Two parallel two-hop paths with products a and b, plus an optional one-hop path c.
Ceg diamond(Rational a, Rational b, std::optional<Rational> c = std::nullopt) {
  Ceg ceg(CegKind::kO, parse_query("x -A-> y\n"));
  const auto bot = ceg.add_vertex(0), l = ceg.add_vertex(1), r = ceg.add_vertex(2), top = ceg.add_vertex(3);
  ceg.add_edge(make_edge(bot, l, 1, CegEdgeKind::kStart, false));
  ceg.add_edge(make_edge(bot, r, 1, CegEdgeKind::kStart, false));
  ceg.add_edge(make_edge(l, top, a, CegEdgeKind::kExtension, true));
  ceg.add_edge(make_edge(r, top, b, CegEdgeKind::kExtension, true));
  if (c) ceg.add_edge(make_edge(bot, top, *c, CegEdgeKind::kStart, false));
  ceg.set_bottom(bot);
  ceg.set_top(top);
  return ceg;
}

Rational value(const Ceg& ceg, const std::string& id, MeanKind mean = MeanKind::kArithmetic) {
  return estimate_optimistic(ceg, parse_heuristic(id), mean).value;
}

}  // namespace

TEST_CASE("F1 Q3p: every optimistic choice gives 6, MOLP gives 8") {
  const auto g = load_graph_file(testing::data_path("f1.graph"));
  const auto q = load_query_file(testing::data_path("q3p.query"));
  const auto cat = build_catalogue(g, {q}, {});
  for (const auto kind : {CegKind::kO, CegKind::kOCR}) {
    for (const auto& c : all_heuristics()) CHECK(estimate_optimistic(q, cat, kind, c).value == 6);
    CHECK(estimate_pstar(q, cat, kind, 7).value == 6);
  }
  // |AB| * max out-degree of C from a3 = 4 * 2; the other bounds are larger.
  CHECK(estimate_molp(q, cat).value == 8);
  CHECK(*exact_qerror(6, 7) == Rational(7, 6));
}

TEST_CASE("single-edge queries give the relation size everywhere") {
  const auto g = load_graph_file(testing::data_path("f1.graph"));
  const auto q = parse_query("a -E-> b\n");
  const auto cat = build_catalogue(g, {q}, {});
  for (const auto& m : all_methods()) {
    Estimate e;
    if (m.type == MethodSpec::Type::kMolp) e = estimate_molp(q, cat);
    else if (m.type == MethodSpec::Type::kPStar) e = estimate_pstar(q, cat, m.ceg_kind, 7);
    else e = estimate_optimistic(q, cat, m.ceg_kind, m.choice);
    CHECK(e.value == 7);
  }
}

TEST_CASE("hop filters and aggregators on a hand-built CEG") {
  const auto ceg = diamond(2, 8, Rational(3));
  CHECK(value(ceg, "max-hop-max") == 8);
  CHECK(value(ceg, "max-hop-min") == 2);
  CHECK(value(ceg, "max-hop-avg") == 5);
  CHECK(value(ceg, "max-hop-avg", MeanKind::kGeometric) == 4);
  CHECK(value(ceg, "min-hop-max") == 3);
  CHECK(value(ceg, "min-hop-min") == 3);
  CHECK(value(ceg, "all-hops-avg") == Rational(13, 3));
  CHECK(value(ceg, "all-hops-min") == 2);
  CHECK(value(ceg, "all-hops-max") == 8);
  CHECK(value(diamond(0, 8), "max-hop-avg", MeanKind::kGeometric) == 0);
}

TEST_CASE("P* picks the closest path and breaks ties downward") {
  const auto ceg = diamond(2, 8, Rational(3));
  CHECK(estimate_pstar(ceg, 3).value == 3);
  CHECK(estimate_pstar(ceg, 4).value == 3);   // 4/3 beats 2 and 2
  CHECK(estimate_pstar(ceg, 6).value == 8);   // 8/6 < 6/3
  CHECK(estimate_pstar(diamond(2, 8), 4).value == 2);  // q-error 2 both ways
}

TEST_CASE("avg-aggr is not a path value and can beat P*") {
  // Paths 1 and 100, truth 10: P* has q-error 10, the mean 50.5 has 5.05.
  const auto ceg = diamond(1, 100);
  const auto pstar = estimate_pstar(ceg, 10).value;
  const auto avg = value(ceg, "max-hop-avg");
  CHECK(*exact_qerror(avg, 10) < *exact_qerror(pstar, 10));
}

TEST_CASE("ordering properties and path-valued P* dominance on random instances") {
  std::mt19937_64 rng(53);
  for (int round = 0; round < 60; ++round) {
    const auto data = testing::random_triples(rng, 12, 60, 3);
    const auto g = testing::make_graph(data);
    const auto q = testing::random_query(rng, 3 + round % 4, 3, 0.4);
    const auto truth = testing::brute_count(data, q);
    CatalogueConfig cc;
    cc.walk_budget = 0;
    const auto cat = build_catalogue(g, {q}, cc);
    for (const auto kind : {CegKind::kO, CegKind::kOCR}) {
      const auto ceg = kind == CegKind::kO ? build_ceg_o(q, cat) : build_ceg_ocr(q, cat);
      const auto all = estimate_all_optimistic(ceg);
      auto get = [&](const std::string& id) {
        for (const auto& e : all)
          if (e.method == to_string(kind) + "/" + id) return e.value;
        FAIL("missing " << id);
        return Rational(0);
      };
      for (const std::string hop : {"max-hop", "min-hop", "all-hops"}) {
        CHECK(get(hop + "-min") <= get(hop + "-avg"));
        CHECK(get(hop + "-avg") <= get(hop + "-max"));
      }
      CHECK(get("all-hops-max") >= get("max-hop-max"));
      CHECK(get("all-hops-min") <= get("min-hop-min"));
      if (truth == 0) continue;
      const auto p = exact_qerror(estimate_pstar(ceg, truth).value, truth);
      for (const auto& e : all) {
        if (e.method.find("avg") != std::string::npos) continue;
        const auto h = exact_qerror(e.value, truth);
        if (h) CHECK((p && *p <= *h));
      }
    }
  }
}

TEST_CASE("MOLP never underestimates and short-circuits on empty patterns") {
  std::mt19937_64 rng(59);
  for (int round = 0; round < 80; ++round) {
    const auto data = testing::random_triples(rng, 12, 50, 3);
    const auto g = testing::make_graph(data);
    const auto q = testing::random_query(rng, 3 + round % 4, 3, 0.4);
    const auto cat = build_catalogue(g, {q}, {});
    CHECK(estimate_molp(q, cat).value >= testing::brute_count(data, q));
  }
  const auto g = testing::make_graph({{1, 2, "A"}});
  const auto q = parse_query("a -A-> b\nb -Z-> c\n");
  const auto e = estimate_molp(q, build_catalogue(g, {q}, {}));
  CHECK(e.value == 0);
  CHECK_FALSE(e.chosen_path.has_value());
}

TEST_CASE("method ids") {
  CHECK(all_methods().size() == 21);
  CHECK(parse_methods("all").size() == 21);
  const auto m = parse_method("OCR/all-hops-avg");
  CHECK(m.type == MethodSpec::Type::kHeuristic);
  CHECK(m.ceg_kind == CegKind::kOCR);
  CHECK(m.id() == "OCR/all-hops-avg");
  CHECK(parse_method("O/pstar").type == MethodSpec::Type::kPStar);
  CHECK(parse_method("molp").id() == "molp");
  for (const auto& mm : all_methods()) CHECK(parse_method(mm.id()) == mm);
  CHECK_THROWS_AS(parse_method("M/max-hop-max"), ConfigError);
  CHECK_THROWS_AS(parse_method("O/max-max"), ConfigError);
  CHECK_THROWS_AS(parse_methods(","), ConfigError);
}
