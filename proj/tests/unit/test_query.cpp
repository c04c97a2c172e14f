#include <doctest.h>

#include <bit>
#include <sstream>

#include "cegest/errors.hpp"
#include "cegest/query.hpp"
#include "support.hpp"

using namespace cegest;

namespace {

QueryGraph k4() {
  std::vector<QueryEdge> e;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) e.push_back({a, b, "R"});
  return QueryGraph({"a", "b", "c", "d"}, e);
}

// An edge subset is a simple cycle iff it is connected and every variable it
// touches has degree exactly 2 (self-loops count twice).
std::size_t brute_cycle_count(const QueryGraph& q) {
  std::size_t n = 0;
  for (EdgeMask m = 1; m < (EdgeMask{1} << q.num_edges()); ++m) {
    std::vector<int> deg(q.num_vars(), 0);
    for (std::size_t i = 0; i < q.num_edges(); ++i) {
      if (m >> i & 1) {
        deg[q.edge(i).src]++;
        deg[q.edge(i).dst]++;
      }
    }
    bool ok = testing::brute_connected(q, m);
    for (const int d : deg) ok = ok && (d == 0 || d == 2);
    n += ok;
  }
  return n;
}

}  // namespace

TEST_CASE("parse query text") {
  const auto q = parse_query("# path\na1 -A-> a2\na2 -B-> a3\n");
  CHECK(q.num_vars() == 3);
  CHECK(q.num_edges() == 2);
  CHECK(q.edge(1).label == "B");
  CHECK(q.vars()[2] == "a3");
  CHECK(parse_query(q.to_string()) == q);
  CHECK_THROWS_AS(parse_query("a1 A a2\n"), ParseError);
  CHECK_THROWS_AS(parse_query("a1 -A-> a2\na3 -B-> a4\n"), ValidationError);
  CHECK_THROWS_AS(parse_query("a1 -A-> a2\na1 -A-> a2\n"), ValidationError);
  CHECK_THROWS_AS(parse_query(""), ValidationError);
}

TEST_CASE("join variables") {
  const auto q = load_query_file(testing::data_path("q5f.query"));
  // a2 and a3 are shared.
  CHECK(q.join_vars() == 0b000110);
}

TEST_CASE("connected subsets equal a brute-force filter of the power set") {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 40; ++round) {
    const auto q = testing::random_query(rng, 2 + round % 6, 3);
    for (std::size_t h = 1; h <= q.num_edges(); ++h) {
      std::vector<EdgeMask> expect;
      for (EdgeMask m = 1; m < (EdgeMask{1} << q.num_edges()); ++m) {
        if (static_cast<std::size_t>(std::popcount(m)) <= h && testing::brute_connected(q, m)) expect.push_back(m);
      }
      auto got = connected_subsets(q, h);
      std::sort(got.begin(), got.end());
      CHECK(got == expect);
    }
  }
}

TEST_CASE("K4 has seven simple cycles") {
  const auto q = k4();
  CHECK(brute_cycle_count(q) == 7);
  const auto cs = cycles(q);
  CHECK(cs.cycles.size() == 7);
  std::size_t triangles = 0, squares = 0;
  for (const auto& c : cs.cycles) {
    triangles += c.length == 3;
    squares += c.length == 4;
  }
  CHECK(triangles == 4);
  CHECK(squares == 3);
}

TEST_CASE("cycle enumeration agrees with the degree-2 characterisation") {
  CHECK(cycles(load_query_file(testing::data_path("q5f.query"))).cycles.empty());
  std::mt19937_64 rng(17);
  for (int round = 0; round < 60; ++round) {
    const auto q = testing::random_query(rng, 3 + round % 6, 2, 0.5);
    CHECK(cycles(q).cycles.size() == brute_cycle_count(q));
  }
}

TEST_CASE("workload files round-trip") {
  const auto text =
      "query p1 path\na -X-> b\nb -Y-> c\nquery s1\nx -Z-> y\n";
  const auto w = parse_workload(text);
  REQUIRE(w.size() == 2);
  CHECK(w[0].id == "p1");
  CHECK(w[0].template_name == "path");
  CHECK(w[1].template_name.empty());
  std::stringstream out;
  write_workload(w, out);
  const auto back = parse_workload(out.str());
  REQUIRE(back.size() == 2);
  CHECK(back[0].query == w[0].query);
  CHECK(back[1].id == "s1");
  CHECK_THROWS_AS(parse_workload("query\n"), ParseError);
}
