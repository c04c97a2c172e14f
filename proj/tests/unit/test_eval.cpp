#include <doctest.h>

#include <fstream>
#include <sstream>

#include "cegest/errors.hpp"
#include "cegest/eval.hpp"
#include "support.hpp"

using namespace cegest;

namespace {

struct SummaryFixture {
  std::vector<double> values;
  std::map<std::string, double> expect;
};

SummaryFixture load_fixture() {
  std::ifstream in(testing::data_path("summary_fixture.txt"));
  SummaryFixture f;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string key;
    fields >> key;
    double v;
    if (key == "values") {
      while (fields >> v) f.values.push_back(v);
    } else {
      fields >> v;
      f.expect[key] = v;
    }
  }
  return f;
}

QErrorRecord record(double signed_log) {
  QErrorRecord r;
  r.true_count = 10;
  r.estimate = 10;
  r.signed_log = signed_log;
  return r;
}

}  // namespace

TEST_CASE("q-error values") {
  const auto under = qerror(7, 6);
  CHECK(under.qerror == doctest::Approx(7.0 / 6.0));
  CHECK(under.signed_log < 0);
  CHECK(under.signed_log == doctest::Approx(-std::log10(7.0 / 6.0)));
  CHECK(qerror(5, 5).qerror == 1);
  CHECK(qerror(5, 5).signed_log == 0);
  CHECK(qerror(10, 1000).qerror == 100);
  CHECK(qerror(10, 1000).signed_log == doctest::Approx(2.0));
  CHECK(std::isinf(qerror(10, 0).qerror));
  CHECK(qerror(10, 0).signed_log == -std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(qerror(0, 3), ValidationError);
}

TEST_CASE("summary of the committed 20-value fixture") {
  const auto f = load_fixture();
  REQUIRE(f.values.size() == 20);
  const auto s = summarize(std::span<const double>(f.values));
  CHECK(s.n == 20);
  CHECK(s.p25 == doctest::Approx(f.expect.at("p25")).epsilon(1e-12));
  CHECK(s.p50 == doctest::Approx(f.expect.at("p50")).epsilon(1e-12));
  CHECK(s.p75 == doctest::Approx(f.expect.at("p75")).epsilon(1e-12));
  CHECK(s.trimmed_mean == doctest::Approx(f.expect.at("trimmed_mean")).epsilon(1e-12));

  // Order does not matter.
  auto shuffled = f.values;
  std::mt19937_64 rng(1);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const auto t = summarize(std::span<const double>(shuffled));
  CHECK(t.p25 == s.p25);
  CHECK(t.trimmed_mean == doctest::Approx(s.trimmed_mean).epsilon(1e-15));
}

TEST_CASE("summary edge cases") {
  const std::vector<double> one{0.7};
  const auto s = summarize(std::span<const double>(one));
  CHECK(s.p25 == 0.7);
  CHECK(s.p50 == 0.7);
  CHECK(s.p75 == 0.7);
  CHECK(s.trimmed_mean == 0.7);

  std::vector<double> outlier(10, 0.5);
  outlier.push_back(9.0);
  CHECK(summarize(std::span<const double>(outlier)).trimmed_mean == 0.5);

  // Equal magnitudes: the larger signed value goes first.
  std::vector<double> tie{-2.0, 2.0, 0, 0, 0, 0, 0, 0, 0, 0};
  CHECK(summarize(std::span<const double>(tie)).trimmed_mean == doctest::Approx(-2.0 / 9.0));
}

TEST_CASE("record summaries tally zero, failed and invalid rows") {
  std::vector<QErrorRecord> rows{record(0.1), record(0.3)};
  auto zero = record(0);
  zero.estimate = 0;
  zero.signed_log = -std::numeric_limits<double>::infinity();
  rows.push_back(zero);
  auto failed = record(0);
  failed.failed = true;
  rows.push_back(failed);
  auto invalid = record(0);
  invalid.true_count = 0;
  rows.push_back(invalid);
  const auto s = summarize(std::span<const QErrorRecord>(rows));
  CHECK(s.n == 2);
  CHECK(s.zero_estimates == 1);
  CHECK(s.failed == 1);
  CHECK(s.invalid == 1);
  CHECK(s.p50 == doctest::Approx(0.2));
}

TEST_CASE("one-edge workload gives q-error 1 for every method") {
  const auto g = load_graph_file(testing::data_path("f1.graph"));
  const auto w = parse_workload("query e1\na -A-> b\nquery e2\na -E-> b\nquery e3\na -C-> b\n");
  EvalConfig config;
  const auto r = run_workload(g, w, config);
  CHECK(r.records.size() == 3 * all_methods().size());
  for (const auto& row : r.records) {
    CHECK_FALSE(row.failed);
    CHECK(row.qerror == 1);
  }
  CHECK(r.failures.empty());
  CHECK(r.by_method.size() == all_methods().size());
  for (const auto& [m, s] : r.by_method) CHECK(s.n == 3);
}

TEST_CASE("F1 evaluation rows and CSV") {
  const auto g = load_graph_file(testing::data_path("f1.graph"));
  std::vector<WorkloadEntry> w{{"q3p", "path3", load_query_file(testing::data_path("q3p.query"))},
                               {"q5f", "star", load_query_file(testing::data_path("q5f.query"))}};
  EvalConfig config;
  config.catalogue.seed = 4;
  const auto r = run_workload(g, w, config);
  REQUIRE(r.queries.size() == 2);
  CHECK(r.queries[0].true_count == 7);
  CHECK(r.queries[1].true_count == 78);
  for (const auto& row : r.records) {
    if (row.query_id == "q3p" && row.method != "molp") CHECK(row.estimate == 6);
    if (row.query_id == "q3p") CHECK(row.true_count == 7);
  }
  std::ostringstream csv;
  write_records_csv(r.records, csv);
  const auto text = csv.str();
  CHECK(text.rfind("queryId,template,method,cegKind,hop,aggr,sketchK,trueCount,estimate,qerror,signedLog,elapsedMs\n", 0) ==
        0);
  CHECK(text.find("q3p,path3,O/max-hop-max,O,max-hop,max,1,7,6,") != std::string::npos);
  CHECK(text.find("q3p,path3,O/pstar,O,,pstar,1,7,6,") != std::string::npos);
  std::ostringstream json;
  write_summary_json(r, config, json);
  CHECK(json.str().find("\"seed\": 4") != std::string::npos);
}

TEST_CASE("estimator errors become failed rows") {
  const auto g = load_graph_file(testing::data_path("f1.graph"));
  std::vector<WorkloadEntry> w{{"q5f", "", load_query_file(testing::data_path("q5f.query"))}};
  EvalConfig config;
  config.methods = parse_methods("O/max-hop-max,molp,O/pstar");
  config.sketch_k = 3;  // not a square, so every two-attribute plan fails
  const auto r = run_workload(g, w, config);
  REQUIRE(r.records.size() == 3);
  std::size_t failed = 0;
  for (const auto& row : r.records) failed += row.failed;
  CHECK(failed >= 1);
  CHECK(r.failures.size() == failed);
  std::ostringstream csv;
  write_records_csv(r.records, csv);
  // Failed rows leave estimate, qerror and signedLog empty.
  const auto text = csv.str();
  std::size_t empty_rows = 0;
  for (auto at = text.find(",78,,,"); at != std::string::npos; at = text.find(",78,,,", at + 1)) ++empty_rows;
  CHECK(empty_rows == failed);
}
