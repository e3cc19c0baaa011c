#include <doctest.h>

#include "corpus.hpp"
#include "prodcheck/report.hpp"

using namespace prodcheck;

namespace {

Report reportOf(const std::string& file) { return makeReport(analyze(parseSpecFile(corpus::path(file)))); }

}  // namespace

TEST_SUITE("report") {

TEST_CASE("json round trip over the corpus") {
  for (const auto& file : corpus::files()) {
    INFO(file);
    Report r = reportOf(file);
    const std::string j = toJson(r);
    CHECK(reportFromJson(j) == r);
    CHECK(toJson(reportFromJson(j)) == j);
  }
}

TEST_CASE("json fields") {
  Report r = reportOf("rotate.spec");
  const std::string j = toJson(r);
  CHECK(j.find("\"production\": 2") != std::string::npos);
  CHECK(j.find("\"verdict\": \"not productive\"") != std::string::npos);
  CHECK(j.find("\"-+--(+)\"") != std::string::npos);
  CHECK(toJson(reportOf("pascal.spec")).find("\"production\": \"inf\"") != std::string::npos);
}

TEST_CASE("malformed json is rejected") {
  CHECK_THROWS_AS(reportFromJson("{"), std::invalid_argument);
  CHECK_THROWS_AS(reportFromJson("{\"symbols\": [], \"gates\": {}}"), std::invalid_argument);
  CHECK_THROWS_AS(reportFromJson(R"({"symbols": [{"name": "f", "class": "odd", "guardedness": "unguarded"}],
                                     "gates": {}, "constants": []})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(reportFromJson(R"({"symbols": [], "gates": {"f": {"cap": -1, "args": []}}, "constants": []})"),
                  std::invalid_argument);
}

TEST_CASE("text rendering") {
  const std::string t = renderText(reportOf("pascal.spec"));
  CHECK(t.find("  f : flat, weakly guarded\n") != std::string::npos);
  CHECK(t.find("  f : [inf](-(-+))\n") != std::string::npos);
  CHECK(t.find("  mu P. peb(peb(box[-(-+)](P)))\n") != std::string::npos);
  CHECK(t.find("->C6 src(inf)\n") != std::string::npos);
  CHECK(t.find("The specification of P is productive.\n") != std::string::npos);
  CHECK(renderText(reportOf("pascal.spec"), false).find("Constant") == std::string::npos);
  CHECK(renderText(reportOf("traces.spec")).find("No stream constants to analyze.") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(exitCode(reportOf("pascal.spec")) == 0);
  CHECK(exitCode(reportOf("oblivious.spec")) == 1);
  CHECK(exitCode(reportOf("traces.spec")) == 0);
  Report r = reportOf("pascal.spec");
  r.constants[0].answer = Answer::Unknown;
  CHECK(exitCode(r) == 2);
  r.constants.push_back(r.constants[0]);
  r.constants[1].answer = Answer::NotProductive;
  CHECK(exitCode(r) == 1);
}

}  // TEST_SUITE
