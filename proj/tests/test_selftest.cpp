#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "gbem/selftest.hpp"

using namespace gbem;

TEST_CASE("randomized kernel selftest passes at reduced pair count") {
  std::ostringstream log;
  SelftestReport rep = run_selftest(25, log);
  INFO(log.str());
  REQUIRE(rep.cases.size() == 10);
  for (const auto& c : rep.cases) {
    INFO(c.name << " worst_rel=" << c.worstRel << " tol=" << c.tol);
    CHECK(c.pass);
    CHECK(c.worstRel <= c.tol);
    CHECK(c.pairs == 25);
  }
  CHECK(rep.pass);

  SECTION("log carries one line per case") {
    for (const auto& c : rep.cases)
      CHECK(log.str().find(c.name) != std::string::npos);
  }
}

TEST_CASE("selftest is deterministic") {
  std::ostringstream l1, l2;
  SelftestReport r1 = run_selftest(8, l1);
  SelftestReport r2 = run_selftest(8, l2);
  REQUIRE(r1.cases.size() == r2.cases.size());
  for (std::size_t i = 0; i < r1.cases.size(); ++i) {
    CHECK(r1.cases[i].name == r2.cases[i].name);
    CHECK(r1.cases[i].worstRel == r2.cases[i].worstRel);
  }
  CHECK(l1.str() == l2.str());
}
