#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>

#include "spinlab/report.hpp"

using namespace spinlab;

namespace {

SuiteConfig small_config() {
  SuiteConfig cfg;
  cfg.identities = {"half_ricci", "jul1", "sl", "usef1", "contraction"};
  cfg.s_values = {rat(0), rat(1, 4), rat(-1, 2)};
  cfg.trials = 8;
  cfg.seed = 7;
  return cfg;
}

}  // namespace

TEST_CASE("exact suite passes on su2 with residual zero") {
  auto entry = load_entry<ExactScalar>("su2");
  auto report = run_suite(entry, small_config());
  CHECK(report.pass());
  for (const auto& r : report.results) {
    CHECK(r.max_residual == 0.0);
    CHECK(r.tolerance == 0.0);
  }
}

TEST_CASE("float suite passes on heisenberg within tolerance") {
  auto entry = load_entry<FloatScalar>("heisenberg5");
  auto cfg = small_config();
  auto report = run_suite(entry, cfg);
  CHECK(report.pass());
  for (const auto& r : report.results) CHECK(r.max_residual < 1e-10);
}

TEST_CASE("reports are deterministic and independent of the thread count") {
  auto entry = load_entry<ExactScalar>("heisenberg5");
  auto cfg = small_config();
  cfg.threads = 1;
  auto a = run_suite(entry, cfg);
  cfg.threads = 4;
  auto b = run_suite(entry, cfg);
  auto ja = a.to_json();
  auto jb = b.to_json();
  ja.erase("wall_time_s");
  jb.erase("wall_time_s");
  CHECK(ja.dump() == jb.dump());
}

TEST_CASE("twistorial suite runs on the certified jets") {
  SECTION("su2 across parameters via Killing jets") {
    auto entry = load_entry<ExactScalar>("su2");
    SuiteConfig cfg;
    cfg.identities = {"twistorial"};
    cfg.s_values = {rat(0), rat(1, 4), rat(1, 2), rat(3, 4)};
    auto report = run_suite(entry, cfg);
    CHECK(report.pass());
    for (const auto& r : report.results) CHECK(r.max_residual == 0.0);
  }
  SECTION("heisenberg only at the characteristic parameter") {
    auto entry = load_entry<ExactScalar>("heisenberg5");
    SuiteConfig cfg;
    cfg.identities = {"twistorial"};
    cfg.s_values = {rat(1, 4)};
    CHECK(run_suite(entry, cfg).pass());
    cfg.s_values = {rat(1, 2)};
    CHECK_THROWS_AS(run_suite(entry, cfg), std::invalid_argument);
  }
}

TEST_CASE("algebraic entries run the contraction suite only") {
  auto entry = load_entry<ExactScalar>("sasaki5_alg");
  SuiteConfig cfg;
  cfg.identities = {"contraction"};
  cfg.trials = 10;
  CHECK(run_suite(entry, cfg).pass());
  cfg.identities = {"sl"};
  cfg.s_values = {rat(0)};
  CHECK_THROWS_AS(run_suite(entry, cfg), std::invalid_argument);
}

TEST_CASE("unknown identities are rejected up front") {
  auto entry = load_entry<ExactScalar>("su2");
  SuiteConfig cfg;
  cfg.identities = {"not_an_identity"};
  cfg.s_values = {rat(0)};
  CHECK_THROWS_AS(run_suite(entry, cfg), std::invalid_argument);
}

TEST_CASE("report JSON carries the contract fields") {
  auto entry = load_entry<ExactScalar>("su2");
  SuiteConfig cfg;
  cfg.identities = {"sl"};
  cfg.s_values = {rat(1, 4)};
  cfg.trials = 4;
  cfg.seed = 99;
  auto j = run_suite(entry, cfg).to_json();
  CHECK(j["schema"] == kReportSchema);
  CHECK(j["tool"] == "spinlab");
  CHECK(j["geometry"] == "su2");
  CHECK(j["backend"] == "exact");
  CHECK(j["seed"] == 99);
  REQUIRE(j["results"].size() == 1);
  CHECK(j["results"][0]["identity"] == "sl");
  CHECK(j["results"][0]["s"] == "1/4");
  CHECK(j["results"][0]["trials"] == 4);
  CHECK(j["results"][0]["pass"] == true);
  CHECK(j.contains("wall_time_s"));
}

TEST_CASE("thread cap resolution order") {
  CHECK(thread_cap(3) == 3);
  setenv("SPINLAB_THREADS", "2", 1);
  CHECK(thread_cap(0) == 2);
  setenv("SPINLAB_THREADS", "0", 1);
  CHECK(thread_cap(0) >= 1);
  unsetenv("SPINLAB_THREADS");
  CHECK(thread_cap(0) >= 1);
}

TEST_CASE("parallel_max covers every index deterministically") {
  std::vector<double> values(100);
  for (int i = 0; i < 100; ++i) values[i] = (i * 37 % 100) / 100.0;
  double m1 = parallel_max(100, 1, [&](int i) { return values[i]; });
  double m4 = parallel_max(100, 4, [&](int i) { return values[i]; });
  CHECK(m1 == m4);
  CHECK(m1 == 0.99);
}
