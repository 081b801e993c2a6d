#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <random>

#include <json.hpp>

#include "dy/errors.hpp"
#include "dy/harness.hpp"
#include "dy/rtt.hpp"

using namespace dy;

namespace {

SuiteConfig small(int m, int n, std::vector<std::string> suites) {
  SuiteConfig c;
  c.m = m;
  c.n = n;
  c.N = 2;
  c.H = 2;
  c.suites = std::move(suites);
  return c;
}

std::filesystem::path fresh_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("dy-test-" + name);
  std::filesystem::remove_all(p);
  return p;
}

std::vector<Element> probe_words(const ContextPtr& ctx, int count) {
  std::mt19937_64 rng(7);
  std::vector<Element> out;
  for (int k = 0; k < count; ++k) {
    Word w;
    const int len = 2 + static_cast<int>(rng() % 3);
    for (int a = 0; a < len; ++a) {
      Sign s = rng() % 2 ? Sign::plus : Sign::minus;
      const int r = 1 + static_cast<int>(rng() % 2);
      const int i = 1 + static_cast<int>(rng() % 2), j = 1 + static_cast<int>(rng() % 2);
      w.push_back(make_generator(*ctx, s, r, i, j));
    }
    out.push_back(Element::monomial(ctx, 1, 0, w));
  }
  return out;
}

}  // namespace

TEST_CASE("config validation") {
  SuiteConfig c = small(1, 1, {"all"});
  SuiteConfig v = validate(c);
  CHECK(v.cap == default_cap(2, 2));
  CHECK(v.suites == suite_registry());

  // all skips delta-sl off the diagonal
  v = validate(small(2, 1, {"all"}));
  CHECK(v.suites.size() == suite_registry().size() - 1);
  CHECK(v.suites.back() == "independence");

  // registry order and no duplicates
  v = validate(small(1, 1, {"zeta", "gauss", "zeta"}));
  CHECK(v.suites == std::vector<std::string>{"gauss", "zeta"});

  CHECK_THROWS_AS(validate(small(1, 2, {"delta-sl"})), UsageError);
  CHECK_THROWS_AS(validate(small(1, 1, {"nope"})), UsageError);
  c = small(1, 1, {});
  c.N = 0;
  CHECK_THROWS_AS(validate(c), UsageError);
  c = small(1, 1, {});
  c.H = 0;
  CHECK_THROWS_AS(validate(c), UsageError);
  c = small(1, 1, {});
  c.cap = 2;  // N + 1 = 3
  CHECK_THROWS_AS(validate(c), UsageError);
  c.cap = 3;
  CHECK_NOTHROW(validate(c));
  c = small(0, 0, {});
  CHECK_THROWS_AS(validate(c), UsageError);
  c = small(1, 1, {});
  c.format = "xml";
  CHECK_THROWS_AS(validate(c), UsageError);
  CHECK_THROWS_AS(run(small(1, 2, {"delta-sl"})), UsageError);
}

TEST_CASE("empty suite list") {
  Report r = run(small(1, 1, {}));
  CHECK(r.suites.empty());
  CHECK(r.ok());
  auto j = nlohmann::json::parse(emit(r, "json"));
  CHECK(j["summary"]["passed"] == 0);
  CHECK(j["summary"]["failed"] == 0);
  CHECK(j["summary"]["identities"] == 0);
  CHECK(j["suites"].empty());
  CHECK(emit(r, "text").find("summary: 0 passed, 0 failed") != std::string::npos);
}

TEST_CASE("commutative case passes everything") {
  SuiteConfig c = small(1, 0, {"all"});
  c.N = 4;
  Report r = run(c);
  CHECK(r.suites.size() == suite_registry().size() - 1);
  CHECK(r.ok());
  CHECK(r.passed() > 0);
}

TEST_CASE("json schema") {
  SuiteConfig c = small(1, 1, {"gauss", "zeta"});
  auto j = nlohmann::json::parse(emit(run(c), "json"));
  for (const char* k : {"engine_version", "config", "suites", "summary"}) CHECK(j.contains(k));
  CHECK(j["config"]["series_order"] == 2);
  CHECK(j["config"]["h_order"] == 2);
  CHECK(j["config"]["cap"] == default_cap(2, 2));
  CHECK(j["suites"][0]["name"] == "gauss");
  CHECK(j["suites"][1]["name"] == "zeta");
  const auto& rec = j["suites"][0]["identities"][0];
  for (const char* k : {"label", "anchor", "params", "pass"}) CHECK(rec.contains(k));
  CHECK_FALSE(rec.contains("counterexample"));
  CHECK_FALSE(rec.contains("seconds"));
  CHECK(j["summary"]["status"] == "pass");
}

TEST_CASE("failures carry a counterexample") {
  // Centrality of the plus coefficients needs levels well past N + 1.
  SuiteConfig c = small(1, 1, {"centrality"});
  c.cap = 3;
  Report r = run(c);
  CHECK_FALSE(r.ok());
  auto j = nlohmann::json::parse(emit(r, "json"));
  CHECK(j["summary"]["status"] == "fail");
  int failing = 0;
  for (const auto& rec : j["suites"][0]["identities"]) {
    if (rec["pass"]) continue;
    ++failing;
    REQUIRE(rec.contains("counterexample"));
    CHECK_FALSE(rec["counterexample"].get<std::string>().empty());
  }
  CHECK(failing > 0);
  CHECK(emit(r, "text").find("counterexample: ") != std::string::npos);
}

TEST_CASE("reports are byte-identical across runs and worker counts") {
  SuiteConfig c = small(2, 1, {"relations-oracle", "confluence", "gauss", "zeta", "centrality"});
  c.N = 1;
  c.H = 1;
  const std::string a = emit(run(c), "json");
  const std::string b = emit(run(c), "json");
  c.jobs = 4;
  const std::string d = emit(run(c), "json");
  CHECK(a == b);
  CHECK(a == d);
  c.format = "text";
  CHECK(emit(run(c), "text") == emit(run(c), "text"));
}

TEST_CASE("timings are opt-in") {
  SuiteConfig c = small(1, 1, {"zeta"});
  c.timings = true;
  auto j = nlohmann::json::parse(emit(run(c), "json"));
  CHECK(j["suites"][0].contains("seconds"));
  CHECK(j["suites"][0]["identities"][0].contains("seconds"));
}

TEST_CASE("rule cache round trip") {
  const auto dir = fresh_dir("cache");
  SuiteConfig c = small(1, 1, {"confluence"});
  c.cache_dir = dir.string();
  Report first = run(c);
  CHECK(first.ok());
  const int L = default_cap(2, 2);
  const auto file = dir / "rules-m1-n1.txt";
  REQUIRE(std::filesystem::exists(file));

  auto ctx = make_context(1, 1, 2, 2);
  RuleTable fresh(ctx, L), loaded(ctx, L);
  CHECK(load_rules(loaded, file) > 0);
  const std::size_t before = loaded.size();
  for (const Element& w : probe_words(ctx, 50)) CHECK(normalize(w, fresh) == normalize(w, loaded));
  CHECK(loaded.size() >= before);

  // a second run reads the cache and reports the same thing
  Report second = run(c);
  CHECK(emit(first, "json") == emit(second, "json"));

  // mismatched H
  c.H = 3;
  CHECK_THROWS_AS(run(c), StaleCacheError);
  auto ctx3 = make_context(1, 1, 3, 2);
  RuleTable t3(ctx3, L);
  CHECK_THROWS_AS(load_rules(t3, file), StaleCacheError);

  RuleTable t(ctx, L);
  CHECK_THROWS_AS(load_rules(t, dir / "missing.txt"), NotFoundError);
  std::filesystem::remove_all(dir);
}
