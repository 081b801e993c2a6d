// Acceptance gate: each criterion is run at its stated sizes and must pass
// every identity within its time bound.  One line per criterion; the exit
// status is nonzero if any line says FAIL.

#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "dy/berezinian.hpp"
#include "dy/errors.hpp"
#include "dy/gauss.hpp"
#include "dy/harness.hpp"
#include "dy/morphisms.hpp"
#include "dy/rtt.hpp"

using namespace dy;

namespace {

struct Outcome {
  bool pass = true;
  std::size_t checked = 0;
  std::string detail;
};

// Counts records with one of the labels (all records when empty); the first
// failing one is kept as the detail.
void absorb(Outcome& o, const ReportFragment& f, const std::vector<std::string>& labels = {}) {
  for (const IdentityRecord& r : f.records) {
    bool wanted = labels.empty();
    for (const auto& l : labels) wanted = wanted || r.label == l;
    if (!wanted) continue;
    ++o.checked;
    if (!r.pass && o.pass) {
      o.pass = false;
      o.detail = "first failure " + r.label + " [" + r.params + "]: " + r.counterexample.substr(0, 160);
    }
  }
}

void expect_at_least(Outcome& o, std::size_t n) {
  if (o.checked < n && o.pass) {
    o.pass = false;
    o.detail = "only " + std::to_string(o.checked) + " identities checked, expected " + std::to_string(n);
  }
}

Workspace make_ws(int N, int H) { return Workspace(N, H, default_cap(N, H)); }

int failures = 0;

void criterion(int id, const char* title, double limit, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = s <= limit;
  const bool ok = o.pass && in_time;
  if (!ok) ++failures;
  std::printf("%s  criterion %2d  %-34s %6zu identities  %8.2fs / %6.0fs", ok ? "PASS" : "FAIL", id, title,
              o.checked, s, limit);
  if (!in_time) std::printf("  over time bound");
  if (!o.detail.empty()) std::printf("  %s", o.detail.c_str());
  std::printf("\n");
  std::fflush(stdout);
}

std::vector<Element> random_words(const ContextPtr& ctx, std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::vector<Element> out;
  for (int k = 0; k < count; ++k) {
    Word w;
    const int len = 1 + static_cast<int>(rng() % 4);
    for (int a = 0; a < len; ++a) {
      Sign s = rng() % 2 ? Sign::plus : Sign::minus;
      const int r = 1 + static_cast<int>(rng() % 2);
      const int i = 1 + static_cast<int>(rng() % ctx->size()), j = 1 + static_cast<int>(rng() % ctx->size());
      w.push_back(make_generator(*ctx, s, r, i, j));
    }
    out.push_back(Element::monomial(ctx, 1, 0, w));
  }
  return out;
}

}  // namespace

int main() {
  const int jobs = 1;

  criterion(1, "sign-convention oracle", 120, [&] {
    Outcome o;
    Workspace ws = make_ws(2, 2);
    for (auto [m, n] : {std::pair{1, 1}, std::pair{2, 1}}) absorb(o, oracle_match_inverse_relations(ws.table(m, n), jobs));
    // 4 families x S^4 index tuples x coefficient pairs; at least the tuples
    expect_at_least(o, 16 + 81);
    return o;
  });

  criterion(2, "Gauss decomposition", 300, [&] {
    Outcome o;
    Workspace ws = make_ws(2, 2);
    for (auto [m, n] : {std::pair{1, 1}, std::pair{2, 1}, std::pair{1, 2}})
      for (Sign s : {Sign::minus, Sign::plus})
        absorb(o, verify_gauss_identities(gauss_decompose(ws.context(m, n), s), ws.table(m, n), jobs));
    expect_at_least(o, 6);
    return o;
  });

  criterion(3, "quantum determinant factorization", 300, [&] {
    Outcome o;
    Workspace ws = make_ws(3, 3);
    for (auto [m, n] : {std::pair{2, 0}, std::pair{2, 1}})
      absorb(o, berezinian_equality_suite(ws, m, n, jobs), {"qdet.d-product"});
    expect_at_least(o, 2 * 2 * 2);  // algebras x signs x mhat
    return o;
  });

  criterion(4, "Berezinian triple agreement", 900, [&] {
    Outcome o;
    Workspace ws = make_ws(3, 3);
    for (auto [m, n] : {std::pair{1, 1}, std::pair{2, 1}, std::pair{1, 2}})
      absorb(o, berezinian_equality_suite(ws, m, n, jobs), {"berezinian.factored", "berezinian.zeta-split"});
    expect_at_least(o, 3 * 2 * (3 + 1));  // algebras x signs x (N coefficients + split)
    return o;
  });

  criterion(5, "centrality of b coefficients", 1800, [&] {
    Outcome o;
    Workspace ws = make_ws(3, 3);
    for (auto [m, n] : {std::pair{1, 1}, std::pair{2, 1}}) absorb(o, centrality_suite(ws, m, n, jobs), {"centrality.t"});
    // b signs x r x g signs x (k, l); every s <= 3 inside each record
    expect_at_least(o, 2 * 3 * 2 * (4 + 9));
    return o;
  });

  criterion(6, "zeta, psi and d-commutativity lemmas", 600, [&] {
    Outcome o;
    Workspace ws = make_ws(2, 2);
    for (auto [m, n] : {std::pair{1, 1}, std::pair{2, 1}}) {
      absorb(o, verify_zeta_images(ws, m, n, jobs));
      absorb(o, verify_psi_images(ws, m, n, 1, jobs));
      absorb(o, verify_d_commute(ws.table(m, n), jobs));
    }
    expect_at_least(o, 3 * 2);
    return o;
  });

  criterion(7, "centrality proof steps", 600, [&] {
    Outcome o;
    Workspace ws = make_ws(2, 2);
    absorb(o, proof_step_suite(ws, jobs));
    expect_at_least(o, 10);
    return o;
  });

  criterion(8, "classical limit", 120, [&] {
    Outcome o;
    Workspace ws = make_ws(3, 2);
    absorb(o, classical_limit_suite(ws, 1, 1));
    expect_at_least(o, 2 * 3);
    return o;
  });

  criterion(9, "independence probe", 600, [&] {
    Outcome o;
    Workspace ws = make_ws(4, 3);
    ReportFragment f = independence_probe(ws, 1, 1, 2);
    absorb(o, f);
    // four generators b^{(+-1)}, b^{(+-2)}: 1 + 4 + 10 monomials of degree <= 2
    if (f.info["rank"] != f.info["monomials"] || f.info["monomials"] != "15") {
      o.pass = false;
      o.detail = "rank " + f.info["rank"] + " of " + f.info["monomials"];
    }
    expect_at_least(o, 1);
    return o;
  });

  criterion(10, "delta factorization and sl membership", 600, [&] {
    Outcome o;
    Workspace ws = make_ws(2, 2);
    for (int n : {1, 2}) absorb(o, delta_and_sl_suite(ws, n, n, jobs));
    expect_at_least(o, 2 * 3);
    return o;
  });

  criterion(11, "engine health", 600, [&] {
    Outcome o;
    Workspace ws = make_ws(2, 2);
    RuleTable& table = ws.table(1, 1);
    ReportFragment conf = confluence_probe(table, 1, 200);
    absorb(o, conf);
    if (conf.records.size() != 200 || conf.passed() != 200) {
      o.pass = false;
      o.detail = "confluence " + std::to_string(conf.passed()) + "/" + std::to_string(conf.records.size());
      return o;
    }

    const ContextPtr ctx = ws.context(1, 1);
    const std::vector<Element> words = random_words(ctx, 11, 50);
    for (const Element& w : words) {
      const Element nf = Rational(-3, 7) * normalize(w, table);
      ++o.checked;
      if (!(parse(serialize(nf), ctx) == nf) || !(parse(serialize(w), ctx) == w)) {
        o.pass = false;
        o.detail = "serialize/parse round trip broke on " + serialize(w);
        return o;
      }
    }

    const auto dir = std::filesystem::temp_directory_path() / "dy-acceptance-cache";
    std::filesystem::create_directories(dir);
    save_rules(table, dir / "rules.txt");
    RuleTable loaded(ctx, table.cap()), fresh(ctx, table.cap());
    load_rules(loaded, dir / "rules.txt");
    std::filesystem::remove_all(dir);
    for (const Element& w : words) {
      ++o.checked;
      if (!(normalize(w, loaded) == normalize(w, fresh))) {
        o.pass = false;
        o.detail = "cache round trip changed the normal form of " + serialize(w);
        return o;
      }
    }

    SuiteConfig c;
    c.m = 2;
    c.n = 1;
    c.N = 2;
    c.H = 2;
    c.suites = {"all"};
    c.jobs = 1;
    const std::string one = emit(run(c), "json");
    c.jobs = 3;
    const std::string three = emit(run(c), "json");
    ++o.checked;
    if (one != three) {
      o.pass = false;
      o.detail = "JSON reports differ between --jobs 1 and --jobs 3";
    }
    return o;
  });

  std::printf("%s: %d of 11 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
