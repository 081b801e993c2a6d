#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dy/errors.hpp"
#include "dy/morphisms.hpp"

using namespace dy;

namespace {

bool all_pass(const ReportFragment& f) {
  for (const auto& r : f.records)
    if (!r.pass) {
      MESSAGE(r.label << " " << r.params << " " << r.counterexample);
      return false;
    }
  return !f.records.empty();
}

Generator random_gen(const AlgebraContext& ctx, std::mt19937& rng, int top) {
  std::uniform_int_distribution<int> sg(0, 1), lv(1, top), idx(1, ctx.size());
  return make_generator(ctx, sg(rng) ? Sign::plus : Sign::minus, lv(rng), idx(rng), idx(rng));
}

}  // namespace

TEST_CASE("iota shifts indices") {
  Workspace ws(3, 2, 12);
  const Morphism& io = ws.iota(1, 1, 1);
  auto src = ws.context(1, 1), tgt = ws.context(2, 1);
  CHECK(io.image(make_generator(*src, Sign::minus, 3, 1, 2)) == gen(tgt, Sign::minus, 3, 2, 3));
  CHECK(io.image(make_generator(*src, Sign::plus, 2, 2, 1)) == gen(tgt, Sign::plus, 2, 3, 2));
  CHECK_THROWS_AS(ws.iota(1, 1, 0), UsageError);
}

TEST_CASE("rho flips indices with the sign of -u") {
  Workspace ws(2, 2, 12);
  const Morphism& rho = ws.rho(1, 1);
  auto src = ws.context(1, 1), tgt = ws.context(1, 1);
  CHECK(rho.image(make_generator(*src, Sign::minus, 1, 1, 1)) == -gen(tgt, Sign::minus, 1, 2, 2));
  CHECK(rho.image(make_generator(*src, Sign::minus, 2, 1, 2)) == gen(tgt, Sign::minus, 2, 2, 1));
  // t^+(-u) = 1 - h sum t^{(-r)} (-u)^{r-1}
  CHECK(rho.image(make_generator(*src, Sign::plus, 1, 1, 1)) == gen(tgt, Sign::plus, 1, 2, 2));
  CHECK(rho.image(make_generator(*src, Sign::plus, 2, 2, 2)) == -gen(tgt, Sign::plus, 2, 1, 1));
  // gl(2|1) -> gl(1|2): parity of the generator is kept
  const Morphism& r21 = ws.rho(2, 1);
  Generator odd = make_generator(*ws.context(2, 1), Sign::minus, 1, 1, 3);
  Element img = r21.image(odd);
  CHECK(img.terms().begin()->first.word[0].parity() == 1);
}

TEST_CASE("omega at lowest order negates generators") {
  Workspace ws(2, 2, 12);
  const Morphism& om = ws.omega(1, 1);
  auto ctx = ws.context(1, 1);
  // T(-u)^{-1} = 1 + h t^{(1)} u^{-1} + O(u^{-2}) so omega(t^{(1)}) = t^{(1)}.
  CHECK(om.image(make_generator(*ctx, Sign::minus, 1, 1, 2)) == gen(ctx, Sign::minus, 1, 1, 2));
  // Level 2 picks up the quadratic part of the inverse.
  Element two = om.image(make_generator(*ctx, Sign::minus, 2, 1, 1));
  CHECK(two.coefficient(0, Word{make_generator(*ctx, Sign::minus, 2, 1, 1)}) == -1);
  CHECK(two.min_hpow() == 0);
  CHECK_THROWS_AS(om.image(make_generator(*ctx, Sign::minus, 13, 1, 1)), CapError);
}

TEST_CASE("apply is linear and multiplicative") {
  Workspace ws(2, 2, 20);
  const Morphism& om = ws.omega(1, 1);
  auto ctx = ws.context(1, 1);
  RuleTable& t = ws.table(1, 1);
  CHECK(apply(om, Element(ctx), t).is_zero());
  std::mt19937 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    Generator x = random_gen(*ctx, rng, 2), y = random_gen(*ctx, rng, 2);
    Element xy = Element::monomial(ctx, 1, 0, Word{x, y});
    Element lhs = apply(om, xy, t);
    Element rhs = normalize(om.image(x) * om.image(y), t);
    CHECK(lhs == rhs);
    Element sum = Rational(2) * Element::monomial(ctx, 1, 0, Word{x}) + Element::h_power(ctx, 1, 3) * xy;
    CHECK(apply(om, sum, t) == normalize(Rational(2) * om.image(x) + Element::h_power(ctx, 1, 3) * lhs, t));
  }
  CHECK_THROWS_AS(apply(om, gen(ws.context(2, 1), Sign::minus, 1, 1, 1), t), UsageError);
}

TEST_CASE("omega and rho are involutions on sampled generators") {
  Workspace ws(2, 2, 20);
  for (auto [m, n] : {std::pair{1, 1}, std::pair{2, 1}}) {
    auto ctx = ws.context(m, n);
    RuleTable& t = ws.table(m, n);
    std::mt19937 rng(11);
    for (int trial = 0; trial < 8; ++trial) {
      Generator g = random_gen(*ctx, rng, 3);
      Element x = Element::monomial(ctx, 1, 0, Word{g});
      CHECK(apply(ws.omega(m, n), apply(ws.omega(m, n), x, t), t) == x);
      CHECK(apply(ws.rho(n, m), apply(ws.rho(m, n), x, ws.table(n, m)), t) == x);
      CHECK(apply(ws.zeta(n, m), apply(ws.zeta(m, n), x, ws.table(n, m)), t) == x);
    }
  }
}

TEST_CASE("morphisms preserve the defining relations") {
  Workspace ws(2, 2, 20);
  CHECK(all_pass(sample_relation_preservation(ws.omega(1, 1), ws.table(1, 1), ws.table(1, 1), 5, 15)));
  CHECK(all_pass(sample_relation_preservation(ws.rho(2, 1), ws.table(2, 1), ws.table(1, 2), 6, 15)));
  CHECK(all_pass(sample_relation_preservation(ws.iota(1, 1, 1), ws.table(1, 1), ws.table(2, 1), 7, 15)));
  CHECK(all_pass(sample_relation_preservation(ws.zeta(1, 1), ws.table(1, 1), ws.table(1, 1), 8, 10)));
  CHECK(all_pass(sample_relation_preservation(ws.psi(1, 1, 1), ws.table(1, 1), ws.table(2, 1), 9, 10)));
}

TEST_CASE("iota is injective on normal forms") {
  Workspace ws(2, 2, 20);
  auto ctx = ws.context(1, 1);
  RuleTable& t = ws.table(2, 1);
  std::mt19937 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    Generator x = random_gen(*ctx, rng, 2), y = random_gen(*ctx, rng, 2);
    if (x == y) continue;
    Element a = normalize(Element::monomial(ctx, 1, 0, Word{x}), ws.table(1, 1));
    Element b = normalize(Element::monomial(ctx, 1, 0, Word{y}), ws.table(1, 1));
    CHECK(apply(ws.iota(1, 1, 1), a, t) != apply(ws.iota(1, 1, 1), b, t));
  }
}

TEST_CASE("zeta images") {
  Workspace ws(2, 2, 20);
  ReportFragment f = verify_zeta_images(ws, 1, 1, 2);
  CHECK(all_pass(f));
  CHECK(f.records.size() == 8);  // 2 signs x (f, e, d1, d2)
  ReportFragment one = verify_zeta_images(ws, 1, 0);
  CHECK(all_pass(one));
  CHECK(one.records.size() == 2);  // d only
  CHECK(all_pass(verify_zeta_images(ws, 2, 1, 2)));
}

TEST_CASE("psi images") {
  Workspace ws(2, 2, 20);
  CHECK(all_pass(verify_psi_images(ws, 1, 1, 1, 2)));
  CHECK(all_pass(verify_psi_images(ws, 1, 1, 0)));
  CHECK(all_pass(verify_psi_images(ws, 0, 1, 2, 2)));
}
