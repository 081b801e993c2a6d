#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dy/algebra.hpp"
#include "dy/errors.hpp"

using namespace dy;

namespace {

Element random_element(const ContextPtr& ctx, std::mt19937& rng, int terms = 4, int maxlen = 3) {
  Element e(ctx);
  std::uniform_int_distribution<int> idx(1, ctx->size()), lvl(1, 3), len(0, maxlen),
      hp(0, ctx->H), coef(-5, 5), sg(0, 1);
  for (int t = 0; t < terms; ++t) {
    Element w = Element::h_power(ctx, hp(rng), coef(rng));
    int l = len(rng);
    for (int k = 0; k < l; ++k)
      w = w * gen(ctx, sg(rng) ? Sign::plus : Sign::minus, lvl(rng), idx(rng), idx(rng));
    e += w;
  }
  return e;
}

}  // namespace

TEST_CASE("gen builds single generators with parity") {
  auto c11 = make_context(1, 1, 2, 2);
  Element x = gen(c11, Sign::minus, 1, 1, 2);
  REQUIRE(x.size() == 1);
  const auto& [key, coeff] = *x.terms().begin();
  CHECK(coeff == 1);
  CHECK(key.hpow == 0);
  REQUIRE(key.word.size() == 1);
  CHECK(key.word[0].parity() == 1);
  CHECK(serialize(x) == "t[-1;1,2]");

  auto c20 = make_context(2, 0, 2, 2);
  Element y = gen(c20, Sign::plus, 3, 2, 2);
  CHECK(y.terms().begin()->first.word[0].parity() == 0);
  CHECK(serialize(y) == "t[+3;2,2]");

  CHECK_THROWS_AS(gen(c11, Sign::minus, 1, 3, 1), DomainError);
  CHECK_THROWS_AS(gen(c11, Sign::minus, 0, 1, 1), DomainError);
}

TEST_CASE("generator order: plus before minus, then level, row, col") {
  auto c = make_context(2, 1, 2, 2);
  auto g = [&](Sign s, int r, int i, int j) { return make_generator(*c, s, r, i, j); };
  CHECK(g(Sign::plus, 5, 3, 3) < g(Sign::minus, 1, 1, 1));
  CHECK(g(Sign::minus, 1, 3, 3) < g(Sign::minus, 2, 1, 1));
  CHECK(g(Sign::minus, 2, 1, 3) < g(Sign::minus, 2, 2, 1));
  CHECK(g(Sign::minus, 2, 2, 1) < g(Sign::minus, 2, 2, 2));
}

TEST_CASE("free arithmetic and truncation") {
  auto ctx = make_context(1, 1, 2, 2);
  Element x = gen(ctx, Sign::minus, 1, 1, 2), y = gen(ctx, Sign::plus, 2, 2, 1);
  CHECK(free_mul(x, Element::one(ctx)) == x);
  CHECK(free_mul(mul_h(x, 1), mul_h(y, 2)).is_zero());
  CHECK(free_add(x, scalar_mul(-1, x)).is_zero());
  CHECK_FALSE(free_mul(mul_h(x, 1), mul_h(y, 1)).is_zero());
  // no sign in free products
  CHECK(serialize(x * y) == "t[-1;1,2] t[+2;2,1]");
}

TEST_CASE("ring axioms on random elements") {
  auto ctx = make_context(1, 1, 2, 2);
  std::mt19937 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    Element a = random_element(ctx, rng), b = random_element(ctx, rng),
            c = random_element(ctx, rng);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK((a + b) * c == a * c + b * c);
    CHECK(a + b == b + a);
    CHECK(a * Element::one(ctx) == a);
    CHECK(Element::one(ctx) * a == a);
  }
}

TEST_CASE("truncation is an ideal") {
  auto ctx = make_context(1, 1, 2, 2);
  auto big = make_context(1, 1, 4, 2);
  std::mt19937 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    Element a = random_element(big, rng), b = random_element(big, rng);
    CHECK(rebase(a * b, ctx) == rebase(a, ctx) * rebase(b, ctx));
  }
}

TEST_CASE("parity is multiplicative") {
  auto ctx = make_context(2, 1, 2, 2);
  std::mt19937 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    Element a = random_element(ctx, rng, 1), b = random_element(ctx, rng, 1);
    if (a.is_zero() || b.is_zero()) continue;
    const Word& wa = a.terms().begin()->first.word;
    const Word& wb = b.terms().begin()->first.word;
    Word ab = wa;
    ab.insert(ab.end(), wb.begin(), wb.end());
    CHECK(word_parity(ab) == ((word_parity(wa) + word_parity(wb)) & 1));
  }
}

TEST_CASE("supercommutator") {
  auto ctx = make_context(1, 1, 2, 2);
  Element even = gen(ctx, Sign::minus, 1, 1, 1);
  Element odd = gen(ctx, Sign::minus, 1, 1, 2);
  Element odd2 = gen(ctx, Sign::plus, 2, 2, 1);
  CHECK(supercomm(even, even).is_zero());
  CHECK(supercomm(odd, odd) == Rational(2) * (odd * odd));
  CHECK((supercomm(odd, odd2) - supercomm(odd2, odd)).is_zero());
  CHECK((supercomm(even, odd) - Rational(-1) * supercomm(odd, even)).is_zero());
  std::mt19937 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    Element a = random_element(ctx, rng, 1, 2), b = random_element(ctx, rng, 1, 2);
    if (a.is_zero() || b.is_zero()) continue;
    int pa = word_parity(a.terms().begin()->first.word);
    int pb = word_parity(b.terms().begin()->first.word);
    Rational s = (pa & pb) ? -1 : 1;
    CHECK((supercomm(a, b) + s * supercomm(b, a)).is_zero());
  }
}

TEST_CASE("degree") {
  auto ctx = make_context(1, 1, 2, 2);
  CHECK(degree(gen(ctx, Sign::minus, 1, 1, 1)) == 0);
  CHECK(degree(gen(ctx, Sign::plus, 2, 1, 1)) == -2);
  CHECK(degree(gen(ctx, Sign::minus, 3, 1, 2) * gen(ctx, Sign::plus, 1, 2, 1)) == 1);
  CHECK_THROWS_AS(degree(Element(ctx)), DomainError);
}

TEST_CASE("serialize and parse") {
  auto ctx = make_context(1, 1, 3, 2);
  CHECK(serialize(Element(ctx)) == "0");
  CHECK(parse("0", ctx).is_zero());
  Element e = parse("3/2 h^2 t[-1;1,2] t[+1;2,1]", ctx);
  CHECK(serialize(e) == "3/2 h^2 t[-1;1,2] t[+1;2,1]");
  CHECK(parse(" 3/2h^2t[-1; 1,2]t[+1;2 ,1] ", ctx) == e);
  Element f = parse("1 - t[-1;1,1] + 2 h^1 - h^3 t[+2;2,2] t[-1;1,2]", ctx);
  CHECK(parse(serialize(f), ctx) == f);
  std::mt19937 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    Element a = random_element(ctx, rng);
    CHECK(parse(serialize(a), ctx) == a);
    CHECK(serialize(parse(serialize(a), ctx)) == serialize(a));
  }
  CHECK_THROWS_AS(parse("t[-1;1,2", ctx), ParseError);
  CHECK_THROWS_AS(parse("t[*1;1,2]", ctx), ParseError);
  CHECK_THROWS_AS(parse("t[-1;1,3]", ctx), ParseError);
  try {
    parse("2 t[-1;1,2] +", ctx);
    FAIL("expected parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() > 0);
  }
}

TEST_CASE("context mismatch is a usage error") {
  auto a = make_context(1, 1, 2, 2), b = make_context(2, 1, 2, 2);
  CHECK_THROWS_AS(gen(a, Sign::minus, 1, 1, 1) * gen(b, Sign::minus, 1, 1, 1), UsageError);
}

TEST_CASE("h helpers") {
  auto ctx = make_context(1, 0, 3, 2);
  Element x = gen(ctx, Sign::minus, 1, 1, 1);
  CHECK(div_h(mul_h(x, 2), 2) == x);
  CHECK_THROWS(div_h(x, 1));
  CHECK(mul_h(x, 4).is_zero());
  CHECK((mul_h(x, 1) + x).h_component(1) == x);
}
