#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dy/berezinian.hpp"
#include "dy/classical.hpp"
#include "dy/errors.hpp"

using namespace dy;

namespace {

bool all_pass(const ReportFragment& f) {
  for (const auto& r : f.records)
    if (!r.pass) {
      MESSAGE(f.suite << ": " << r.label << " " << r.params << " " << r.counterexample);
      return false;
    }
  return !f.records.empty();
}

}  // namespace

TEST_CASE("quantum determinant small cases") {
  auto ctx = make_context(2, 0, 2, 3);
  for (Sign sg : {Sign::minus, Sign::plus}) {
    CHECK(quantum_determinant(ctx, sg, 1) == TruncSeries::generator_series(ctx, sg, 1, 1));
    CHECK_THROWS_AS(quantum_determinant(ctx, sg, 3), DomainError);
    CHECK_THROWS_AS(quantum_determinant(ctx, sg, 0), DomainError);
  }
  // C_2^-(u) = t11(u) t22(u-h) - t21(u) t12(u-h), built by hand
  auto t = [&](int i, int j) { return TruncSeries::generator_series(ctx, Sign::minus, i, j); };
  TruncSeries by_hand = t(1, 1) * shift(t(2, 2), -1) - t(2, 1) * shift(t(1, 2), -1);
  CHECK(quantum_determinant(ctx, Sign::minus, 2) == by_hand);
}

TEST_CASE("Berezinian degenerate shapes") {
  auto c10 = make_context(1, 0, 2, 2);
  auto c01 = make_context(0, 1, 2, 2);
  for (Sign sg : {Sign::minus, Sign::plus}) {
    BerezinianData b = berezinian_direct(c10, sg);
    CHECK(b.series == TruncSeries::generator_series(c10, sg, 1, 1));
    CHECK(b.coeffs[0] == gen(c10, sg, 1, 1, 1));
    BerezinianData f = berezinian_factored(c10, sg);
    CHECK(f.series == b.series);
    BerezinianData b01 = berezinian_direct(c01, sg);
    // with m = 0 the single inverse entry sits at u - (m-1)h = u + h
    auto wide = make_context(0, 1, 2, 4);
    TruncSeries tinv = matrix_inverse(SuperMatrix::generator_matrix(wide, sg))(1, 1);
    CHECK(b01.series == rebase(shift(tinv, 1), c01));
    CHECK(b01.series != rebase(tinv, c01));
  }
}

TEST_CASE("gl(1|1): b = t11 t'22 and b(u) = d1 d2^{-1}") {
  auto ctx = make_context(1, 1, 2, 2);
  for (Sign sg : {Sign::minus, Sign::plus}) {
    BerezinianData b = berezinian_direct(ctx, sg);
    SuperMatrix T = SuperMatrix::generator_matrix(ctx, sg);
    CHECK(b.series == T(1, 1) * matrix_inverse(T)(2, 2));
    GaussData g = gauss_decompose(ctx, sg);
    CHECK(b.series == g.d(1) * g.d_inv(2));
    CHECK(b.series[0] == Element::one(ctx) - (sg == Sign::plus ? Element::h_power(ctx, 1) * b.coeffs[0] : Element(ctx)));
  }
}

TEST_CASE("equality suite, gl(1|1) and gl(2|1)") {
  Workspace ws(2, 2, 24);
  CHECK(all_pass(berezinian_equality_suite(ws, 1, 1, 2)));
  CHECK(all_pass(berezinian_equality_suite(ws, 2, 1, 2)));
  CHECK(all_pass(berezinian_equality_suite(ws, 1, 2, 2)));
  CHECK(all_pass(berezinian_equality_suite(ws, 1, 0)));
  CHECK(all_pass(berezinian_zeta_split(ws, 0, 1, Sign::minus)));
  CHECK(all_pass(berezinian_zeta_split(ws, 0, 1, Sign::plus)));
}

TEST_CASE("centrality gl(1|0) and gl(1|1)") {
  Workspace ws(2, 2, 24);
  CHECK(all_pass(centrality_suite(ws, 1, 0)));
  CHECK(all_pass(centrality_suite(ws, 1, 1, 2)));
}

TEST_CASE("classical limit") {
  Workspace ws(3, 2, 24);
  CHECK(all_pass(classical_limit_suite(ws, 1, 0)));
  CHECK(all_pass(classical_limit_suite(ws, 1, 1)));
  auto ctx = ws.context(1, 1);
  Element b1 = normalize(berezinian_direct(ctx, Sign::minus).coeffs[0], ws.table(1, 1));
  CHECK(b1.h_component(0) == gen(ctx, Sign::minus, 1, 1, 1) - gen(ctx, Sign::minus, 1, 2, 2));
  Element bm1 = normalize(berezinian_direct(ctx, Sign::plus).coeffs[0], ws.table(1, 1));
  CHECK(bm1.h_component(0) == gen(ctx, Sign::plus, 1, 1, 1) - gen(ctx, Sign::plus, 1, 2, 2));
}

TEST_CASE("independence probe") {
  Workspace ws(2, 2, 24);
  ReportFragment f = independence_probe(ws, 1, 1, 1);
  CHECK(all_pass(f));
  CHECK(f.info.at("rank") == "6");
  ReportFragment z = independence_probe(ws, 1, 1, 0);
  CHECK(z.info.at("rank") == "1");
  CHECK_THROWS_AS(independence_probe(ws, 1, 1, 3), UsageError);
}

TEST_CASE("delta series, n = 1") {
  Workspace ws(2, 2, 24);
  CHECK(all_pass(delta_and_sl_suite(ws, 1, 1, 2)));
  CHECK_THROWS_AS(delta_and_sl_suite(ws, 2, 1), UsageError);
}

TEST_CASE("proof steps") {
  Workspace ws(2, 2, 24);
  CHECK(all_pass(proof_step_suite(ws, 4)));
}
