#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "dy/errors.hpp"
#include "dy/gauss.hpp"

using namespace dy;

namespace {

// Block LDU by repeated Schur complements, pivoting on the top-left entry.
struct Ldu {
  std::vector<TruncSeries> d;
  std::map<std::pair<int, int>, TruncSeries> e, f;
};

Ldu schur_oracle(const SuperMatrix& T) {
  Ldu out;
  const int S = T.size();
  std::vector<std::vector<TruncSeries>> a;
  for (int i = 1; i <= S; ++i) {
    a.emplace_back();
    for (int j = 1; j <= S; ++j) a.back().push_back(T(i, j));
  }
  for (int step = 0; step < S; ++step) {
    const int n = S - step;
    TruncSeries piv = a[0][0];
    TruncSeries pinv = inverse(piv);
    out.d.push_back(piv);
    for (int j = 1; j < n; ++j) {
      out.f.emplace(std::make_pair(step + j + 1, step + 1), a[j][0] * pinv);
      out.e.emplace(std::make_pair(step + 1, step + j + 1), pinv * a[0][j]);
    }
    std::vector<std::vector<TruncSeries>> next;
    for (int i = 1; i < n; ++i) {
      next.emplace_back();
      for (int j = 1; j < n; ++j) next.back().push_back(a[i][j] - a[i][0] * pinv * a[0][j]);
    }
    a = std::move(next);
  }
  return out;
}

bool all_pass(const ReportFragment& f) {
  for (const auto& r : f.records)
    if (!r.pass) {
      MESSAGE(r.label << " " << r.params << " " << r.counterexample);
      return false;
    }
  return !f.records.empty();
}

}  // namespace

TEST_CASE("decomposition matches the Schur complement recursion") {
  for (auto [m, n] : {std::pair{2, 0}, std::pair{1, 1}, std::pair{2, 1}, std::pair{1, 2}}) {
    auto ctx = make_context(m, n, 2, 2);
    for (Sign sg : {Sign::minus, Sign::plus}) {
      GaussData g = gauss_decompose(ctx, sg);
      Ldu o = schur_oracle(g.T);
      for (int i = 1; i <= g.size; ++i) {
        CHECK(g.d(i) == o.d[i - 1]);
        CHECK(g.d(i) * g.d_inv(i) == TruncSeries::one(ctx, g.d(i).direction()));
        for (int j = i + 1; j <= g.size; ++j) {
          CHECK(g.e(i, j) == o.e.at({i, j}));
          CHECK(g.f(j, i) == o.f.at({j, i}));
        }
      }
    }
  }
}

TEST_CASE("path sums invert the triangular factors") {
  auto ctx = make_context(2, 1, 2, 2);
  for (Sign sg : {Sign::minus, Sign::plus}) {
    GaussData g = gauss_decompose(ctx, sg);
    SuperMatrix I = SuperMatrix::identity(ctx, direction_of(sg), g.size);
    CHECK(matrix_mul(g.E, g.Eprime) == I);
    CHECK(matrix_mul(g.Eprime, g.E) == I);
    CHECK(matrix_mul(g.F, g.Fprime) == I);
    CHECK(matrix_mul(g.Fprime, g.F) == I);
  }
}

TEST_CASE("gl(1|0): d_1 is t_11") {
  auto ctx = make_context(1, 0, 3, 2);
  GaussData g = gauss_decompose(ctx, Sign::minus);
  CHECK(g.d(1) == g.T(1, 1));
}

TEST_CASE("Drinfeld series accessors") {
  auto ctx = make_context(2, 1, 2, 2);
  GaussData g = gauss_decompose(ctx, Sign::minus);
  CHECK(&drinfeld_series(g, DrinfeldKind::e_simple, 1) == &g.e(1, 2));
  CHECK(&drinfeld_series(g, DrinfeldKind::f_simple, 2) == &g.f(3, 2));
  CHECK(&drinfeld_series(g, DrinfeldKind::e, 1, 3) == &g.e(1, 3));
  CHECK_THROWS_AS(drinfeld_series(g, DrinfeldKind::d, 4), DomainError);
  CHECK_THROWS_AS(drinfeld_series(g, DrinfeldKind::e, 2, 1), DomainError);
  CHECK_THROWS_AS(drinfeld_series(g, DrinfeldKind::f, 1, 2), DomainError);
  CHECK_THROWS_AS(drinfeld_series(g, DrinfeldKind::e_simple, 3), DomainError);
}

TEST_CASE("d_1 coefficients are t_11 coefficients") {
  auto ctx = make_context(1, 1, 2, 2);
  auto ext = with_h_order(ctx, 3);
  GaussData gm = gauss_decompose(ext, Sign::minus);
  GaussData gp = gauss_decompose(ext, Sign::plus);
  for (int r = 1; r <= 2; ++r) {
    CHECK(generator_coefficient(gm.d(1), r, ctx) == Element(gen(ctx, Sign::minus, r, 1, 1)));
    CHECK(generator_coefficient(gp.d(1), r, ctx) == Element(gen(ctx, Sign::plus, r, 1, 1)));
  }
}

TEST_CASE("identities hold for gl(1|1) and gl(2|1)") {
  for (auto [m, n] : {std::pair{1, 1}, std::pair{2, 1}}) {
    auto ctx = make_context(m, n, 2, 2);
    RuleTable table(ctx, 20);
    for (Sign sg : {Sign::minus, Sign::plus}) {
      GaussData g = gauss_decompose(ctx, sg);
      ReportFragment f = verify_gauss_identities(g, table, 2);
      CHECK(all_pass(f));
    }
  }
}

TEST_CASE("d series commute") {
  auto ctx = make_context(1, 1, 2, 2);
  RuleTable table(ctx, 20);
  ReportFragment f = verify_d_commute(table, 2);
  CHECK(all_pass(f));
  CHECK(f.records.size() == 12);
}

TEST_CASE("series_is_zero reports the offending coefficient") {
  auto ctx = make_context(1, 1, 2, 2);
  RuleTable table(ctx, 20);
  TruncSeries s(ctx, Direction::down);
  s[2] = Element(gen(ctx, Sign::minus, 1, 1, 2));
  std::string counter;
  CHECK_FALSE(series_is_zero(s, table, &counter));
  CHECK(counter.rfind("c2:", 0) == 0);
  CHECK(series_is_zero(TruncSeries(ctx, Direction::up), table));
}
