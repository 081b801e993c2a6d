#include "dy/gauss.hpp"

#include <functional>

#include "dy/errors.hpp"
#include "dy/parallel.hpp"

namespace dy {

namespace {

std::string sign_name(Sign s) { return s == Sign::minus ? "-" : "+"; }

}  // namespace

GaussData gauss_decompose(const ContextPtr& ctx, Sign sign) {
  const int S = ctx->size();
  const Direction dir = direction_of(sign);
  GaussData g{ctx,
              sign,
              S,
              SuperMatrix::generator_matrix(ctx, sign),
              SuperMatrix::identity(ctx, dir, S),
              SuperMatrix(ctx, dir, S),
              SuperMatrix::identity(ctx, dir, S),
              SuperMatrix(ctx, dir, S),
              SuperMatrix::identity(ctx, dir, S),
              SuperMatrix::identity(ctx, dir, S)};
  const SuperMatrix& T = g.T;

  for (int i = 1; i <= S; ++i) {
    // Rows r_j^i (A_{i-1})^{-1} for j >= i, with A_{i-1} the leading corner.
    std::vector<std::vector<TruncSeries>> left(S + 1);
    if (i > 1) {
      std::vector<int> corner;
      for (int p = 1; p < i; ++p) corner.push_back(p);
      SuperMatrix inv = matrix_inverse(T.submatrix(corner, corner));
      for (int j = i; j <= S; ++j) {
        left[j].assign(i, TruncSeries(ctx, dir));
        for (int q = 1; q < i; ++q)
          for (int p = 1; p < i; ++p) left[j][q] += T(j, p) * inv(p, q);
      }
    }
    // Bordered quasideterminant with boxed entry (j, l), j, l >= i.
    auto qd = [&](int j, int l) {
      TruncSeries out = T(j, l);
      for (int q = 1; q < i; ++q) out -= left[j][q] * T(q, l);
      return out;
    };
    g.D(i, i) = qd(i, i);
    g.Dinv(i, i) = inverse(g.D(i, i));
    for (int j = i + 1; j <= S; ++j) {
      g.F(j, i) = qd(j, i) * g.Dinv(i, i);
      g.E(i, j) = g.Dinv(i, i) * qd(i, j);
    }
  }
  for (int i = 1; i <= S; ++i)
    for (int j = i + 1; j <= S; ++j) {
      g.Eprime(i, j) = e_prime(g, i, j);
      g.Fprime(j, i) = f_prime(g, j, i);
    }
  return g;
}

const TruncSeries& drinfeld_series(const GaussData& g, DrinfeldKind which, int i, int j) {
  auto check = [&](bool ok) {
    if (!ok) throw DomainError("Drinfeld series index out of range");
  };
  switch (which) {
    case DrinfeldKind::d:
      check(i >= 1 && i <= g.size);
      return g.D(i, i);
    case DrinfeldKind::e:
      check(i >= 1 && i < j && j <= g.size);
      return g.E(i, j);
    case DrinfeldKind::f:
      check(j >= 1 && j < i && i <= g.size);
      return g.F(i, j);
    case DrinfeldKind::e_simple:
      check(i >= 1 && i < g.size);
      return g.E(i, i + 1);
    case DrinfeldKind::f_simple:
      check(i >= 1 && i < g.size);
      return g.F(i + 1, i);
  }
  throw DomainError("unknown Drinfeld series");
}

// Sum over chains i = i_0 < i_1 < ... < i_s = j of (-1)^s e_{i_0 i_1} ... e_{i_{s-1} i_s}.
TruncSeries e_prime(const GaussData& g, int i, int j) {
  const Direction dir = direction_of(g.sign);
  if (i == j) return TruncSeries::one(g.ctx, dir);
  if (i > j) return TruncSeries(g.ctx, dir);
  TruncSeries out(g.ctx, dir);
  std::function<void(int, const TruncSeries&, int)> walk = [&](int at, const TruncSeries& acc, int steps) {
    for (int next = at + 1; next <= j; ++next) {
      TruncSeries prod = acc * g.E(at, next);
      if (next == j)
        out += (steps + 1) % 2 ? -prod : prod;
      else
        walk(next, prod, steps + 1);
    }
  };
  walk(i, TruncSeries::one(g.ctx, dir), 0);
  return out;
}

// Sum over chains i = i_0 < ... < i_s = j of (-1)^s f_{i_s i_{s-1}} ... f_{i_1 i_0}.
TruncSeries f_prime(const GaussData& g, int j, int i) {
  const Direction dir = direction_of(g.sign);
  if (i == j) return TruncSeries::one(g.ctx, dir);
  if (i > j) return TruncSeries(g.ctx, dir);
  TruncSeries out(g.ctx, dir);
  // Walk down from j, multiplying on the right.
  std::function<void(int, const TruncSeries&, int)> walk = [&](int at, const TruncSeries& acc, int steps) {
    for (int next = at - 1; next >= i; --next) {
      TruncSeries prod = acc * g.F(at, next);
      if (next == i)
        out += (steps + 1) % 2 ? -prod : prod;
      else
        walk(next, prod, steps + 1);
    }
  };
  walk(j, TruncSeries::one(g.ctx, dir), 0);
  return out;
}

Element generator_coefficient(const TruncSeries& extended, int r, const ContextPtr& target) {
  return rebase(series_generator_coeff(extended, r), target);
}

bool series_is_zero(const TruncSeries& s, RuleTable& table, std::string* counterexample) {
  for (int k = 0; k <= s.order(); ++k) {
    if (s[k].is_zero()) continue;
    Element nf = normalize(s[k], table);
    if (!nf.is_zero()) {
      if (counterexample) *counterexample = "c" + std::to_string(k) + ": " + serialize(nf);
      return false;
    }
  }
  return true;
}

namespace {

using Check = std::function<IdentityRecord()>;

IdentityRecord series_record(const std::string& label, const std::string& anchor,
                             const std::string& params, const TruncSeries& diff, RuleTable& table) {
  std::string counter;
  bool ok = series_is_zero(diff, table, &counter);
  return make_record(label, anchor, params, ok, counter);
}

void run_checks(std::vector<Check>& checks, ReportFragment& frag, int jobs) {
  std::vector<IdentityRecord> out(checks.size());
  parallel_for(checks.size(), jobs, [&](std::size_t k) { out[k] = timed_check(checks[k]); });
  frag.records.insert(frag.records.end(), out.begin(), out.end());
}

bool h_divisible(const Element& e) {
  for (const auto& [k, c] : e.terms())
    if (k.hpow < 1) return false;
  return true;
}

}  // namespace

ReportFragment verify_gauss_identities(const GaussData& g, RuleTable& table, int jobs) {
  ReportFragment frag;
  frag.suite = "gauss";
  const int S = g.size;
  const std::string sg = "sign=" + sign_name(g.sign);
  auto p1 = [&](int i) { return sg + ",i=" + std::to_string(i); };
  auto p2 = [&](int i, int j) { return sg + ",i=" + std::to_string(i) + ",j=" + std::to_string(j); };
  const SuperMatrix Tinv = matrix_inverse(g.T);
  const SuperMatrix FDE = matrix_mul(matrix_mul(g.F, g.D), g.E);

  std::vector<Check> checks;
  for (int i = 1; i <= S; ++i)
    for (int j = 1; j <= S; ++j)
      checks.push_back([&, i, j] {
        return series_record("gauss.fde", "T(u) = F(u) D(u) E(u)", p2(i, j), FDE(i, j) - g.T(i, j), table);
      });

  for (int i = 1; i <= S; ++i) {
    checks.push_back([&, i] {
      TruncSeries rhs = g.d(i);
      for (int k = 1; k < i; ++k) rhs += g.F(i, k) * g.d(k) * g.E(k, i);
      return series_record("gauss.expand.t_ii", "t_ii = d_i + sum_{k<i} f_ik d_k e_ki", p1(i),
                           g.T(i, i) - rhs, table);
    });
    checks.push_back([&, i] {
      TruncSeries rhs = g.d_inv(i);
      for (int k = i + 1; k <= S; ++k) rhs += g.Eprime(i, k) * g.d_inv(k) * g.Fprime(k, i);
      return series_record("gauss.expand.tp_ii", "t'_ii = d_i^{-1} + sum_{k>i} e'_ik d_k^{-1} f'_ki", p1(i),
                           Tinv(i, i) - rhs, table);
    });
    for (int j = i + 1; j <= S; ++j) {
      checks.push_back([&, i, j] {
        TruncSeries rhs = g.d(i) * g.E(i, j);
        for (int k = 1; k < i; ++k) rhs += g.F(i, k) * g.d(k) * g.E(k, j);
        return series_record("gauss.expand.t_ij", "t_ij = d_i e_ij + sum_{k<i} f_ik d_k e_kj", p2(i, j),
                             g.T(i, j) - rhs, table);
      });
      checks.push_back([&, i, j] {
        TruncSeries rhs = g.F(j, i) * g.d(i);
        for (int k = 1; k < i; ++k) rhs += g.F(j, k) * g.d(k) * g.E(k, i);
        return series_record("gauss.expand.t_ji", "t_ji = f_ji d_i + sum_{k<i} f_jk d_k e_ki", p2(i, j),
                             g.T(j, i) - rhs, table);
      });
      checks.push_back([&, i, j] {
        TruncSeries rhs = g.Eprime(i, j) * g.d_inv(j);
        for (int k = j + 1; k <= S; ++k) rhs += g.Eprime(i, k) * g.d_inv(k) * g.Fprime(k, j);
        return series_record("gauss.expand.tp_ij", "t'_ij = e'_ij d_j^{-1} + sum_{k>j} e'_ik d_k^{-1} f'_kj",
                             p2(i, j), Tinv(i, j) - rhs, table);
      });
      checks.push_back([&, i, j] {
        TruncSeries rhs = g.d_inv(j) * g.Fprime(j, i);
        for (int k = j + 1; k <= S; ++k) rhs += g.Eprime(j, k) * g.d_inv(k) * g.Fprime(k, i);
        return series_record("gauss.expand.tp_ji", "t'_ji = d_j^{-1} f'_ji + sum_{k>j} e'_jk d_k^{-1} f'_ki",
                             p2(i, j), Tinv(j, i) - rhs, table);
      });
    }
  }
  run_checks(checks, frag, jobs);

  // Series shapes: d = 1 + O(h), e and f = O(h), coefficientwise.
  for (int i = 1; i <= S; ++i) {
    bool ok = true;
    TruncSeries d = g.d(i) - TruncSeries::one(g.ctx, g.d(i).direction());
    for (int k = 0; k <= d.order(); ++k) ok = ok && h_divisible(d[k]);
    frag.records.push_back(make_record("gauss.shape.d", "d_i(u) = 1 + O(h)", p1(i), ok, ok ? "" : serialize(d)));
    for (int j = i + 1; j <= S; ++j) {
      bool ok_e = true, ok_f = true;
      for (int k = 0; k <= d.order(); ++k) {
        ok_e = ok_e && h_divisible(g.E(i, j)[k]);
        ok_f = ok_f && h_divisible(g.F(j, i)[k]);
      }
      frag.records.push_back(make_record("gauss.shape.e", "e_ij(u) = O(h)", p2(i, j), ok_e, serialize(g.E(i, j))));
      frag.records.push_back(make_record("gauss.shape.f", "f_ji(u) = O(h)", p2(i, j), ok_f, serialize(g.F(j, i))));
    }
  }
  frag.sort();
  frag.info["precision"] = "exact modulo u-order > " + std::to_string(g.ctx->N) + ", h-order > " +
                           std::to_string(g.ctx->H);
  return frag;
}

ReportFragment verify_d_commute(RuleTable& table, int jobs) {
  const ContextPtr& ctx = table.context();
  const int S = ctx->size(), N = ctx->N;
  ContextPtr ext = with_h_order(ctx, ctx->H + 1);
  GaussData gm = gauss_decompose(ext, Sign::minus);
  GaussData gp = gauss_decompose(ext, Sign::plus);
  // coeffs[sign][i][r]
  std::vector<std::vector<Element>> dm(S + 1), dp(S + 1);
  for (int i = 1; i <= S; ++i)
    for (int r = 1; r <= N; ++r) {
      dm[i].push_back(generator_coefficient(gm.d(i), r, ctx));
      dp[i].push_back(generator_coefficient(gp.d(i), r, ctx));
    }

  ReportFragment frag;
  frag.suite = "d-commute";
  struct Task {
    const char* signs;
    const std::vector<std::vector<Element>>* a;
    const std::vector<std::vector<Element>>* b;
    int i, j;
  };
  std::vector<Task> tasks;
  for (int i = 1; i <= S; ++i)
    for (int j = 1; j <= S; ++j) {
      tasks.push_back({"--", &dm, &dm, i, j});
      tasks.push_back({"++", &dp, &dp, i, j});
      tasks.push_back({"-+", &dm, &dp, i, j});
    }
  std::vector<IdentityRecord> out(tasks.size());
  parallel_for(tasks.size(), jobs, [&](std::size_t t) {
    const Task& task = tasks[t];
    bool ok = true;
    std::string counter;
    for (int r = 1; r <= N && ok; ++r)
      for (int s = 1; s <= N && ok; ++s) {
        Element c = commutator((*task.a)[task.i][r - 1], (*task.b)[task.j][s - 1]);
        Element nf = normalize(c, table);
        if (!nf.is_zero()) {
          ok = false;
          counter = "r=" + std::to_string(r) + ",s=" + std::to_string(s) + ": " + serialize(nf);
        }
      }
    out[t] = make_record("d-commute", "[d_i(u), d_j(v)] = 0 coefficientwise",
                         std::string("signs=") + task.signs + ",i=" + std::to_string(task.i) +
                             ",j=" + std::to_string(task.j),
                         ok, counter);
  });
  frag.records = std::move(out);
  frag.sort();
  frag.info["precision"] = "coefficients d^{(r)}, r <= " + std::to_string(N) + ", modulo h^" +
                           std::to_string(ctx->H + 1);
  return frag;
}

}  // namespace dy
