#include "dy/berezinian.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <tuple>

#include "dy/classical.hpp"
#include "dy/errors.hpp"
#include "dy/parallel.hpp"

namespace dy {

namespace {

using Check = std::function<IdentityRecord()>;

std::string sparam(Sign s) { return std::string("sign=") + sign_char(s); }

int perm_sign(const std::vector<int>& p) {
  int inv = 0;
  for (std::size_t a = 0; a < p.size(); ++a)
    for (std::size_t b = a + 1; b < p.size(); ++b) inv += p[a] > p[b];
  return inv % 2 ? -1 : 1;
}

void run_checks(std::vector<Check>& checks, ReportFragment& frag, int jobs) {
  std::vector<IdentityRecord> out(checks.size());
  parallel_for(checks.size(), jobs, [&](std::size_t k) { out[k] = timed_check(checks[k]); });
  frag.records.insert(frag.records.end(), out.begin(), out.end());
}

// Coefficients of a generator-type series at the target's (N, H).
std::vector<Element> coefficients(const TruncSeries& work, const ContextPtr& target) {
  std::vector<Element> out;
  for (int r = 1; r <= target->N; ++r) out.push_back(generator_coefficient(work, r, target));
  return out;
}

BerezinianData finish(const TruncSeries& work, Sign sign, const ContextPtr& target) {
  return BerezinianData{sign, rebase(work, target), coefficients(work, target)};
}

IdentityRecord element_record(const std::string& label, const std::string& anchor, const std::string& params,
                              const Element& diff, RuleTable& table) {
  Element nf = normalize(diff, table);
  return make_record(label, anchor, params, nf.is_zero(), serialize(nf));
}

IdentityRecord series_record(const std::string& label, const std::string& anchor, const std::string& params,
                             const TruncSeries& diff, RuleTable& table) {
  std::string counter;
  bool ok = series_is_zero(diff, table, &counter);
  return make_record(label, anchor, params, ok, counter);
}

// X(u) Y(v) = Y(v) X(u): every coefficient pair commutes.
IdentityRecord commute_record(const std::string& label, const std::string& anchor, const std::string& params,
                              const TruncSeries& x, const TruncSeries& y, RuleTable& table) {
  for (int a = 0; a <= x.order(); ++a)
    for (int c = 0; c <= y.order(); ++c) {
      if (x[a].is_zero() || y[c].is_zero()) continue;
      Element nf = normalize(commutator(x[a], y[c]), table);
      if (!nf.is_zero())
        return make_record(label, anchor, params, false,
                           "u^" + std::to_string(a) + " v^" + std::to_string(c) + ": " + serialize(nf));
    }
  return make_record(label, anchor, params, true);
}

Element substitute(const Element& poly, const std::function<Element(Generator)>& image, RuleTable& target) {
  const ContextPtr& ctx = target.context();
  Element out(ctx);
  for (const auto& [key, c] : poly.terms()) {
    Element prod = Element::h_power(ctx, key.hpow, c);
    for (Generator g : key.word) {
      if (prod.is_zero()) break;
      prod = normalize(prod * image(g), target);
    }
    out += prod;
  }
  return normalize(out, target);
}

std::string precision_note(const Workspace& ws) {
  return "u-order <= " + std::to_string(ws.series_order()) + ", modulo h^" + std::to_string(ws.h_order() + 1);
}

}  // namespace

ContextPtr working_context(const ContextPtr& ctx, Sign sign) {
  const int N = sign == Sign::plus ? ctx->N + ctx->H : ctx->N;
  return make_context(ctx->m, ctx->n, ctx->H + 1, N);
}

TruncSeries quantum_determinant_in(const ContextPtr& ctx, Sign sign, int mhat, int offset) {
  const Direction dir = direction_of(sign);
  if (mhat == 0) return TruncSeries::one(ctx, dir);
  std::vector<std::vector<TruncSeries>> shifted(mhat + 1);
  for (int i = 1; i <= mhat; ++i)
    for (int k = 1; k <= mhat; ++k)
      shifted[i].push_back(shift(TruncSeries::generator_series(ctx, sign, i, k), offset - (k - 1)));
  std::vector<int> perm(mhat);
  std::iota(perm.begin(), perm.end(), 1);
  TruncSeries out(ctx, dir);
  do {
    TruncSeries prod = shifted[perm[0]][0];
    for (int k = 1; k < mhat; ++k) prod = prod * shifted[perm[k]][k];
    out += Rational(perm_sign(perm)) * prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

TruncSeries quantum_determinant(const ContextPtr& ctx, Sign sign, int mhat) {
  if (mhat < 1 || mhat > ctx->m) throw DomainError("quantum determinant needs 1 <= mhat <= m");
  ContextPtr work = make_context(ctx->m, ctx->n, ctx->H, sign == Sign::plus ? ctx->N + ctx->H : ctx->N);
  return rebase(quantum_determinant_in(work, sign, mhat), ctx);
}

TruncSeries qdet_from_d(const GaussData& g, int mhat) {
  TruncSeries out = TruncSeries::one(g.ctx, direction_of(g.sign));
  for (int k = 1; k <= mhat; ++k) out = out * shift(g.d(k), -(k - 1));
  return out;
}

BerezinianData berezinian_direct(const ContextPtr& ctx, Sign sign) {
  ContextPtr work = working_context(ctx, sign);
  const int m = ctx->m, n = ctx->n;
  TruncSeries first = quantum_determinant_in(work, sign, m);
  TruncSeries second = TruncSeries::one(work, direction_of(sign));
  if (n > 0) {
    SuperMatrix inv = matrix_inverse(SuperMatrix::generator_matrix(work, sign));
    std::vector<std::vector<TruncSeries>> shifted(n + 1);
    for (int k = 1; k <= n; ++k)
      for (int c = 1; c <= n; ++c) shifted[k].push_back(shift(inv(m + k, m + c), -(m - k)));
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 1);
    second = TruncSeries(work, direction_of(sign));
    do {
      TruncSeries prod = shifted[1][perm[0] - 1];
      for (int k = 2; k <= n; ++k) prod = prod * shifted[k][perm[k - 1] - 1];
      second += Rational(perm_sign(perm)) * prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return finish(first * second, sign, ctx);
}

BerezinianData berezinian_factored(const GaussData& g, const ContextPtr& target) {
  const int m = g.ctx->m, n = g.ctx->n;
  TruncSeries out = qdet_from_d(g, m);
  for (int k = 1; k <= n; ++k) out = out * shift(g.d_inv(m + k), -(m - k));
  return finish(out, g.sign, target);
}

BerezinianData berezinian_factored(const ContextPtr& ctx, Sign sign) {
  return berezinian_factored(gauss_decompose(working_context(ctx, sign), sign), ctx);
}

namespace {

IdentityRecord zeta_split_record(Workspace& ws, int m, int n, Sign sign, const TruncSeries& b) {
  ContextPtr ctx = ws.context(m, n);
  const int N = ctx->N, H = ctx->H;
  const int work_n = sign == Sign::plus ? N + H : N;
  const Direction dir = direction_of(sign);
  TruncSeries cm = rebase(quantum_determinant_in(make_context(m, n, H, work_n), sign, m), ctx);
  TruncSeries rhs = cm;
  const std::string anchor = "b(u) = C_m(u) zeta_{n|m}(C_n(u - (m-n)h))";
  try {
    if (n > 0) {
      TruncSeries cn = quantum_determinant_in(make_context(n, m, H, work_n), sign, n, -(m - n));
      const Morphism& z = ws.zeta(n, m);
      RuleTable& table = ws.table(m, n);
      TruncSeries zc(ctx, dir);
      for (int k = 0; k <= N; ++k) zc[k] = apply(z, cn[k], table);
      rhs = cm * zc;
    }
  } catch (const CapError& e) {
    return make_record("berezinian.zeta-split", anchor, sparam(sign), false, e.what());
  }
  return series_record("berezinian.zeta-split", anchor, sparam(sign), b - rhs, ws.table(m, n));
}

}  // namespace

ReportFragment berezinian_zeta_split(Workspace& ws, int m, int n, Sign sign) {
  ReportFragment frag;
  frag.suite = "berezinian-zeta-split";
  BerezinianData b = berezinian_direct(ws.context(m, n), sign);
  frag.records.push_back(zeta_split_record(ws, m, n, sign, b.series));
  frag.info["precision"] = "series " + precision_note(ws);
  return frag;
}

ReportFragment berezinian_equality_suite(Workspace& ws, int m, int n, int jobs) {
  ReportFragment frag;
  frag.suite = "berezinian-equality";
  ContextPtr ctx = ws.context(m, n);
  RuleTable& table = ws.table(m, n);
  struct PerSign {
    Sign sign;
    std::optional<BerezinianData> direct, factored;
    std::optional<GaussData> gauss;
  };
  std::vector<PerSign> data{{Sign::minus, {}, {}, {}}, {Sign::plus, {}, {}, {}}};
  parallel_for(data.size(), jobs, [&](std::size_t k) {
    PerSign& d = data[k];
    d.direct = berezinian_direct(ctx, d.sign);
    d.gauss = gauss_decompose(working_context(ctx, d.sign), d.sign);
    d.factored = berezinian_factored(*d.gauss, ctx);
  });

  std::vector<Check> checks;
  for (const PerSign& d : data) {
    const std::string sp = sparam(d.sign);
    for (int r = 1; r <= ctx->N; ++r)
      checks.push_back([&, r, sp] {
        return element_record("berezinian.factored", "direct b^{(r)} = coefficient of d-product form",
                              sp + ",r=" + std::to_string(r), d.direct->coeffs[r - 1] - d.factored->coeffs[r - 1],
                              table);
      });
    checks.push_back([&] { return zeta_split_record(ws, m, n, d.sign, d.direct->series); });
    for (int mh = 1; mh <= m; ++mh)
      checks.push_back([&, mh, sp] {
        TruncSeries c = quantum_determinant(ctx, d.sign, mh);
        TruncSeries viad = rebase(qdet_from_d(*d.gauss, mh), ctx);
        return series_record("qdet.d-product", "C_mhat(u) = d_1(u) d_2(u-h) ... d_mhat(u-(mhat-1)h)",
                             sp + ",mhat=" + std::to_string(mh), c - viad, table);
      });
  }
  run_checks(checks, frag, jobs);
  frag.sort();
  frag.info["gl"] = "(" + std::to_string(m) + "|" + std::to_string(n) + ")";
  frag.info["precision"] = "coefficients b^{(r)} " + precision_note(ws);
  return frag;
}

ReportFragment centrality_suite(Workspace& ws, int m, int n, int jobs) {
  ReportFragment frag;
  frag.suite = "centrality";
  ContextPtr ctx = ws.context(m, n);
  RuleTable& table = ws.table(m, n);
  const int N = ctx->N, S = ctx->size();
  std::vector<std::optional<BerezinianData>> b(2);
  std::vector<std::optional<GaussData>> g(2);
  const Sign signs[2] = {Sign::minus, Sign::plus};
  ContextPtr ext = with_h_order(ctx, ctx->H + 1);
  parallel_for(4, jobs, [&](std::size_t k) {
    if (k < 2)
      b[k] = berezinian_direct(ctx, signs[k]);
    else
      g[k - 2] = gauss_decompose(ext, signs[k - 2]);
  });

  std::vector<Check> checks;
  for (int bs = 0; bs < 2; ++bs)
    for (int r = 1; r <= N; ++r)
      for (int gs = 0; gs < 2; ++gs) {
        const std::string head = std::string("b=") + sign_char(signs[bs]) + ",r=" + std::to_string(r) +
                                 ",g=" + sign_char(signs[gs]);
        for (int k = 1; k <= S; ++k)
          for (int l = 1; l <= S; ++l)
            checks.push_back([&, bs, r, gs, k, l, head] {
              for (int s = 1; s <= N; ++s) {
                try {
                  Element nf = normalize(supercomm(b[bs]->coeffs[r - 1], gen(ctx, signs[gs], s, k, l)), table);
                  if (!nf.is_zero())
                    return make_record("centrality.t", "[b^{(r)}, t_kl^{(s)}] = 0",
                                       head + ",k=" + std::to_string(k) + ",l=" + std::to_string(l), false,
                                       "s=" + std::to_string(s) + ": " + serialize(nf));
                } catch (const CapError& e) {
                  return make_record("centrality.t", "[b^{(r)}, t_kl^{(s)}] = 0",
                                     head + ",k=" + std::to_string(k) + ",l=" + std::to_string(l), false, e.what());
                }
              }
              return make_record("centrality.t", "[b^{(r)}, t_kl^{(s)}] = 0",
                                 head + ",k=" + std::to_string(k) + ",l=" + std::to_string(l), true);
            });
        struct Drin {
          const char* name;
          std::function<const TruncSeries&(const GaussData&)> series;
          int index;
        };
        std::vector<Drin> drins;
        for (int j = 1; j <= S; ++j)
          drins.push_back({"d", [j](const GaussData& x) -> const TruncSeries& { return x.d(j); }, j});
        for (int i = 1; i < S; ++i) {
          drins.push_back({"e", [i](const GaussData& x) -> const TruncSeries& { return x.e(i, i + 1); }, i});
          drins.push_back({"f", [i](const GaussData& x) -> const TruncSeries& { return x.f(i + 1, i); }, i});
        }
        for (const Drin& dr : drins)
          checks.push_back([&, bs, r, gs, dr, head] {
            const std::string params = head + ",x=" + dr.name + std::to_string(dr.index);
            const TruncSeries& ser = dr.series(*g[gs]);
            for (int s = 1; s <= N; ++s) {
              try {
                Element x = generator_coefficient(ser, s, ctx);
                Element nf = normalize(supercomm(b[bs]->coeffs[r - 1], x), table);
                if (!nf.is_zero())
                  return make_record("centrality.drinfeld", "[b^{(r)}, x^{(s)}] = 0 for x = d_j, e_i, f_i", params,
                                     false, "s=" + std::to_string(s) + ": " + serialize(nf));
              } catch (const CapError& e) {
                return make_record("centrality.drinfeld", "[b^{(r)}, x^{(s)}] = 0 for x = d_j, e_i, f_i", params,
                                   false, e.what());
              }
            }
            return make_record("centrality.drinfeld", "[b^{(r)}, x^{(s)}] = 0 for x = d_j, e_i, f_i", params, true);
          });
      }
  run_checks(checks, frag, jobs);
  frag.sort();
  frag.info["gl"] = "(" + std::to_string(m) + "|" + std::to_string(n) + ")";
  frag.info["precision"] = "central at truncation: commutators with all generators of level <= " +
                           std::to_string(N) + " vanish modulo h^" + std::to_string(ctx->H + 1);
  return frag;
}

namespace {

struct SeriesSet {
  std::optional<GaussData> minus, plus;
  const GaussData& get(Sign s) const { return s == Sign::minus ? *minus : *plus; }
};

// Series coefficient pairs of (u - v) X(v) D(u) = (u - v + eps h) D(u) X(v) + [extra] D(u) X(u),
// for X given on v-powers lo..hi and D an up series.
IdentityRecord shifted_relation_record(const std::string& label, const std::string& anchor,
                                       const std::string& params, const std::map<int, Element>& x,
                                       const TruncSeries& d, int eps, bool with_diagonal, RuleTable& table,
                                       int diagonal = 1) {
  const ContextPtr& ctx = table.context();
  auto X = [&](int b) {
    auto it = x.find(b);
    return it == x.end() ? Element(ctx) : it->second;
  };
  auto D = [&](int a) { return a < 0 || a > d.order() ? Element(ctx) : d[a]; };
  const int lo = x.begin()->first, hi = x.rbegin()->first;
  for (int A = 0; A <= d.order(); ++A)
    for (int B = lo + 1; B <= hi; ++B) {
      Element lhs = X(B) * D(A - 1) - X(B - 1) * D(A);
      Element rhs = D(A - 1) * X(B) - D(A) * X(B - 1) + Element::h_power(ctx, 1, eps) * (D(A) * X(B));
      if (with_diagonal && B == 0)
        for (int a = 0; a <= A; ++a) rhs += Element::h_power(ctx, 1, diagonal) * (D(a) * X(A - a));
      Element nf = normalize(lhs - rhs, table);
      if (!nf.is_zero())
        return make_record(label, anchor, params, false,
                           "u^" + std::to_string(A) + " v^" + std::to_string(B) + ": " + serialize(nf));
    }
  return make_record(label, anchor, params, true);
}

}  // namespace

ReportFragment proof_step_suite(Workspace& ws, int jobs) {
  ReportFragment frag;
  frag.suite = "proof-steps";
  const int N = ws.series_order(), H = ws.h_order();
  const std::vector<std::pair<int, int>> algebras{{1, 1}, {1, 2}, {2, 0}, {2, 1}, {3, 0}};
  std::map<std::pair<int, int>, SeriesSet> gs;
  std::map<std::pair<int, int>, std::optional<BerezinianData>> bplus;
  for (auto mn : algebras) gs[mn];
  bplus[{1, 1}];
  bplus[{2, 1}];
  std::vector<std::function<void()>> prep;
  for (auto mn : algebras) {
    prep.push_back([&, mn] { gs.at(mn).minus = gauss_decompose(ws.context(mn.first, mn.second), Sign::minus); });
    prep.push_back([&, mn] { gs.at(mn).plus = gauss_decompose(ws.context(mn.first, mn.second), Sign::plus); });
  }
  for (auto mn : {std::pair{1, 1}, std::pair{2, 1}})
    prep.push_back([&, mn] { bplus.at(mn) = berezinian_direct(ws.context(mn.first, mn.second), Sign::plus); });
  std::optional<GaussData> wide20;  // gl(2|0) plus at N + H for the shifted product
  prep.push_back([&] { wide20 = gauss_decompose(make_context(2, 0, H, N + H), Sign::plus); });
  parallel_for(prep.size(), jobs, [&](std::size_t k) { prep[k](); });

  auto P = [&](int m, int n) -> const GaussData& { return *gs.at({m, n}).plus; };
  auto M = [&](int m, int n) -> const GaussData& { return *gs.at({m, n}).minus; };
  auto T = [&](int m, int n) -> RuleTable& { return ws.table(m, n); };
  auto gl = [](int m, int n) { return "gl=" + std::to_string(m) + "|" + std::to_string(n); };

  std::vector<Check> checks;
  // e_1^+(u) b^+(v) = b^+(v) e_1^+(u) in gl(1|1), and the ratio form in gl(m|1).
  checks.push_back([&] {
    return commute_record("proof.e1-b", "e_1^+(u) b_{1|1}^+(v) = b_{1|1}^+(v) e_1^+(u)", gl(1, 1),
                          P(1, 1).e(1, 2), bplus.at({1, 1})->series, T(1, 1));
  });
  for (int m : {1, 2})
    for (bool is_e : {true, false})
      checks.push_back([&, m, is_e] {
        const GaussData& g = P(m, 1);
        TruncSeries ratio = g.d(m) * g.d_inv(m + 1);
        const TruncSeries& x = is_e ? g.e(m, m + 1) : g.f(m + 1, m);
        return commute_record(is_e ? "proof.em-dratio" : "proof.fm-dratio",
                              is_e ? "e_m^+(u) d_m^+(v) d_{m+1}^+(v)^{-1} = d_m^+(v) d_{m+1}^+(v)^{-1} e_m^+(u)"
                                   : "f_m^+(u) d_m^+(v) d_{m+1}^+(v)^{-1} = d_m^+(v) d_{m+1}^+(v)^{-1} f_m^+(u)",
                              gl(m, 1), x, ratio, T(m, 1));
      });
  // gl(1|2), s = 2
  checks.push_back([&] {
    SuperMatrix inv = matrix_inverse(P(1, 2).T);
    return commute_record("proof.t12-tprime", "t_12^+(u) t'^+_{s+1,s+1}(v) = t'^+_{s+1,s+1}(v) t_12^+(u)",
                          gl(1, 2) + ",s=2", P(1, 2).T(1, 2), inv(3, 3), T(1, 2));
  });
  checks.push_back([&] {
    return commute_record("proof.e1-ds", "e_1^+(u) d_{s+1}^+(v) = d_{s+1}^+(v) e_1^+(u)", gl(1, 2) + ",s=2",
                          P(1, 2).e(1, 2), P(1, 2).d(3), T(1, 2));
  });
  checks.push_back([&] {
    return commute_record("proof.fm-dj", "f_m^+(u) d_j^+(v) = d_j^+(v) f_m^+(u), j >= m+2", gl(1, 2) + ",j=3",
                          P(1, 2).f(2, 1), P(1, 2).d(3), T(1, 2));
  });
  // e_i^+, f_i^+ against b^+, all i
  for (auto mn : {std::pair{1, 1}, std::pair{2, 1}})
    for (int i = 1; i < mn.first + mn.second; ++i)
      for (Sign xs : {Sign::plus, Sign::minus})
        for (bool is_e : {true, false})
          checks.push_back([&, mn, i, xs, is_e] {
            const GaussData& g = xs == Sign::plus ? P(mn.first, mn.second) : M(mn.first, mn.second);
            const TruncSeries& x = is_e ? g.e(i, i + 1) : g.f(i + 1, i);
            std::string name = std::string(is_e ? "e" : "f") + "_i^" + sign_char(xs);
            return commute_record(xs == Sign::plus ? "proof.xi-plus-b-plus" : "proof.xi-minus-b-plus",
                                  name + "(u) b^+(v) = b^+(v) " + name + "(u)",
                                  gl(mn.first, mn.second) + ",i=" + std::to_string(i) + ",x=" + (is_e ? "e" : "f"), x,
                                  bplus.at(mn)->series, T(mn.first, mn.second));
          });
  // e_i^-(u), f_i^-(u) against d_j^+(v)
  for (auto [m, n, i, j] : {std::tuple{2, 1, 1, 3}, std::tuple{3, 0, 1, 3}})
    for (bool is_e : {true, false})
      checks.push_back([&, m, n, i, j, is_e] {
        const TruncSeries& x = is_e ? M(m, n).e(i, i + 1) : M(m, n).f(i + 1, i);
        return commute_record("proof.xi-minus-dj-plus",
                              is_e ? "e_i^-(u) d_j^+(v) = d_j^+(v) e_i^-(u)" : "f_i^-(u) d_j^+(v) = d_j^+(v) f_i^-(u)",
                              gl(m, n) + ",i=" + std::to_string(i) + ",j=" + std::to_string(j) +
                                  ",x=" + (is_e ? "e" : "f"),
                              x, P(m, n).d(j), T(m, n));
      });
  // (u - v) e_1^+(v) d_j^+(u) = (u - v - h) d_j^+(u) e_1^+(v) + d_j^+(u) e_1^+(u) in gl(1|1)
  for (int j : {1, 2})
    checks.push_back([&, j] {
      std::map<int, Element> x;
      for (int b = 0; b <= N; ++b) x.emplace(b, P(1, 1).e(1, 2)[b]);
      x.emplace(-1, Element(ws.context(1, 1)));
      return shifted_relation_record("proof.e1-dj-shifted",
                                     "(u-v) e_1^+(v) d_j^+(u) = (u-v-h) d_j^+(u) e_1^+(v) + h d_j^+(u) e_1^+(u)",
                                     gl(1, 1) + ",j=" + std::to_string(j), x, P(1, 1).d(j), -1, true, T(1, 1));
    });
  // (u - v)(e_i^-(v) - e_i^+(v)) d_j^+(u) = (u - v -+ h) d_j^+(u)(e_i^-(v) - e_i^+(v)) in gl(2|0)
  for (int j : {1, 2})
    checks.push_back([&, j] {
      std::map<int, Element> x;
      const TruncSeries& em = M(2, 0).e(1, 2);
      const TruncSeries& ep = P(2, 0).e(1, 2);
      for (int b = 1; b <= N; ++b) x.emplace(-b, em[b]);
      for (int b = 0; b <= N; ++b) x.emplace(b, b == 0 ? em[0] - ep[0] : -ep[b]);
      return shifted_relation_record("proof.ei-diff-dj-shifted",
                                     "(u-v)(e_i^-(v) - e_i^+(v)) d_j^+(u) = (u-v-+h) d_j^+(u)(e_i^-(v) - e_i^+(v))",
                                     gl(2, 0) + ",i=1,j=" + std::to_string(j), x, P(2, 0).d(j), j == 1 ? -1 : 1,
                                     false, T(2, 0));
    });
  // e_i^+(u) d_i^+(v) d_{i+1}^+(v-h) = d_i^+(v) d_{i+1}^+(v-h) e_i^+(u) in gl(2|0)
  checks.push_back([&] {
    ContextPtr ctx = ws.context(2, 0);
    TruncSeries prod = rebase(wide20->d(1) * shift(wide20->d(2), -1), ctx);
    return commute_record("proof.ei-dd-shifted",
                          "e_i^+(u) d_i^+(v) d_{i+1}^+(v-h) = d_i^+(v) d_{i+1}^+(v-h) e_i^+(u)", gl(2, 0) + ",i=1",
                          P(2, 0).e(1, 2), prod, T(2, 0));
  });
  run_checks(checks, frag, jobs);
  frag.sort();
  frag.info["precision"] = "all coefficient pairs, " + precision_note(ws);
  return frag;
}

ReportFragment classical_limit_suite(Workspace& ws, int m, int n) {
  ReportFragment frag;
  frag.suite = "classical-limit";
  ContextPtr ctx = ws.context(m, n);
  RuleTable& table = ws.table(m, n);
  const int N = ctx->N, S = ctx->size();
  for (Sign sign : {Sign::minus, Sign::plus}) {
    BerezinianData b = berezinian_direct(ctx, sign);
    for (int r = 1; r <= N; ++r) {
      const std::string params = sparam(sign) + ",r=" + std::to_string(r);
      Element nf = normalize(b.coeffs[r - 1], table);
      Element h0 = nf.h_component(0);
      Element expected(ctx);
      for (int i = 1; i <= S; ++i) expected += Rational(ctx->parity(i) ? -1 : 1) * gen(ctx, sign, r, i, i);
      frag.records.push_back(make_record("classical.h0-part", "b^{(r)} at h = 0 is sum_i (-1)^i t_ii^{(r)}", params,
                                         h0 == expected, serialize(h0 - expected)));
      ClassicalElement img = classical_image(nf);
      const int deg = sign == Sign::minus ? r - 1 : -r;
      ClassicalElement want = ClassicalElement::identity_loop(m, n, deg);
      frag.records.push_back(make_record("classical.image", "b^{(r)}|_{h=0} -> I(r-1), b^{(-r)}|_{h=0} -> I(-r)",
                                         params, img == want, (img - want).str()));
      bool central = true;
      std::string counter;
      for (int k = 1; k <= S && central; ++k)
        for (int l = 1; l <= S && central; ++l)
          for (int s = -N; s <= N && central; ++s) {
            ClassicalElement c = supercomm(img, ClassicalElement::basis(m, n, k, l, s));
            if (!c.is_zero()) {
              central = false;
              counter = "e_" + std::to_string(k) + std::to_string(l) + "(" + std::to_string(s) + "): " + c.str();
            }
          }
      frag.records.push_back(make_record("classical.central", "[image, e_kl(s)] = 0 in U(L(gl(m|n)))", params,
                                         central, counter));
    }
  }
  frag.sort();
  frag.info["loop-degrees"] = std::to_string(-N) + ".." + std::to_string(N);
  return frag;
}

namespace {

// Exact rank over Q of the given vectors (sparse, keyed by monomial).
std::size_t rank_of(const std::vector<Element>& rows) {
  std::map<TermKey, int> col;
  for (const auto& e : rows)
    for (const auto& [k, c] : e.terms()) col.emplace(k, 0);
  int idx = 0;
  for (auto& [k, v] : col) v = idx++;
  std::vector<std::vector<Rational>> mat;
  for (const auto& e : rows) {
    std::vector<Rational> row(col.size(), 0);
    for (const auto& [k, c] : e.terms()) row[static_cast<std::size_t>(col[k])] = c;
    mat.push_back(std::move(row));
  }
  std::size_t rank = 0;
  for (std::size_t c = 0; c < col.size() && rank < mat.size(); ++c) {
    std::size_t piv = rank;
    while (piv < mat.size() && mat[piv][c] == 0) ++piv;
    if (piv == mat.size()) continue;
    std::swap(mat[piv], mat[rank]);
    for (std::size_t r = 0; r < mat.size(); ++r) {
      if (r == rank || mat[r][c] == 0) continue;
      Rational f = mat[r][c] / mat[rank][c];
      for (std::size_t k = c; k < col.size(); ++k) mat[r][k] -= f * mat[rank][k];
    }
    ++rank;
  }
  return rank;
}

}  // namespace

ReportFragment independence_probe(Workspace& ws, int m, int n, int R) {
  ContextPtr ctx = ws.context(m, n);
  if (R < 0 || R > ctx->N) throw UsageError("independence probe needs 0 <= R <= N");
  RuleTable& table = ws.table(m, n);
  ReportFragment frag;
  frag.suite = "independence";
  std::vector<Element> gens;
  std::vector<std::string> names;
  if (R > 0)
    for (Sign sign : {Sign::minus, Sign::plus}) {
      BerezinianData b = berezinian_direct(ctx, sign);
      for (int r = 1; r <= R; ++r) {
        gens.push_back(normalize(b.coeffs[r - 1], table));
        names.push_back(std::string("b(") + (sign == Sign::minus ? "" : "-") + std::to_string(r) + ")");
      }
    }
  std::vector<Element> monos{Element::one(ctx)};
  for (const auto& g : gens) monos.push_back(g);
  for (std::size_t a = 0; a < gens.size(); ++a)
    for (std::size_t c = a; c < gens.size(); ++c) monos.push_back(normalize(gens[a] * gens[c], table));
  const std::size_t rank = rank_of(monos);
  frag.records.push_back(make_record("independence.rank", "degree <= 2 monomials in b^{(+-r)} are independent",
                                     "R=" + std::to_string(R), rank == monos.size(),
                                     "rank " + std::to_string(rank) + " of " + std::to_string(monos.size())));
  frag.info["monomials"] = std::to_string(monos.size());
  frag.info["rank"] = std::to_string(rank);
  frag.info["note"] = "finite-order surrogate for algebraic independence, degree <= 2";
  return frag;
}

ReportFragment delta_and_sl_suite(Workspace& ws, int m, int n, int jobs) {
  if (m != n) throw UsageError("delta-sl suite needs m = n");
  ReportFragment frag;
  frag.suite = "delta-sl";
  ContextPtr ctx = ws.context(n, n);
  RuleTable& table = ws.table(n, n);
  const int N = ctx->N, H = ctx->H, K = 2 * n - 1;

  struct PerSign {
    Sign sign;
    std::optional<GaussData> g;
    std::optional<BerezinianData> direct;
    std::vector<TruncSeries> delta;  // delta[k], k = 1..K, in the working context
  };
  std::vector<PerSign> data{{Sign::minus, {}, {}, {}}, {Sign::plus, {}, {}, {}}};
  parallel_for(2, jobs, [&](std::size_t s) {
    PerSign& d = data[s];
    ContextPtr work = working_context(ctx, d.sign);
    d.g = gauss_decompose(work, d.sign);
    d.direct = berezinian_direct(ctx, d.sign);
    d.delta.assign(1, TruncSeries(work, direction_of(d.sign)));
    for (int k = 1; k <= K; ++k) d.delta.push_back(d.g->d_inv(1) * d.g->d(k + 1));
  });

  // delta_1(u-h) ... delta_{n-1}(u-(n-1)h) delta_n(u-(n-1)h)^{-1} ... delta_{2n-1}(u)^{-1}
  auto factorization = [n, K](const std::vector<TruncSeries>& delta) {
    TruncSeries out = TruncSeries::one(delta[1].context(), delta[1].direction());
    for (int k = 1; k <= n - 1; ++k) out = out * shift(delta[k], -k);
    for (int k = n; k <= K; ++k) out = out * shift(inverse(delta[k]), -(K - k));
    return out;
  };

  std::vector<std::size_t> poly_terms(2, 0);
  std::vector<Check> checks;
  for (const PerSign& d : data) {
    const std::string sp = sparam(d.sign);
    std::size_t& terms = poly_terms[d.sign == Sign::minus ? 0 : 1];
    for (int k = 1; k <= K; ++k)
      checks.push_back([&, k, sp] {
        // delta^-(u) = 1 + h sum ..., delta^+(u) = 1 - h sum ... u^{r-1}
        TruncSeries c = rebase(d.delta[k], ctx);
        Element rest = c[0] - Element::one(ctx);
        bool ok = d.sign == Sign::minus ? rest.is_zero() : rest.is_zero() || rest.min_hpow() >= 1;
        return make_record("delta.constant", "delta_i(u) = 1 + O(h), constant term exactly 1 for delta^-",
                           sp + ",i=" + std::to_string(k), ok, serialize(c[0]));
      });
    checks.push_back([&, sp] {
      std::vector<Element> f = coefficients(factorization(d.delta), ctx);
      for (int r = 1; r <= N; ++r) {
        Element nf = normalize(d.direct->coeffs[r - 1] - f[r - 1], table);
        if (!nf.is_zero())
          return make_record("delta.factorization", "b_{n|n}(u) = product of shifted delta_i and inverse delta_i", sp,
                             false, "r=" + std::to_string(r) + ": " + serialize(nf));
      }
      return make_record("delta.factorization", "b_{n|n}(u) = product of shifted delta_i and inverse delta_i", sp, true);
    });
    checks.push_back([&, sp] {
      // Free symbols x_k^{(s)} stand for delta_k^{(s)}: they are the diagonal
      // generators t_kk of an auxiliary all-even context.
      const ContextPtr& work = d.g->ctx;
      ContextPtr aux = make_context(K, 0, work->H, work->N);
      ContextPtr aux_out = make_context(K, 0, H, N);
      std::vector<TruncSeries> sym(1, TruncSeries(aux, direction_of(d.sign)));
      for (int k = 1; k <= K; ++k) sym.push_back(TruncSeries::generator_series(aux, d.sign, k, k));
      TruncSeries poly_series = factorization(sym);
      std::map<std::uint32_t, Element> cache;
      auto image = [&](Generator x) {
        auto it = cache.find(x.code());
        if (it != cache.end()) return it->second;
        Element e = generator_coefficient(d.delta[x.row()], x.level(), ctx);
        cache.emplace(x.code(), e);
        return e;
      };
      for (int r = 1; r <= N; ++r) {
        Element poly = generator_coefficient(poly_series, r, aux_out);
        terms += poly.size();
        Element value = substitute(poly, image, table);
        Element nf = normalize(value - d.direct->coeffs[r - 1], table);
        if (!nf.is_zero())
          return make_record("delta.sl-membership", "b^{(r)} = P_r(delta^{(s)}) from the delta factorization", sp,
                             false, "r=" + std::to_string(r) + ": " + serialize(nf));
      }
      return make_record("delta.sl-membership", "b^{(r)} = P_r(delta^{(s)}) from the delta factorization", sp, true);
    });
  }
  run_checks(checks, frag, jobs);
  frag.sort();
  frag.info["n"] = std::to_string(n);
  frag.info["polynomial-terms"] = "minus " + std::to_string(poly_terms[0]) + ", plus " + std::to_string(poly_terms[1]);
  frag.info["precision"] = "coefficients " + precision_note(ws);
  return frag;
}

}  // namespace dy
