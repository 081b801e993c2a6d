#include "dy/morphisms.hpp"

#include <random>

#include "dy/errors.hpp"
#include "dy/gauss.hpp"
#include "dy/parallel.hpp"
#include "dy/series.hpp"

namespace dy {

const char* to_string(MorphismKind k) {
  switch (k) {
    case MorphismKind::rho: return "rho";
    case MorphismKind::omega: return "omega";
    case MorphismKind::iota: return "iota";
    case MorphismKind::zeta: return "zeta";
    case MorphismKind::psi: return "psi";
  }
  return "?";
}

Morphism::Morphism(MorphismKind kind, ContextPtr source, ContextPtr target, int shift, int max_level,
                   Producer producer)
    : kind_(kind),
      source_(std::move(source)),
      target_(std::move(target)),
      shift_(shift),
      max_level_(max_level),
      producer_(std::move(producer)) {}

Element Morphism::image(Generator g) const {
  const int S = source_->size();
  if (g.row() < 1 || g.row() > S || g.col() < 1 || g.col() > S || g.level() < 1 ||
      g.parity() != (source_->parity(g.row()) + source_->parity(g.col())) % 2)
    throw DomainError("generator " + to_string(g) + " is not in the source of " + to_string(kind_));
  if (g.level() > max_level_) throw CapError(g.level(), max_level_);
  {
    std::lock_guard lock(mu_);
    auto it = images_.find(g.code());
    if (it != images_.end()) return it->second;
  }
  Element img = producer_(g);
  std::lock_guard lock(mu_);
  return images_.emplace(g.code(), std::move(img)).first->second;
}

Element apply(const Morphism& phi, const Element& a, RuleTable& target) {
  if (!a.context() || a.context()->m != phi.source()->m || a.context()->n != phi.source()->n)
    throw UsageError(std::string("element is not in the source of ") + to_string(phi.kind()));
  if (target.context()->m != phi.target()->m || target.context()->n != phi.target()->n)
    throw UsageError(std::string("rule table does not match the target of ") + to_string(phi.kind()));
  const ContextPtr& tctx = target.context();
  Element out(tctx);
  for (const auto& [key, c] : a.terms()) {
    Element prod = Element::h_power(tctx, key.hpow, c);
    for (Generator g : key.word) {
      if (prod.is_zero()) break;
      prod = normalize(prod * phi.image(g), target);
    }
    out += prod;
  }
  return normalize(out, target);
}

namespace {

// s(u) -> s(-u): the coefficient of u^{-k} or u^k picks up (-1)^k.
TruncSeries negate_variable(const TruncSeries& s) {
  TruncSeries out = s;
  for (int k = 1; k <= out.order(); k += 2) out[k] = -out[k];
  return out;
}

int level_sign(Sign sign, int r) {
  // t^-(-u) carries (-u)^{-r}; t^+(-u) carries (-u)^{r-1}.
  const int p = sign == Sign::minus ? r : r - 1;
  return p % 2 ? -1 : 1;
}

}  // namespace

Workspace::Workspace(int N, int H, int cap) : N_(N), H_(H), cap_(cap) {
  if (N < 1 || H < 1) throw UsageError("workspace needs N >= 1 and H >= 1");
  if (cap < N + 1) throw UsageError("level cap must be at least N + 1");
}

Workspace::Slot& Workspace::slot(int m, int n) {
  std::lock_guard lock(mu_);
  auto it = slots_.find({m, n});
  if (it == slots_.end()) {
    Slot s;
    s.ctx = make_context(m, n, H_, N_);
    s.table = std::make_unique<RuleTable>(s.ctx, cap_);
    if (!cache_dir_.empty() && std::filesystem::exists(cache_file(m, n)))
      load_rules(*s.table, cache_file(m, n));
    it = slots_.emplace(std::make_pair(m, n), std::move(s)).first;
  }
  return it->second;
}

void Workspace::attach_cache(std::filesystem::path dir) {
  std::lock_guard lock(mu_);
  if (!slots_.empty()) throw UsageError("attach the rule cache before using the workspace");
  std::filesystem::create_directories(dir);
  cache_dir_ = std::move(dir);
}

std::filesystem::path Workspace::cache_file(int m, int n) const {
  return cache_dir_ / ("rules-m" + std::to_string(m) + "-n" + std::to_string(n) + ".txt");
}

void Workspace::save_cache() {
  std::lock_guard lock(mu_);
  if (cache_dir_.empty()) return;
  for (const auto& [mn, s] : slots_) save_rules(*s.table, cache_file(mn.first, mn.second));
}

ContextPtr Workspace::context(int m, int n) { return slot(m, n).ctx; }
RuleTable& Workspace::table(int m, int n) { return *slot(m, n).table; }

const Morphism& Workspace::morphism(MorphismKind kind, int m, int n, int k) {
  if (kind != MorphismKind::iota && kind != MorphismKind::psi) k = 0;
  std::lock_guard lock(mu_);
  auto key = std::make_tuple(static_cast<int>(kind), m, n, k);
  auto it = morphisms_.find(key);
  if (it == morphisms_.end()) it = morphisms_.emplace(key, build(kind, m, n, k)).first;
  return *it->second;
}

std::unique_ptr<Morphism> Workspace::build(MorphismKind kind, int m, int n, int k) {
  if (m < 0 || n < 0 || m + n < 1) throw UsageError("morphism needs m + n >= 1");
  ContextPtr src = context(m, n);
  const int S = m + n;
  switch (kind) {
    case MorphismKind::rho: {
      ContextPtr tgt = context(n, m);
      return std::make_unique<Morphism>(kind, src, tgt, 0, cap_, [tgt, S](Generator g) {
        return Rational(level_sign(g.sign(), g.level())) *
               gen(tgt, g.sign(), g.level(), S + 1 - g.row(), S + 1 - g.col());
      });
    }
    case MorphismKind::iota: {
      if (k < 1) throw UsageError("iota needs k >= 1");
      ContextPtr tgt = context(m + k, n);
      return std::make_unique<Morphism>(kind, src, tgt, k, cap_, [tgt, k](Generator g) {
        return gen(tgt, g.sign(), g.level(), g.row() + k, g.col() + k);
      });
    }
    case MorphismKind::omega: {
      // One matrix inverse per (sign, level) yields every image at that level.
      struct State {
        std::mutex mu;
        std::map<std::pair<int, int>, std::vector<Element>> batches;
      };
      auto state = std::make_shared<State>();
      RuleTable* table = &this->table(m, n);
      const int H = H_;
      return std::make_unique<Morphism>(kind, src, src, 0, cap_, [=](Generator g) {
        const int r = g.level();
        const std::pair<int, int> key{static_cast<int>(g.sign()), r};
        {
          std::lock_guard lock(state->mu);
          auto it = state->batches.find(key);
          if (it != state->batches.end()) return it->second[(g.row() - 1) * S + g.col() - 1];
        }
        ContextPtr ext = make_context(src->m, src->n, H + 1, r);
        SuperMatrix inv = matrix_inverse(SuperMatrix::generator_matrix(ext, g.sign()));
        std::vector<Element> batch;
        for (int i = 1; i <= S; ++i)
          for (int j = 1; j <= S; ++j)
            batch.push_back(normalize(generator_coefficient(negate_variable(inv(i, j)), r, src), *table));
        std::lock_guard lock(state->mu);
        auto& stored = state->batches.emplace(key, std::move(batch)).first->second;
        return stored[(g.row() - 1) * S + g.col() - 1];
      });
    }
    case MorphismKind::zeta: {
      const Morphism* om = &omega(m, n);
      const Morphism* rh = &rho(m, n);
      RuleTable* tgt_table = &table(n, m);
      return std::make_unique<Morphism>(kind, src, context(n, m), 0, cap_, [=](Generator g) {
        return apply(*rh, om->image(g), *tgt_table);
      });
    }
    case MorphismKind::psi: {
      if (k < 0) throw UsageError("psi needs k >= 0");
      if (k == 0)
        return std::make_unique<Morphism>(kind, src, src, 0, cap_,
                                          [src](Generator g) { return Element::monomial(src, 1, 0, Word{g}); });
      const Morphism* om_src = &omega(m, n);
      const Morphism* io = &iota(m, n, k);
      const Morphism* om_tgt = &omega(m + k, n);
      RuleTable* tgt_table = &table(m + k, n);
      return std::make_unique<Morphism>(kind, src, context(m + k, n), k, cap_, [=](Generator g) {
        return apply(*om_tgt, apply(*io, om_src->image(g), *tgt_table), *tgt_table);
      });
    }
  }
  throw UsageError("unknown morphism kind");
}

ReportFragment sample_relation_preservation(const Morphism& phi, RuleTable& source, RuleTable& target,
                                            std::uint64_t seed, int trials) {
  ReportFragment frag;
  frag.suite = std::string("relations-") + to_string(phi.kind());
  const ContextPtr& ctx = source.context();
  std::mt19937_64 rng(seed);
  auto draw = [&](int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1)); };
  const int top = std::min(ctx->N, 3);
  for (int t = 0; t < trials; ++t) {
    Generator x, y;
    do {
      auto pick = [&] {
        return make_generator(*ctx, draw(0, 1) ? Sign::plus : Sign::minus, draw(1, top), draw(1, ctx->size()),
                              draw(1, ctx->size()));
      };
      x = pick();
      y = pick();
    } while (!needs_rewrite(x, y));
    Element rel = Element::monomial(ctx, 1, 0, Word{x, y}) - source.rule(x, y).rhs;
    std::string params = "trial=" + std::to_string(t) + ",x=" + to_string(x) + ",y=" + to_string(y);
    try {
      Element img = apply(phi, rel, target);
      frag.records.push_back(make_record("relation-image", "phi(xy - rule) = 0", params, img.is_zero(),
                                         serialize(img)));
    } catch (const CapError& e) {
      frag.records.push_back(make_record("relation-image", "phi(xy - rule) = 0", params, false, e.what()));
    }
  }
  return frag;
}

namespace {

using Check = std::function<IdentityRecord()>;

IdentityRecord image_record(const std::string& label, const std::string& anchor, const std::string& params,
                            const Morphism& phi, const TruncSeries& source, const TruncSeries& expected,
                            RuleTable& target, Rational factor = 1) {
  for (int c = 0; c <= source.order(); ++c) {
    try {
      Element img = apply(phi, source[c], target);
      Element diff = normalize(img - factor * rebase(expected[c], target.context()), target);
      if (!diff.is_zero())
        return make_record(label, anchor, params, false, "c" + std::to_string(c) + ": " + serialize(diff));
    } catch (const CapError& e) {
      return make_record(label, anchor, params, false, e.what());
    }
  }
  return make_record(label, anchor, params, true, "");
}

void run_checks(std::vector<Check>& checks, ReportFragment& frag, int jobs) {
  std::vector<IdentityRecord> out(checks.size());
  parallel_for(checks.size(), jobs, [&](std::size_t k) { out[k] = timed_check(checks[k]); });
  frag.records.insert(frag.records.end(), out.begin(), out.end());
}

std::string sparam(Sign s) { return std::string("sign=") + sign_char(s); }

}  // namespace

ReportFragment verify_zeta_images(Workspace& ws, int m, int n, int jobs) {
  ReportFragment frag;
  frag.suite = "zeta";
  const int S = m + n;
  const Morphism& z = ws.zeta(m, n);
  RuleTable& tgt = ws.table(n, m);
  std::vector<GaussData> src_g, tgt_g;
  for (Sign sg : {Sign::minus, Sign::plus}) {
    src_g.push_back(gauss_decompose(ws.context(m, n), sg));
    tgt_g.push_back(gauss_decompose(ws.context(n, m), sg));
  }
  std::vector<Check> checks;
  for (int s = 0; s < 2; ++s) {
    const GaussData& a = src_g[s];
    const GaussData& b = tgt_g[s];
    const std::string sp = sparam(a.sign);
    for (int i = 1; i < S; ++i) {
      const std::string p = sp + ",i=" + std::to_string(i);
      checks.push_back([&, i, p] {
        return image_record("zeta.f", "zeta(f_i(u)) = -e_{m+n-i}(u)", p, z, a.f(i + 1, i), b.e(S - i, S - i + 1),
                            tgt, -1);
      });
      checks.push_back([&, i, p] {
        return image_record("zeta.e", "zeta(e_i(u)) = -f_{m+n-i}(u)", p, z, a.e(i, i + 1), b.f(S - i + 1, S - i),
                            tgt, -1);
      });
    }
    for (int j = 1; j <= S; ++j)
      checks.push_back([&, j, sp] {
        return image_record("zeta.d", "zeta(d_j(u)) = d_{m+n-j+1}(u)^{-1}", sp + ",j=" + std::to_string(j), z,
                            a.d(j), b.d_inv(S - j + 1), tgt);
      });
  }
  run_checks(checks, frag, jobs);
  frag.sort();
  frag.info["source"] = "gl(" + std::to_string(m) + "|" + std::to_string(n) + ")";
  frag.info["precision"] = "u-order <= " + std::to_string(ws.series_order()) + ", modulo h^" +
                           std::to_string(ws.h_order() + 1);
  return frag;
}

ReportFragment verify_psi_images(Workspace& ws, int m, int n, int k, int jobs) {
  if (k < 0) throw UsageError("psi needs k >= 0");
  ReportFragment frag;
  frag.suite = "psi";
  const int S = m + n;
  const Morphism& psi = ws.psi(m, n, k);
  RuleTable& tgt = ws.table(m + k, n);
  std::vector<GaussData> src_g, tgt_g;
  for (Sign sg : {Sign::minus, Sign::plus}) {
    src_g.push_back(gauss_decompose(ws.context(m, n), sg));
    tgt_g.push_back(gauss_decompose(ws.context(m + k, n), sg));
  }
  const std::string kp = "k=" + std::to_string(k) + ",";
  std::vector<Check> checks;
  for (int s = 0; s < 2; ++s) {
    const GaussData& a = src_g[s];
    const GaussData& b = tgt_g[s];
    const std::string sp = kp + sparam(a.sign);
    for (int j = 1; j <= S; ++j)
      checks.push_back([&, j, sp] {
        return image_record("psi.d", "psi(d_j(u)) = d_{k+j}(u)", sp + ",j=" + std::to_string(j), psi, a.d(j),
                            b.d(k + j), tgt);
      });
    for (int i = 1; i <= S; ++i)
      for (int j = i + 1; j <= S; ++j) {
        const std::string p = sp + ",i=" + std::to_string(i) + ",j=" + std::to_string(j);
        checks.push_back([&, i, j, p] {
          return image_record("psi.e", "psi(e_ij(u)) = e_{k+i,k+j}(u)", p, psi, a.e(i, j), b.e(k + i, k + j), tgt);
        });
        checks.push_back([&, i, j, p] {
          return image_record("psi.f", "psi(f_ji(u)) = f_{k+j,k+i}(u)", p, psi, a.f(j, i), b.f(k + j, k + i), tgt);
        });
      }
    for (int p = 1; p <= S; ++p)
      for (int q = 1; q <= S; ++q)
        checks.push_back([&, p, q, sp] {
          std::vector<int> rows, cols;
          for (int c = 1; c <= k; ++c) rows.push_back(c), cols.push_back(c);
          rows.push_back(k + p);
          cols.push_back(k + q);
          TruncSeries qd = quasidet(b.T.submatrix(rows, cols), k + 1, k + 1);
          return image_record("psi.t", "psi(t_pq(u)) = |corner bordered by row k+p, col k+q|_{k+p,k+q}",
                              sp + ",p=" + std::to_string(p) + ",q=" + std::to_string(q), psi, a.T(p, q), qd, tgt);
        });
  }
  run_checks(checks, frag, jobs);
  frag.sort();
  frag.info["source"] = "gl(" + std::to_string(m) + "|" + std::to_string(n) + ")";
  frag.info["precision"] = "u-order <= " + std::to_string(ws.series_order()) + ", modulo h^" +
                           std::to_string(ws.h_order() + 1);
  return frag;
}

}  // namespace dy
