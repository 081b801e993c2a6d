#include "dy/rtt.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "dy/errors.hpp"
#include "dy/parallel.hpp"
#include "dy/series.hpp"

namespace dy {

const char* to_string(Family f) {
  switch (f) {
    case Family::minus_minus: return "--";
    case Family::plus_plus: return "++";
    case Family::mixed: return "mixed";
  }
  return "?";
}

TwoLegOperator coefficient_operator(const ContextPtr& ctx, Sign sign, int r, int leg) {
  const int s = ctx->size();
  std::vector<std::vector<Element>> m(s, std::vector<Element>(s, Element(ctx)));
  if (r >= 0) {
    for (int i = 1; i <= s; ++i) {
      for (int j = 1; j <= s; ++j) {
        Element& e = m[i - 1][j - 1];
        if (sign == Sign::minus) {
          if (r == 0) {
            if (i == j) e = Element::one(ctx);
          } else {
            e = mul_h(gen(ctx, Sign::minus, r, i, j), 1);
          }
        } else {
          if (r == 0 && i == j) e = Element::one(ctx);
          e -= mul_h(gen(ctx, Sign::plus, r + 1, i, j), 1);
        }
      }
    }
  }
  return TwoLegOperator::leg_apply(m, leg, ctx);
}

namespace {

Sign leg1_sign(Family f) { return f == Family::plus_plus ? Sign::plus : Sign::minus; }
Sign leg2_sign(Family f) { return f == Family::minus_minus ? Sign::minus : Sign::plus; }

TwoLegOperator bracket(const TwoLegOperator& x, const TwoLegOperator& y) {
  return x * y - y * x;
}

// h (P X1_r Y2_s - Y2_s X1_r P)
TwoLegOperator identity_rhs(const TwoLegOperator& P, const TwoLegOperator& x1,
                            const TwoLegOperator& y2) {
  return mul_h(P * (x1 * y2) - (y2 * x1) * P, 1);
}

// Index shifts (dr1, ds1, dr2, ds2) such that the left side of the (r, s)
// identity is [X1_{r+dr1}, Y2_{s+ds1}] - [X1_{r+dr2}, Y2_{s+ds2}].
std::array<int, 4> lhs_shifts(Family f) {
  switch (f) {
    case Family::minus_minus: return {1, 0, 0, 1};
    case Family::plus_plus: return {-1, 0, 0, -1};
    case Family::mixed: return {1, 0, 0, -1};
  }
  return {};
}

// The telescoping run of (r, s) identities whose left sides sum to [X1_a, Y2_b].
std::vector<std::pair<int, int>> telescope(Family f, int a, int b) {
  std::vector<std::pair<int, int>> out;
  switch (f) {
    case Family::minus_minus:
      for (int k = 0; k <= a - 1; ++k) out.emplace_back(a - 1 - k, b + k);
      break;
    case Family::plus_plus:
      for (int k = 0; k <= b; ++k) out.emplace_back(a + 1 + k, b - k);
      break;
    case Family::mixed:
      for (int k = 0; k <= std::min(a - 1, b); ++k) out.emplace_back(a - 1 - k, b - k);
      break;
  }
  return out;
}

// Coefficient indices (a, b) of the pair (x, y) in X_a, Y_b.
std::pair<int, int> pair_indices(Family f, Generator x, Generator y) {
  switch (f) {
    case Family::minus_minus: return {x.level(), y.level()};
    case Family::plus_plus: return {x.level() - 1, y.level() - 1};
    case Family::mixed: return {x.level(), y.level() - 1};
  }
  return {0, 0};
}

}  // namespace

TwoLegIdentity two_leg_expand(const ContextPtr& ctx, Family family, int r, int s) {
  const Sign s1 = leg1_sign(family), s2 = leg2_sign(family);
  const auto d = lhs_shifts(family);
  TwoLegOperator P = TwoLegOperator::permutation(ctx);
  TwoLegIdentity id{
      bracket(coefficient_operator(ctx, s1, r + d[0], 1), coefficient_operator(ctx, s2, s + d[1], 2)) -
          bracket(coefficient_operator(ctx, s1, r + d[2], 1),
                  coefficient_operator(ctx, s2, s + d[3], 2)),
      identity_rhs(P, coefficient_operator(ctx, s1, r, 1), coefficient_operator(ctx, s2, s, 2))};
  return id;
}

Family family_of(Generator x, Generator y) {
  if (x.sign() == Sign::minus && y.sign() == Sign::minus) return Family::minus_minus;
  if (x.sign() == Sign::plus && y.sign() == Sign::plus) return Family::plus_plus;
  if (x.sign() == Sign::minus && y.sign() == Sign::plus) return Family::mixed;
  throw UsageError("pair (" + to_string(x) + "," + to_string(y) + ") is already ordered");
}

int depth_of(Generator x, Generator y) {
  Family f = family_of(x, y);
  auto [a, b] = pair_indices(f, x, y);
  return static_cast<int>(telescope(f, a, b).size());
}

// ---------------------------------------------------------------------------

RuleTable::RuleTable(ContextPtr ctx, int cap)
    : ctx_(std::move(ctx)), ext_(with_h_order(ctx_, ctx_->H + 2)), cap_(cap) {
  if (cap < 1) throw UsageError("level cap must be at least 1");
}

const TwoLegOperator& RuleTable::leg_operator(Sign sign, int r, int leg) {
  auto key = std::make_tuple(static_cast<int>(sign), r, leg);
  auto it = leg_ops_.find(key);
  if (it == leg_ops_.end()) it = leg_ops_.emplace(key, coefficient_operator(ext_, sign, r, leg)).first;
  return it->second;
}

const TwoLegOperator& RuleTable::pair_operator(Family family, int a, int b) {
  std::lock_guard lock(ops_mu_);
  auto key = std::make_tuple(static_cast<int>(family), a, b);
  auto it = pair_ops_.find(key);
  if (it != pair_ops_.end()) return it->second;
  const Sign s1 = leg1_sign(family), s2 = leg2_sign(family);
  TwoLegOperator P = TwoLegOperator::permutation(ext_);
  TwoLegOperator z = bracket(leg_operator(s1, a, 1), leg_operator(s2, b, 2));
  for (auto [r, s] : telescope(family, a, b))
    z -= identity_rhs(P, leg_operator(s1, r, 1), leg_operator(s2, s, 2));
  return pair_ops_.emplace(key, std::move(z)).first->second;
}

RewriteRule RuleTable::derive(Generator x, Generator y) {
  const Family f = family_of(x, y);
  auto [a, b] = pair_indices(f, x, y);
  const TwoLegOperator& z = pair_operator(f, a, b);
  Element e = rebase(div_h(z.at(x.row(), x.col(), y.row(), y.col()), 2), ctx_);

  const Word xy{x, y}, yx{y, x};
  const Rational c = e.coefficient(0, xy);
  if (c == 0)
    throw std::logic_error("rule derivation: product " + to_string(x) + to_string(y) +
                           " does not occur in its identity");
  e.add_term(-c, 0, xy);
  Element rhs = Rational(-1) / c * e;
  if (!(x == y)) {
    const Rational expected = (x.parity() & y.parity()) ? -1 : 1;
    if (rhs.coefficient(0, yx) != expected)
      throw std::logic_error("rule derivation: unexpected swap coefficient for " + to_string(x) +
                             to_string(y));
  }
  return RewriteRule{x, y, std::move(rhs), f, static_cast<int>(telescope(f, a, b).size())};
}

const RewriteRule& RuleTable::rule(Generator x, Generator y) {
  if (!needs_rewrite(x, y))
    throw UsageError("rule requested for ordered pair (" + to_string(x) + "," + to_string(y) + ")");
  const int need = std::max(x.level(), y.level());
  if (need > cap_) throw CapError(need, cap_);
  const auto key = std::make_pair(x.code(), y.code());
  {
    std::shared_lock lock(rules_mu_);
    auto it = rules_.find(key);
    if (it != rules_.end()) return it->second;
  }
  RewriteRule r = derive(x, y);
  std::unique_lock lock(rules_mu_);
  return rules_.try_emplace(key, std::move(r)).first->second;
}

std::size_t RuleTable::size() const {
  std::shared_lock lock(rules_mu_);
  return rules_.size();
}

std::vector<RewriteRule> RuleTable::rules() const {
  std::shared_lock lock(rules_mu_);
  std::vector<RewriteRule> out;
  out.reserve(rules_.size());
  for (const auto& [k, r] : rules_) out.push_back(r);
  return out;
}

void RuleTable::insert(const RewriteRule& r) {
  std::unique_lock lock(rules_mu_);
  rules_.insert_or_assign(std::make_pair(r.x.code(), r.y.code()), r);
}

bool RuleTable::memo_lookup(const MemoKey& key, Element& out) const {
  std::shared_lock lock(memo_mu_);
  auto it = memo_.find(key);
  if (it == memo_.end()) return false;
  out = it->second;
  return true;
}

void RuleTable::memo_store(const MemoKey& key, const Element& value) {
  std::unique_lock lock(memo_mu_);
  memo_.try_emplace(key, value);
}

// ---------------------------------------------------------------------------
// Normal forms.

namespace {

int find_redex(const Word& w, Strategy s) {
  const int n = static_cast<int>(w.size());
  if (s == Strategy::leftmost) {
    for (int p = 0; p + 1 < n; ++p)
      if (needs_rewrite(w[p], w[p + 1])) return p;
  } else {
    for (int p = n - 2; p >= 0; --p)
      if (needs_rewrite(w[p], w[p + 1])) return p;
  }
  return -1;
}

Element normal_word(const Word& w, int budget, RuleTable& table, Strategy s) {
  const ContextPtr& ctx = table.context();
  const int p = find_redex(w, s);
  if (p < 0) return Element::monomial(ctx, 1, 0, w);

  RuleTable::MemoKey key{static_cast<int>(s), budget, w};
  Element out(ctx);
  if (table.memo_lookup(key, out)) return out;

  const RewriteRule& rule = table.rule(w[p], w[p + 1]);
  for (const auto& [rk, rc] : rule.rhs.terms()) {
    if (rk.hpow > budget) break;  // terms are ordered by h-power
    Word nw;
    nw.reserve(w.size() + rk.word.size());
    nw.insert(nw.end(), w.begin(), w.begin() + p);
    nw.insert(nw.end(), rk.word.begin(), rk.word.end());
    nw.insert(nw.end(), w.begin() + p + 2, w.end());
    Element sub = normal_word(nw, budget - rk.hpow, table, s);
    for (const auto& [sk, sc] : sub.terms()) out.add_term(rc * sc, rk.hpow + sk.hpow, sk.word);
  }
  table.memo_store(key, out);
  return out;
}

}  // namespace

Element normalize(const Element& a, RuleTable& table, Strategy strategy) {
  const ContextPtr& ctx = table.context();
  if (a.context() && !a.context()->same_algebra(*ctx))
    throw UsageError("normalize: element from " + describe(*a.context()) + ", table for " +
                     describe(*ctx));
  Element out(ctx);
  for (const auto& [k, c] : a.terms()) {
    Element sub = normal_word(k.word, ctx->H - k.hpow, table, strategy);
    for (const auto& [sk, sc] : sub.terms()) out.add_term(c * sc, k.hpow + sk.hpow, sk.word);
  }
  return out;
}

bool is_zero(const Element& a, RuleTable& table) { return normalize(a, table).is_zero(); }

// ---------------------------------------------------------------------------

ReportFragment confluence_probe(RuleTable& table, std::uint64_t seed, int trials) {
  if (trials < 1) throw UsageError("confluence_probe needs trials >= 1");
  const ContextPtr& ctx = table.context();
  ReportFragment frag;
  frag.suite = "confluence";
  std::mt19937_64 rng(seed);
  const int max_level = std::min(3, table.cap());
  auto draw = [&](int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1)); };
  const int width = static_cast<int>(std::to_string(trials).size());
  for (int t = 0; t < trials; ++t) {
    Word w;
    const int len = draw(1, 6);
    for (int k = 0; k < len; ++k) {
      Sign s = draw(0, 1) ? Sign::plus : Sign::minus;
      const int r = draw(1, max_level), i = draw(1, ctx->size()), j = draw(1, ctx->size());
      w.push_back(make_generator(*ctx, s, r, i, j));
    }
    Element word = Element::monomial(ctx, 1, 0, w);
    std::string idx = std::to_string(t);
    idx.insert(0, static_cast<std::size_t>(width) - idx.size(), '0');
    std::string params = "trial=" + idx + ",word=" + serialize(word);
    try {
      Element left = normalize(word, table, Strategy::leftmost);
      Element right = normalize(word, table, Strategy::rightmost);
      Element diff = left - right;
      frag.records.push_back(make_record("confluence", "leftmost and rightmost normal forms agree",
                                         params, diff.is_zero(), serialize(diff)));
    } catch (const CapError& e) {
      frag.records.push_back(
          make_record("confluence", "leftmost and rightmost normal forms agree", params, false, e.what()));
    }
  }
  frag.info["trials"] = std::to_string(trials);
  frag.info["seed"] = std::to_string(seed);
  return frag;
}

ReportFragment oracle_match_inverse_relations(RuleTable& table, int jobs) {
  const ContextPtr& ctx = table.context();
  const int S = ctx->size(), N = ctx->N;
  ReportFragment frag;
  frag.suite = "relations-oracle";

  SuperMatrix Tm = SuperMatrix::generator_matrix(ctx, Sign::minus);
  SuperMatrix Tp = SuperMatrix::generator_matrix(ctx, Sign::plus);
  SuperMatrix Tmi = matrix_inverse(Tm), Tpi = matrix_inverse(Tp);

  struct Case {
    const SuperMatrix* t;
    const SuperMatrix* ti;
    const char* name;
    // X(a, b) offsets for the (u - v) multiplication and coefficient ranges.
    int da1, db1, da2, db2;
    int a_hi, b_hi;
  };
  const std::vector<Case> cases = {
      {&Tm, &Tmi, "--", 1, 0, 0, 1, N - 1, N - 1},
      {&Tp, &Tpi, "++", -1, 0, 0, -1, N, N},
      {&Tm, &Tpi, "-+", 1, 0, 0, -1, N - 1, N},
      {&Tp, &Tmi, "+-", -1, 0, 0, 1, N, N - 1},
  };

  struct Task {
    const Case* c;
    int i, j, k, l;
  };
  std::vector<Task> tasks;
  for (const Case& c : cases)
    for (int i = 1; i <= S; ++i)
      for (int j = 1; j <= S; ++j)
        for (int k = 1; k <= S; ++k)
          for (int l = 1; l <= S; ++l) tasks.push_back({&c, i, j, k, l});

  std::vector<IdentityRecord> records(tasks.size());
  parallel_for(tasks.size(), jobs, [&](std::size_t ti) {
    const Task& task = tasks[ti];
    const Case& c = *task.c;
    const auto [i, j, k, l] = std::tie(task.i, task.j, task.k, task.l);
    const SuperMatrix& T = *c.t;
    const SuperMatrix& Ti = *c.ti;
    auto X = [&](int a, int b) {
      if (a < 0 || b < 0 || a > N || b > N) return Element(ctx);
      return supercomm(T(i, j)[a], Ti(k, l)[b]);
    };
    const int pi = ctx->parity(i), pj = ctx->parity(j), pk = ctx->parity(k);
    const Rational sign = ((pi * pj + pi * pk + pj * pk) & 1) ? -1 : 1;
    std::string params = std::string("signs=") + c.name + ",i=" + std::to_string(i) +
                         ",j=" + std::to_string(j) + ",k=" + std::to_string(k) +
                         ",l=" + std::to_string(l);
    const bool same = c.t == &Tm ? c.ti == &Tmi : c.ti == &Tpi;
    std::string label = same ? "inverse-relation.same-sign" : "inverse-relation.mixed-sign";
    std::string anchor =
        "(u-v)[t_ij(u), t'_kl(v)] = s h (delta_kj sum_a t_ia(u) t'_al(v) - delta_il sum_a t'_ka(v) t_aj(u))";
    bool ok = true;
    std::string counter;
    for (int a = 0; a <= c.a_hi && ok; ++a) {
      for (int b = 0; b <= c.b_hi && ok; ++b) {
        Element lhs = X(a + c.da1, b + c.db1) - X(a + c.da2, b + c.db2);
        Element rhs(ctx);
        if (k == j)
          for (int q = 1; q <= S; ++q) rhs += T(i, q)[a] * Ti(q, l)[b];
        if (i == l)
          for (int q = 1; q <= S; ++q) rhs -= Ti(k, q)[b] * T(q, j)[a];
        Element diff = lhs - sign * mul_h(rhs, 1);
        Element nf = normalize(diff, table);
        if (!nf.is_zero()) {
          ok = false;
          counter = "a=" + std::to_string(a) + ",b=" + std::to_string(b) + ": " + serialize(nf);
        }
      }
    }
    records[ti] = make_record(label, anchor, params, ok, counter);
  });
  frag.records = std::move(records);
  frag.sort();
  frag.info["precision"] = "exact modulo u-order > " + std::to_string(N) + ", h-order > " +
                           std::to_string(ctx->H);
  return frag;
}

// ---------------------------------------------------------------------------
// Cache.

std::string rule_cache_header(const RuleTable& table) {
  const AlgebraContext& c = *table.context();
  std::ostringstream os;
  os << "# dy-rules engine=\"" << kEngineVersion << "\" m=" << c.m << " n=" << c.n << " H=" << c.H
     << " L=" << table.cap();
  return os.str();
}

void save_rules(const RuleTable& table, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw NotFoundError("cannot write rule cache " + path.string());
  out << rule_cache_header(table) << '\n';
  for (const RewriteRule& r : table.rules())
    out << '(' << to_string(r.x) << ',' << to_string(r.y) << ") -> " << serialize(r.rhs) << '\n';
  if (!out) throw std::runtime_error("error writing rule cache " + path.string());
}

std::size_t load_rules(RuleTable& table, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NotFoundError("rule cache not found: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw StaleCacheError("rule cache " + path.string() + " is empty");
  const std::string expected = rule_cache_header(table);
  if (line != expected)
    throw StaleCacheError("rule cache header mismatch: found '" + line + "', expected '" + expected +
                          "'; regenerate the cache");
  const ContextPtr& ctx = table.context();
  std::size_t count = 0, lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto arrow = line.find(" -> ");
    const auto comma = line.find("],t[");
    if (line.front() != '(' || arrow == std::string::npos || comma == std::string::npos ||
        line[arrow - 1] != ')')
      throw ParseError("malformed rule cache line " + std::to_string(lineno), 0);
    Generator x = parse_generator(std::string_view(line).substr(1, comma), *ctx);
    Generator y = parse_generator(std::string_view(line).substr(comma + 2, arrow - 1 - (comma + 2)), *ctx);
    if (!needs_rewrite(x, y))
      throw ParseError("rule cache line " + std::to_string(lineno) + " has an ordered pair", 0);
    RewriteRule r{x, y, parse(std::string_view(line).substr(arrow + 4), ctx), family_of(x, y),
                  depth_of(x, y)};
    table.insert(r);
    ++count;
  }
  return count;
}

}  // namespace dy
