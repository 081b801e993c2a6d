#pragma once

// Straightening rules read off the RTT relations, and normal forms.
//
// Multiplying the relations by (u - v) gives
//   (u - v)[T_1(u), T_2(v)] = h (P T_1(u) T_2(v) - T_2(v) T_1(u) P)
// for the pairs (T^-, T^-), (T^+, T^+) and (T^-, T^+).  Writing
// T^-(u) = sum_r A_r u^{-r} and T^+(u) = sum_s B_s u^s, with A_0 = 1,
// A_r = h t^{(r)}, B_0 = 1 - h t^{(-1)}, B_s = -h t^{(-s-1)}, every
// coefficient of that identity is a two-leg operator equation.  Summing a
// telescoping run of them isolates a single commutator [X_1, Y_2], whose
// (i,j,k,l) entry solves for the product x y of two generators.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "dy/algebra.hpp"
#include "dy/report.hpp"
#include "dy/two_leg.hpp"

namespace dy {

enum class Family { minus_minus, plus_plus, mixed };

const char* to_string(Family f);

// One coefficient of (u - v)[T_1, T_2] = h (P T_1 T_2 - T_2 T_1 P), computed
// in ctx.  Indices follow the coefficient conventions above:
//   minus_minus  u^{-r} v^{-s}:  [A1_{r+1}, A2_s] - [A1_r, A2_{s+1}]
//   plus_plus    u^{r} v^{s}:    [B1_{r-1}, B2_s] - [B1_r, B2_{s-1}]
//   mixed        u^{-r} v^{s}:   [A1_{r+1}, B2_s] - [A1_r, B2_{s-1}]
// with lhs the left side and rhs = h (P X1 Y2 - Y2 X1 P) at the same (r, s).
struct TwoLegIdentity {
  TwoLegOperator lhs;
  TwoLegOperator rhs;
};

TwoLegIdentity two_leg_expand(const ContextPtr& ctx, Family family, int r, int s);

// A_r (sign minus) or B_r (sign plus) embedded in the given leg.  Out-of-range
// indices (r < 0) give the zero operator.
TwoLegOperator coefficient_operator(const ContextPtr& ctx, Sign sign, int r, int leg);

// (x, y) must be straightened when x > y, or x == y with x odd.
inline bool needs_rewrite(Generator x, Generator y) {
  return y < x || (x == y && x.parity() == 1);
}

struct RewriteRule {
  Generator x;
  Generator y;
  // Value of the product x y: (-1)^{|x||y|} y x + correction, or, for an odd
  // square, the correction alone.
  Element rhs;
  Family family = Family::minus_minus;
  int depth = 0;  // number of telescoped coefficient identities
};

// Provenance of the rule for (x, y), computable from the pair alone.
Family family_of(Generator x, Generator y);
int depth_of(Generator x, Generator y);

class RuleTable {
 public:
  // cap: largest generator level a rule may be requested for.
  RuleTable(ContextPtr ctx, int cap);

  const ContextPtr& context() const { return ctx_; }
  int cap() const { return cap_; }

  // Thread-safe; derives and memoizes on first use.
  const RewriteRule& rule(Generator x, Generator y);

  std::size_t size() const;
  // All rules derived so far, in generator-pair order.
  std::vector<RewriteRule> rules() const;
  // Used by the cache loader.
  void insert(const RewriteRule& r);

  // Memo of normal forms, keyed by strategy and remaining h-budget.
  struct MemoKey {
    int strategy;
    int budget;
    Word word;
    bool operator==(const MemoKey& o) const {
      return strategy == o.strategy && budget == o.budget && word == o.word;
    }
  };
  struct MemoHash {
    std::size_t operator()(const MemoKey& k) const noexcept {
      return WordHash{}(k.word) * 31u + static_cast<std::size_t>(k.budget * 2 + k.strategy);
    }
  };
  bool memo_lookup(const MemoKey& key, Element& out) const;
  void memo_store(const MemoKey& key, const Element& value);

 private:
  RewriteRule derive(Generator x, Generator y);
  const TwoLegOperator& pair_operator(Family family, int a, int b);
  const TwoLegOperator& leg_operator(Sign sign, int r, int leg);

  ContextPtr ctx_;
  ContextPtr ext_;  // H + 2, room for the division by h^2
  int cap_;

  mutable std::shared_mutex rules_mu_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, RewriteRule> rules_;

  std::mutex ops_mu_;
  std::map<std::tuple<int, int, int>, TwoLegOperator> pair_ops_;
  std::map<std::tuple<int, int, int>, TwoLegOperator> leg_ops_;

  mutable std::shared_mutex memo_mu_;
  std::unordered_map<MemoKey, Element, MemoHash> memo_;
};

enum class Strategy { leftmost = 0, rightmost = 1 };

// Normal form modulo the relations and h^{H+1}: words weakly increasing,
// no odd generator next to itself.
Element normalize(const Element& a, RuleTable& table, Strategy strategy = Strategy::leftmost);
bool is_zero(const Element& a, RuleTable& table);

// Random words (length <= 6, levels <= 3) normalized by both strategies.
ReportFragment confluence_probe(RuleTable& table, std::uint64_t seed, int trials);

// The displayed commutators of t-entries with entries of T^{-1}, for both
// same-sign and mixed-sign pairs, coefficientwise up to the context's (N, H).
ReportFragment oracle_match_inverse_relations(RuleTable& table, int jobs = 1);

// Rule cache: header line plus one "(x,y) -> element" line per rule.
std::string rule_cache_header(const RuleTable& table);
void save_rules(const RuleTable& table, const std::filesystem::path& path);
// Throws NotFoundError / StaleCacheError; returns the number of rules read.
std::size_t load_rules(RuleTable& table, const std::filesystem::path& path);

}  // namespace dy
