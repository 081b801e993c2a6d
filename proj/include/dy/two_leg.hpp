#pragma once

// Operators on C^{m|n} (x) C^{m|n} with algebra coefficients:
// finite sums  e_ij (x) e_kl (x) a.  Products follow the Koszul rule
//   (x (x) y (x) a)(z (x) w (x) b) = (-1)^{|y||z| + |a|(|z|+|w|)} xz (x) yw (x) ab.

#include <array>
#include <map>
#include <vector>

#include "dy/algebra.hpp"

namespace dy {

class TwoLegOperator {
 public:
  using Index = std::array<int, 4>;  // (i, j, k, l), 1-based

  explicit TwoLegOperator(ContextPtr ctx) : ctx_(std::move(ctx)) {}

  static TwoLegOperator identity(const ContextPtr& ctx);
  // P = sum e_ij (x) e_ji (-1)^{|j|}
  static TwoLegOperator permutation(const ContextPtr& ctx);
  // Embed a one-leg generator-type matrix  sum (-1)^{|i||j|+|j|} e_ij (x) entries[i][j]
  // into leg 1 or leg 2 (identity on the other leg).  entries is 0-based.
  static TwoLegOperator leg_apply(const std::vector<std::vector<Element>>& entries, int leg,
                                  const ContextPtr& ctx);

  const ContextPtr& context() const { return ctx_; }
  const std::map<Index, Element>& entries() const { return entries_; }
  Element at(int i, int j, int k, int l) const;
  void add(const Index& idx, const Element& a);

  TwoLegOperator& operator+=(const TwoLegOperator& o);
  TwoLegOperator& operator-=(const TwoLegOperator& o);
  bool is_structurally_zero() const { return entries_.empty(); }

 private:
  ContextPtr ctx_;
  std::map<Index, Element> entries_;
};

TwoLegOperator operator+(TwoLegOperator a, const TwoLegOperator& b);
TwoLegOperator operator-(TwoLegOperator a, const TwoLegOperator& b);
TwoLegOperator two_leg_mul(const TwoLegOperator& x, const TwoLegOperator& y);
inline TwoLegOperator operator*(const TwoLegOperator& x, const TwoLegOperator& y) {
  return two_leg_mul(x, y);
}
TwoLegOperator scale(const TwoLegOperator& x, const Element& central);
TwoLegOperator mul_h(const TwoLegOperator& x, int k);

// (-1)^{|i||j| + |j|}
inline int generator_matrix_sign(const AlgebraContext& ctx, int i, int j) {
  return ((ctx.parity(i) * ctx.parity(j) + ctx.parity(j)) & 1) ? -1 : 1;
}

}  // namespace dy
