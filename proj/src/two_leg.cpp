#include "dy/two_leg.hpp"

#include "dy/errors.hpp"

namespace dy {

TwoLegOperator TwoLegOperator::identity(const ContextPtr& ctx) {
  TwoLegOperator op(ctx);
  const int s = ctx->size();
  for (int i = 1; i <= s; ++i)
    for (int k = 1; k <= s; ++k) op.add({i, i, k, k}, Element::one(ctx));
  return op;
}

TwoLegOperator TwoLegOperator::permutation(const ContextPtr& ctx) {
  TwoLegOperator op(ctx);
  const int s = ctx->size();
  for (int i = 1; i <= s; ++i)
    for (int j = 1; j <= s; ++j)
      op.add({i, j, j, i}, Element::scalar(ctx, ctx->parity(j) ? -1 : 1));
  return op;
}

TwoLegOperator TwoLegOperator::leg_apply(const std::vector<std::vector<Element>>& entries,
                                         int leg, const ContextPtr& ctx) {
  if (leg != 1 && leg != 2) throw UsageError("leg must be 1 or 2");
  const int s = ctx->size();
  if (static_cast<int>(entries.size()) != s) throw UsageError("leg_apply: matrix size mismatch");
  TwoLegOperator op(ctx);
  for (int i = 1; i <= s; ++i) {
    for (int j = 1; j <= s; ++j) {
      const Element& a = entries[i - 1][j - 1];
      if (a.is_zero()) continue;
      Element signed_a = a;
      if (generator_matrix_sign(*ctx, i, j) < 0) signed_a *= Rational(-1);
      for (int k = 1; k <= s; ++k) {
        if (leg == 1)
          op.add({i, j, k, k}, signed_a);
        else
          op.add({k, k, i, j}, signed_a);
      }
    }
  }
  return op;
}

Element TwoLegOperator::at(int i, int j, int k, int l) const {
  auto it = entries_.find({i, j, k, l});
  return it == entries_.end() ? Element(ctx_) : it->second;
}

void TwoLegOperator::add(const Index& idx, const Element& a) {
  if (a.is_zero()) return;
  auto [it, inserted] = entries_.try_emplace(idx, a);
  if (!inserted) {
    it->second += a;
    if (it->second.is_zero()) entries_.erase(it);
  }
}

TwoLegOperator& TwoLegOperator::operator+=(const TwoLegOperator& o) {
  for (const auto& [idx, a] : o.entries_) add(idx, a);
  return *this;
}

TwoLegOperator& TwoLegOperator::operator-=(const TwoLegOperator& o) {
  for (const auto& [idx, a] : o.entries_) add(idx, -a);
  return *this;
}

TwoLegOperator operator+(TwoLegOperator a, const TwoLegOperator& b) { return a += b; }
TwoLegOperator operator-(TwoLegOperator a, const TwoLegOperator& b) { return a -= b; }

TwoLegOperator two_leg_mul(const TwoLegOperator& x, const TwoLegOperator& y) {
  const AlgebraContext& ctx = *x.context();
  TwoLegOperator out(x.context());
  // Group y by (p, r): the row indices of its two legs.
  std::map<std::pair<int, int>, std::vector<const std::pair<const TwoLegOperator::Index, Element>*>> by_rows;
  for (const auto& entry : y.entries()) by_rows[{entry.first[0], entry.first[2]}].push_back(&entry);

  for (const auto& [xi, a] : x.entries()) {
    auto it = by_rows.find({xi[1], xi[3]});
    if (it == by_rows.end()) continue;
    const int par_y = ctx.parity(xi[2]) ^ ctx.parity(xi[3]);  // |e_kl|
    const Element a_even = a.parity_part(0);
    const Element a_odd = a.parity_part(1);
    for (const auto* ye : it->second) {
      const auto& yi = ye->first;
      const Element& b = ye->second;
      const int par_z = ctx.parity(yi[0]) ^ ctx.parity(yi[1]);
      const int par_w = ctx.parity(yi[2]) ^ ctx.parity(yi[3]);
      const int base = (par_y * par_z) & 1;
      const int odd_extra = (par_z + par_w) & 1;
      Element prod(x.context());
      if (!a_even.is_zero()) {
        Element t = a_even * b;
        if (base) t *= Rational(-1);
        prod += t;
      }
      if (!a_odd.is_zero()) {
        Element t = a_odd * b;
        if ((base + odd_extra) & 1) t *= Rational(-1);
        prod += t;
      }
      out.add({xi[0], yi[1], xi[2], yi[3]}, prod);
    }
  }
  return out;
}

TwoLegOperator scale(const TwoLegOperator& x, const Element& central) {
  TwoLegOperator out(x.context());
  for (const auto& [idx, a] : x.entries()) out.add(idx, central * a);
  return out;
}

TwoLegOperator mul_h(const TwoLegOperator& x, int k) {
  TwoLegOperator out(x.context());
  for (const auto& [idx, a] : x.entries()) out.add(idx, mul_h(a, k));
  return out;
}

}  // namespace dy
