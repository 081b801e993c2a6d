#pragma once

// Quantum determinants and the quantum Berezinian
//   b(u) = sum_tau sgn(tau) t_{tau(1)1}(u) ... t_{tau(m)m}(u - (m-1)h)
//        x sum_sigma sgn(sigma) t'_{m+1, m+sigma(1)}(u - (m-1)h) ... t'_{m+n, m+sigma(n)}(u - (m-n)h)
// with the suites that check its factorizations, centrality and classical
// limit.
//
// Plus-side shifts draw on higher u-orders (see shift()), so every plus
// computation runs at series order N + H of its working context and is
// truncated afterwards.

#include <cstdint>
#include <string>
#include <vector>

#include "dy/gauss.hpp"
#include "dy/morphisms.hpp"
#include "dy/report.hpp"
#include "dy/series.hpp"

namespace dy {

// Working context for a series of the given sign that will be shifted and
// whose generator-type coefficients are read off: h-order H + 1, and series
// order N + H + 1 on the plus side.
ContextPtr working_context(const ContextPtr& ctx, Sign sign);

// C(u + offset h) for the leading mhat x mhat corner, computed in ctx
// without further extension.  mhat = 0 gives 1.
TruncSeries quantum_determinant_in(const ContextPtr& ctx, Sign sign, int mhat, int offset = 0);
// Same, exact at ctx's (N, H).  Throws DomainError unless 1 <= mhat <= m.
TruncSeries quantum_determinant(const ContextPtr& ctx, Sign sign, int mhat);

// d_1(u) d_2(u - h) ... d_mhat(u - (mhat-1)h) from a decomposition.
TruncSeries qdet_from_d(const GaussData& g, int mhat);

struct BerezinianData {
  Sign sign = Sign::minus;
  TruncSeries series;          // b(u) at (N, H)
  std::vector<Element> coeffs;  // coeffs[r-1] = b^{(r)} or b^{(-r)}, r = 1..N
};

BerezinianData berezinian_direct(const ContextPtr& ctx, Sign sign);
// From a decomposition computed in a working context; results land in target.
BerezinianData berezinian_factored(const GaussData& g, const ContextPtr& target);
BerezinianData berezinian_factored(const ContextPtr& ctx, Sign sign);

// b(u) = C_m(u) zeta_{n|m}(C_n(u - (m-n)h)), checked as series modulo h^{H+1}.
ReportFragment berezinian_zeta_split(Workspace& ws, int m, int n, Sign sign);

// Direct = factored (per coefficient), the zeta split, and the quantum
// determinant factorization for every mhat <= m; both signs.
ReportFragment berezinian_equality_suite(Workspace& ws, int m, int n, int jobs = 1);

// [b^{(+-r)}, g] for every generator t_kl^{(+-s)}, s <= N, and for the Drinfeld
// coefficients d_j, e_i, f_i as a cross-check.
ReportFragment centrality_suite(Workspace& ws, int m, int n, int jobs = 1);

// Intermediate identities of the centrality argument, each at the smallest
// (m, n) where it is defined.
ReportFragment proof_step_suite(Workspace& ws, int jobs = 1);

// h^0 part of b^{(r)} is sum_i (-1)^i t_ii^{(r)}; its classical image is I(r-1)
// (I(-r) on the plus side) and is central in the loop algebra.
ReportFragment classical_limit_suite(Workspace& ws, int m, int n);

// Rank of the normal forms of all monomials of degree <= 2 in b^{(+-r)}, r <= R.
ReportFragment independence_probe(Workspace& ws, int m, int n, int R);

// delta_i(u) = d_1(u)^{-1} d_{i+1}(u), the factorization of b_{n|n}(u) in
// shifted deltas, and b^{(+-r)} as explicit polynomials in delta coefficients.
ReportFragment delta_and_sl_suite(Workspace& ws, int m, int n, int jobs = 1);

}  // namespace dy
