#pragma once

// Gauss decomposition T = F D E by quasideterminants, Drinfeld series, and
// the identities tying them back to T and T^{-1}.

#include <string>
#include <vector>

#include "dy/report.hpp"
#include "dy/rtt.hpp"
#include "dy/series.hpp"

namespace dy {

struct GaussData {
  ContextPtr ctx;
  Sign sign = Sign::minus;
  int size = 0;
  SuperMatrix T;       // generator matrix
  SuperMatrix F;       // lower unitriangular, f_ji below the diagonal
  SuperMatrix D;       // diagonal d_i
  SuperMatrix E;       // upper unitriangular, e_ij above the diagonal
  SuperMatrix Dinv;    // diagonal d_i^{-1}
  SuperMatrix Eprime;  // E^{-1} from the path sums e'_ij
  SuperMatrix Fprime;  // F^{-1} from the path sums f'_ji

  const TruncSeries& d(int i) const { return D(i, i); }
  const TruncSeries& d_inv(int i) const { return Dinv(i, i); }
  const TruncSeries& e(int i, int j) const { return E(i, j); }
  const TruncSeries& f(int j, int i) const { return F(j, i); }
};

GaussData gauss_decompose(const ContextPtr& ctx, Sign sign);

enum class DrinfeldKind { d, e, f, e_simple, f_simple };

// d_i, e_ij (i < j), f_ji (j > i), e_i = e_{i,i+1}, f_i = f_{i+1,i}.  The
// second index is ignored for d, e_simple and f_simple.
const TruncSeries& drinfeld_series(const GaussData& g, DrinfeldKind which, int i, int j = 0);

// Path sums e'_ij and f'_ji (i < j) as displayed; i == j gives 1.
TruncSeries e_prime(const GaussData& g, int i, int j);
TruncSeries f_prime(const GaussData& g, int j, int i);

// Coefficient x^{(r)} (down) or x^{(-r)} (up) of a series of generator shape,
// computed from a series known modulo h^{H+2} and returned in target (H).
Element generator_coefficient(const TruncSeries& extended, int r, const ContextPtr& target);

// is_zero on every coefficient; on failure writes "c<k>: <normal form>".
bool series_is_zero(const TruncSeries& s, RuleTable& table, std::string* counterexample = nullptr);

ReportFragment verify_gauss_identities(const GaussData& g, RuleTable& table, int jobs = 1);

// [d_i^{(r)}, d_j^{(s)}] for sign pairs (-,-), (+,+), (-,+), all i, j and
// 1 <= r, s <= N.
ReportFragment verify_d_commute(RuleTable& table, int jobs = 1);

}  // namespace dy
