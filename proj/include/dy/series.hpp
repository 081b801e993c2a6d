#pragma once

// Truncated one-variable series with Element coefficients and square
// matrices of them.  A down series holds the coefficients of u^0 .. u^{-N},
// an up series those of u^0 .. u^N.  Matrices store plain entries: the
// (-1)^{|i||j|+|j|} prefactor of generator matrices is never materialized,
// and with that convention entry-level products are ordinary matrix
// products.

#include <string>
#include <vector>

#include "dy/algebra.hpp"

namespace dy {

enum class Direction { down, up };

inline const char* to_string(Direction d) { return d == Direction::down ? "down" : "up"; }
inline Direction direction_of(Sign s) { return s == Sign::minus ? Direction::down : Direction::up; }

class TruncSeries {
 public:
  TruncSeries(ContextPtr ctx, Direction dir);

  static TruncSeries constant(const ContextPtr& ctx, Direction dir, const Element& c);
  static TruncSeries one(const ContextPtr& ctx, Direction dir) {
    return constant(ctx, dir, Element::one(ctx));
  }
  // t^-_{ij}(u) or t^+_{ij}(u) as a series.
  static TruncSeries generator_series(const ContextPtr& ctx, Sign sign, int i, int j);

  const ContextPtr& context() const { return ctx_; }
  Direction direction() const { return dir_; }
  int order() const { return static_cast<int>(coeffs_.size()) - 1; }

  // Coefficient of u^{-k} (down) or u^{k} (up).
  const Element& operator[](int k) const { return coeffs_.at(static_cast<std::size_t>(k)); }
  Element& operator[](int k) { return coeffs_.at(static_cast<std::size_t>(k)); }
  const std::vector<Element>& coeffs() const { return coeffs_; }

  TruncSeries& operator+=(const TruncSeries& o);
  TruncSeries& operator-=(const TruncSeries& o);
  TruncSeries& operator*=(const Rational& q);
  TruncSeries operator-() const;

  bool operator==(const TruncSeries& o) const {
    return dir_ == o.dir_ && coeffs_ == o.coeffs_;
  }

 private:
  ContextPtr ctx_;
  Direction dir_;
  std::vector<Element> coeffs_;
};

TruncSeries operator+(TruncSeries a, const TruncSeries& b);
TruncSeries operator-(TruncSeries a, const TruncSeries& b);
TruncSeries operator*(const TruncSeries& a, const TruncSeries& b);
TruncSeries operator*(const Rational& q, TruncSeries a);
TruncSeries operator*(const Element& a, const TruncSeries& s);
TruncSeries operator*(const TruncSeries& s, const Element& a);

// s(u + c h).  For a down series this is exact modulo (u-order > N,
// h-order > H).  For an up series the coefficient of u^k draws on u^{k+j},
// j < H, so only orders k <= N - H + 1 are exact; callers that need an
// exact up-series shift at order N work at series order N + H and truncate.
TruncSeries shift(const TruncSeries& s, int c);
// Neumann inverse of s = 1 - K, K = O(h).
TruncSeries inverse(const TruncSeries& s);
// Apply a coefficientwise map (e.g. a morphism or a rebase).
template <class F>
TruncSeries map_coeffs(const TruncSeries& s, const ContextPtr& target, F&& f) {
  TruncSeries r(target, s.direction());
  for (int k = 0; k <= std::min(s.order(), r.order()); ++k) r[k] = f(s[k]);
  return r;
}
TruncSeries rebase(const TruncSeries& s, const ContextPtr& target);

// Generator-type coefficient: for a down series 1 + h sum x^{(r)} u^{-r},
// x^{(r)} = c_r / h; for an up series 1 - h sum x^{(-r)} u^{r-1},
// x^{(-r)} = -(c_{r-1} - constant) / h.  Requires r in range.
Element series_generator_coeff(const TruncSeries& s, int r);

std::string serialize(const TruncSeries& s);
TruncSeries parse_series(std::string_view text, const ContextPtr& ctx);

class SuperMatrix {
 public:
  SuperMatrix(ContextPtr ctx, Direction dir, int size);

  static SuperMatrix identity(const ContextPtr& ctx, Direction dir, int size);
  // Entries t^{sign}_{ij}(u) of T^{sign}(u).
  static SuperMatrix generator_matrix(const ContextPtr& ctx, Sign sign);

  const ContextPtr& context() const { return ctx_; }
  Direction direction() const { return dir_; }
  int size() const { return size_; }

  // 1-based access.
  const TruncSeries& operator()(int i, int j) const { return entries_.at(index(i, j)); }
  TruncSeries& operator()(int i, int j) { return entries_.at(index(i, j)); }

  // Rows/cols are 1-based index lists into this matrix.
  SuperMatrix submatrix(const std::vector<int>& rows, const std::vector<int>& cols) const;

  bool operator==(const SuperMatrix& o) const { return size_ == o.size_ && entries_ == o.entries_; }

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>((i - 1) * size_ + (j - 1));
  }
  ContextPtr ctx_;
  Direction dir_;
  int size_;
  std::vector<TruncSeries> entries_;
};

SuperMatrix matrix_mul(const SuperMatrix& a, const SuperMatrix& b);
SuperMatrix matrix_add(const SuperMatrix& a, const SuperMatrix& b);
SuperMatrix matrix_sub(const SuperMatrix& a, const SuperMatrix& b);
// Neumann inverse of M = 1 - K with every term of K carrying h.
SuperMatrix matrix_inverse(const SuperMatrix& m);
// |A|_{ij} = a_ij - r_i^j (A^{ij})^{-1} c_j^i, i and j 1-based.
TruncSeries quasidet(const SuperMatrix& a, int i, int j);

}  // namespace dy
