#include "dy/series.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>

#include "dy/errors.hpp"

namespace dy {

namespace {

void require_compatible(const TruncSeries& a, const TruncSeries& b) {
  if (a.direction() != b.direction()) throw UsageError("series direction mismatch");
  if (a.order() != b.order()) throw UsageError("series order mismatch");
  if (!a.context()->same_algebra(*b.context())) throw UsageError("series context mismatch");
}

bool all_terms_carry_h(const Element& e) {
  for (const auto& [k, c] : e.terms())
    if (k.hpow < 1) return false;
  return true;
}

Rational binomial(int n, int k) {
  mpz_class r;
  mpz_bin_ui(r.get_mpz_t(), mpz_class(n).get_mpz_t(), static_cast<unsigned long>(k));
  return Rational(r);
}

}  // namespace

TruncSeries::TruncSeries(ContextPtr ctx, Direction dir) : ctx_(std::move(ctx)), dir_(dir) {
  coeffs_.assign(static_cast<std::size_t>(ctx_->N + 1), Element(ctx_));
}

TruncSeries TruncSeries::constant(const ContextPtr& ctx, Direction dir, const Element& c) {
  TruncSeries s(ctx, dir);
  s[0] = c;
  return s;
}

TruncSeries TruncSeries::generator_series(const ContextPtr& ctx, Sign sign, int i, int j) {
  TruncSeries s(ctx, direction_of(sign));
  if (i == j) s[0] = Element::one(ctx);
  if (sign == Sign::minus) {
    for (int r = 1; r <= ctx->N; ++r)
      s[r] = mul_h(gen(ctx, Sign::minus, r, i, j), 1);
  } else {
    for (int k = 0; k <= ctx->N; ++k)
      s[k] -= mul_h(gen(ctx, Sign::plus, k + 1, i, j), 1);
  }
  return s;
}

TruncSeries& TruncSeries::operator+=(const TruncSeries& o) {
  require_compatible(*this, o);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
  return *this;
}

TruncSeries& TruncSeries::operator-=(const TruncSeries& o) {
  require_compatible(*this, o);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
  return *this;
}

TruncSeries& TruncSeries::operator*=(const Rational& q) {
  for (auto& c : coeffs_) c *= q;
  return *this;
}

TruncSeries TruncSeries::operator-() const {
  TruncSeries r = *this;
  r *= Rational(-1);
  return r;
}

TruncSeries operator+(TruncSeries a, const TruncSeries& b) { return a += b; }
TruncSeries operator-(TruncSeries a, const TruncSeries& b) { return a -= b; }
TruncSeries operator*(const Rational& q, TruncSeries a) { return a *= q; }

TruncSeries operator*(const TruncSeries& a, const TruncSeries& b) {
  require_compatible(a, b);
  TruncSeries r(a.context(), a.direction());
  const int N = a.order();
  for (int i = 0; i <= N; ++i) {
    if (a[i].is_zero()) continue;
    for (int j = 0; i + j <= N; ++j) {
      if (b[j].is_zero()) continue;
      r[i + j] += a[i] * b[j];
    }
  }
  return r;
}

TruncSeries operator*(const Element& a, const TruncSeries& s) {
  TruncSeries r(s.context(), s.direction());
  for (int k = 0; k <= s.order(); ++k) r[k] = a * s[k];
  return r;
}

TruncSeries operator*(const TruncSeries& s, const Element& a) {
  TruncSeries r(s.context(), s.direction());
  for (int k = 0; k <= s.order(); ++k) r[k] = s[k] * a;
  return r;
}

TruncSeries shift(const TruncSeries& s, int c) {
  if (c == 0) return s;
  const ContextPtr& ctx = s.context();
  TruncSeries r(ctx, s.direction());
  const int N = s.order();
  const int H = ctx->H;
  for (int p = 0; p <= N; ++p) {
    if (s[p].is_zero()) continue;
    if (s.direction() == Direction::down) {
      if (p == 0) {
        r[0] += s[0];
        continue;
      }
      // (u + ch)^{-p} = sum_k (-1)^k C(p+k-1, k) c^k h^k u^{-p-k}
      for (int k = 0; p + k <= N && k <= H; ++k) {
        Rational coef = binomial(p + k - 1, k);
        mpz_class ck;
        mpz_pow_ui(ck.get_mpz_t(), mpz_class(c).get_mpz_t(), static_cast<unsigned long>(k));
        coef *= Rational(ck);
        if (k & 1) coef = -coef;
        r[p + k] += mul_h(coef * s[p], k);
      }
    } else {
      // (u + ch)^p = sum_k C(p, k) c^k h^k u^{p-k}
      for (int k = 0; k <= p && k <= H; ++k) {
        Rational coef = binomial(p, k);
        mpz_class ck;
        mpz_pow_ui(ck.get_mpz_t(), mpz_class(c).get_mpz_t(), static_cast<unsigned long>(k));
        coef *= Rational(ck);
        r[p - k] += mul_h(coef * s[p], k);
      }
    }
  }
  return r;
}

TruncSeries inverse(const TruncSeries& s) {
  const ContextPtr& ctx = s.context();
  TruncSeries one = TruncSeries::one(ctx, s.direction());
  TruncSeries K = one - s;
  for (int k = 0; k <= K.order(); ++k)
    if (!all_terms_carry_h(K[k]))
      throw SingularityError("series inverse: series is not of the form 1 + O(h)");
  TruncSeries r = one;
  for (int j = 1; j <= ctx->H; ++j) r = one + K * r;
  return r;
}

TruncSeries rebase(const TruncSeries& s, const ContextPtr& target) {
  return map_coeffs(s, target, [&](const Element& e) { return rebase(e, target); });
}

Element series_generator_coeff(const TruncSeries& s, int r) {
  if (s.direction() == Direction::down) {
    if (r < 1 || r > s.order()) throw DomainError("series coefficient index out of range");
    return div_h(s[r], 1);
  }
  if (r < 1 || r > s.order() + 1) throw DomainError("series coefficient index out of range");
  Element c = s[r - 1];
  if (r == 1) {
    // drop the constant term of 1 - h sum ...
    for (const auto& [k, q] : s[0].terms())
      if (k.hpow == 0 && k.word.empty()) c.add_term(-q, 0, k.word);
  }
  return -div_h(c, 1);
}

std::string serialize(const TruncSeries& s) {
  std::string out = "dir=";
  out += to_string(s.direction());
  out += "; N=" + std::to_string(s.order());
  for (int k = 0; k <= s.order(); ++k) out += "; c" + std::to_string(k) + "=" + serialize(s[k]);
  return out;
}

TruncSeries parse_series(std::string_view text, const ContextPtr& ctx) {
  // Split on ';' outside generator brackets.
  std::vector<std::pair<std::size_t, std::string_view>> fields;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || (text[i] == ';' && depth == 0)) {
      fields.emplace_back(start, text.substr(start, i - start));
      start = i + 1;
    } else if (text[i] == '[') {
      ++depth;
    } else if (text[i] == ']') {
      --depth;
    }
  }
  auto trim = [](std::string_view v) {
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) v.remove_prefix(1);
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) v.remove_suffix(1);
    return v;
  };
  std::optional<Direction> dir;
  std::optional<int> order;
  std::map<int, Element> coeffs;
  for (auto [pos, f] : fields) {
    f = trim(f);
    auto eq = f.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key=value", pos);
    auto key = trim(f.substr(0, eq));
    auto val = trim(f.substr(eq + 1));
    if (key == "dir") {
      if (val == "down")
        dir = Direction::down;
      else if (val == "up")
        dir = Direction::up;
      else
        throw ParseError("unknown direction", pos);
    } else if (key == "N") {
      order = std::stoi(std::string(val));
    } else if (key.size() > 1 && key[0] == 'c') {
      int k = std::stoi(std::string(key.substr(1)));
      coeffs.emplace(k, parse(val, ctx));
    } else {
      throw ParseError("unknown key", pos);
    }
  }
  if (!dir || !order) throw ParseError("series needs dir and N", 0);
  TruncSeries s(with_series_order(ctx, *order), *dir);
  for (auto& [k, e] : coeffs) {
    if (k < 0 || k > *order) throw ParseError("coefficient index out of range", 0);
    s[k] = rebase(e, s.context());
  }
  return s;
}

// ---------------------------------------------------------------------------

SuperMatrix::SuperMatrix(ContextPtr ctx, Direction dir, int size)
    : ctx_(std::move(ctx)), dir_(dir), size_(size) {
  entries_.assign(static_cast<std::size_t>(size * size), TruncSeries(ctx_, dir_));
}

SuperMatrix SuperMatrix::identity(const ContextPtr& ctx, Direction dir, int size) {
  SuperMatrix m(ctx, dir, size);
  for (int i = 1; i <= size; ++i) m(i, i) = TruncSeries::one(ctx, dir);
  return m;
}

SuperMatrix SuperMatrix::generator_matrix(const ContextPtr& ctx, Sign sign) {
  SuperMatrix m(ctx, direction_of(sign), ctx->size());
  for (int i = 1; i <= ctx->size(); ++i)
    for (int j = 1; j <= ctx->size(); ++j) m(i, j) = TruncSeries::generator_series(ctx, sign, i, j);
  return m;
}

SuperMatrix SuperMatrix::submatrix(const std::vector<int>& rows, const std::vector<int>& cols) const {
  if (rows.size() != cols.size()) throw UsageError("submatrix must be square");
  SuperMatrix r(ctx_, dir_, static_cast<int>(rows.size()));
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b)
      r(static_cast<int>(a) + 1, static_cast<int>(b) + 1) = (*this)(rows[a], cols[b]);
  return r;
}

SuperMatrix matrix_mul(const SuperMatrix& a, const SuperMatrix& b) {
  if (a.size() != b.size() || a.direction() != b.direction())
    throw UsageError("matrix_mul: incompatible matrices");
  const int s = a.size();
  SuperMatrix r(a.context(), a.direction(), s);
  for (int i = 1; i <= s; ++i)
    for (int k = 1; k <= s; ++k) {
      const TruncSeries& aik = a(i, k);
      bool zero = true;
      for (int p = 0; p <= aik.order(); ++p) zero = zero && aik[p].is_zero();
      if (zero) continue;
      for (int j = 1; j <= s; ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

SuperMatrix matrix_add(const SuperMatrix& a, const SuperMatrix& b) {
  SuperMatrix r = a;
  for (int i = 1; i <= a.size(); ++i)
    for (int j = 1; j <= a.size(); ++j) r(i, j) += b(i, j);
  return r;
}

SuperMatrix matrix_sub(const SuperMatrix& a, const SuperMatrix& b) {
  SuperMatrix r = a;
  for (int i = 1; i <= a.size(); ++i)
    for (int j = 1; j <= a.size(); ++j) r(i, j) -= b(i, j);
  return r;
}

SuperMatrix matrix_inverse(const SuperMatrix& m) {
  const int s = m.size();
  SuperMatrix id = SuperMatrix::identity(m.context(), m.direction(), s);
  SuperMatrix K = matrix_sub(id, m);
  for (int i = 1; i <= s; ++i)
    for (int j = 1; j <= s; ++j)
      for (int p = 0; p <= K(i, j).order(); ++p)
        if (!all_terms_carry_h(K(i, j)[p]))
          throw SingularityError("matrix inverse: matrix is not of the form 1 + O(h)");
  SuperMatrix r = id;
  for (int j = 1; j <= m.context()->H; ++j) r = matrix_add(id, matrix_mul(K, r));
  return r;
}

TruncSeries quasidet(const SuperMatrix& a, int i, int j) {
  const int s = a.size();
  if (i < 1 || j < 1 || i > s || j > s) throw DomainError("quasidet index out of range");
  if (s == 1) return a(1, 1);
  std::vector<int> rows, cols;
  for (int p = 1; p <= s; ++p) {
    if (p != i) rows.push_back(p);
    if (p != j) cols.push_back(p);
  }
  SuperMatrix inv = matrix_inverse(a.submatrix(rows, cols));
  TruncSeries result = a(i, j);
  for (std::size_t p = 0; p < cols.size(); ++p) {
    // (r_i^j (A^{ij})^{-1})_p
    TruncSeries left(a.context(), a.direction());
    for (std::size_t q = 0; q < cols.size(); ++q)
      left += a(i, cols[q]) * inv(static_cast<int>(q) + 1, static_cast<int>(p) + 1);
    result -= left * a(rows[p], j);
  }
  return result;
}

}  // namespace dy
