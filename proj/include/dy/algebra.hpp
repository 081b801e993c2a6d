#pragma once

// Free associative superalgebra over Q with a central parameter h truncated
// at h^{H+1}.  Generators are the symbols t_{ij}^{(r)} (sign minus) and
// t_{ij}^{(-r)} (sign plus); no relations are imposed at this layer.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <boost/container/small_vector.hpp>
#include <gmpxx.h>

namespace dy {

using Rational = mpq_class;

enum class Sign : std::uint8_t { plus = 0, minus = 1 };

inline char sign_char(Sign s) { return s == Sign::plus ? '+' : '-'; }

struct AlgebraContext {
  int m = 0;
  int n = 0;
  int H = 0;  // h-truncation order
  int N = 0;  // series truncation order

  int size() const { return m + n; }
  // Parity of a 1-based index: 0 for i <= m, 1 otherwise.
  int parity(int i) const { return i > m ? 1 : 0; }
  bool same_algebra(const AlgebraContext& o) const {
    return m == o.m && n == o.n && H == o.H;
  }
  bool operator==(const AlgebraContext&) const = default;
};

using ContextPtr = std::shared_ptr<const AlgebraContext>;

ContextPtr make_context(int m, int n, int H, int N);
ContextPtr with_h_order(const ContextPtr& ctx, int H);
ContextPtr with_series_order(const ContextPtr& ctx, int N);
std::string describe(const AlgebraContext& ctx);

// Packed generator.  The code orders generators by (sign with plus < minus,
// level, row, col); the parity bit sits below everything else and is a
// function of (row, col) for a fixed context.
class Generator {
 public:
  Generator() = default;
  Generator(Sign sign, int level, int row, int col, int parity);

  static Generator from_code(std::uint32_t code) {
    Generator g;
    g.code_ = code;
    return g;
  }

  Sign sign() const { return (code_ >> 31) ? Sign::minus : Sign::plus; }
  int level() const { return static_cast<int>((code_ >> 17) & 0x3fffu); }
  int row() const { return static_cast<int>((code_ >> 9) & 0xffu); }
  int col() const { return static_cast<int>((code_ >> 1) & 0xffu); }
  int parity() const { return static_cast<int>(code_ & 1u); }
  std::uint32_t code() const { return code_; }

  // deg t^{(r)} = r - 1, deg t^{(-r)} = -r.
  int degree() const { return sign() == Sign::minus ? level() - 1 : -level(); }

  auto operator<=>(const Generator&) const = default;

 private:
  std::uint32_t code_ = 0;
};

std::string to_string(Generator g);

using Word = boost::container::small_vector<Generator, 6>;

int word_parity(const Word& w);

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept;
};

struct TermKey {
  int hpow = 0;
  Word word;
  bool operator==(const TermKey& o) const { return hpow == o.hpow && word == o.word; }
  bool operator<(const TermKey& o) const {
    if (hpow != o.hpow) return hpow < o.hpow;
    return std::lexicographical_compare(word.begin(), word.end(), o.word.begin(), o.word.end());
  }
};

struct Monomial {
  Rational coeff;
  int hpow = 0;
  Word word;
};

class Element {
 public:
  using Terms = std::map<TermKey, Rational>;

  Element() = default;
  explicit Element(ContextPtr ctx) : ctx_(std::move(ctx)) {}

  static Element scalar(ContextPtr ctx, const Rational& q);
  static Element one(ContextPtr ctx) { return scalar(std::move(ctx), 1); }
  static Element h_power(ContextPtr ctx, int k, const Rational& c = 1);
  static Element monomial(ContextPtr ctx, const Rational& c, int hpow, Word word);

  const ContextPtr& context() const { return ctx_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  // Adds c * h^hpow * word; terms beyond the truncation order are dropped.
  void add_term(const Rational& c, int hpow, const Word& word);
  void add_term(const Rational& c, int hpow, Word&& word);

  Rational coefficient(int hpow, const Word& word) const;
  int min_hpow() const;

  Element& operator+=(const Element& o);
  Element& operator-=(const Element& o);
  Element& operator*=(const Rational& q);

  Element operator-() const;

  bool operator==(const Element& o) const { return terms_ == o.terms_; }

  // Homogeneous components by word parity.
  Element parity_part(int parity) const;
  bool is_homogeneous() const;

  // Part of given h-power, as an Element with hpow 0.
  Element h_component(int hpow) const;

 private:
  ContextPtr ctx_;
  Terms terms_;
};

void require_same_algebra(const Element& a, const Element& b);

Element operator+(Element a, const Element& b);
Element operator-(Element a, const Element& b);
Element operator*(const Rational& q, Element a);
Element operator*(const Element& a, const Element& b);

Element gen(const ContextPtr& ctx, Sign sign, int r, int i, int j);
Generator make_generator(const AlgebraContext& ctx, Sign sign, int r, int i, int j);

Element free_add(const Element& a, const Element& b);
Element free_mul(const Element& a, const Element& b);
Element scalar_mul(const Rational& q, const Element& a);

// a*b - (-1)^{|a||b|} b*a, extended bilinearly over homogeneous components.
Element supercomm(const Element& a, const Element& b);
// Plain commutator a*b - b*a.
Element commutator(const Element& a, const Element& b);

int degree(const Element& a);

// Multiply by h^k (k >= 0); terms beyond H are dropped.
Element mul_h(const Element& a, int k);
// Divide by h^k; every term must have hpow >= k.
Element div_h(const Element& a, int k);
// Re-home a into a context of the same (m, n) with a possibly different H,
// truncating as needed.
Element rebase(const Element& a, const ContextPtr& target);

std::string serialize(const Element& a);
Element parse(std::string_view text, const ContextPtr& ctx);
Generator parse_generator(std::string_view text, const AlgebraContext& ctx);

}  // namespace dy
