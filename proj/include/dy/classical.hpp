#pragma once

// Enveloping algebra of the loop superalgebra of gl(m|n): PBW-ordered sums of
// words in e_ij(r), r in Z, with exact rational coefficients.

#include <map>
#include <string>
#include <vector>

#include "dy/algebra.hpp"

namespace dy {

struct LoopGen {
  int r = 0;
  int i = 0;
  int j = 0;
  auto operator<=>(const LoopGen&) const = default;
};

class ClassicalElement {
 public:
  using LoopWord = std::vector<LoopGen>;
  using Terms = std::map<LoopWord, Rational>;

  ClassicalElement(int m, int n) : m_(m), n_(n) {}

  static ClassicalElement scalar(int m, int n, const Rational& q);
  static ClassicalElement basis(int m, int n, int i, int j, int r);
  // I(r) = sum_i e_ii(r)
  static ClassicalElement identity_loop(int m, int n, int r);

  int parity(int i) const { return i > m_ ? 1 : 0; }
  int parity(const LoopGen& g) const { return (parity(g.i) + parity(g.j)) % 2; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_word(const Rational& c, LoopWord w);  // straightens w first

  ClassicalElement& operator+=(const ClassicalElement& o);
  ClassicalElement& operator-=(const ClassicalElement& o);
  bool operator==(const ClassicalElement& o) const { return terms_ == o.terms_; }

  friend ClassicalElement operator*(const ClassicalElement& a, const ClassicalElement& b);
  friend ClassicalElement operator*(const Rational& q, ClassicalElement a);

  std::string str() const;

 private:
  void add_straight(const Rational& c, const LoopWord& w);
  int m_, n_;
  Terms terms_;
};

ClassicalElement operator+(ClassicalElement a, const ClassicalElement& b);
ClassicalElement operator-(ClassicalElement a, const ClassicalElement& b);

// [e_ij(r), e_kl(s)] = d_kj e_il(r+s) - d_il e_kj(r+s) (-1)^{(i+j)(k+l)}
ClassicalElement loop_bracket(int m, int n, const LoopGen& x, const LoopGen& y);
// Supercommutator of elements, split into homogeneous parts.
ClassicalElement supercomm(const ClassicalElement& a, const ClassicalElement& b);

// h^0 part of a under t^{(r)} -> (-1)^i e_ij(r-1), t^{(-r)} -> (-1)^i e_ij(-r).
ClassicalElement classical_image(const Element& a);

}  // namespace dy
