#include "dy/classical.hpp"

#include <sstream>

namespace dy {

ClassicalElement ClassicalElement::scalar(int m, int n, const Rational& q) {
  ClassicalElement e(m, n);
  if (q != 0) e.terms_[{}] = q;
  return e;
}

ClassicalElement ClassicalElement::basis(int m, int n, int i, int j, int r) {
  ClassicalElement e(m, n);
  e.terms_[{LoopGen{r, i, j}}] = 1;
  return e;
}

ClassicalElement ClassicalElement::identity_loop(int m, int n, int r) {
  ClassicalElement e(m, n);
  for (int i = 1; i <= m + n; ++i) e += basis(m, n, i, i, r);
  return e;
}

ClassicalElement loop_bracket(int m, int n, const LoopGen& x, const LoopGen& y) {
  ClassicalElement out(m, n);
  auto par = [m](int i) { return i > m ? 1 : 0; };
  const int s = ((par(x.i) + par(x.j)) * (par(y.i) + par(y.j))) % 2;
  if (y.i == x.j) out += ClassicalElement::basis(m, n, x.i, y.j, x.r + y.r);
  if (x.i == y.j) out -= Rational(s ? -1 : 1) * ClassicalElement::basis(m, n, y.i, x.j, x.r + y.r);
  return out;
}

void ClassicalElement::add_straight(const Rational& c, const LoopWord& w) {
  auto it = terms_.find(w);
  if (it == terms_.end()) {
    terms_.emplace(w, c);
    return;
  }
  it->second += c;
  if (it->second == 0) terms_.erase(it);
}

void ClassicalElement::add_word(const Rational& c, LoopWord w) {
  if (c == 0) return;
  for (std::size_t k = 0; k + 1 < w.size(); ++k) {
    const LoopGen& x = w[k];
    const LoopGen& y = w[k + 1];
    const bool odd_square = x == y && parity(x) == 1;
    if (!(y < x) && !odd_square) continue;
    // x y = (-1)^{|x||y|} y x + [x, y]; an odd square is half its bracket.
    LoopWord head(w.begin(), w.begin() + static_cast<long>(k));
    LoopWord tail(w.begin() + static_cast<long>(k) + 2, w.end());
    ClassicalElement br = loop_bracket(m_, n_, x, y);
    for (const auto& [bw, bc] : br.terms_) {
      LoopWord nw = head;
      nw.insert(nw.end(), bw.begin(), bw.end());
      nw.insert(nw.end(), tail.begin(), tail.end());
      add_word(odd_square ? Rational(c * bc / 2) : Rational(c * bc), std::move(nw));
    }
    if (!odd_square) {
      std::swap(w[k], w[k + 1]);
      add_word(parity(x) && parity(y) ? -c : c, std::move(w));
    }
    return;
  }
  add_straight(c, w);
}

ClassicalElement& ClassicalElement::operator+=(const ClassicalElement& o) {
  for (const auto& [w, c] : o.terms_) add_straight(c, w);
  return *this;
}

ClassicalElement& ClassicalElement::operator-=(const ClassicalElement& o) {
  for (const auto& [w, c] : o.terms_) add_straight(-c, w);
  return *this;
}

ClassicalElement operator+(ClassicalElement a, const ClassicalElement& b) { return a += b; }
ClassicalElement operator-(ClassicalElement a, const ClassicalElement& b) { return a -= b; }

ClassicalElement operator*(const ClassicalElement& a, const ClassicalElement& b) {
  ClassicalElement out(a.m_, a.n_);
  for (const auto& [wa, ca] : a.terms_)
    for (const auto& [wb, cb] : b.terms_) {
      ClassicalElement::LoopWord w = wa;
      w.insert(w.end(), wb.begin(), wb.end());
      out.add_word(ca * cb, std::move(w));
    }
  return out;
}

ClassicalElement operator*(const Rational& q, ClassicalElement a) {
  if (q == 0) return ClassicalElement(a.m_, a.n_);
  for (auto& [w, c] : a.terms_) c *= q;
  return a;
}

ClassicalElement supercomm(const ClassicalElement& a, const ClassicalElement& b) {
  ClassicalElement out = a * b;
  for (const auto& [wa, ca] : a.terms()) {
    int pa = 0;
    for (const auto& g : wa) pa += a.parity(g);
    for (const auto& [wb, cb] : b.terms()) {
      int pb = 0;
      for (const auto& g : wb) pb += b.parity(g);
      ClassicalElement::LoopWord w = wb;
      w.insert(w.end(), wa.begin(), wa.end());
      ClassicalElement term = Rational(0) * a;
      term.add_word((pa % 2) && (pb % 2) ? Rational(ca * cb) : Rational(-(ca * cb)), std::move(w));
      out += term;
    }
  }
  return out;
}

ClassicalElement classical_image(const Element& a) {
  const AlgebraContext& ctx = *a.context();
  ClassicalElement out(ctx.m, ctx.n);
  for (const auto& [key, c] : a.terms()) {
    if (key.hpow != 0) continue;
    ClassicalElement::LoopWord w;
    Rational coeff = c;
    for (Generator g : key.word) {
      if (ctx.parity(g.row())) coeff = -coeff;
      const int r = g.sign() == Sign::minus ? g.level() - 1 : -g.level();
      w.push_back(LoopGen{r, g.row(), g.col()});
    }
    out.add_word(coeff, std::move(w));
  }
  return out;
}

std::string ClassicalElement::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [w, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c.get_str();
    for (const auto& g : w) os << "*e" << g.i << g.j << "(" << g.r << ")";
  }
  return os.str();
}

}  // namespace dy
