#include "dy/algebra.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "dy/errors.hpp"

namespace dy {

ContextPtr make_context(int m, int n, int H, int N) {
  if (m < 0 || n < 0 || m + n < 1) throw DomainError("context needs m, n >= 0 and m + n >= 1");
  if (m + n > 255) throw DomainError("context size exceeds 255");
  if (H < 0 || N < 0) throw DomainError("truncation orders must be non-negative");
  return std::make_shared<const AlgebraContext>(AlgebraContext{m, n, H, N});
}

ContextPtr with_h_order(const ContextPtr& ctx, int H) {
  return make_context(ctx->m, ctx->n, H, ctx->N);
}

ContextPtr with_series_order(const ContextPtr& ctx, int N) {
  return make_context(ctx->m, ctx->n, ctx->H, N);
}

std::string describe(const AlgebraContext& ctx) {
  std::ostringstream os;
  os << "gl(" << ctx.m << "|" << ctx.n << "), H=" << ctx.H << ", N=" << ctx.N;
  return os.str();
}

Generator::Generator(Sign sign, int level, int row, int col, int parity) {
  code_ = (static_cast<std::uint32_t>(sign) << 31) |
          (static_cast<std::uint32_t>(level) << 17) |
          (static_cast<std::uint32_t>(row) << 9) |
          (static_cast<std::uint32_t>(col) << 1) | static_cast<std::uint32_t>(parity & 1);
}

std::string to_string(Generator g) {
  std::string s = "t[";
  s += sign_char(g.sign());
  s += std::to_string(g.level());
  s += ';';
  s += std::to_string(g.row());
  s += ',';
  s += std::to_string(g.col());
  s += ']';
  return s;
}

int word_parity(const Word& w) {
  int p = 0;
  for (Generator g : w) p ^= g.parity();
  return p;
}

std::size_t WordHash::operator()(const Word& w) const noexcept {
  std::size_t h = 0xcbf29ce484222325ull ^ w.size();
  for (Generator g : w) {
    h ^= g.code();
    h *= 0x100000001b3ull;
    h ^= h >> 29;
  }
  return h;
}

Element Element::scalar(ContextPtr ctx, const Rational& q) {
  Element e(std::move(ctx));
  if (q != 0) e.terms_.emplace(TermKey{0, {}}, q);
  return e;
}

Element Element::h_power(ContextPtr ctx, int k, const Rational& c) {
  Element e(std::move(ctx));
  e.add_term(c, k, Word{});
  return e;
}

Element Element::monomial(ContextPtr ctx, const Rational& c, int hpow, Word word) {
  Element e(std::move(ctx));
  e.add_term(c, hpow, std::move(word));
  return e;
}

void Element::add_term(const Rational& c, int hpow, const Word& word) {
  if (hpow > ctx_->H || c == 0) return;
  auto [it, inserted] = terms_.try_emplace(TermKey{hpow, word}, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void Element::add_term(const Rational& c, int hpow, Word&& word) {
  if (hpow > ctx_->H || c == 0) return;
  auto [it, inserted] = terms_.try_emplace(TermKey{hpow, std::move(word)}, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Rational Element::coefficient(int hpow, const Word& word) const {
  auto it = terms_.find(TermKey{hpow, word});
  return it == terms_.end() ? Rational(0) : it->second;
}

int Element::min_hpow() const {
  if (terms_.empty()) throw DomainError("min_hpow of zero element");
  return terms_.begin()->first.hpow;
}

void require_same_algebra(const Element& a, const Element& b) {
  if (!a.context() || !b.context()) throw UsageError("element without context");
  if (a.context() != b.context() && !a.context()->same_algebra(*b.context())) {
    throw UsageError("context mismatch: " + describe(*a.context()) + " vs " +
                     describe(*b.context()));
  }
}

Element& Element::operator+=(const Element& o) {
  require_same_algebra(*this, o);
  for (const auto& [k, c] : o.terms_) add_term(c, k.hpow, k.word);
  return *this;
}

Element& Element::operator-=(const Element& o) {
  require_same_algebra(*this, o);
  for (const auto& [k, c] : o.terms_) add_term(-c, k.hpow, k.word);
  return *this;
}

Element& Element::operator*=(const Rational& q) {
  if (q == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, c] : terms_) c *= q;
  return *this;
}

Element Element::operator-() const {
  Element r = *this;
  r *= Rational(-1);
  return r;
}

Element Element::parity_part(int parity) const {
  Element r(ctx_);
  for (const auto& [k, c] : terms_)
    if (word_parity(k.word) == parity) r.terms_.emplace_hint(r.terms_.end(), k, c);
  return r;
}

bool Element::is_homogeneous() const {
  if (terms_.empty()) return true;
  int p = word_parity(terms_.begin()->first.word);
  for (const auto& [k, c] : terms_)
    if (word_parity(k.word) != p) return false;
  return true;
}

Element Element::h_component(int hpow) const {
  Element r(ctx_);
  for (const auto& [k, c] : terms_)
    if (k.hpow == hpow) r.terms_.emplace_hint(r.terms_.end(), TermKey{0, k.word}, c);
  return r;
}

Element operator+(Element a, const Element& b) { return a += b; }
Element operator-(Element a, const Element& b) { return a -= b; }
Element operator*(const Rational& q, Element a) { return a *= q; }
Element operator*(const Element& a, const Element& b) { return free_mul(a, b); }

Generator make_generator(const AlgebraContext& ctx, Sign sign, int r, int i, int j) {
  if (i < 1 || j < 1 || i > ctx.size() || j > ctx.size()) {
    throw DomainError("generator index (" + std::to_string(i) + "," + std::to_string(j) +
                      ") out of range 1.." + std::to_string(ctx.size()));
  }
  if (r < 1 || r > 0x3fff) throw DomainError("generator level must be in 1..16383");
  return Generator(sign, r, i, j, ctx.parity(i) ^ ctx.parity(j));
}

Element gen(const ContextPtr& ctx, Sign sign, int r, int i, int j) {
  return Element::monomial(ctx, 1, 0, Word{make_generator(*ctx, sign, r, i, j)});
}

Element free_add(const Element& a, const Element& b) { return a + b; }

Element free_mul(const Element& a, const Element& b) {
  require_same_algebra(a, b);
  Element r(a.context());
  const int H = a.context()->H;
  for (const auto& [ka, ca] : a.terms()) {
    for (const auto& [kb, cb] : b.terms()) {
      const int e = ka.hpow + kb.hpow;
      if (e > H) break;  // terms of b are sorted by hpow first
      Word w;
      w.reserve(ka.word.size() + kb.word.size());
      w.insert(w.end(), ka.word.begin(), ka.word.end());
      w.insert(w.end(), kb.word.begin(), kb.word.end());
      r.add_term(ca * cb, e, std::move(w));
    }
  }
  return r;
}

Element scalar_mul(const Rational& q, const Element& a) { return q * a; }

Element commutator(const Element& a, const Element& b) { return a * b - b * a; }

Element supercomm(const Element& a, const Element& b) {
  require_same_algebra(a, b);
  Element r(a.context());
  for (int pa = 0; pa < 2; ++pa) {
    Element ap = a.parity_part(pa);
    if (ap.is_zero()) continue;
    for (int pb = 0; pb < 2; ++pb) {
      Element bp = b.parity_part(pb);
      if (bp.is_zero()) continue;
      r += ap * bp;
      if (pa & pb)
        r += bp * ap;
      else
        r -= bp * ap;
    }
  }
  return r;
}

int degree(const Element& a) {
  if (a.is_zero()) throw DomainError("degree of the zero element is undefined");
  bool first = true;
  int best = 0;
  for (const auto& [k, c] : a.terms()) {
    int d = 0;
    for (Generator g : k.word) d += g.degree();
    if (first || d > best) best = d;
    first = false;
  }
  return best;
}

Element mul_h(const Element& a, int k) {
  Element r(a.context());
  for (const auto& [key, c] : a.terms()) r.add_term(c, key.hpow + k, key.word);
  return r;
}

Element div_h(const Element& a, int k) {
  Element r(a.context());
  for (const auto& [key, c] : a.terms()) {
    if (key.hpow < k) {
      throw DomainError("div_h: term " + serialize(Element::monomial(a.context(), c, key.hpow, key.word)) +
                        " is not divisible by h^" + std::to_string(k));
    }
    r.add_term(c, key.hpow - k, key.word);
  }
  return r;
}

Element rebase(const Element& a, const ContextPtr& target) {
  if (a.context()->m != target->m || a.context()->n != target->n)
    throw UsageError("rebase across different (m|n)");
  Element r(target);
  for (const auto& [key, c] : a.terms()) r.add_term(c, key.hpow, key.word);
  return r;
}

// ---------------------------------------------------------------------------
// Text form.

namespace {

std::string format_term(const Rational& c, int hpow, const Word& w, bool leading) {
  std::string out;
  Rational mag = abs(c);
  if (leading) {
    if (c < 0) out += "-";
  } else {
    out += c < 0 ? " - " : " + ";
  }
  std::vector<std::string> parts;
  if (mag != 1 || (hpow == 0 && w.empty())) parts.push_back(mag.get_str());
  if (hpow > 0) parts.push_back("h^" + std::to_string(hpow));
  for (Generator g : w) parts.push_back(to_string(g));
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ' ';
    out += parts[i];
  }
  return out;
}

class Parser {
 public:
  Parser(std::string_view s, const ContextPtr& ctx) : s_(s), ctx_(ctx) {}

  Element parse_element() {
    Element out(ctx_);
    skip_ws();
    if (at_end()) fail("empty input");
    bool first = true;
    while (true) {
      skip_ws();
      if (at_end()) {
        if (first) fail("expected term");
        break;
      }
      int sign = 1;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1 : 1;
        ++pos_;
      } else if (!first) {
        fail("expected '+' or '-' between terms");
      }
      skip_ws();
      parse_term(out, sign);
      first = false;
    }
    return out;
  }

  Generator parse_gen() {
    expect('t');
    skip_ws();
    expect('[');
    skip_ws();
    Sign sg;
    if (peek() == '+')
      sg = Sign::plus;
    else if (peek() == '-')
      sg = Sign::minus;
    else
      fail("expected generator sign");
    ++pos_;
    int level = parse_int();
    skip_ws();
    expect(';');
    int i = parse_int();
    skip_ws();
    expect(',');
    int j = parse_int();
    skip_ws();
    expect(']');
    try {
      return make_generator(*ctx_, sg, level, i, j);
    } catch (const DomainError& e) {
      fail(e.what());
    }
  }

  bool at_end() {
    skip_ws();
    return pos_ >= s_.size();
  }

 private:
  void parse_term(Element& out, int sign) {
    Rational c = 1;
    bool any = false;
    skip_ws();
    if (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
      c = parse_rational();
      any = true;
    }
    int hpow = 0;
    Word w;
    while (true) {
      skip_ws();
      if (at_end()) break;
      char ch = peek();
      if (ch == 'h') {
        ++pos_;
        skip_ws();
        int k = 1;
        if (!at_end() && peek() == '^') {
          ++pos_;
          k = parse_int();
        }
        hpow += k;
        any = true;
      } else if (ch == 't') {
        w.push_back(parse_gen());
        any = true;
      } else {
        break;
      }
    }
    if (!any) fail("expected term");
    out.add_term(sign * c, hpow, std::move(w));
  }

  Rational parse_rational() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    std::string text(s_.substr(start, pos_ - start));
    if (pos_ < s_.size() && s_[pos_] == '/') {
      ++pos_;
      std::size_t ds = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (ds == pos_) fail("expected denominator");
      std::string den(s_.substr(ds, pos_ - ds));
      if (mpz_class(den) == 0) fail("zero denominator");
      text += "/" + den;
    }
    Rational q(text);
    q.canonicalize();
    return q;
  }

  int parse_int() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer");
    if (pos_ - start > 6) fail("integer too large");
    return std::stoi(std::string(s_.substr(start, pos_ - start)));
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() const { return s_[pos_]; }
  void expect(char c) {
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  std::string_view s_;
  ContextPtr ctx_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string serialize(const Element& a) {
  if (a.is_zero()) return "0";
  std::string out;
  bool leading = true;
  for (const auto& [k, c] : a.terms()) {
    out += format_term(c, k.hpow, k.word, leading);
    leading = false;
  }
  return out;
}

Element parse(std::string_view text, const ContextPtr& ctx) {
  Parser p(text, ctx);
  return p.parse_element();
}

Generator parse_generator(std::string_view text, const AlgebraContext& ctx) {
  auto holder = std::make_shared<const AlgebraContext>(ctx);
  Parser p(text, holder);
  Generator g = p.parse_gen();
  if (!p.at_end()) throw ParseError("trailing characters after generator", text.size());
  return g;
}

}  // namespace dy
