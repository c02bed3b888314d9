#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "eds/ints.hpp"

namespace eds {

// Exponent vector; length is the ambient variable count.
using Exps = std::vector<unsigned>;

inline unsigned long exps_degree(const Exps& e) {
  unsigned long d = 0;
  for (unsigned x : e) d += x;
  return d;
}

// Graded lexicographic order, first variable most significant.
inline int grlex_cmp(const Exps& a, const Exps& b) {
  unsigned long da = exps_degree(a), db = exps_degree(b);
  if (da != db) return da < db ? -1 : 1;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  return 0;
}

struct GrlexGreater {
  bool operator()(const Exps& a, const Exps& b) const { return grlex_cmp(a, b) > 0; }
};

// Sparse multivariate polynomial over Z.  Terms are kept in strictly
// descending grlex order with nonzero coefficients.
class Poly {
 public:
  struct Term {
    Exps e;
    Int c;
  };

  Poly() : nvars_(0) {}
  explicit Poly(std::size_t nvars) : nvars_(nvars) {}

  static Poly constant(std::size_t nvars, Int c) {
    Poly p(nvars);
    if (c != 0) p.terms_.push_back({Exps(nvars, 0), std::move(c)});
    return p;
  }

  static Poly variable(std::size_t nvars, std::size_t i, unsigned power = 1) {
    if (i >= nvars) throw std::out_of_range("variable index");
    Poly p(nvars);
    Exps e(nvars, 0);
    e[i] = power;
    if (power == 0) return constant(nvars, 1);
    p.terms_.push_back({std::move(e), Int(1)});
    return p;
  }

  static Poly monomial(std::size_t nvars, Exps e, Int c) {
    if (e.size() != nvars) throw std::invalid_argument("exponent arity");
    Poly p(nvars);
    if (c != 0) p.terms_.push_back({std::move(e), std::move(c)});
    return p;
  }

  std::size_t nvars() const { return nvars_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && exps_degree(terms_[0].e) == 0);
  }

  // Constant term (the coefficient of the empty monomial).
  Int constant_value() const {
    if (terms_.empty()) return Int(0);
    const Term& last = terms_.back();
    return exps_degree(last.e) == 0 ? last.c : Int(0);
  }

  long degree() const {
    if (terms_.empty()) return -1;
    return static_cast<long>(exps_degree(terms_[0].e));
  }

  // All terms share one weighted degree (zero counts as homogeneous of any
  // degree and reports nullopt).
  std::optional<long long> homogeneous_weight(const std::vector<long long>& w) const {
    std::optional<long long> seen;
    for (const Term& t : terms_) {
      long long wd = 0;
      for (std::size_t i = 0; i < nvars_; ++i) wd += w[i] * static_cast<long long>(t.e[i]);
      if (!seen)
        seen = wd;
      else if (*seen != wd)
        return std::nullopt;
    }
    return seen;
  }

  const Term& lead() const {
    if (terms_.empty()) throw std::logic_error("lead of zero polynomial");
    return terms_[0];
  }

  friend bool operator==(const Poly& a, const Poly& b) {
    if (a.nvars_ != b.nvars_ || a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (a.terms_[i].e != b.terms_[i].e || a.terms_[i].c != b.terms_[i].c) return false;
    return true;
  }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  friend Poly operator+(const Poly& a, const Poly& b) { return merge(a, b, false); }
  friend Poly operator-(const Poly& a, const Poly& b) { return merge(a, b, true); }

  Poly operator-() const {
    Poly r(nvars_);
    r.terms_.reserve(terms_.size());
    for (const Term& t : terms_) r.terms_.push_back({t.e, -t.c});
    return r;
  }

  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.nvars_ != b.nvars_) throw std::invalid_argument("arity mismatch");
    Poly r(a.nvars_);
    if (a.is_zero() || b.is_zero()) return r;
    std::map<Exps, Int, GrlexGreater> acc;
    for (const Term& ta : a.terms_) {
      for (const Term& tb : b.terms_) {
        Exps e(a.nvars_);
        for (std::size_t i = 0; i < a.nvars_; ++i) e[i] = ta.e[i] + tb.e[i];
        acc[std::move(e)] += ta.c * tb.c;
      }
    }
    r.terms_.reserve(acc.size());
    for (auto& [e, c] : acc)
      if (c != 0) r.terms_.push_back({e, c});
    return r;
  }

  friend Poly operator*(const Poly& a, const Int& k) {
    Poly r(a.nvars_);
    if (k == 0) return r;
    r.terms_.reserve(a.terms_.size());
    for (const Term& t : a.terms_) r.terms_.push_back({t.e, t.c * k});
    return r;
  }

  Poly pow(unsigned long e) const {
    Poly base = *this;
    Poly r = constant(nvars_, 1);
    while (e > 0) {
      if (e & 1) r = r * base;
      base = base * base;
      e >>= 1;
    }
    return r;
  }

  // Content: nonnegative gcd of all coefficients.
  Int content() const {
    Int g = 0;
    for (const Term& t : terms_) {
      g = int_gcd(g, t.c);
      if (g == 1) break;
    }
    return g;
  }

  Int coefficient(const Exps& e) const {
    for (const Term& t : terms_)
      if (t.e == e) return t.c;
    return Int(0);
  }

  long degree_in(std::size_t v) const {
    long d = -1;
    for (const Term& t : terms_) d = std::max(d, static_cast<long>(t.e[v]));
    return terms_.empty() ? -1 : d;
  }

  // Coefficient of x_v^k, as a polynomial with exponent 0 in variable v.
  Poly coeff_in(std::size_t v, unsigned k) const {
    Poly r(nvars_);
    for (const Term& t : terms_) {
      if (t.e[v] != k) continue;
      Exps e = t.e;
      e[v] = 0;
      r.terms_.push_back({std::move(e), t.c});
    }
    std::sort(r.terms_.begin(), r.terms_.end(),
              [](const Term& x, const Term& y) { return grlex_cmp(x.e, y.e) > 0; });
    return r;
  }

  static Poly from_terms(std::size_t nvars, std::vector<Term> ts) {
    std::map<Exps, Int, GrlexGreater> acc;
    for (Term& t : ts) {
      if (t.e.size() != nvars) throw std::invalid_argument("exponent arity");
      acc[std::move(t.e)] += t.c;
    }
    Poly r(nvars);
    for (auto& [e, c] : acc)
      if (c != 0) r.terms_.push_back({e, c});
    return r;
  }

 private:
  static Poly merge(const Poly& a, const Poly& b, bool subtract) {
    if (a.nvars_ != b.nvars_) throw std::invalid_argument("arity mismatch");
    Poly r(a.nvars_);
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < a.terms_.size() || j < b.terms_.size()) {
      int c;
      if (i == a.terms_.size())
        c = -1;
      else if (j == b.terms_.size())
        c = 1;
      else
        c = grlex_cmp(a.terms_[i].e, b.terms_[j].e);
      if (c > 0) {
        r.terms_.push_back(a.terms_[i++]);
      } else if (c < 0) {
        const Term& t = b.terms_[j++];
        r.terms_.push_back({t.e, subtract ? Int(-t.c) : t.c});
      } else {
        Int s = subtract ? Int(a.terms_[i].c - b.terms_[j].c) : Int(a.terms_[i].c + b.terms_[j].c);
        if (s != 0) r.terms_.push_back({a.terms_[i].e, std::move(s)});
        ++i;
        ++j;
      }
    }
    return r;
  }

  std::size_t nvars_;
  std::vector<Term> terms_;
};

// Exact division in Z[x1..xk]: returns a/b when b | a, otherwise nullopt.
// Greedy leading-term cancellation is complete here because grlex is
// multiplicative and Z[x] is a domain.
inline std::optional<Poly> poly_divide_exact(const Poly& a, const Poly& b) {
  if (b.is_zero()) return std::nullopt;
  Poly r = a;
  std::vector<Poly::Term> qt;
  const Poly::Term& lb = b.lead();
  while (!r.is_zero()) {
    const Poly::Term& lr = r.lead();
    Exps e(r.nvars());
    for (std::size_t i = 0; i < r.nvars(); ++i) {
      if (lr.e[i] < lb.e[i]) return std::nullopt;
      e[i] = lr.e[i] - lb.e[i];
    }
    if (!int_divides(lb.c, lr.c)) return std::nullopt;
    Int c = int_divexact(lr.c, lb.c);
    Poly t = Poly::monomial(r.nvars(), e, c);
    qt.push_back({std::move(e), std::move(c)});
    r = r - t * b;
  }
  return Poly::from_terms(a.nvars(), std::move(qt));
}

namespace detail {

// Pseudo-remainder of a by b in variable v (coefficients scaled by powers of
// b's leading v-coefficient, as in the primitive PRS).
inline Poly prem_in(const Poly& a, const Poly& b, std::size_t v) {
  long db = b.degree_in(v);
  Poly lb = b.coeff_in(v, static_cast<unsigned>(db));
  Poly r = a;
  while (!r.is_zero()) {
    long dr = r.degree_in(v);
    if (dr < db) break;
    Poly lr = r.coeff_in(v, static_cast<unsigned>(dr));
    Poly shift = Poly::variable(r.nvars(), v, static_cast<unsigned>(dr - db));
    r = r * lb - b * shift * lr;
  }
  return r;
}

inline Poly poly_gcd_rec(Poly a, Poly b);

// gcd of the v-coefficients of p.
inline Poly content_in(const Poly& p, std::size_t v) {
  Poly c(p.nvars());
  long d = p.degree_in(v);
  for (long k = 0; k <= d; ++k) {
    Poly ck = p.coeff_in(v, static_cast<unsigned>(k));
    if (!ck.is_zero()) c = poly_gcd_rec(c, ck);
  }
  return c;
}

inline Poly poly_gcd_rec(Poly a, Poly b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  std::size_t n = a.nvars();
  std::size_t v = n;
  for (std::size_t i = n; i-- > 0;) {
    if (a.degree_in(i) > 0 || b.degree_in(i) > 0) {
      v = i;
      break;
    }
  }
  if (v == n) return Poly::constant(n, int_gcd(a.constant_value(), b.constant_value()));

  Poly ca = content_in(a, v), cb = content_in(b, v);
  Poly cg = poly_gcd_rec(ca, cb);
  Poly pa = *poly_divide_exact(a, ca);
  Poly pb = *poly_divide_exact(b, cb);
  while (!pb.is_zero()) {
    Poly r = prem_in(pa, pb, v);
    pa = std::move(pb);
    if (r.is_zero()) {
      pb = Poly(n);
    } else {
      Poly cr = content_in(r, v);
      pb = *poly_divide_exact(r, cr);
    }
  }
  return cg * pa;
}

}  // namespace detail

// gcd in Z[x1..xk], normalized to positive leading (grlex) coefficient.
inline Poly poly_gcd(const Poly& a, const Poly& b) {
  Poly g = detail::poly_gcd_rec(a, b);
  if (!g.is_zero() && g.lead().c < 0) g = -g;
  return g;
}

// Canonical text form: grlex-descending terms, explicit '*' and '^'.
inline std::string poly_to_string(const Poly& p, const std::vector<std::string>& names) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const Poly::Term& t : p.terms()) {
    Int c = t.c;
    if (first) {
      if (c < 0) {
        out += "-";
        c = -c;
      }
    } else {
      out += c < 0 ? " - " : " + ";
      if (c < 0) c = -c;
    }
    first = false;
    std::string mono;
    for (std::size_t i = 0; i < t.e.size(); ++i) {
      if (t.e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += names[i];
      if (t.e[i] > 1) mono += "^" + std::to_string(t.e[i]);
    }
    if (mono.empty()) {
      out += int_str(c);
    } else {
      if (c != 1) out += int_str(c) + "*";
      out += mono;
    }
  }
  return out;
}

namespace detail {

struct PolyParser {
  const std::string& s;
  std::size_t pos = 0;
  const std::vector<std::string>& names;
  std::size_t nvars;

  void skip() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  }
  bool eat(char c) {
    skip();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  Poly parse_poly() {
    skip();
    bool neg = false;
    if (eat('-'))
      neg = true;
    else
      eat('+');
    Poly acc = parse_term();
    if (neg) acc = -acc;
    for (;;) {
      skip();
      if (pos >= s.size()) break;
      if (eat('+')) {
        acc = acc + parse_term();
      } else if (eat('-')) {
        acc = acc - parse_term();
      } else {
        break;
      }
    }
    return acc;
  }

  Poly parse_term() {
    Poly acc = parse_factor();
    while (eat('*')) acc = acc * parse_factor();
    return acc;
  }

  Poly parse_factor() {
    skip();
    if (pos >= s.size()) throw std::invalid_argument("polynomial syntax: unexpected end");
    if (s[pos] == '(') {
      ++pos;
      Poly inner = parse_poly();
      if (!eat(')')) throw std::invalid_argument("polynomial syntax: missing ')'");
      return maybe_power(inner);
    }
    if (std::isdigit(static_cast<unsigned char>(s[pos]))) {
      std::size_t start = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      return maybe_power(Poly::constant(nvars, parse_int(s.substr(start, pos - start))));
    }
    // Longest-match variable name.
    std::size_t best = nvars, best_len = 0;
    for (std::size_t i = 0; i < names.size(); ++i) {
      const std::string& nm = names[i];
      if (nm.size() > best_len && s.compare(pos, nm.size(), nm) == 0) {
        best = i;
        best_len = nm.size();
      }
    }
    if (best == nvars)
      throw std::invalid_argument("polynomial syntax: unknown symbol at '" + s.substr(pos) + "'");
    pos += best_len;
    return maybe_power(Poly::variable(nvars, best));
  }

  Poly maybe_power(Poly base) {
    if (!eat('^')) return base;
    skip();
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (start == pos) throw std::invalid_argument("polynomial syntax: missing exponent");
    return base.pow(std::stoul(s.substr(start, pos - start)));
  }
};

}  // namespace detail

inline Poly poly_parse(const std::string& text, const std::vector<std::string>& names) {
  detail::PolyParser p{text, 0, names, names.size()};
  Poly r = p.parse_poly();
  p.skip();
  if (p.pos != text.size())
    throw std::invalid_argument("polynomial syntax: trailing input '" + text.substr(p.pos) + "'");
  return r;
}

}  // namespace eds
