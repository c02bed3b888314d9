#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "eds/ints.hpp"
#include "eds/poly.hpp"

namespace eds {

enum class RingKind { Integers, Rationals, IntegersModN, PrimeField, Polynomials, Fractions };

class Elem;
struct FracVal;

// Runtime-tagged commutative ring.  An Elem carries a pointer to its ring's
// representation; operations on elements of different rings throw.
class Ring {
 public:
  struct Rep {
    RingKind kind;
    Int modulus;
    std::vector<std::string> vars;
    std::shared_ptr<const Rep> base;
  };

  static Ring integers() {
    static const Ring r(std::make_shared<Rep>(Rep{RingKind::Integers, 0, {}, nullptr}));
    return r;
  }
  static Ring rationals() {
    static const Ring r(std::make_shared<Rep>(Rep{RingKind::Rationals, 0, {}, nullptr}));
    return r;
  }
  static Ring integers_mod(const Int& n) {
    if (n < 2) throw std::invalid_argument("modulus must be >= 2");
    return Ring(std::make_shared<Rep>(Rep{RingKind::IntegersModN, n, {}, nullptr}));
  }
  static Ring prime_field(const Int& p) {
    if (!is_prime(p)) throw std::invalid_argument("prime field modulus must be prime");
    return Ring(std::make_shared<Rep>(Rep{RingKind::PrimeField, p, {}, nullptr}));
  }
  static Ring multi_poly(std::vector<std::string> vars) {
    if (vars.empty()) throw std::invalid_argument("polynomial ring needs at least one variable");
    for (std::size_t i = 0; i < vars.size(); ++i)
      for (std::size_t j = i + 1; j < vars.size(); ++j)
        if (vars[i] == vars[j]) throw std::invalid_argument("duplicate variable name");
    return Ring(std::make_shared<Rep>(Rep{RingKind::Polynomials, 0, std::move(vars), nullptr}));
  }
  static Ring fraction_field(const Ring& base) {
    if (!base.is_domain())
      throw std::invalid_argument("fraction field requires an integral domain base");
    return Ring(std::make_shared<Rep>(Rep{RingKind::Fractions, 0, {}, base.rep_}));
  }

  // Internal: re-wrap an existing representation.
  static Ring wrap(std::shared_ptr<const Rep> rep) { return Ring(std::move(rep)); }

  RingKind kind() const { return rep_->kind; }
  const Int& modulus() const { return rep_->modulus; }
  const std::vector<std::string>& var_names() const { return rep_->vars; }
  Ring base() const {
    if (rep_->kind != RingKind::Fractions) throw std::logic_error("base(): not a fraction field");
    return Ring(rep_->base);
  }

  bool is_domain() const {
    return rep_->kind != RingKind::IntegersModN || is_prime(rep_->modulus);
  }

  bool is_field() const {
    switch (rep_->kind) {
      case RingKind::Rationals:
      case RingKind::PrimeField:
      case RingKind::Fractions:
        return true;
      case RingKind::IntegersModN:
        return is_prime(rep_->modulus);
      default:
        return false;
    }
  }

  bool same(const Ring& o) const { return same_rep(rep_, o.rep_); }

  std::string description() const {
    switch (rep_->kind) {
      case RingKind::Integers:
        return "Z";
      case RingKind::Rationals:
        return "Q";
      case RingKind::IntegersModN:
        return "Zmod:" + int_str(rep_->modulus);
      case RingKind::PrimeField:
        return "Fp:" + int_str(rep_->modulus);
      case RingKind::Polynomials: {
        std::string s = "Poly:Z[";
        for (std::size_t i = 0; i < rep_->vars.size(); ++i) {
          if (i) s += ",";
          s += rep_->vars[i];
        }
        return s + "]";
      }
      case RingKind::Fractions:
        return "Frac:" + base().description();
    }
    return "?";
  }

  static Ring parse_description(const std::string& text);

  Elem zero() const;
  Elem one() const;
  Elem from_int(const Int& v) const;
  Elem var(const std::string& name) const;
  Elem parse(const std::string& text) const;

  const std::shared_ptr<const Rep>& rep() const { return rep_; }

 private:
  explicit Ring(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}

  static bool same_rep(const std::shared_ptr<const Rep>& a, const std::shared_ptr<const Rep>& b) {
    if (a == b) return true;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
      case RingKind::IntegersModN:
      case RingKind::PrimeField:
        return a->modulus == b->modulus;
      case RingKind::Polynomials:
        return a->vars == b->vars;
      case RingKind::Fractions:
        return same_rep(a->base, b->base);
      default:
        return true;
    }
  }

  std::shared_ptr<const Rep> rep_;
};

class Elem {
 public:
  using Payload = std::variant<Int, Rat, Poly, std::shared_ptr<const FracVal>>;

  Elem() = default;

  Ring ring() const { return Ring::wrap(rep_); }
  const std::shared_ptr<const Ring::Rep>& rep() const { return rep_; }
  RingKind kind() const { return rep_->kind; }

  bool is_zero() const;
  bool is_one() const;

  const Int& as_int() const { return std::get<Int>(val_); }
  const Rat& as_rat() const { return std::get<Rat>(val_); }
  const Poly& as_poly() const { return std::get<Poly>(val_); }
  const FracVal& as_frac() const { return *std::get<std::shared_ptr<const FracVal>>(val_); }

  friend Elem operator+(const Elem& a, const Elem& b);
  friend Elem operator-(const Elem& a, const Elem& b);
  friend Elem operator*(const Elem& a, const Elem& b);
  Elem operator-() const;
  friend bool operator==(const Elem& a, const Elem& b);
  friend bool operator!=(const Elem& a, const Elem& b) { return !(a == b); }

  static Elem make(std::shared_ptr<const Ring::Rep> rep, Payload val) {
    Elem e;
    e.rep_ = std::move(rep);
    e.val_ = std::move(val);
    return e;
  }

 private:
  std::shared_ptr<const Ring::Rep> rep_;
  Payload val_;
};

struct FracVal {
  Elem num;
  Elem den;
};

std::optional<Elem> exact_div(const Elem& a, const Elem& b);
bool is_unit(const Elem& a);
std::string elem_to_string(const Elem& e);

namespace detail {

inline void require_same(const Elem& a, const Elem& b) {
  if (!a.ring().same(b.ring())) throw std::invalid_argument("ring mismatch");
}

// Build a normalized fraction over an already-validated fraction ring.
// Lowest terms, unit-normalized denominator (positive leading coefficient
// over Z / Z[x]; denominator 1 over a field).
inline Elem frac_make(const std::shared_ptr<const Ring::Rep>& rep, Elem num, Elem den) {
  if (den.is_zero()) throw std::domain_error("zero denominator");
  Ring base = Ring::wrap(rep->base);
  if (base.is_field()) {
    num = *exact_div(num, den);
    den = base.one();
  } else if (base.kind() == RingKind::Integers) {
    Int n = num.as_int(), d = den.as_int();
    Int g = int_gcd(n, d);
    if (g != 0) {
      n = int_divexact(n, g);
      d = int_divexact(d, g);
    }
    if (d < 0) {
      n = -n;
      d = -d;
    }
    num = Elem::make(rep->base, n);
    den = Elem::make(rep->base, d);
  } else if (base.kind() == RingKind::Polynomials) {
    const Poly& n = num.as_poly();
    const Poly& d = den.as_poly();
    Poly g = poly_gcd(n, d);
    Poly rn = n, rd = d;
    if (!g.is_zero() && !(g.is_constant() && g.constant_value() == 1)) {
      rn = *poly_divide_exact(n, g);
      rd = *poly_divide_exact(d, g);
    }
    if (rd.lead().c < 0) {
      rn = -rn;
      rd = -rd;
    }
    num = Elem::make(rep->base, std::move(rn));
    den = Elem::make(rep->base, std::move(rd));
  }
  auto fv = std::make_shared<FracVal>(FracVal{std::move(num), std::move(den)});
  return Elem::make(rep, Elem::Payload(std::move(fv)));
}

}  // namespace detail

inline bool Elem::is_zero() const {
  switch (rep_->kind) {
    case RingKind::Integers:
      return as_int() == 0;
    case RingKind::Rationals:
      return as_rat() == 0;
    case RingKind::IntegersModN:
    case RingKind::PrimeField:
      return as_int() == 0;
    case RingKind::Polynomials:
      return as_poly().is_zero();
    case RingKind::Fractions:
      return as_frac().num.is_zero();
  }
  return false;
}

inline bool Elem::is_one() const {
  switch (rep_->kind) {
    case RingKind::Integers:
      return as_int() == 1;
    case RingKind::Rationals:
      return as_rat() == 1;
    case RingKind::IntegersModN:
    case RingKind::PrimeField:
      return as_int() == 1 || (rep_->modulus == 1 && as_int() == 0);
    case RingKind::Polynomials:
      return as_poly().is_constant() && as_poly().constant_value() == 1;
    case RingKind::Fractions:
      return as_frac().num == as_frac().den;
  }
  return false;
}

inline Elem Ring::zero() const { return from_int(0); }
inline Elem Ring::one() const { return from_int(1); }

inline Elem Ring::from_int(const Int& v) const {
  switch (rep_->kind) {
    case RingKind::Integers:
      return Elem::make(rep_, v);
    case RingKind::Rationals:
      return Elem::make(rep_, Rat(v));
    case RingKind::IntegersModN:
    case RingKind::PrimeField:
      return Elem::make(rep_, int_mod(v, rep_->modulus));
    case RingKind::Polynomials:
      return Elem::make(rep_, Poly::constant(rep_->vars.size(), v));
    case RingKind::Fractions: {
      Ring b = base();
      return detail::frac_make(rep_, b.from_int(v), b.one());
    }
  }
  throw std::logic_error("from_int");
}

inline Elem Ring::var(const std::string& name) const {
  if (rep_->kind == RingKind::Polynomials) {
    for (std::size_t i = 0; i < rep_->vars.size(); ++i)
      if (rep_->vars[i] == name) return Elem::make(rep_, Poly::variable(rep_->vars.size(), i));
    throw std::invalid_argument("unknown variable: " + name);
  }
  if (rep_->kind == RingKind::Fractions) {
    Ring b = base();
    return detail::frac_make(rep_, b.var(name), b.one());
  }
  throw std::invalid_argument("ring has no variables");
}

inline Elem operator+(const Elem& a, const Elem& b) {
  detail::require_same(a, b);
  switch (a.kind()) {
    case RingKind::Integers:
      return Elem::make(a.rep(), Int(a.as_int() + b.as_int()));
    case RingKind::Rationals:
      return Elem::make(a.rep(), Rat(a.as_rat() + b.as_rat()));
    case RingKind::IntegersModN:
    case RingKind::PrimeField:
      return Elem::make(a.rep(), int_mod(a.as_int() + b.as_int(), a.rep()->modulus));
    case RingKind::Polynomials:
      return Elem::make(a.rep(), a.as_poly() + b.as_poly());
    case RingKind::Fractions: {
      const FracVal& x = a.as_frac();
      const FracVal& y = b.as_frac();
      return detail::frac_make(a.rep(), x.num * y.den + y.num * x.den, x.den * y.den);
    }
  }
  throw std::logic_error("add");
}

inline Elem operator-(const Elem& a, const Elem& b) { return a + (-b); }

inline Elem Elem::operator-() const {
  switch (kind()) {
    case RingKind::Integers:
      return Elem::make(rep_, Int(-as_int()));
    case RingKind::Rationals:
      return Elem::make(rep_, Rat(-as_rat()));
    case RingKind::IntegersModN:
    case RingKind::PrimeField:
      return Elem::make(rep_, int_mod(-as_int(), rep_->modulus));
    case RingKind::Polynomials:
      return Elem::make(rep_, -as_poly());
    case RingKind::Fractions: {
      const FracVal& x = as_frac();
      return detail::frac_make(rep_, -x.num, x.den);
    }
  }
  throw std::logic_error("neg");
}

inline Elem operator*(const Elem& a, const Elem& b) {
  detail::require_same(a, b);
  switch (a.kind()) {
    case RingKind::Integers:
      return Elem::make(a.rep(), Int(a.as_int() * b.as_int()));
    case RingKind::Rationals:
      return Elem::make(a.rep(), Rat(a.as_rat() * b.as_rat()));
    case RingKind::IntegersModN:
    case RingKind::PrimeField:
      return Elem::make(a.rep(), int_mod(a.as_int() * b.as_int(), a.rep()->modulus));
    case RingKind::Polynomials:
      return Elem::make(a.rep(), a.as_poly() * b.as_poly());
    case RingKind::Fractions: {
      const FracVal& x = a.as_frac();
      const FracVal& y = b.as_frac();
      return detail::frac_make(a.rep(), x.num * y.num, x.den * y.den);
    }
  }
  throw std::logic_error("mul");
}

inline bool operator==(const Elem& a, const Elem& b) {
  detail::require_same(a, b);
  switch (a.kind()) {
    case RingKind::Integers:
    case RingKind::IntegersModN:
    case RingKind::PrimeField:
      return a.as_int() == b.as_int();
    case RingKind::Rationals:
      return a.as_rat() == b.as_rat();
    case RingKind::Polynomials:
      return a.as_poly() == b.as_poly();
    case RingKind::Fractions:
      // Canonical forms make structural comparison sound.
      return a.as_frac().num == b.as_frac().num && a.as_frac().den == b.as_frac().den;
  }
  return false;
}

inline Elem elem_pow(const Elem& a, unsigned long e) {
  Elem r = a.ring().one();
  Elem base = a;
  while (e > 0) {
    if (e & 1) r = r * base;
    base = base * base;
    e >>= 1;
  }
  return r;
}

// Exact division: the unique q with q*b == a, when it exists.
//  - throws std::domain_error when b == 0
//  - nullopt when no (unique) quotient exists: nondivisible over Z / Z[x],
//    or a non-unit denominator in Z/n (where quotients are ambiguous).
inline std::optional<Elem> exact_div(const Elem& a, const Elem& b) {
  detail::require_same(a, b);
  if (b.is_zero()) throw std::domain_error("exact_div: division by zero");
  switch (a.kind()) {
    case RingKind::Integers: {
      if (!int_divides(b.as_int(), a.as_int())) return std::nullopt;
      return Elem::make(a.rep(), int_divexact(a.as_int(), b.as_int()));
    }
    case RingKind::Rationals:
      return Elem::make(a.rep(), Rat(a.as_rat() / b.as_rat()));
    case RingKind::PrimeField: {
      Int inv;
      int_invert(inv, b.as_int(), a.rep()->modulus);
      return Elem::make(a.rep(), int_mod(a.as_int() * inv, a.rep()->modulus));
    }
    case RingKind::IntegersModN: {
      Int inv;
      if (!int_invert(inv, b.as_int(), a.rep()->modulus)) return std::nullopt;
      return Elem::make(a.rep(), int_mod(a.as_int() * inv, a.rep()->modulus));
    }
    case RingKind::Polynomials: {
      std::optional<Poly> q = poly_divide_exact(a.as_poly(), b.as_poly());
      if (!q) return std::nullopt;
      return Elem::make(a.rep(), std::move(*q));
    }
    case RingKind::Fractions: {
      const FracVal& x = a.as_frac();
      const FracVal& y = b.as_frac();
      return detail::frac_make(a.rep(), x.num * y.den, x.den * y.num);
    }
  }
  return std::nullopt;
}

// Zero divisors, with zero itself included: exactly the elements that are
// never legal exact-division denominators in the sequence semantics.
inline bool is_zero_divisor(const Elem& a) {
  if (a.kind() == RingKind::IntegersModN)
    return a.is_zero() || int_gcd(a.as_int(), a.rep()->modulus) != 1;
  return a.is_zero();
}

inline bool is_unit(const Elem& a) {
  switch (a.kind()) {
    case RingKind::Integers:
      return a.as_int() == 1 || a.as_int() == -1;
    case RingKind::Rationals:
    case RingKind::PrimeField:
    case RingKind::Fractions:
      return !a.is_zero();
    case RingKind::IntegersModN:
      return int_gcd(a.as_int(), a.rep()->modulus) == 1;
    case RingKind::Polynomials: {
      const Poly& p = a.as_poly();
      return p.is_constant() && (p.constant_value() == 1 || p.constant_value() == -1);
    }
  }
  return false;
}

inline std::string elem_to_string(const Elem& e) {
  switch (e.kind()) {
    case RingKind::Integers:
    case RingKind::IntegersModN:
    case RingKind::PrimeField:
      return int_str(e.as_int());
    case RingKind::Rationals:
      return e.as_rat().get_str();
    case RingKind::Polynomials:
      return poly_to_string(e.as_poly(), e.rep()->vars);
    case RingKind::Fractions: {
      const FracVal& f = e.as_frac();
      std::string n = elem_to_string(f.num);
      if (f.den.is_one()) return n;
      return "(" + n + ")/(" + elem_to_string(f.den) + ")";
    }
  }
  return "?";
}

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

// Strip layers of redundant outer parentheses: "((x))" -> "x".
inline std::string strip_outer_parens(std::string s) {
  s = trim(s);
  while (s.size() >= 2 && s.front() == '(' && s.back() == ')') {
    int depth = 0;
    bool wraps = true;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '(') ++depth;
      if (s[i] == ')') {
        --depth;
        if (depth == 0 && i + 1 != s.size()) {
          wraps = false;
          break;
        }
      }
    }
    if (!wraps) break;
    s = trim(s.substr(1, s.size() - 2));
  }
  return s;
}

// Split at the last top-level '/': fractions print as "(num)/(den)".
inline bool split_top_slash(const std::string& s, std::string& lhs, std::string& rhs) {
  int depth = 0;
  std::size_t at = std::string::npos;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == '/' && depth == 0) at = i;
  }
  if (at == std::string::npos) return false;
  lhs = s.substr(0, at);
  rhs = s.substr(at + 1);
  return true;
}

}  // namespace detail

inline Elem Ring::parse(const std::string& text) const {
  std::string s = detail::trim(text);
  switch (rep_->kind) {
    case RingKind::Integers:
      return Elem::make(rep_, parse_int(s));
    case RingKind::Rationals: {
      std::string n, d;
      if (detail::split_top_slash(s, n, d)) {
        Int dv = parse_int(detail::trim(d));
        if (dv == 0) throw std::invalid_argument("rational with zero denominator");
        Rat q(parse_int(detail::trim(n)), dv);
        q.canonicalize();
        return Elem::make(rep_, q);
      }
      return Elem::make(rep_, Rat(parse_int(s)));
    }
    case RingKind::IntegersModN:
    case RingKind::PrimeField:
      return from_int(parse_int(s));
    case RingKind::Polynomials:
      return Elem::make(rep_, poly_parse(s, rep_->vars));
    case RingKind::Fractions: {
      std::string n, d;
      Ring b = base();
      if (detail::split_top_slash(s, n, d)) {
        Elem num = b.parse(detail::strip_outer_parens(n));
        Elem den = b.parse(detail::strip_outer_parens(d));
        return detail::frac_make(rep_, std::move(num), std::move(den));
      }
      return detail::frac_make(rep_, b.parse(detail::strip_outer_parens(s)), b.one());
    }
  }
  throw std::logic_error("parse");
}

inline Ring Ring::parse_description(const std::string& text) {
  std::string s = detail::trim(text);
  if (s == "Z") return integers();
  if (s == "Q") return rationals();
  if (s.rfind("Zmod:", 0) == 0) return integers_mod(parse_int(s.substr(5)));
  if (s.rfind("Fp:", 0) == 0) return prime_field(parse_int(s.substr(3)));
  if (s.rfind("Frac:", 0) == 0) return fraction_field(parse_description(s.substr(5)));
  if (s.rfind("Poly:Z[", 0) == 0 && s.back() == ']') {
    std::string body = s.substr(7, s.size() - 8);
    std::vector<std::string> vars;
    std::size_t pos = 0;
    while (pos <= body.size()) {
      std::size_t c = body.find(',', pos);
      if (c == std::string::npos) {
        vars.push_back(detail::trim(body.substr(pos)));
        break;
      }
      vars.push_back(detail::trim(body.substr(pos, c - pos)));
      pos = c + 1;
    }
    for (const std::string& v : vars)
      if (v.empty()) throw std::invalid_argument("empty variable name in ring description");
    return multi_poly(std::move(vars));
  }
  throw std::invalid_argument("unknown ring description: " + s);
}

// Substitution homomorphism Z[x1..xk] -> R (or its fraction field into R,
// when the specialized denominator divides exactly).  nullopt when a
// denominator maps to zero or the division fails.
inline std::optional<Elem> specialize(const Elem& e, const Ring& target,
                                      const std::map<std::string, Elem>& assign) {
  if (e.kind() == RingKind::Polynomials) {
    const std::vector<std::string>& vars = e.rep()->vars;
    std::vector<const Elem*> images(vars.size());
    for (std::size_t i = 0; i < vars.size(); ++i) {
      auto it = assign.find(vars[i]);
      if (it == assign.end()) throw std::invalid_argument("missing assignment for " + vars[i]);
      if (!it->second.ring().same(target)) throw std::invalid_argument("assignment ring mismatch");
      images[i] = &it->second;
    }
    Elem acc = target.zero();
    for (const Poly::Term& t : e.as_poly().terms()) {
      Elem term = target.from_int(t.c);
      for (std::size_t i = 0; i < vars.size(); ++i)
        if (t.e[i] > 0) term = term * elem_pow(*images[i], t.e[i]);
      acc = acc + term;
    }
    return acc;
  }
  if (e.kind() == RingKind::Fractions) {
    std::optional<Elem> num = specialize(e.as_frac().num, target, assign);
    std::optional<Elem> den = specialize(e.as_frac().den, target, assign);
    if (!num || !den) return std::nullopt;
    if (den->is_zero()) return std::nullopt;
    return exact_div(*num, *den);
  }
  throw std::invalid_argument("specialize: element is not polynomial-valued");
}

}  // namespace eds
