#pragma once

#include <algorithm>
#include <functional>
#include <initializer_list>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "eds/relation.hpp"

namespace eds {

enum class SeqKind { EvenOdd, Somos4, StdEDS, ES, Dilation, Contraction, Explicit, ZeroExtended };

inline const char* seq_kind_name(SeqKind k) {
  switch (k) {
    case SeqKind::EvenOdd: return "EvenOdd";
    case SeqKind::Somos4: return "Somos4";
    case SeqKind::StdEDS: return "StdEDS";
    case SeqKind::ES: return "ES";
    case SeqKind::Dilation: return "Dilation";
    case SeqKind::Contraction: return "Contraction";
    case SeqKind::Explicit: return "Explicit";
    case SeqKind::ZeroExtended: return "ZeroExtended";
  }
  return "?";
}

enum class FailureReason { ZeroDivisorDenominator, DivisionFailure, PreconditionViolated };

inline const char* failure_reason_name(FailureReason r) {
  switch (r) {
    case FailureReason::ZeroDivisorDenominator: return "ZeroDivisorDenominator";
    case FailureReason::DivisionFailure: return "DivisionFailure";
    case FailureReason::PreconditionViolated: return "PreconditionViolated";
  }
  return "?";
}

// A term that could not be produced. index is the least index in the causal
// chain of the request that is itself unproducible; later terms can still
// exist when a zero factor makes the failed value irrelevant.
struct GenerationFailure {
  long long index = 0;
  FailureReason reason = FailureReason::DivisionFailure;

  friend bool operator==(const GenerationFailure& a, const GenerationFailure& b) {
    return a.index == b.index && a.reason == b.reason;
  }
  friend bool operator!=(const GenerationFailure& a, const GenerationFailure& b) {
    return !(a == b);
  }
};

class TermResult {
 public:
  static TermResult of(Elem v) {
    TermResult r;
    r.value_ = std::move(v);
    return r;
  }
  static TermResult failed(GenerationFailure f) {
    TermResult r;
    r.fail_ = f;
    return r;
  }

  bool ok() const { return value_.has_value(); }
  const Elem& value() const {
    if (!value_) throw std::logic_error("TermResult: no value");
    return *value_;
  }
  const GenerationFailure& failure() const {
    if (value_) throw std::logic_error("TermResult: no failure");
    return *fail_;
  }

 private:
  std::optional<Elem> value_;
  std::optional<GenerationFailure> fail_;
};

namespace detail {
struct SeqImpl;
}

class EllipticSeq {
 public:
  static EllipticSeq even_odd(const Elem& h1, const Elem& h2, const Elem& h3, const Elem& h4);
  static EllipticSeq somos4(const Elem& h1, const Elem& h2, const Elem& h3, const Elem& h4);
  static EllipticSeq std_eds(const Elem& b, const Elem& c, const Elem& d);
  static EllipticSeq es(long long r, long long s, const Elem& A, const Elem& B, const Elem& D);
  static EllipticSeq dilation(const EllipticSeq& base, long long ell);
  // No parity check; only for constructions that are proven to stay elliptic
  // (an even dilation of a generic sequence is not).
  static EllipticSeq dilation_unchecked(const EllipticSeq& base, long long ell);
  static EllipticSeq contraction(const EllipticSeq& base, long long ell);
  static EllipticSeq explicit_fn(const Ring& ring, std::function<TermResult(long long)> fn,
                                 std::string name);
  static EllipticSeq explicit_list(const Ring& ring, std::vector<Elem> terms);
  static EllipticSeq zero_extended(const EllipticSeq& base);
  static EllipticSeq scaled(const EllipticSeq& base, const Elem& factor);

  Ring ring() const;
  SeqKind kind() const;
  const std::string& describe() const;
  // Whether the generator's own definition covers negative indices (closed
  // forms do); otherwise term(-n) = -term(n) is supplied by this wrapper.
  bool native_negative() const;
  // EvenOdd only: the recorded one-time check that h2*h1 is not a zero divisor.
  std::optional<bool> recorded_nzd() const;

  TermResult term(long long n) const;
  // Value or throws std::runtime_error describing the generation failure.
  Elem at(long long n) const;
  // StdEDS only: the division-free pre-normalized table (even terms carry one
  // factor of b less than the sequence itself), extended oddly.
  Elem std_eds_pre_norm(long long n) const;

 private:
  explicit EllipticSeq(std::shared_ptr<detail::SeqImpl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<detail::SeqImpl> impl_;
};

namespace detail {

struct SeqImpl {
  Ring ring;
  SeqKind kind;
  std::string desc;
  bool native_negative = false;

  // EvenOdd / Somos4: init h1..h4 seeds memo[1..4].
  std::vector<Elem> init;
  std::optional<bool> nzd_recorded;

  // StdEDS parameters (b = h2, c = pre-norm h3, d = pre-norm h4) and b^4.
  std::optional<Elem> b, c, d, b4;

  // ES parameters.
  long long r = 0, s = 0;
  std::optional<Elem> A, B, D;

  // Wrappers.
  std::optional<EllipticSeq> base;
  long long ell = 1;
  std::function<TermResult(long long)> fn;

  mutable std::mutex mu;
  mutable std::map<long long, TermResult> memo;
  mutable long long next_fill = 5;
  mutable std::vector<Elem> pre;  // StdEDS pre-norm table, pre[n] for n >= 0

  explicit SeqImpl(Ring rg, SeqKind k) : ring(std::move(rg)), kind(k) {}
};

inline GenerationFailure earlier_failure(const GenerationFailure& a, const GenerationFailure& b) {
  return b.index < a.index ? b : a;
}

// Product of term results. A factor that evaluated to zero forces the product
// to zero even when other factors failed; otherwise the least-index failure
// among the factors wins.
inline TermResult res_mul(const Ring& ring, std::initializer_list<TermResult> factors) {
  for (const TermResult& f : factors)
    if (f.ok() && f.value().is_zero()) return TermResult::of(ring.zero());
  std::optional<GenerationFailure> worst;
  for (const TermResult& f : factors)
    if (!f.ok()) worst = worst ? earlier_failure(*worst, f.failure()) : f.failure();
  if (worst) return TermResult::failed(*worst);
  Elem p = ring.one();
  for (const TermResult& f : factors) p = p * f.value();
  return TermResult::of(p);
}

inline TermResult res_pow(const Ring& ring, const TermResult& a, unsigned long e) {
  if (e == 0) return TermResult::of(ring.one());
  if (!a.ok()) return a;
  return TermResult::of(elem_pow(a.value(), e));
}

// Sums have no tolerance: every addend must exist.
inline TermResult res_add(const TermResult& a, const TermResult& b) {
  if (a.ok() && b.ok()) return TermResult::of(a.value() + b.value());
  if (!a.ok() && !b.ok()) return TermResult::failed(earlier_failure(a.failure(), b.failure()));
  return a.ok() ? b : a;
}

inline TermResult res_sub(const TermResult& a, const TermResult& b) {
  if (a.ok() && b.ok()) return TermResult::of(a.value() - b.value());
  if (!a.ok() && !b.ok()) return TermResult::failed(earlier_failure(a.failure(), b.failure()));
  return a.ok() ? b : a;
}

// Exact division at a given sequence index. Ambiguous quotients (zero-divisor
// denominators) and inexact divisions are distinct failure reasons.
inline TermResult res_div(const TermResult& num, const TermResult& den, long long at) {
  if (!num.ok() || !den.ok()) {
    if (!num.ok() && !den.ok())
      return TermResult::failed(earlier_failure(num.failure(), den.failure()));
    return num.ok() ? den : num;
  }
  if (den.value().is_zero())
    return TermResult::failed({at, FailureReason::ZeroDivisorDenominator});
  std::optional<Elem> q = exact_div(num.value(), den.value());
  if (!q) {
    FailureReason why = is_zero_divisor(den.value()) ? FailureReason::ZeroDivisorDenominator
                                                     : FailureReason::DivisionFailure;
    return TermResult::failed({at, why});
  }
  return TermResult::of(*q);
}

inline void fill_even_odd(const SeqImpl& im, long long n) {
  const Elem& h1 = im.init[0];
  const Elem& h2 = im.init[1];
  for (long long m = im.next_fill; m <= n; ++m) {
    TermResult num, den;
    if (m % 2 == 1) {
      long long k = (m - 1) / 2;
      num = res_sub(res_mul(im.ring, {im.memo.at(k + 2), res_pow(im.ring, im.memo.at(k), 3)}),
                    res_mul(im.ring, {im.memo.at(k - 1), res_pow(im.ring, im.memo.at(k + 1), 3)}));
      den = TermResult::of(h1 * h1 * h1);
    } else {
      long long k = m / 2;
      TermResult inner =
          res_sub(res_mul(im.ring, {im.memo.at(k + 2), res_pow(im.ring, im.memo.at(k - 1), 2)}),
                  res_mul(im.ring, {res_pow(im.ring, im.memo.at(k + 1), 2), im.memo.at(k - 2)}));
      num = res_mul(im.ring, {im.memo.at(k), inner});
      den = TermResult::of(h2 * h1 * h1);
    }
    im.memo.emplace(m, res_div(num, den, m));
  }
  if (n + 1 > im.next_fill) im.next_fill = n + 1;
}

inline void fill_somos4(const SeqImpl& im, long long n) {
  const Elem& h1 = im.init[0];
  const Elem& h2 = im.init[1];
  const Elem& h3 = im.init[2];
  for (long long m = im.next_fill; m <= n; ++m) {
    TermResult num =
        res_sub(res_mul(im.ring, {TermResult::of(h2 * h2), im.memo.at(m - 1), im.memo.at(m - 3)}),
                res_mul(im.ring, {TermResult::of(h3 * h1), res_pow(im.ring, im.memo.at(m - 2), 2)}));
    TermResult den = res_mul(im.ring, {im.memo.at(m - 4), TermResult::of(h1 * h1)});
    im.memo.emplace(m, res_div(num, den, m));
  }
  if (n + 1 > im.next_fill) im.next_fill = n + 1;
}

inline void fill_pre_norm(const SeqImpl& im, long long n) {
  std::vector<Elem>& p = im.pre;
  if (p.empty()) {
    p.push_back(im.ring.zero());
    p.push_back(im.ring.one());
    p.push_back(im.ring.one());
    p.push_back(*im.c);
    p.push_back(*im.d);
  }
  const Elem& b4 = *im.b4;
  while (static_cast<long long>(p.size()) <= n) {
    long long m = static_cast<long long>(p.size());
    Elem v = im.ring.zero();
    if (m % 2 == 0) {
      long long k = m / 2;
      v = p[k] * (p[k + 2] * p[k - 1] * p[k - 1] - p[k + 1] * p[k + 1] * p[k - 2]);
    } else {
      long long k = (m - 1) / 2;
      Elem t1 = p[k + 2] * p[k] * p[k] * p[k];
      Elem t2 = p[k - 1] * p[k + 1] * p[k + 1] * p[k + 1];
      v = (k % 2 == 0) ? (b4 * t1 - t2) : (t1 - b4 * t2);
    }
    p.push_back(std::move(v));
  }
}

inline TermResult seq_term_pos(const SeqImpl& im, long long n) {
  switch (im.kind) {
    case SeqKind::EvenOdd: {
      std::lock_guard<std::mutex> guard(im.mu);
      fill_even_odd(im, n);
      return im.memo.at(n);
    }
    case SeqKind::Somos4: {
      std::lock_guard<std::mutex> guard(im.mu);
      fill_somos4(im, n);
      return im.memo.at(n);
    }
    case SeqKind::StdEDS: {
      std::lock_guard<std::mutex> guard(im.mu);
      fill_pre_norm(im, n);
      if (n % 2 == 1) return TermResult::of(im.pre[n]);
      return TermResult::of(*im.b * im.pre[n]);
    }
    case SeqKind::ES: {
      long long period = im.r + im.s;
      long long eb = 0, ed = 0;
      int sign = 0;
      if ((n - im.r) % period == 0 && n >= im.r) {
        long long k = (n - im.r) / period;
        sign = 1;
        eb = k * (k - 1) / 2;
        ed = k * (k + 1) / 2;
      } else if ((n + im.r) % period == 0) {
        long long k = (n + im.r) / period;
        sign = -1;
        eb = k * (k + 1) / 2;
        ed = k * (k - 1) / 2;
      }
      if (sign == 0) return TermResult::of(im.ring.zero());
      Elem v = *im.A * elem_pow(*im.B, static_cast<unsigned long>(eb)) *
               elem_pow(*im.D, static_cast<unsigned long>(ed));
      return TermResult::of(sign > 0 ? v : -v);
    }
    case SeqKind::Dilation: {
      if (n % im.ell != 0) return TermResult::of(im.ring.zero());
      TermResult r = im.base->term(n / im.ell);
      if (r.ok()) return r;
      return TermResult::failed({r.failure().index * im.ell, r.failure().reason});
    }
    case SeqKind::Contraction: {
      TermResult r = im.base->term(n * im.ell);
      if (r.ok()) return r;
      return TermResult::failed({n, r.failure().reason});
    }
    case SeqKind::ZeroExtended:
      return im.base->term(n);
    case SeqKind::Explicit:
      return im.fn(n);
  }
  throw std::logic_error("seq_term_pos");
}

inline void require_seq_elems(const Ring& ring, std::initializer_list<const Elem*> es) {
  for (const Elem* e : es)
    if (!e->ring().same(ring)) throw std::invalid_argument("sequence parameters: ring mismatch");
}

}  // namespace detail

inline Ring EllipticSeq::ring() const { return impl_->ring; }
inline SeqKind EllipticSeq::kind() const { return impl_->kind; }
inline const std::string& EllipticSeq::describe() const { return impl_->desc; }
inline bool EllipticSeq::native_negative() const { return impl_->native_negative; }
inline std::optional<bool> EllipticSeq::recorded_nzd() const { return impl_->nzd_recorded; }

inline TermResult EllipticSeq::term(long long n) const {
  if (n == 0) return TermResult::of(impl_->ring.zero());
  TermResult r = detail::seq_term_pos(*impl_, n < 0 ? -n : n);
  if (n > 0 || !r.ok()) return r;
  return TermResult::of(-r.value());
}

inline Elem EllipticSeq::at(long long n) const {
  TermResult r = term(n);
  if (!r.ok())
    throw std::runtime_error(std::string("sequence term unavailable at index ") +
                             std::to_string(r.failure().index) + " (" +
                             failure_reason_name(r.failure().reason) + ")");
  return r.value();
}

inline Elem EllipticSeq::std_eds_pre_norm(long long n) const {
  if (impl_->kind != SeqKind::StdEDS)
    throw std::logic_error("std_eds_pre_norm: not a standard EDS");
  if (n == 0) return impl_->ring.zero();
  long long a = n < 0 ? -n : n;
  std::lock_guard<std::mutex> guard(impl_->mu);
  detail::fill_pre_norm(*impl_, a);
  return n > 0 ? impl_->pre[a] : -impl_->pre[a];
}

inline EllipticSeq EllipticSeq::even_odd(const Elem& h1, const Elem& h2, const Elem& h3,
                                         const Elem& h4) {
  Ring ring = h1.ring();
  detail::require_seq_elems(ring, {&h2, &h3, &h4});
  auto im = std::make_shared<detail::SeqImpl>(ring, SeqKind::EvenOdd);
  im->init = {h1, h2, h3, h4};
  im->nzd_recorded = !is_zero_divisor(h2 * h1);
  for (int i = 0; i < 4; ++i) im->memo.emplace(i + 1, TermResult::of(im->init[i]));
  im->desc = "EvenOdd(" + elem_to_string(h1) + ", " + elem_to_string(h2) + ", " +
             elem_to_string(h3) + ", " + elem_to_string(h4) + ")";
  return EllipticSeq(std::move(im));
}

inline EllipticSeq EllipticSeq::somos4(const Elem& h1, const Elem& h2, const Elem& h3,
                                       const Elem& h4) {
  Ring ring = h1.ring();
  detail::require_seq_elems(ring, {&h2, &h3, &h4});
  auto im = std::make_shared<detail::SeqImpl>(ring, SeqKind::Somos4);
  im->init = {h1, h2, h3, h4};
  for (int i = 0; i < 4; ++i) im->memo.emplace(i + 1, TermResult::of(im->init[i]));
  im->desc = "Somos4(" + elem_to_string(h1) + ", " + elem_to_string(h2) + ", " +
             elem_to_string(h3) + ", " + elem_to_string(h4) + ")";
  return EllipticSeq(std::move(im));
}

inline EllipticSeq EllipticSeq::std_eds(const Elem& b, const Elem& c, const Elem& d) {
  Ring ring = b.ring();
  detail::require_seq_elems(ring, {&c, &d});
  auto im = std::make_shared<detail::SeqImpl>(ring, SeqKind::StdEDS);
  im->b = b;
  im->c = c;
  im->d = d;
  im->b4 = b * b * b * b;
  im->native_negative = true;
  im->desc = "StdEDS(" + elem_to_string(b) + ", " + elem_to_string(c) + ", " + elem_to_string(d) +
             ")";
  return EllipticSeq(std::move(im));
}

inline EllipticSeq EllipticSeq::es(long long r, long long s, const Elem& A, const Elem& B,
                                   const Elem& D) {
  if (r < 1 || s < 1 || r >= s || (r + s) % 2 == 0)
    throw std::invalid_argument("es: need 0 < r < s of opposite parity");
  Ring ring = A.ring();
  detail::require_seq_elems(ring, {&B, &D});
  auto im = std::make_shared<detail::SeqImpl>(ring, SeqKind::ES);
  im->r = r;
  im->s = s;
  im->A = A;
  im->B = B;
  im->D = D;
  im->native_negative = true;
  im->desc = "ES(r=" + std::to_string(r) + ", s=" + std::to_string(s) + "; " + elem_to_string(A) +
             ", " + elem_to_string(B) + ", " + elem_to_string(D) + ")";
  return EllipticSeq(std::move(im));
}

inline EllipticSeq EllipticSeq::dilation_unchecked(const EllipticSeq& base, long long ell) {
  if (ell < 1) throw std::invalid_argument("dilation: factor must be positive");
  auto im = std::make_shared<detail::SeqImpl>(base.ring(), SeqKind::Dilation);
  im->base = base;
  im->ell = ell;
  im->native_negative = base.native_negative();
  im->desc = "Dilation(l=" + std::to_string(ell) + ", " + base.describe() + ")";
  return EllipticSeq(std::move(im));
}

inline EllipticSeq EllipticSeq::dilation(const EllipticSeq& base, long long ell) {
  if (ell % 2 == 0) throw std::invalid_argument("dilation: factor must be odd");
  return dilation_unchecked(base, ell);
}

inline EllipticSeq EllipticSeq::contraction(const EllipticSeq& base, long long ell) {
  if (ell < 1) throw std::invalid_argument("contraction: factor must be positive");
  auto im = std::make_shared<detail::SeqImpl>(base.ring(), SeqKind::Contraction);
  im->base = base;
  im->ell = ell;
  im->native_negative = base.native_negative();
  im->desc = "Contraction(l=" + std::to_string(ell) + ", " + base.describe() + ")";
  return EllipticSeq(std::move(im));
}

inline EllipticSeq EllipticSeq::explicit_fn(const Ring& ring,
                                            std::function<TermResult(long long)> fn,
                                            std::string name) {
  auto im = std::make_shared<detail::SeqImpl>(ring, SeqKind::Explicit);
  im->fn = std::move(fn);
  im->desc = name.empty() ? std::string("Explicit") : std::move(name);
  return EllipticSeq(std::move(im));
}

inline EllipticSeq EllipticSeq::explicit_list(const Ring& ring, std::vector<Elem> terms) {
  for (const Elem& t : terms)
    if (!t.ring().same(ring)) throw std::invalid_argument("explicit_list: ring mismatch");
  auto shared = std::make_shared<std::vector<Elem>>(std::move(terms));
  std::string name = "Explicit(" + std::to_string(shared->size()) + " terms)";
  return explicit_fn(
      ring,
      [shared](long long n) -> TermResult {
        if (n < 1 || n > static_cast<long long>(shared->size()))
          return TermResult::failed({n, FailureReason::PreconditionViolated});
        return TermResult::of((*shared)[static_cast<std::size_t>(n - 1)]);
      },
      std::move(name));
}

inline EllipticSeq EllipticSeq::zero_extended(const EllipticSeq& base) {
  auto im = std::make_shared<detail::SeqImpl>(base.ring(), SeqKind::ZeroExtended);
  im->base = base;
  im->desc = "ZeroExtended(" + base.describe() + ")";
  return EllipticSeq(std::move(im));
}

inline EllipticSeq EllipticSeq::scaled(const EllipticSeq& base, const Elem& factor) {
  if (!factor.ring().same(base.ring())) throw std::invalid_argument("scaled: ring mismatch");
  std::string name = "Scaled(" + elem_to_string(factor) + ", " + base.describe() + ")";
  return explicit_fn(
      base.ring(),
      [base, factor](long long n) -> TermResult {
        TermResult r = base.term(n);
        if (!r.ok()) return r;
        return TermResult::of(factor * r.value());
      },
      std::move(name));
}

inline EllipticSeq gen_even_odd(const Elem& h1, const Elem& h2, const Elem& h3, const Elem& h4) {
  return EllipticSeq::even_odd(h1, h2, h3, h4);
}
inline EllipticSeq gen_somos4(const Elem& h1, const Elem& h2, const Elem& h3, const Elem& h4) {
  return EllipticSeq::somos4(h1, h2, h3, h4);
}
inline EllipticSeq gen_std_eds(const Elem& b, const Elem& c, const Elem& d) {
  return EllipticSeq::std_eds(b, c, d);
}
inline EllipticSeq gen_es(long long r, long long s, const Elem& A, const Elem& B, const Elem& D) {
  return EllipticSeq::es(r, s, A, B, D);
}
inline EllipticSeq dilate(const EllipticSeq& seq, long long ell) {
  return EllipticSeq::dilation(seq, ell);
}
inline EllipticSeq contract(const EllipticSeq& seq, long long ell) {
  return EllipticSeq::contraction(seq, ell);
}

// Defect of E(a,b,c,d) evaluated on a sequence, with the product tolerance of
// res_mul: a relation can be decided even when an irrelevant term failed.
inline TermResult eval_relation(const EllipticSeq& seq, const RelationId& id) {
  if (!id.valid()) throw std::invalid_argument("eval_relation: invalid relation id");
  auto ti = id.term_indices();
  Ring ring = seq.ring();
  std::array<TermResult, 3> prod;
  for (int j = 0; j < 3; ++j)
    prod[j] = detail::res_mul(
        ring, {seq.term(ti[j][0]), seq.term(ti[j][1]), seq.term(ti[j][2]), seq.term(ti[j][3])});
  return detail::res_add(detail::res_sub(prod[0], prod[1]), prod[2]);
}

enum class RelationFamily { Full, MNR0, MN10, EvenOdd, Somos };

inline const char* relation_family_name(RelationFamily f) {
  switch (f) {
    case RelationFamily::Full: return "Full";
    case RelationFamily::MNR0: return "MNR0";
    case RelationFamily::MN10: return "MN10";
    case RelationFamily::EvenOdd: return "EvenOdd";
    case RelationFamily::Somos: return "Somos";
  }
  return "?";
}

// All relations of the family whose largest composite index a+b is at most N,
// ordered by (a+b, a, b, c). Full covers both integer and half-integer
// parameter quadruples.
inline std::vector<RelationId> family_relations(long long N, RelationFamily family) {
  std::vector<RelationId> out;
  switch (family) {
    case RelationFamily::Full: {
      for (long long parity = 0; parity <= 1; ++parity)
        for (long long d2 = parity; d2 <= 2 * N; d2 += 2)
          for (long long c2 = d2 + 2; c2 <= 2 * N; c2 += 2)
            for (long long b2 = c2 + 2; 2 * b2 + 2 <= 2 * N; b2 += 2)
              for (long long a2 = b2 + 2; a2 + b2 <= 2 * N; a2 += 2)
                out.push_back(RelationId::from_doubled(a2, b2, c2, d2));
      break;
    }
    case RelationFamily::MNR0: {
      for (long long m = 3; m <= N; ++m)
        for (long long n = 2; n < m && m + n <= N; ++n)
          for (long long r = 1; r < n; ++r)
            out.push_back(RelationId::from_integers(m, n, r, 0));
      break;
    }
    case RelationFamily::MN10: {
      for (long long m = 3; m <= N; ++m)
        for (long long n = 2; n < m && m + n <= N; ++n)
          out.push_back(RelationId::from_integers(m, n, 1, 0));
      break;
    }
    case RelationFamily::EvenOdd: {
      for (long long n = 2; 2 * n + 1 <= N; ++n)
        out.push_back(RelationId::from_integers(n + 1, n, 1, 0));
      for (long long n = 3; 2 * n <= N; ++n)
        out.push_back(RelationId::from_integers(n + 1, n - 1, 1, 0));
      break;
    }
    case RelationFamily::Somos: {
      for (long long n = 3; n + 2 <= N; ++n)
        out.push_back(RelationId::from_integers(n, 2, 1, 0));
      break;
    }
  }
  std::sort(out.begin(), out.end(), [](const RelationId& x, const RelationId& y) {
    return std::make_tuple(x.a2 + x.b2, x.a2, x.b2, x.c2) <
           std::make_tuple(y.a2 + y.b2, y.a2, y.b2, y.c2);
  });
  return out;
}

struct WindowReport {
  std::vector<RelationId> violations;
  std::optional<GenerationFailure> failure;

  bool clean() const { return violations.empty() && !failure.has_value(); }
};

inline WindowReport check_window(const EllipticSeq& seq, long long N, RelationFamily family) {
  WindowReport report;
  for (const RelationId& id : family_relations(N, family)) {
    TermResult defect = eval_relation(seq, id);
    if (!defect.ok()) {
      report.failure = defect.failure();
      return report;
    }
    if (!defect.value().is_zero()) report.violations.push_back(id);
  }
  return report;
}

// Translation-invariant cross product: N(n,s) D(m,s) = D(n,s) N(m,s) on any
// elliptic sequence, where N(n,s) = h_s^2 (h_{n+2s} h_{n-s}^2 + h_{n+s}^2 h_{n-2s})
// + h_{2s}^2 h_n^3 and D(n,s) = h_{n+s} h_n h_{n-s}.
inline TermResult somos_invariant_numerator(const EllipticSeq& h, long long n, long long s) {
  Ring ring = h.ring();
  auto p2 = [&](long long i) { return detail::res_pow(ring, h.term(i), 2); };
  TermResult inner = detail::res_add(
      detail::res_mul(ring, {h.term(n + 2 * s), p2(n - s)}),
      detail::res_mul(ring, {p2(n + s), h.term(n - 2 * s)}));
  return detail::res_add(detail::res_mul(ring, {p2(s), inner}),
                         detail::res_mul(ring, {p2(2 * s), detail::res_pow(ring, h.term(n), 3)}));
}

inline TermResult somos_invariant_denominator(const EllipticSeq& h, long long n, long long s) {
  return detail::res_mul(h.ring(), {h.term(n + s), h.term(n), h.term(n - s)});
}

struct DeterminismReport {
  bool precondition_ok = false;
  std::string note;  // which hypothesis failed, when !precondition_ok
  bool agree = false;
  long long first_disagreement = -1;

  bool holds() const { return precondition_ok && agree; }
};

namespace detail {

inline bool terms_equal_checked(const EllipticSeq& h, const EllipticSeq& hp, long long n,
                                std::string& note) {
  TermResult a = h.term(n), b = hp.term(n);
  if (!a.ok() || !b.ok()) {
    note = "term " + std::to_string(n) + " unavailable";
    return false;
  }
  if (a.value() != b.value()) {
    note = "sequences differ at index " + std::to_string(n);
    return false;
  }
  return true;
}

inline bool relation_holds_checked(const EllipticSeq& h, const RelationId& id, std::string& note) {
  TermResult defect = eval_relation(h, id);
  if (!defect.ok()) {
    note = "relation " + relation_to_string(id) + " not evaluable (term " +
           std::to_string(defect.failure().index) + ")";
    return false;
  }
  if (!defect.value().is_zero()) {
    note = "relation " + relation_to_string(id) + " violated";
    return false;
  }
  return true;
}

inline void determinism_compare(const EllipticSeq& h, const EllipticSeq& hp, long long upto,
                                DeterminismReport& report) {
  report.precondition_ok = true;
  report.agree = true;
  for (long long n = 1; n <= upto; ++n) {
    TermResult a = h.term(n), b = hp.term(n);
    if (a.ok() && b.ok() && a.value() == b.value()) continue;
    report.agree = false;
    report.first_disagreement = n;
    return;
  }
}

}  // namespace detail

// Identity principle for the Somos family: if h and h' agree at 1..4, both
// satisfy E(n,2,1,0) for n <= m-2, and h_n is not a zero divisor for
// n <= m-4, then they agree up to m. Returns the checked verdict.
inline DeterminismReport determinism_check_somos(const EllipticSeq& h, const EllipticSeq& hp,
                                                 long long m) {
  DeterminismReport report;
  if (!h.ring().same(hp.ring())) {
    report.note = "ring mismatch";
    return report;
  }
  for (long long n = 1; n <= 4; ++n)
    if (!detail::terms_equal_checked(h, hp, n, report.note)) return report;
  for (long long n = 3; n <= m - 2; ++n) {
    RelationId id = RelationId::from_integers(n, 2, 1, 0);
    if (!detail::relation_holds_checked(h, id, report.note)) return report;
    if (!detail::relation_holds_checked(hp, id, report.note)) {
      report.note += " (second sequence)";
      return report;
    }
  }
  for (long long n = 1; n <= m - 4; ++n) {
    TermResult t = h.term(n);
    if (!t.ok() || is_zero_divisor(t.value())) {
      report.note = "h_" + std::to_string(n) + " must not be a zero divisor";
      return report;
    }
  }
  detail::determinism_compare(h, hp, m, report);
  return report;
}

// Identity principle for the generalized even-odd families E(2r+i,r+i,r,0)
// and E(s+r+i,r+i,r,0): agreement on n <= 3r (parity of r) and n <= s+2r
// (parity of s) plus h_s h_r not a zero divisor force agreement everywhere;
// checked here on the window n <= m.
inline DeterminismReport determinism_check_even_odd(const EllipticSeq& h, const EllipticSeq& hp,
                                                    long long r, long long s, long long m) {
  DeterminismReport report;
  if (!h.ring().same(hp.ring())) {
    report.note = "ring mismatch";
    return report;
  }
  if (r < 1 || s < 1 || r >= s || (r + s) % 2 == 0) {
    report.note = "need 0 < r < s of opposite parity";
    return report;
  }
  for (long long n = (r % 2 == 1) ? 1 : 2; n <= 3 * r; n += 2)
    if (!detail::terms_equal_checked(h, hp, n, report.note)) return report;
  for (long long n = (s % 2 == 1) ? 1 : 2; n <= s + 2 * r; n += 2)
    if (!detail::terms_equal_checked(h, hp, n, report.note)) return report;
  for (long long i = 1; 3 * r + 2 * i <= m; ++i) {
    RelationId id = RelationId::from_integers(2 * r + i, r + i, r, 0);
    if (!detail::relation_holds_checked(h, id, report.note)) return report;
    if (!detail::relation_holds_checked(hp, id, report.note)) {
      report.note += " (second sequence)";
      return report;
    }
  }
  for (long long i = 1; s + 2 * r + 2 * i <= m; ++i) {
    RelationId id = RelationId::from_integers(s + r + i, r + i, r, 0);
    if (!detail::relation_holds_checked(h, id, report.note)) return report;
    if (!detail::relation_holds_checked(hp, id, report.note)) {
      report.note += " (second sequence)";
      return report;
    }
  }
  TermResult hr = h.term(r), hs = h.term(s);
  if (!hr.ok() || !hs.ok() || is_zero_divisor(hs.value() * hr.value())) {
    report.note = "h_s h_r must not be a zero divisor";
    return report;
  }
  detail::determinism_compare(h, hp, m, report);
  return report;
}

}  // namespace eds
