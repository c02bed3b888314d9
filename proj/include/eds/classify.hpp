#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "eds/sequence.hpp"

namespace eds {

// Classification of field-valued sequences satisfying every E(m,n,r,0):
//   TypeI    A * EDS(B,C,D) dilated by an odd r
//   TypeII   A * ES_{r,s}(B,D) with r < s of opposite parity, s != 2r
//   TypeIII  A * EDS(0,C,0) dilated by an even r
// plus the two non-answers a finite oracle can force.
enum class SeqType { TypeI, TypeII, TypeIII, NotElliptic, Inconclusive };

inline const char* seq_type_name(SeqType t) {
  switch (t) {
    case SeqType::TypeI: return "type-I";
    case SeqType::TypeII: return "type-II";
    case SeqType::TypeIII: return "type-III";
    case SeqType::NotElliptic: return "not-elliptic";
    case SeqType::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct ClassificationResult {
  SeqType tag = SeqType::Inconclusive;
  long long r = 0;  // dilation index (TypeI/TypeIII) or smaller ES index
  long long s = 0;  // larger ES index (TypeII only)
  std::optional<Elem> A, B, C, D;        // parameters present per tag
  std::optional<RelationId> witness;     // NotElliptic: a violated E(m,n,r,0)
  // Largest index the verdict rests on: the parameter-pinning index for a
  // confirmed tag, the witness's largest index for a refutation, and the
  // index that would settle the case when inconclusive.
  long long horizon = 0;
  std::string note;
};

inline EllipticSeq construct_type_i(long long r, const Elem& A, const Elem& B, const Elem& C,
                                    const Elem& D) {
  if (r < 1 || r % 2 == 0) throw std::invalid_argument("type I needs an odd positive r");
  return EllipticSeq::scaled(EllipticSeq::dilation(EllipticSeq::std_eds(B, C, D), r), A);
}

inline EllipticSeq construct_type_ii(long long r, long long s, const Elem& A, const Elem& B,
                                     const Elem& D) {
  if (s == 2 * r) throw std::invalid_argument("type II requires s != 2r");
  return EllipticSeq::es(r, s, A, B, D);
}

inline EllipticSeq construct_type_iii(long long r, const Elem& A, const Elem& C) {
  if (r < 1 || r % 2 == 1) throw std::invalid_argument("type III needs an even positive r");
  Ring R = A.ring();
  EllipticSeq base = EllipticSeq::std_eds(R.zero(), C, R.zero());
  return EllipticSeq::scaled(EllipticSeq::dilation_unchecked(base, r), A);
}

inline EllipticSeq construct_classified(const ClassificationResult& res) {
  switch (res.tag) {
    case SeqType::TypeI: return construct_type_i(res.r, *res.A, *res.B, *res.C, *res.D);
    case SeqType::TypeII: return construct_type_ii(res.r, res.s, *res.A, *res.B, *res.D);
    case SeqType::TypeIII: return construct_type_iii(res.r, *res.A, *res.C);
    default: throw std::logic_error("construct_classified: result carries no construction");
  }
}

// First violated E(m,n,r,0) with m+n <= N, minimal in (m+n, m, r); nullopt if
// the whole window checks out.
inline std::optional<RelationId> find_violation(const EllipticSeq& seq, long long N) {
  for (long long sum = 5; sum <= N; ++sum)
    for (long long m = sum / 2 + 1; m <= sum - 2; ++m) {
      long long n = sum - m;
      if (m <= n) continue;
      for (long long r = 1; r < n; ++r) {
        RelationId id = RelationId::from_integers(m, n, r, 0);
        TermResult defect = eval_relation(seq, id);
        if (defect.ok() && !defect.value().is_zero()) return id;
      }
    }
  return std::nullopt;
}

namespace detail {

struct ClassifyScan {
  std::vector<Elem> h;          // 1-based prefix
  std::vector<bool> nz;
  long long N = 0;

  bool nonzero(long long i) const { return i >= 1 && i <= N && nz[static_cast<std::size_t>(i)]; }
  const Elem& at(long long i) const { return h[static_cast<std::size_t>(i)]; }
};

inline ClassifyScan classify_scan(const EllipticSeq& seq, long long N) {
  ClassifyScan sc;
  sc.N = N;
  sc.h.reserve(static_cast<std::size_t>(N) + 1);
  sc.h.push_back(seq.ring().zero());
  sc.nz.assign(static_cast<std::size_t>(N) + 1, false);
  for (long long i = 1; i <= N; ++i) {
    TermResult t = seq.term(i);
    if (!t.ok())
      throw std::invalid_argument("classify: term " + std::to_string(i) +
                                  " of the oracle is unavailable");
    sc.nz[static_cast<std::size_t>(i)] = !t.value().is_zero();
    sc.h.push_back(std::move(t).value());
  }
  return sc;
}

// Candidate tag confirmed against the full prefix; a mismatch means some
// relation in the window is violated (or the window is too short to say).
inline ClassificationResult confirm_or_refute(const EllipticSeq& seq, const ClassifyScan& sc,
                                              ClassificationResult cand) {
  EllipticSeq model = construct_classified(cand);
  for (long long i = 1; i <= sc.N; ++i) {
    if (model.at(i) == sc.at(i)) continue;
    ClassificationResult out;
    if (auto w = find_violation(seq, sc.N)) {
      out.tag = SeqType::NotElliptic;
      out.witness = *w;
      out.horizon = w->needed_index();
      out.note = "relation " + relation_to_string(*w) + " fails";
    } else {
      out.tag = SeqType::Inconclusive;
      out.horizon = sc.N;
      out.note = "prefix deviates from the " + std::string(seq_type_name(cand.tag)) +
                 " candidate at index " + std::to_string(i) +
                 " but no violated relation fits in the window";
    }
    return out;
  }
  return cand;
}

inline ClassificationResult inconclusive_at(long long needed, long long N) {
  ClassificationResult out;
  out.tag = SeqType::Inconclusive;
  out.horizon = needed;
  out.note = "case analysis needs terms up to " + std::to_string(needed) + " but only " +
             std::to_string(N) + " are available";
  return out;
}

}  // namespace detail

// Decides which of the three classified families the prefix h_1..h_N belongs
// to, returning parameters that regenerate it; NotElliptic carries a violated
// relation inside the window, Inconclusive means the window is too short.
inline ClassificationResult classify(const EllipticSeq& seq, long long N) {
  Ring R = seq.ring();
  if (!R.is_field())
    throw std::invalid_argument("classify: the sequence must take values in a field");
  if (N < 1) throw std::invalid_argument("classify: bound must be positive");
  detail::ClassifyScan sc = detail::classify_scan(seq, N);

  // Lexicographically smallest nonzero pair (same parity, both terms nonzero).
  long long pr = 0, pd = 0;
  for (long long c = 1; c <= N && pr == 0; ++c) {
    if (!sc.nonzero(c)) continue;
    for (long long d = c + 2; d <= N; d += 2)
      if (sc.nonzero(d)) {
        pr = c;
        pd = d;
        break;
      }
  }

  ClassificationResult cand;
  cand.horizon = N;
  if (pr == 0) {
    // No pair: at most one nonzero index per parity class.
    long long u = 0, v = 0;  // odd / even nonzero index
    for (long long i = 1; i <= N; ++i)
      if (sc.nonzero(i)) (i % 2 == 1 ? u : v) = i;
    if (u == 0 && v == 0) {
      cand.tag = SeqType::TypeI;
      cand.r = 1;
      cand.A = cand.B = cand.C = cand.D = R.zero();
    } else if (v == 0) {
      cand.tag = SeqType::TypeI;
      cand.r = u;
      cand.A = sc.at(u);
      cand.B = cand.C = cand.D = R.zero();
    } else if (u == 0) {
      cand.tag = SeqType::TypeIII;
      cand.r = v;
      cand.A = sc.at(v);
      cand.C = R.zero();
    } else if (v == 2 * u) {
      cand.tag = SeqType::TypeI;
      cand.r = u;
      cand.A = sc.at(u);
      cand.B = *exact_div(sc.at(v), sc.at(u));
      cand.C = cand.D = R.zero();
    } else {
      cand.tag = SeqType::TypeII;
      cand.r = std::min(u, v);
      cand.s = std::max(u, v);
      cand.A = sc.at(cand.r);
      cand.B = -*exact_div(sc.at(cand.s), sc.at(cand.r));
      cand.D = R.zero();
    }
    return detail::confirm_or_refute(seq, sc, cand);
  }

  long long r = pr;
  long long n = (pd - pr) / 2;
  long long s = 0;  // first nonzero index of parity opposite to r
  for (long long i = 1 + r % 2; i <= N; i += 2)
    if (sc.nonzero(i)) {
      s = i;
      break;
    }

  bool broken = r > n;  // minimality forces E(r+n,r,n,0) to fail
  if (!broken && r == n) {
    if (s == 0) {
      if (r % 2 == 1) {
        cand.tag = SeqType::TypeI;
        cand.r = r;
        cand.A = sc.at(r);
        cand.B = cand.D = R.zero();
        cand.C = *exact_div(sc.at(3 * r), sc.at(r));
      } else {
        cand.tag = SeqType::TypeIII;
        cand.r = r;
        cand.A = sc.at(r);
        cand.C = *exact_div(sc.at(3 * r), sc.at(r));
      }
      cand.horizon = 3 * r;
    } else if (s == 2 * r) {
      if (4 * r > N) return detail::inconclusive_at(4 * r, N);
      cand.tag = SeqType::TypeI;
      cand.r = r;
      cand.A = sc.at(r);
      cand.B = *exact_div(sc.at(2 * r), sc.at(r));
      cand.C = *exact_div(sc.at(3 * r), sc.at(r));
      cand.D = *exact_div(sc.at(4 * r), sc.at(2 * r));
      cand.horizon = 4 * r;
    } else {
      broken = true;  // an opposite-parity term at s != 2r contradicts minimality
    }
  } else if (!broken) {  // r < n
    if (!sc.nonzero(n) || !sc.nonzero(n + 2 * r) || s != n) {
      broken = true;  // E(r+n,n,r,0) forces the pair (n, n+2r) with h_n first
    } else if (n == 2 * r) {
      cand.tag = SeqType::TypeI;
      cand.r = r;
      cand.A = sc.at(r);
      cand.B = *exact_div(sc.at(2 * r), sc.at(r));
      cand.C = R.zero();
      cand.D = *exact_div(sc.at(4 * r), sc.at(2 * r));
      cand.horizon = 4 * r;
    } else {
      cand.tag = SeqType::TypeII;
      cand.r = r;
      cand.s = n;
      cand.A = sc.at(r);
      cand.B = -*exact_div(sc.at(n), sc.at(r));
      cand.D = *exact_div(sc.at(n + 2 * r), sc.at(r));
      cand.horizon = n + 2 * r;
    }
  }

  if (broken) {
    ClassificationResult out;
    if (auto w = find_violation(seq, N)) {
      out.tag = SeqType::NotElliptic;
      out.witness = *w;
      out.horizon = w->needed_index();
      out.note = "relation " + relation_to_string(*w) + " fails";
    } else {
      out = detail::inconclusive_at(N + 1, N);
      out.note = "the nonzero-index pattern is impossible for an elliptic sequence, but no "
                 "violated relation fits in the window";
    }
    return out;
  }
  return detail::confirm_or_refute(seq, sc, cand);
}

// ---------------------------------------------------------------------------
// Transition automaton for type (110) Somos sequences (h1 h2 != 0, h3 = 0).
// A state records zero/nonzero flags of four consecutive terms; extending by
// one term is constrained by h_{n+2}h_{n-2}h1^2 = h_{n+1}h_{n-1}h2^2.

struct PatternState {
  std::array<int, 4> bits{0, 0, 0, 0};

  friend bool operator==(const PatternState& a, const PatternState& b) { return a.bits == b.bits; }
  friend bool operator!=(const PatternState& a, const PatternState& b) { return !(a == b); }
  friend bool operator<(const PatternState& a, const PatternState& b) { return a.bits < b.bits; }
};

inline PatternState pattern_state(int a, int b, int c, int d) {
  for (int v : {a, b, c, d})
    if (v != 0 && v != 1) throw std::invalid_argument("pattern bits must be 0 or 1");
  return PatternState{{a, b, c, d}};
}

inline PatternState pattern_state(const std::string& s) {
  if (s.size() != 4) throw std::invalid_argument("pattern state needs 4 bits");
  return pattern_state(s[0] - '0', s[1] - '0', s[2] - '0', s[3] - '0');
}

inline std::string pattern_state_name(const PatternState& st) {
  std::string out;
  for (int b : st.bits) out += static_cast<char>('0' + b);
  return out;
}

inline std::vector<PatternState> automaton_initial_states() {
  return {pattern_state("1100"), pattern_state("1101")};
}

// No legal extension: a nonzero pair two apart behind a vanished term.
inline bool is_dead_end(const PatternState& st) {
  return st.bits[0] == 0 && st.bits[1] == 1 && st.bits[3] == 1;
}

// Edge set of the transition diagram: all rule-derived transitions except
// those into dead ends, with the all-ones state (unreachable self-loop)
// left out entirely.
inline std::set<std::pair<PatternState, PatternState>> automaton_transitions() {
  std::set<std::pair<PatternState, PatternState>> edges;
  for (int code = 0; code < 16; ++code) {
    PatternState st{{code >> 3 & 1, code >> 2 & 1, code >> 1 & 1, code & 1}};
    if (st == pattern_state("1111") || is_dead_end(st)) continue;
    std::vector<int> exts;
    if (st.bits[0] == 1)
      exts.push_back(st.bits[1] * st.bits[3]);
    else if (st.bits[1] * st.bits[3] == 0)
      exts = {0, 1};
    for (int e : exts) {
      PatternState to{{st.bits[1], st.bits[2], st.bits[3], e}};
      if (to == pattern_state("1111") || is_dead_end(to)) continue;
      edges.insert({st, to});
    }
  }
  return edges;
}

inline std::set<PatternState> automaton_reachable_states() {
  auto edges = automaton_transitions();
  std::set<PatternState> seen;
  std::vector<PatternState> todo = automaton_initial_states();
  for (const PatternState& st : todo) seen.insert(st);
  while (!todo.empty()) {
    PatternState cur = todo.back();
    todo.pop_back();
    for (const auto& e : edges)
      if (e.first == cur && seen.insert(e.second).second) todo.push_back(e.second);
  }
  return seen;
}

// Simple cycles of the diagram, each written as the string of extension bits
// along the loop in its lexicographically smallest rotation.
inline std::set<std::string> automaton_loops() {
  auto edges = automaton_transitions();
  std::map<PatternState, std::vector<PatternState>> succ;
  std::vector<PatternState> nodes;
  for (const auto& e : edges) {
    if (succ.emplace(e.first, std::vector<PatternState>{}).second) nodes.push_back(e.first);
    succ[e.first].push_back(e.second);
    if (succ.emplace(e.second, std::vector<PatternState>{}).second) nodes.push_back(e.second);
  }
  std::sort(nodes.begin(), nodes.end());
  std::set<std::string> loops;
  // Cycles through their smallest node only, so each is found once.
  for (const PatternState& start : nodes) {
    std::vector<PatternState> path{start};
    std::set<PatternState> on_path{start};
    std::function<void()> dfs = [&]() {
      for (const PatternState& nx : succ[path.back()]) {
        if (nx < start) continue;
        if (nx == start) {
          std::string word;
          for (std::size_t i = 0; i < path.size(); ++i) {
            const PatternState& to = i + 1 < path.size() ? path[i + 1] : start;
            word += static_cast<char>('0' + to.bits[3]);
          }
          std::string best = word;
          for (std::size_t k = 1; k < word.size(); ++k)
            best = std::min(best, word.substr(k) + word.substr(0, k));
          loops.insert(best);
          continue;
        }
        if (on_path.count(nx)) continue;
        path.push_back(nx);
        on_path.insert(nx);
        dfs();
        on_path.erase(nx);
        path.pop_back();
      }
    };
    dfs();
  }
  return loops;
}

inline std::string automaton_dot() {
  std::string out = "digraph type110 {\n";
  for (const PatternState& st : automaton_initial_states())
    out += "  \"" + pattern_state_name(st) + "\" [shape=doublecircle];\n";
  for (const auto& e : automaton_transitions())
    out += "  \"" + pattern_state_name(e.first) + "\" -> \"" + pattern_state_name(e.second) +
           "\";\n";
  out += "}\n";
  return out;
}

// ---------------------------------------------------------------------------
// Realizing an eventually periodic zero/nonzero pattern as a type (110)
// sequence: forced terms come from h_{n+2}h_{n-2}h1^2 = h_{n+1}h_{n-1}h2^2,
// terms whose window leaves them free are drawn from `free_values` (then 1).

namespace detail {

inline int type110_bit(const std::vector<int>& prefix, const std::vector<int>& cycle,
                       long long n) {
  std::size_t i = static_cast<std::size_t>(n - 1);
  if (i < prefix.size()) return prefix[i];
  return cycle[(i - prefix.size()) % cycle.size()];
}

}  // namespace detail

inline std::vector<long long> type110_free_slots(const std::vector<int>& prefix,
                                                 const std::vector<int>& cycle, long long N) {
  std::vector<long long> out;
  for (long long m = 4; m <= N; ++m)
    if (detail::type110_bit(prefix, cycle, m) == 1 &&
        (m == 4 || detail::type110_bit(prefix, cycle, m - 4) == 0))
      out.push_back(m);
  return out;
}

inline EllipticSeq gen_type110(const std::vector<int>& prefix, const std::vector<int>& cycle,
                               const Elem& h1, const Elem& h2,
                               const std::vector<Elem>& free_values, long long N) {
  if (cycle.empty()) throw std::invalid_argument("gen_type110: cycle must be nonempty");
  for (const auto& bits : {prefix, cycle})
    for (int b : bits)
      if (b != 0 && b != 1) throw std::invalid_argument("gen_type110: bits must be 0 or 1");
  auto bit = [&](long long m) { return detail::type110_bit(prefix, cycle, m); };
  if (bit(1) != 1 || bit(2) != 1 || bit(3) != 0)
    throw std::invalid_argument("gen_type110: pattern must start 110 (h1 h2 != 0, h3 = 0)");
  if (h1.is_zero() || h2.is_zero())
    throw std::invalid_argument("gen_type110: h1 and h2 must be nonzero");
  Ring R = h1.ring();
  // Every 5-window must be a valid transition; one pass over prefix plus two
  // cycle periods visits every window the infinite pattern contains.
  long long span = static_cast<long long>(prefix.size() + 2 * cycle.size()) + 5;
  for (long long m = 5; m <= span; ++m) {
    bool ok = bit(m - 4) == 1 ? bit(m) == bit(m - 3) * bit(m - 1)
                              : bit(m - 3) * bit(m - 1) == 0;
    if (!ok)
      throw std::invalid_argument("gen_type110: invalid pattern window at position " +
                                  std::to_string(m));
  }

  std::vector<Elem> vals;
  vals.reserve(static_cast<std::size_t>(N));
  vals.push_back(h1);
  if (N >= 2) vals.push_back(h2);
  std::size_t next_free = 0;
  Elem h1sq = h1 * h1;
  Elem h2sq = h2 * h2;
  for (long long m = 3; m <= N; ++m) {
    if (bit(m) == 0) {
      vals.push_back(R.zero());
      continue;
    }
    auto v = [&](long long i) { return vals[static_cast<std::size_t>(i - 1)]; };
    if (m >= 5 && bit(m - 4) == 1) {
      auto q = exact_div(v(m - 1) * v(m - 3) * h2sq, v(m - 4) * h1sq);
      if (!q) throw std::invalid_argument("gen_type110: forced term not divisible");
      vals.push_back(*q);
      continue;
    }
    Elem fresh = next_free < free_values.size() ? free_values[next_free++] : R.one();
    if (fresh.is_zero())
      throw std::invalid_argument("gen_type110: free slot value must be nonzero");
    vals.push_back(fresh);
  }
  return EllipticSeq::explicit_list(R, std::move(vals));
}

// ---------------------------------------------------------------------------
// Branch-off exploration for type (111) Somos sequences. Around its first
// zero at n, a standard EDS continues as h_{n+m} = r1 r2^{m-1} g_m where g is
// again a standard EDS with the same b, c and a shifted d; the explorer walks
// that self-similarity and records every branch point up to N.

struct BranchPoint {
  long long n = 0;  // absolute index of the vanishing term
  Elem r1, r2;      // g_{n+1} = r1 g_1, g_{n+2} = r1 r2 g_2 on its component
  Elem free;        // the reference continuation h_{n+4}; branching replaces it

  BranchPoint(long long n_, Elem r1_, Elem r2_, Elem free_)
      : n(n_), r1(std::move(r1_)), r2(std::move(r2_)), free(std::move(free_)) {}
};

inline std::vector<BranchPoint> branch_explore(const Elem& b, const Elem& c, const Elem& d,
                                               long long N) {
  Ring R = b.ring();
  if (!R.is_field()) throw std::invalid_argument("branch_explore: field required");
  if (b.is_zero() || c.is_zero())
    throw std::invalid_argument("branch_explore: needs h1 h2 h3 != 0");
  std::vector<BranchPoint> out;
  long long base = 0;
  Elem cur_d = d;
  while (base < N) {
    EllipticSeq g = EllipticSeq::std_eds(b, c, cur_d);
    long long m = 0;
    for (long long i = 1; base + i <= N; ++i)
      if (g.at(i).is_zero()) {
        m = i;
        break;
      }
    if (m == 0) break;
    Elem g1 = g.at(m + 1), g2 = g.at(m + 2), g3 = g.at(m + 3);
    if (g1.is_zero() || g2.is_zero() || g3.is_zero())
      throw std::logic_error("branch_explore: terms after a first zero cannot vanish");
    Elem r1 = g1;
    Elem r2 = *exact_div(g2, r1 * b);
    if (g3 != r1 * r2 * r2 * c)
      throw std::logic_error("branch_explore: h_{n+3} = r1 r2^2 h_3 failed");
    Elem free = g.at(m + 4);
    out.emplace_back(base + m, r1, r2, free);
    cur_d = *exact_div(free, r1 * r2 * r2 * r2 * b);
    base += m;
  }
  return out;
}

// The branched component at the first zero n of EDS(b,c,d): reference terms
// up to n, then h_{n+m} = r1 r2^{m-1} g_m with g4 determined by the chosen
// free value h_{n+4}.
inline EllipticSeq branch_sequence(const Elem& b, const Elem& c, const Elem& d, long long n,
                                   const Elem& free_value, long long N) {
  Ring R = b.ring();
  if (!R.is_field()) throw std::invalid_argument("branch_sequence: field required");
  EllipticSeq ref = EllipticSeq::std_eds(b, c, d);
  if (!ref.at(n).is_zero()) throw std::invalid_argument("branch_sequence: h_n must vanish");
  for (long long i = 1; i < n; ++i)
    if (ref.at(i).is_zero())
      throw std::invalid_argument("branch_sequence: n must be the first zero");
  Elem r1 = ref.at(n + 1);
  Elem r2 = *exact_div(ref.at(n + 2), r1 * b);
  EllipticSeq g = EllipticSeq::std_eds(b, c, *exact_div(free_value, r1 * r2 * r2 * r2 * b));
  std::vector<Elem> vals;
  for (long long i = 1; i <= N; ++i) {
    if (i <= n) {
      vals.push_back(ref.at(i));
      continue;
    }
    Elem scale = r1;
    for (long long k = 0; k < i - n - 1; ++k) scale = scale * r2;
    vals.push_back(scale * g.at(i - n));
  }
  return EllipticSeq::explicit_list(R, std::move(vals));
}

// Indices n <= N with h_n = 0 whose vanishing is not explained by a vanishing
// h_m at a proper divisor m of n.
inline std::vector<long long> zsigmondy_scan(const Elem& b, const Elem& c, const Elem& d,
                                             long long N) {
  EllipticSeq g = EllipticSeq::std_eds(b, c, d);
  std::vector<bool> zero(static_cast<std::size_t>(N) + 1, false);
  for (long long i = 1; i <= N; ++i) zero[static_cast<std::size_t>(i)] = g.at(i).is_zero();
  std::vector<long long> out;
  for (long long i = 1; i <= N; ++i) {
    if (!zero[static_cast<std::size_t>(i)]) continue;
    bool forced = false;
    for (long long m = 1; m < i; ++m)
      if (i % m == 0 && zero[static_cast<std::size_t>(m)]) forced = true;
    if (!forced) out.push_back(i);
  }
  return out;
}

}  // namespace eds
