// Acceptance gate: twelve end-to-end checks over the library, one line of
// output per criterion.  Run without arguments for the full gate, or with
// --criterion k (1..12) for a single check.  Exit 0 iff every selected
// criterion passes.  All bounds, seeds, and time budgets are pinned here.

#include <array>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "eds/classify.hpp"
#include "eds/derive.hpp"
#include "eds/eds_standard.hpp"
#include "eds/relation.hpp"
#include "eds/ring.hpp"
#include "eds/sequence.hpp"

namespace {

using eds::ClassificationResult;
using eds::DerivationNode;
using eds::DerivationTree;
using eds::DivisibilityWitness;
using eds::Elem;
using eds::EllipticSeq;
using eds::Int;
using eds::RelationFamily;
using eds::RelationId;
using eds::Ring;
using eds::SeqType;
using eds::StepKind;
using eds::SymbolicSeqRing;
using eds::TermResult;

struct Outcome {
  bool pass = false;
  std::string note;
};

Outcome pass(std::string note) { return {true, std::move(note)}; }
Outcome fail(std::string note) { return {false, std::move(note)}; }

Elem qi(const Ring& r, long long v) { return r.from_int(Int(static_cast<long>(v))); }

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

std::vector<RelationId> canonical_goals(long long max_a2, bool integral) {
  std::vector<RelationId> out;
  long long lo = integral ? 0 : 1;
  for (long long a2 = lo; a2 <= max_a2; a2 += 2)
    for (long long b2 = lo; b2 < a2; b2 += 2)
      for (long long c2 = lo; c2 < b2; c2 += 2)
        for (long long d2 = lo; d2 < c2; d2 += 2) out.push_back(RelationId{a2, b2, c2, d2});
  return out;
}

bool terms_equal(const EllipticSeq& a, const EllipticSeq& b, long long upto, long long& bad) {
  for (long long n = 1; n <= upto; ++n) {
    TermResult x = a.term(n), y = b.term(n);
    if (!x.ok() || !y.ok() || x.value() != y.value()) {
      bad = n;
      return false;
    }
  }
  return true;
}

// 1: the standard parameters (2,3,2) over Z give h_n = n.
Outcome criterion_1() {
  auto start = std::chrono::steady_clock::now();
  Ring z = Ring::integers();
  EllipticSeq seq = EllipticSeq::std_eds(qi(z, 2), qi(z, 3), qi(z, 2));
  for (long long n = 1; n <= 100; ++n)
    if (seq.at(n) != qi(z, n)) return fail("h_" + std::to_string(n) + " != n");
  double ms = elapsed_ms(start);
  if (ms >= 1000.0) return fail("took " + std::to_string(ms) + " ms (budget 1000)");
  std::ostringstream note;
  note << "identity sequence to n=100 in " << ms << " ms";
  return pass(note.str());
}

// 2: the sixth universal term factors as X2*X3*(X2^4*X4 - X3^3 - X4^2).
Outcome criterion_2() {
  const Ring& u = eds::universal_ring();
  Elem x2 = u.var("X2"), x3 = u.var("X3"), x4 = u.var("X4");
  Elem expected = x2 * x3 * (eds::elem_pow(x2, 4) * x4 - eds::elem_pow(x3, 3) - x4 * x4);
  if (eds::universal_term(6) != expected) return fail("universal h_6 mismatch");
  return pass("universal h_6 == X2*X3*(X2^4*X4 - X3^3 - X4^2)");
}

// 3: rational parameters (2,3,3/2) give 1, 2, 3, 3, -3, -63/2.
Outcome criterion_3() {
  Ring q = Ring::rationals();
  EllipticSeq seq = EllipticSeq::std_eds(qi(q, 2), qi(q, 3), q.parse("3/2"));
  const char* expected[6] = {"1", "2", "3", "3", "-3", "-63/2"};
  for (long long n = 1; n <= 6; ++n)
    if (seq.at(n) != q.parse(expected[n - 1]))
      return fail("h_" + std::to_string(n) + " != " + expected[n - 1]);
  return pass("std_eds(2,3,3/2) opens 1, 2, 3, 3, -3, -63/2");
}

// 4: every relation with composite index at most 14, half-integer parameters
// included, vanishes identically on the universal sequence.
Outcome criterion_4() {
  auto start = std::chrono::steady_clock::now();
  std::size_t count = eds::family_relations(14, RelationFamily::Full).size();
  eds::WindowReport report = eds::check_window(eds::universal_eds(), 14, RelationFamily::Full);
  double ms = elapsed_ms(start);
  if (!report.clean()) return fail("universal window not clean");
  if (ms >= 120000.0) return fail("took " + std::to_string(ms) + " ms (budget 120000)");
  std::ostringstream note;
  note << count << " symbolic defects vanish in " << ms << " ms";
  return pass(note.str());
}

// 5: the rewriting identities hold symbolically on at least five parameter
// tuples each, with composite indices at most 12.
Outcome criterion_5() {
  int checked = 0;
  const int K = 12;

  const long long eq3[][3] = {{4, 3, 2}, {5, 3, 2}, {5, 4, 2}, {5, 4, 3}, {6, 4, 3}, {6, 5, 2}};
  for (const auto& t : eq3) {
    if (!eds::verify_eq3_identity(t[0], t[1], t[2], K))
      return fail("square-multiplier identity fails");
    ++checked;
  }

  const long long ii1[][5] = {
      {4, 3, 2, 1, 0}, {5, 3, 2, 1, 0}, {5, 4, 2, 1, 0}, {5, 4, 3, 2, 0}, {6, 4, 3, 2, 1}};
  for (const auto& t : ii1) {
    if (!eds::verify_rule_II1_identity(t[0], t[1], t[2], t[3], t[4], K))
      return fail("four-term transfer identity fails");
    ++checked;
  }
  const long long ii1_half[][5] = {{9, 7, 5, 3, 1}, {11, 7, 5, 3, 1}};
  for (const auto& t : ii1_half) {
    if (!eds::verify_rule_II1_identity_2(t[0], t[1], t[2], t[3], t[4], K))
      return fail("four-term transfer identity fails at half-integers");
    ++checked;
  }

  const long long ex[][5] = {
      {5, 4, 2, 1, 3}, {6, 5, 3, 1, 4}, {5, 4, 3, 1, 2}, {6, 4, 3, 2, 1}, {6, 5, 4, 2, 3}};
  for (const auto& t : ex) {
    if (!eds::verify_exchange_identity(t[0], t[1], t[2], t[3], t[4], K))
      return fail("exchange identity fails");
    ++checked;
  }
  const long long ex_half[][5] = {{11, 9, 5, 1, 7}, {9, 7, 3, 1, 5}};
  for (const auto& t : ex_half) {
    if (!eds::verify_exchange_identity_2(t[0], t[1], t[2], t[3], t[4], K))
      return fail("exchange identity fails at half-integers");
    ++checked;
  }

  const long long ii2[][6] = {{5, 4, 3, 2, 1, 0}, {6, 5, 4, 3, 2, 1}, {6, 5, 3, 2, 1, 0},
                              {6, 4, 3, 2, 1, 0}, {7, 5, 4, 3, 2, 1}, {7, 5, 4, 2, 1, 0}};
  for (const auto& t : ii2) {
    if (!eds::verify_rule_II2_identity(t[0], t[1], t[2], t[3], t[4], t[5], K))
      return fail("ten-term transfer identity fails");
    ++checked;
  }

  const long long en[][3] = {{4, 3, 1}, {5, 3, 2}, {3, 3, 2}, {5, 4, 1}, {6, 4, 2}};
  for (const auto& t : en) {
    if (!eds::verify_en_combination(t[0], t[1], t[2], K))
      return fail("net combination identity fails");
    ++checked;
  }

  return pass(std::to_string(checked) + " symbolic identity instances verified");
}

// 6: constructed divisibility witnesses are exact for every m*n <= 30, and
// triple-product witnesses for 2 <= n <= 20.
Outcome criterion_6() {
  const EllipticSeq& h = eds::universal_eds();
  int pairs = 0;
  for (long long m = 1; m <= 30; ++m)
    for (long long n = 1; m * n <= 30; ++n) {
      DivisibilityWitness w = eds::divisibility_witness(m, n);
      if (w.quotient * h.at(m) != h.at(m * n))
        return fail("witness " + std::to_string(m) + "," + std::to_string(n) + " inexact");
      ++pairs;
    }
  int triples = 0;
  for (long long n = 2; n <= 20; ++n) {
    Elem q = eds::triple_product_witness(n);
    if (q * h.at(3) * h.at(2) != h.at(n + 1) * h.at(n) * h.at(n - 1))
      return fail("triple witness " + std::to_string(n) + " inexact");
    ++triples;
  }
  return pass(std::to_string(pairs) + " divisibility and " + std::to_string(triples) +
              " triple-product witnesses exact");
}

// 7: the division-free invariant identity holds universally for 2 <= m <= 20,
// and the invariant cross product for all 1 <= s < n < m <= 12.
Outcome criterion_7() {
  for (long long m = 2; m <= 20; ++m)
    if (!eds::swart_invariant_identity_check(m))
      return fail("invariant identity fails at m=" + std::to_string(m));
  const EllipticSeq& u = eds::universal_eds();
  int triples = 0;
  for (long long m = 3; m <= 12; ++m)
    for (long long n = 2; n < m; ++n)
      for (long long s = 1; s < n; ++s) {
        if (!eds::translation_invariant_cross_check(u, m, n, s))
          return fail("cross product fails at (" + std::to_string(m) + "," + std::to_string(n) +
                      "," + std::to_string(s) + ")");
        ++triples;
      }
  return pass("19 invariant identities and " + std::to_string(triples) + " cross products hold");
}

// 8: derivations from both bases replay symbolically across the full goal
// grids, with the pinned leaf and side-condition bounds.
Outcome criterion_8() {
  std::vector<RelationId> eo_goals = canonical_goals(20, true);
  std::vector<RelationId> halves = canonical_goals(19, false);
  eo_goals.insert(eo_goals.end(), halves.begin(), halves.end());
  for (const RelationId& goal : eo_goals) {
    DerivationTree tree = eds::derive_from_even_odd(goal);
    if (!eds::replay_symbolic(tree, static_cast<int>(tree.needed_symbolic_index())).ok)
      return fail("even-odd replay fails for " + eds::relation_to_string(goal));
  }

  DerivationTree six = eds::derive_from_even_odd(RelationId::from_integers(6, 2, 1, 0));
  bool has_half = false;
  for (const auto& entry : six.nodes())
    if (!entry.first.is_integral()) has_half = true;
  if (!has_half) return fail("E(6,2,1,0) derivation has no half-integer node");

  int somos_count = 0;
  for (const RelationId& goal : canonical_goals(30, true)) {
    long long sum = (goal.a2 + goal.b2) / 2;
    if (sum > 16) continue;
    DerivationTree tree = eds::derive_from_somos(goal);
    for (const auto& entry : tree.nodes()) {
      if (entry.second.step == StepKind::BaseSomos && entry.second.goal.a2 / 2 > sum - 2)
        return fail("oversized base leaf in " + eds::relation_to_string(goal));
      if (entry.second.has_cofactor() &&
          (entry.second.cofactor[0] > sum - 4 || entry.second.cofactor[1] > sum - 4))
        return fail("oversized side condition in " + eds::relation_to_string(goal));
    }
    if (!eds::replay_symbolic(tree, static_cast<int>(tree.needed_symbolic_index())).ok)
      return fail("Somos replay fails for " + eds::relation_to_string(goal));
    ++somos_count;
  }
  return pass(std::to_string(eo_goals.size()) + " even-odd and " + std::to_string(somos_count) +
              " Somos derivations replay");
}

// 9: 200 randomized constructions over Q and F_7 classify back to their
// construction tag, agree on terms 1..60, and pass a full window check.
Outcome criterion_9() {
  std::mt19937 rng(20260823u);
  const long long N = 60;
  int trials = 0;
  for (int ring_pick = 0; ring_pick < 2; ++ring_pick) {
    Ring ring = ring_pick == 0 ? Ring::rationals() : Ring::prime_field(Int(7));
    auto unit = [&]() -> Elem {
      if (ring_pick == 1) return qi(ring, 1 + static_cast<long long>(rng() % 6));
      long long num = 1 + static_cast<long long>(rng() % 6);
      long long den = 1 + static_cast<long long>(rng() % 3);
      long long sign = (rng() % 2 == 0) ? 1 : -1;
      return qi(ring, sign * num) * eds::exact_div(qi(ring, 1), qi(ring, den)).value();
    };
    for (int t = 0; t < 100; ++t) {
      EllipticSeq seq =
          [&]() {
            switch (t % 3) {
              case 0: {
                long long r = 1 + 2 * static_cast<long long>(rng() % 8);  // 4r <= 60
                return eds::construct_type_i(r, unit(), unit(), unit(), unit());
              }
              case 1: {
                long long r = 1 + static_cast<long long>(rng() % 5);
                long long s = 0;
                do {
                  s = r + 1 + 2 * static_cast<long long>(rng() % 12);
                } while (s == 2 * r || r + 2 * s > N);  // the pair (r, r+2s) must fit
                return eds::construct_type_ii(r, s, unit(), unit(), unit());
              }
              default: {
                long long r = 2 + 2 * static_cast<long long>(rng() % 9);  // 3r <= 60
                return eds::construct_type_iii(r, unit(), unit());
              }
            }
          }();
      ClassificationResult res = eds::classify(seq, N);
      const char* want = t % 3 == 0 ? "type-I" : (t % 3 == 1 ? "type-II" : "type-III");
      if (std::string(eds::seq_type_name(res.tag)) != want)
        return fail("trial " + std::to_string(trials) + " classified as " +
                    eds::seq_type_name(res.tag) + ", wanted " + want);
      EllipticSeq regen = eds::construct_classified(res);
      long long bad = 0;
      if (!terms_equal(seq, regen, N, bad))
        return fail("trial " + std::to_string(trials) + " differs from its tag at term " +
                    std::to_string(bad));
      if (!eds::check_window(seq, 14, RelationFamily::Full).clean())
        return fail("trial " + std::to_string(trials) + " fails the full window check");
      ++trials;
    }
  }
  return pass(std::to_string(trials) + " random constructions round-trip and check clean");
}

// 10: the zero-pattern transition system matches the hand-derived edge set,
// loop words, reachability, and dead ends.
Outcome criterion_10() {
  const char* expected_edges[17][2] = {
      {"0000", "0000"}, {"0000", "0001"}, {"0001", "0010"}, {"0001", "0011"}, {"0010", "0100"},
      {"0011", "0110"}, {"0100", "1000"}, {"0100", "1001"}, {"0110", "1100"}, {"0110", "1101"},
      {"1000", "0000"}, {"1001", "0010"}, {"1010", "0100"}, {"1011", "0110"}, {"1100", "1000"},
      {"1101", "1011"}, {"1110", "1100"}};
  std::set<std::pair<std::string, std::string>> expected;
  for (const auto& e : expected_edges) expected.insert({e[0], e[1]});
  std::set<std::pair<std::string, std::string>> actual;
  for (const auto& e : eds::automaton_transitions())
    actual.insert({eds::pattern_state_name(e.first), eds::pattern_state_name(e.second)});
  if (actual != expected) return fail("transition set differs from the derived edge set");

  std::set<std::string> loops = eds::automaton_loops();
  if (loops != std::set<std::string>{"0", "001", "011", "00001", "000011"})
    return fail("loop words differ");

  std::set<std::string> reachable;
  for (const auto& s : eds::automaton_reachable_states())
    reachable.insert(eds::pattern_state_name(s));
  for (const char* unreachable : {"1010", "1110", "1111"})
    if (reachable.count(unreachable))
      return fail(std::string(unreachable) + " should be unreachable");

  for (int bits = 0; bits < 16; ++bits) {
    eds::PatternState st =
        eds::pattern_state((bits >> 3) & 1, (bits >> 2) & 1, (bits >> 1) & 1, bits & 1);
    bool dead = eds::is_dead_end(st);
    bool expected_dead =
        eds::pattern_state_name(st) == "0101" || eds::pattern_state_name(st) == "0111";
    if (dead != expected_dead)
      return fail("dead-end status wrong for " + eds::pattern_state_name(st));
  }
  return pass("17 edges, 5 loop words, reachability, and dead ends all match");
}

// 11: the defect of E(5,3,2,1) needs the cube under the index-8 relation
// basis, and only the square once h_9, h_10 relations join.
Outcome criterion_11() {
  SymbolicSeqRing s8(8);
  Elem defect8 = eds::symbolic_relation(s8, RelationId::from_integers(5, 3, 2, 1));
  std::optional<int> e8 = eds::nilpotency_probe(s8, defect8, eds::mnr0_relation_basis(8), 4);
  if (!e8 || *e8 != 3)
    return fail("index-8 basis exponent is " + (e8 ? std::to_string(*e8) : "unresolved") +
                ", wanted 3");
  SymbolicSeqRing s10(10);
  Elem defect10 = eds::symbolic_relation(s10, RelationId::from_integers(5, 3, 2, 1));
  std::optional<int> e10 = eds::nilpotency_probe(s10, defect10, eds::mnr0_relation_basis(10), 4);
  if (!e10 || *e10 != 2)
    return fail("index-10 basis exponent is " + (e10 ? std::to_string(*e10) : "unresolved") +
                ", wanted 2");
  return pass("E(5,3,2,1) defect: cube at index bound 8, square at 10");
}

// 12: both recurrence schemes and the scaled standard normalization agree on
// 50 random rational windows with non-zero terms.
Outcome criterion_12() {
  std::mt19937 rng(424242u);
  Ring q = Ring::rationals();
  const long long N = 30;
  int accepted = 0;
  int draws = 0;
  while (accepted < 50) {
    if (++draws > 5000) return fail("could not sample 50 admissible windows");
    std::array<Elem, 4> h{q.zero(), q.zero(), q.zero(), q.zero()};
    for (auto& v : h) {
      long long num = 1 + static_cast<long long>(rng() % 9);
      long long den = 1 + static_cast<long long>(rng() % 3);
      long long sign = (rng() % 2 == 0) ? 1 : -1;
      v = qi(q, sign * num) * eds::exact_div(qi(q, 1), qi(q, den)).value();
    }
    EllipticSeq somos = EllipticSeq::somos4(h[0], h[1], h[2], h[3]);
    bool admissible = true;
    for (long long n = 1; n <= N && admissible; ++n) {
      TermResult t = somos.term(n);
      admissible = t.ok() && !t.value().is_zero();
    }
    if (!admissible) continue;

    EllipticSeq even_odd = EllipticSeq::even_odd(h[0], h[1], h[2], h[3]);
    Elem b = eds::exact_div(h[1], h[0]).value();
    Elem c = eds::exact_div(h[2], h[0]).value();
    Elem d = eds::exact_div(h[3], h[1]).value();
    EllipticSeq normalized = EllipticSeq::scaled(EllipticSeq::std_eds(b, c, d), h[0]);

    long long bad = 0;
    if (!terms_equal(somos, even_odd, N, bad))
      return fail("schemes disagree at term " + std::to_string(bad));
    if (!terms_equal(somos, normalized, N, bad))
      return fail("normalization disagrees at term " + std::to_string(bad));
    ++accepted;
  }
  return pass("50 random windows: both schemes and h_1 * std_eds agree to n=30");
}

Outcome run_criterion(int k) {
  switch (k) {
    case 1: return criterion_1();
    case 2: return criterion_2();
    case 3: return criterion_3();
    case 4: return criterion_4();
    case 5: return criterion_5();
    case 6: return criterion_6();
    case 7: return criterion_7();
    case 8: return criterion_8();
    case 9: return criterion_9();
    case 10: return criterion_10();
    case 11: return criterion_11();
    case 12: return criterion_12();
  }
  return fail("unknown criterion");
}

}  // namespace

int main(int argc, char** argv) {
  int selected = 0;
  if (argc == 3 && std::string(argv[1]) == "--criterion") {
    selected = std::atoi(argv[2]);
    if (selected < 1 || selected > 12) {
      std::cerr << "acceptance: --criterion takes a number in 1..12\n";
      return 1;
    }
  } else if (argc != 1) {
    std::cerr << "usage: acceptance [--criterion k]\n";
    return 1;
  }

  bool all_pass = true;
  for (int k = 1; k <= 12; ++k) {
    if (selected != 0 && k != selected) continue;
    Outcome outcome;
    try {
      outcome = run_criterion(k);
    } catch (const std::exception& e) {
      outcome = fail(std::string("exception: ") + e.what());
    }
    all_pass = all_pass && outcome.pass;
    std::cout << "criterion " << (k < 10 ? " " : "") << k << ": "
              << (outcome.pass ? "PASS" : "FAIL") << "  " << outcome.note << "\n";
  }
  return all_pass ? 0 : 1;
}
