#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "eds/relation.hpp"

using eds::canonicalize;
using eds::Elem;
using eds::RelationId;
using eds::SymbolicSeqRing;

namespace {

RelationId RI(long long a, long long b, long long c, long long d) {
  return RelationId::from_integers(a, b, c, d);
}

RelationId RH(long long a2, long long b2, long long c2, long long d2) {
  return RelationId::from_doubled(a2, b2, c2, d2);
}

// Deterministic stream of valid (same-parity) relation ids, half of them
// half-integral, with shuffled signs and order.
std::vector<RelationId> random_ids(int count, unsigned seed) {
  std::mt19937 rng(seed);
  std::vector<RelationId> out;
  std::uniform_int_distribution<int> mag(0, 6), coin(0, 1);
  while (static_cast<int>(out.size()) < count) {
    bool half = coin(rng) == 1;
    std::array<long long, 4> p{};
    for (auto& v : p) {
      long long m = mag(rng);
      v = half ? 2 * m + 1 : 2 * m;
      if (coin(rng)) v = -v;
    }
    out.push_back(RelationId{p[0], p[1], p[2], p[3]});
  }
  return out;
}

}  // namespace

TEST_CASE("relation id validity and parity") {
  CHECK(RI(3, 2, 1, 0).valid());
  CHECK(RI(3, 2, 1, 0).is_integral());
  CHECK(RH(9, 7, 3, 1).valid());
  CHECK_FALSE(RH(9, 7, 3, 1).is_integral());
  CHECK_FALSE(RelationId{3, 2, 1, 0}.valid());
  CHECK_THROWS_AS(RelationId::from_doubled(1, 2, 3, 4), std::invalid_argument);
  CHECK(RI(5, 3, 2, 0).is_canonical());
  CHECK_FALSE(RI(5, 3, 3, 0).is_canonical());
  CHECK(RI(5, 2, 1, 0).needed_index() == 7);
  CHECK(eds::relation_to_string(RH(9, 7, 5, 3)) == "E(9/2,7/2,5/2,3/2)");
  CHECK(eds::relation_to_string(RI(6, 2, 1, 0)) == "E(6,2,1,0)");
}

TEST_CASE("rule I1 examples") {
  CHECK(eds::rule_I1(RI(3, 2, 1, 0)) == RI(3, 2, 1, 0));
  CHECK(eds::rule_I1(RI(5, 2, 1, 0)) == RI(4, 3, 2, 1));
  CHECK(eds::rule_I1(RI(4, 3, 2, 1)) == RI(5, 2, 1, 0));
  // (b+1, b, 3/2, 1/2) -> (b+3/2, b-1/2, 1, 0) for half-integer b = 9/2.
  CHECK(eds::rule_I1(RH(11, 9, 3, 1)) == RH(12, 8, 2, 0));
}

TEST_CASE("rule I2 examples") {
  CHECK(eds::rule_I2(RI(3, 2, 1, 0)) == RI(3, 2, 1, 0));
  // Half-integer detour forced by the even goal.
  CHECK(eds::rule_I2(RI(6, 2, 1, 0)) == RH(9, 7, 5, 3));
  // The image is an I2 fixed point once |.| has discarded the raw sign.
  CHECK(eds::rule_I2(RH(9, 7, 5, 3)) == RH(9, 7, 5, 3));
}

TEST_CASE("rules preserve the defect exactly") {
  for (const RelationId& r : random_ids(40, 20260823)) {
    long long need = std::max({r.needed_index(), eds::rule_I1(r).needed_index(),
                               eds::rule_I2(r).needed_index(), 1LL});
    SymbolicSeqRing s(static_cast<int>(need));
    Elem d = symbolic_relation(s, r);
    CHECK(symbolic_relation(s, eds::rule_I1(r)) == d);
    CHECK(symbolic_relation(s, eds::rule_I2(r)) == d);
    CHECK(eds::rule_I1(r).valid());
    CHECK(eds::rule_I2(r).valid());
  }
}

TEST_CASE("exactly one rule maps a half-integer id to an integer id") {
  for (const RelationId& r : random_ids(30, 7)) {
    if (r.is_integral()) continue;
    long long sum4 = (((r.a2 + r.b2 + r.c2 + r.d2) % 4) + 4) % 4;
    CHECK(eds::rule_I1(r).is_integral() == (sum4 == 0));
    CHECK(eds::rule_I2(r).is_integral() == (sum4 == 2));
    CHECK(eds::rule_I1(r).is_integral() != eds::rule_I2(r).is_integral());
  }
}

TEST_CASE("rules are involutions where the reflection stays nonnegative") {
  for (const RelationId& r : random_ids(60, 99)) {
    auto c = canonicalize(r).id;
    if (!c.is_canonical()) continue;
    if (c.a2 + c.d2 >= c.b2 + c.c2) CHECK(eds::rule_I1(eds::rule_I1(c)) == c);
    if (c.b2 + c.c2 + c.d2 >= c.a2) CHECK(eds::rule_I2(eds::rule_I2(c)) == c);
  }
}

TEST_CASE("canonicalize sorts, strips signs, and tracks the defect sign") {
  auto c = canonicalize(RI(2, 3, 1, 0));
  CHECK(c.id == RI(3, 2, 1, 0));
  CHECK(c.sign == -1);
  CHECK_FALSE(c.trivial);

  for (const RelationId& r : random_ids(50, 4242)) {
    auto cr = canonicalize(r);
    CHECK(cr.id.a2 >= cr.id.b2);
    CHECK(cr.id.b2 >= cr.id.c2);
    CHECK(cr.id.c2 >= cr.id.d2);
    CHECK(cr.id.d2 >= 0);
    long long need = std::max(r.needed_index(), 1LL);
    SymbolicSeqRing s(static_cast<int>(need));
    Elem orig = symbolic_relation(s, r);
    Elem canon = symbolic_relation(s, cr.id);
    CHECK(canon == (cr.sign == 1 ? orig : -orig));
    if (cr.trivial) CHECK(canon.is_zero());
    // Per-term bookkeeping.
    auto to = symbolic_relation_terms(s, r);
    auto tc = symbolic_relation_terms(s, cr.id);
    for (int j = 0; j < 3; ++j) {
      Elem expect = to[cr.term_from[j]];
      if (cr.term_sign[j] == -1) expect = -expect;
      CHECK(tc[j] == expect);
    }
  }
}

TEST_CASE("symbolic defects") {
  SymbolicSeqRing s(7);
  // E(5,2,1,0) = E(4,3,2,1) as polynomials.
  CHECK(symbolic_relation(s, RI(5, 2, 1, 0)) == symbolic_relation(s, RI(4, 3, 2, 1)));
  // Repeated parameter: identically zero through h_0 = 0.
  CHECK(symbolic_relation(s, RI(2, 1, 1, 0)).is_zero());
  CHECK(symbolic_relation(s, RI(3, 3, 2, 1)).is_zero());
  CHECK_THROWS_AS(symbolic_relation(SymbolicSeqRing(4), RI(5, 2, 1, 0)), std::invalid_argument);
}

TEST_CASE("defects are weighted homogeneous of weight 2(a^2+b^2+c^2+d^2)") {
  SymbolicSeqRing s(9);
  for (RelationId r : {RI(3, 2, 1, 0), RI(5, 2, 1, 0), RI(5, 4, 3, 2), RH(9, 7, 3, 1)}) {
    Elem d = symbolic_relation(s, r);
    auto w = d.as_poly().homogeneous_weight(s.index_square_weights());
    REQUIRE(w.has_value());
    long long expect =
        (r.a2 * r.a2 + r.b2 * r.b2 + r.c2 * r.c2 + r.d2 * r.d2) / 2;
    CHECK(*w == expect);
    // Same statement under w(h_n) = n^2 - 1: each monomial has four factors.
    std::vector<long long> shifted = s.index_square_weights();
    for (auto& x : shifted) x -= 1;
    auto w2 = d.as_poly().homogeneous_weight(shifted);
    REQUIRE(w2.has_value());
    CHECK(*w2 == expect - 4);
  }
}

TEST_CASE("net axiom matches the relation defect under the index shift") {
  // EN(p,q,r,s) corresponds to E(p + s/2, q + s/2, r + s/2, s/2).
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> v(0, 5);
  for (int it = 0; it < 25; ++it) {
    long long p = v(rng), q = v(rng), r = v(rng), s = v(rng);
    long long need = 3 * 5 + 5;
    SymbolicSeqRing sr(static_cast<int>(need));
    Elem lhs = symbolic_en(sr, p, q, r, s);
    Elem rhs = symbolic_relation(sr, RelationId{2 * p + s, 2 * q + s, 2 * r + s, s});
    CHECK(lhs == rhs);
  }
  SymbolicSeqRing sr(12);
  CHECK(symbolic_en(sr, 3, 3, 2, 1).is_zero());
  CHECK(symbolic_en(sr, 3, 2, 1, 0) == symbolic_relation(sr, RI(3, 2, 1, 0)));
}

TEST_CASE("three-term index identity") {
  CHECK(eds::verify_eq3_identity(4, 3, 2, 7));
  CHECK(eds::verify_eq3_identity(5, 3, 2, 8));
  CHECK(eds::verify_eq3_identity(6, 4, 3, 10));
  CHECK_THROWS_AS(eds::verify_eq3_identity(3, 3, 2, 8), std::invalid_argument);
}

TEST_CASE("three-from-two identities") {
  CHECK(eds::verify_rule_II1_identity(4, 3, 2, 1, 0, 8));
  CHECK(eds::verify_rule_II1_identity(5, 4, 3, 2, 0, 10));
  // Half-integer instance.
  CHECK(eds::verify_rule_II1_identity_2(9, 7, 5, 3, 1, 9));
  CHECK_THROWS_AS(eds::verify_rule_II1_identity(4, 3, 3, 1, 0, 8), std::invalid_argument);
  CHECK_THROWS_AS(eds::verify_rule_II1_identity_2(9, 7, 5, 3, 2, 9), std::invalid_argument);
}

TEST_CASE("exchange identities") {
  CHECK(eds::verify_exchange_identity(5, 4, 2, 1, 3, 9));
  CHECK(eds::verify_exchange_identity(6, 5, 3, 1, 4, 11));
  CHECK(eds::verify_exchange_identity_2(11, 9, 5, 1, 7, 10));
}

TEST_CASE("ten-term identity") {
  CHECK(eds::verify_rule_II2_identity(5, 4, 3, 2, 1, 0, 10));
  CHECK(eds::verify_rule_II2_identity(6, 5, 4, 3, 2, 1, 12));
  CHECK_THROWS_AS(eds::verify_rule_II2_identity(5, 4, 4, 2, 1, 0, 10), std::invalid_argument);
}

TEST_CASE("net axiom linear combination expands to the two-term cross") {
  CHECK(eds::verify_en_combination(4, 3, 1, 9));
  CHECK(eds::verify_en_combination(5, 3, 2, 12));
  CHECK(eds::verify_en_combination(3, 3, 2, 9));
}

TEST_CASE("relation basis enumeration") {
  auto basis = eds::mnr0_relation_basis(8);
  REQUIRE(basis.size() == 8);
  CHECK(basis.front() == RI(3, 2, 1, 0));
  CHECK(basis.back() == RI(6, 2, 1, 0));
  CHECK(eds::mnr0_relation_basis(10).size() == 20);
}

TEST_CASE("membership probe basics") {
  SymbolicSeqRing s(7);
  auto basis = eds::mnr0_relation_basis(7);
  CHECK(eds::nilpotency_probe(s, s.ring().zero(), basis) == 1);
  // A generator itself is a member at exponent 1.
  Elem g = symbolic_relation(s, RI(5, 2, 1, 0));
  CHECK(eds::nilpotency_probe(s, g, basis) == 1);
  // An h-multiple combination of two generators.
  Elem f = s.h(3) * symbolic_relation(s, RI(4, 3, 2, 0)) -
           s.h(7) * symbolic_relation(s, RI(4, 2, 1, 0));
  CHECK(eds::nilpotency_probe(s, f, basis) == 1);
  // A plain variable is not nilpotent modulo the ideal at any probed power.
  CHECK_FALSE(eds::nilpotency_probe(s, s.h(1), basis).has_value());
}

TEST_CASE("membership probe reproduces the bounded-index observations") {
  SymbolicSeqRing s(8);
  Elem e = symbolic_relation(s, RI(5, 3, 2, 1));
  REQUIRE_FALSE(e.is_zero());
  auto exp8 = eds::nilpotency_probe(s, e, eds::mnr0_relation_basis(8));
  CHECK(exp8 == 3);
}
