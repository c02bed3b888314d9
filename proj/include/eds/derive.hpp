#pragma once

#include <algorithm>
#include <array>
#include <cstdlib>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "eds/sequence.hpp"

namespace eds {

enum class StepKind { BaseOdd, BaseEven, BaseSomos, Trivial, RuleI1, RuleI2, RuleII1, RuleII2 };

inline const char* step_kind_name(StepKind k) {
  switch (k) {
    case StepKind::BaseOdd: return "base-odd";
    case StepKind::BaseEven: return "base-even";
    case StepKind::BaseSomos: return "base-somos";
    case StepKind::Trivial: return "trivial";
    case StepKind::RuleI1: return "rule-I1";
    case StepKind::RuleI2: return "rule-I2";
    case StepKind::RuleII1: return "rule-II1";
    case StepKind::RuleII2: return "rule-II2";
  }
  return "?";
}

// Which conclusion a three-from-two combination targets: the shared pair's
// first or second index, or one of the two d/e exchange forms.
enum class RuleII1Variant { ConcludeC, ConcludeD, ExchangeCD, ExchangeEC };

inline const char* rule_ii1_variant_name(RuleII1Variant v) {
  switch (v) {
    case RuleII1Variant::ConcludeC: return "conclude-c";
    case RuleII1Variant::ConcludeD: return "conclude-d";
    case RuleII1Variant::ExchangeCD: return "exchange-cd";
    case RuleII1Variant::ExchangeEC: return "exchange-ec";
  }
  return "?";
}

struct DerivationNode {
  RelationId goal;
  StepKind step = StepKind::Trivial;
  RuleII1Variant variant = RuleII1Variant::ConcludeC;  // RuleII1 only
  // Rule parameters, doubled: {m2,n2,r2,c2,d2} for the conclude variants,
  // {a2,b2,c2,d2,e2} for the exchange variants, {m2,n2,r2,s2,c2,d2} for the
  // ten-term rule.  Empty for leaves and the reflection rules.
  std::vector<long long> rule_params2;
  // Composite indices (x, y): the step assumes h_x h_y is a non-zero-divisor.
  std::array<long long, 2> cofactor{0, 0};
  std::vector<RelationId> children;

  bool has_cofactor() const { return cofactor[0] != 0 || cofactor[1] != 0; }
};

// A derivation is stored as a goal-indexed node table (subgoals are shared,
// so the unfolded tree would be exponentially larger).  Leaves are base
// relations of the chosen family or trivial relations.
class DerivationTree {
 public:
  static DerivationTree from_parts(RelationId root, std::map<RelationId, DerivationNode> nodes) {
    DerivationTree t;
    t.root_ = root;
    t.nodes_ = std::move(nodes);
    return t;
  }

  const RelationId& root() const { return root_; }
  const std::map<RelationId, DerivationNode>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }

  const DerivationNode& node(const RelationId& id) const {
    auto it = nodes_.find(id);
    if (it == nodes_.end())
      throw std::out_of_range("no derivation node for " + relation_to_string(id));
    return it->second;
  }

  // Distinct non-zero-divisor requirements, as composite index pairs.
  std::vector<std::array<long long, 2>> side_conditions() const {
    std::set<std::array<long long, 2>> uniq;
    for (const auto& entry : nodes_)
      if (entry.second.has_cofactor()) uniq.insert(entry.second.cofactor);
    return std::vector<std::array<long long, 2>>(uniq.begin(), uniq.end());
  }

  // Largest h-index any node's relation touches; symbolic replay needs at
  // least this bound.
  long long needed_symbolic_index() const {
    long long m = 0;
    for (const auto& entry : nodes_) m = std::max(m, entry.first.needed_index());
    return m;
  }

 private:
  RelationId root_;
  std::map<RelationId, DerivationNode> nodes_;
};

namespace detail {

inline RelationId rel2(long long a2, long long b2, long long c2, long long d2) {
  return RelationId{a2, b2, c2, d2};
}

// Shared shape of a combination step: the conclusion with its T-multiplier,
// and the weighted child defects on the other side of the identity.
struct RuleShape {
  RelationId conclusion;
  std::array<long long, 2> lhs_pair2{0, 0};
  std::vector<std::array<long long, 2>> mult2;
  std::vector<RelationId> children;
  std::vector<int> coeff;
};

inline RuleShape rule_ii1_shape(RuleII1Variant v, const std::vector<long long>& p) {
  if (p.size() != 5) throw std::invalid_argument("three-from-two step needs 5 parameters");
  RuleShape sh;
  if (v == RuleII1Variant::ConcludeC || v == RuleII1Variant::ConcludeD) {
    long long m2 = p[0], n2 = p[1], r2 = p[2], c2 = p[3], d2 = p[4];
    long long t2 = v == RuleII1Variant::ConcludeC ? c2 : d2;
    sh.conclusion = rel2(m2, n2, r2, t2);
    sh.lhs_pair2 = {c2, d2};
    sh.mult2 = {{{r2, t2}}, {{n2, t2}}, {{m2, t2}}};
    sh.children = {rel2(m2, n2, c2, d2), rel2(m2, r2, c2, d2), rel2(n2, r2, c2, d2)};
    sh.coeff = {1, -1, 1};
    return sh;
  }
  long long a2 = p[0], b2 = p[1], c2 = p[2], d2 = p[3], e2 = p[4];
  sh.conclusion = rel2(a2, b2, c2, d2);
  sh.mult2 = {{{c2, d2}}, {{b2, c2}}, {{a2, c2}}};
  sh.coeff = {1, 1, -1};
  if (v == RuleII1Variant::ExchangeCD) {
    sh.lhs_pair2 = {c2, e2};
    sh.children = {rel2(a2, b2, c2, e2), rel2(a2, c2, e2, d2), rel2(b2, c2, e2, d2)};
  } else {
    sh.lhs_pair2 = {e2, c2};
    sh.children = {rel2(a2, b2, e2, c2), rel2(a2, e2, c2, d2), rel2(b2, e2, c2, d2)};
  }
  return sh;
}

inline RuleShape rule_ii2_shape(const std::vector<long long>& p) {
  if (p.size() != 6) throw std::invalid_argument("ten-term step needs 6 parameters");
  long long m2 = p[0], n2 = p[1], r2 = p[2], s2 = p[3], c2 = p[4], d2 = p[5];
  RuleShape sh;
  sh.conclusion = rel2(m2, n2, r2, s2);
  sh.lhs_pair2 = {c2, d2};
  sh.mult2 = {{{n2, d2}}, {{r2, d2}}, {{s2, d2}}, {{n2, c2}}, {{r2, c2}},
              {{s2, c2}}, {{n2, r2}}, {{n2, s2}}, {{r2, s2}}, {{m2, d2}}};
  sh.children = {rel2(m2, r2, s2, c2), rel2(m2, n2, s2, c2), rel2(m2, n2, r2, c2),
                 rel2(m2, r2, s2, d2), rel2(m2, n2, s2, d2), rel2(m2, n2, r2, d2),
                 rel2(m2, s2, c2, d2), rel2(m2, r2, c2, d2), rel2(m2, n2, c2, d2),
                 rel2(n2, r2, s2, c2)};
  sh.coeff = {1, -1, 1, 1, -1, 1, 1, -1, 1, -2};
  return sh;
}

inline std::array<long long, 2> composite_pair(const std::array<long long, 2>& pair2) {
  return {(pair2[0] + pair2[1]) / 2, (pair2[0] - pair2[1]) / 2};
}

// Lemma-style reduction to the minimal pair (1,0) resp. (3/2,1/2), plus the
// reflection induction on the first parameter for minimal-pair goals.
inline void derive_even_odd_into(std::map<RelationId, DerivationNode>& nodes,
                                 const RelationId& id) {
  if (nodes.count(id)) return;
  DerivationNode node;
  node.goal = id;
  bool half = !id.is_integral();
  long long cm2 = half ? 3 : 2;
  long long dm2 = half ? 1 : 0;
  if (id.c2 == cm2) {
    // Minimal-pair goal: induction on a.
    if (!half && id.a2 == id.b2 + 2) {
      node.step = StepKind::BaseOdd;
    } else if (!half && id.a2 == id.b2 + 4) {
      node.step = StepKind::BaseEven;
    } else if (half && id.a2 == id.b2 + 2) {
      // E(b+1, b, 3/2, 1/2) reflects onto the even base relation.
      node.step = StepKind::RuleI1;
      node.children.push_back(rule_I1(id));
    } else {
      node.step = StepKind::RuleI2;
      node.children.push_back(rule_I2(id));
    }
  } else if (id.d2 == dm2 || id.d2 == cm2) {
    node.step = StepKind::RuleII1;
    node.variant = id.d2 == dm2 ? RuleII1Variant::ConcludeD : RuleII1Variant::ConcludeC;
    node.rule_params2 = {id.a2, id.b2, id.c2, cm2, dm2};
  } else {
    node.step = StepKind::RuleII2;
    node.rule_params2 = {id.a2, id.b2, id.c2, id.d2, cm2, dm2};
  }
  if (node.step == StepKind::RuleII1 || node.step == StepKind::RuleII2) {
    RuleShape sh = node.step == StepKind::RuleII1 ? rule_ii1_shape(node.variant, node.rule_params2)
                                                  : rule_ii2_shape(node.rule_params2);
    node.cofactor = composite_pair(sh.lhs_pair2);
    node.children = sh.children;
  }
  nodes.emplace(id, node);
  for (const RelationId& ch : node.children) derive_even_odd_into(nodes, ch);
}

// The (a+b, a, -d) lexicographic induction: raise d by exchange while
// c > d+1, reflect while b < a-1, lower c by the swapped exchange while
// c < b-1, and finish by reflecting (d+3,d+2,d+1,d) onto a base relation.
inline void derive_somos_into(std::map<RelationId, DerivationNode>& nodes, const RelationId& id) {
  if (nodes.count(id)) return;
  DerivationNode node;
  node.goal = id;
  if (id.b2 == 4 && id.c2 == 2 && id.d2 == 0) {
    node.step = StepKind::BaseSomos;
  } else if (id.c2 > id.d2 + 2) {
    node.step = StepKind::RuleII1;
    node.variant = RuleII1Variant::ExchangeCD;
    node.rule_params2 = {id.a2, id.b2, id.c2, id.d2, id.d2 + 2};
  } else if (id.b2 < id.a2 - 2) {
    node.step = StepKind::RuleI2;
    node.children.push_back(rule_I2(id));
  } else if (id.c2 < id.b2 - 2) {
    node.step = StepKind::RuleII1;
    node.variant = RuleII1Variant::ExchangeEC;
    node.rule_params2 = {id.a2, id.b2, id.c2, id.d2, id.c2 + 2};
  } else {
    node.step = StepKind::RuleI1;
    node.children.push_back(rule_I1(id));
  }
  if (node.step == StepKind::RuleII1) {
    RuleShape sh = rule_ii1_shape(node.variant, node.rule_params2);
    node.cofactor = composite_pair(sh.lhs_pair2);
    node.children = sh.children;
  }
  nodes.emplace(id, node);
  for (const RelationId& ch : node.children) derive_somos_into(nodes, ch);
}

}  // namespace detail

inline void require_derivation_goal(const RelationId& goal) {
  if (!goal.valid()) throw std::invalid_argument("relation parameters must share parity");
  if (!goal.is_canonical())
    throw std::invalid_argument("derivation goal must be canonical (a > b > c > d >= 0)");
}

// Derivation of `goal` from the even-odd base relations E(n+1,n,1,0) and
// E(n+1,n-1,1,0).  Interior nodes mix integer and half-integer parameters;
// every side condition is the minimal pair h_1^2 or h_2 h_1.
inline DerivationTree derive_from_even_odd(const RelationId& goal) {
  require_derivation_goal(goal);
  std::map<RelationId, DerivationNode> nodes;
  detail::derive_even_odd_into(nodes, goal);
  return DerivationTree::from_parts(goal, std::move(nodes));
}

// Derivation of `goal` from the base relations E(n,2,1,0) with n <= a+b-2;
// every side condition has composite indices <= a+b-4.
inline DerivationTree derive_from_somos(const RelationId& goal) {
  require_derivation_goal(goal);
  std::map<RelationId, DerivationNode> nodes;
  detail::derive_somos_into(nodes, goal);
  return DerivationTree::from_parts(goal, std::move(nodes));
}

struct ReplayReport {
  bool ok = false;
  std::string message;  // names the failing node when !ok
};

namespace detail {

inline ReplayReport replay_fail(const RelationId& id, const std::string& why) {
  return ReplayReport{false, "node " + relation_to_string(id) + ": " + why};
}

// Structural checking shared by both replay modes: all children resolve, the
// link structure is acyclic, and every node's step matches its goal shape.
inline ReplayReport validate_structure(const DerivationTree& tree) {
  const auto& nodes = tree.nodes();
  if (!nodes.count(tree.root())) return ReplayReport{false, "root node missing"};
  for (const auto& entry : nodes) {
    const RelationId& id = entry.first;
    const DerivationNode& node = entry.second;
    if (node.goal != id) return replay_fail(id, "goal mismatch with table key");
    for (const RelationId& ch : node.children)
      if (!nodes.count(ch))
        return replay_fail(id, "missing child " + relation_to_string(ch));
    switch (node.step) {
      case StepKind::BaseOdd:
        if (!(id.is_integral() && id.a2 == id.b2 + 2 && id.c2 == 2 && id.d2 == 0))
          return replay_fail(id, "not an odd base relation");
        break;
      case StepKind::BaseEven:
        if (!(id.is_integral() && id.a2 == id.b2 + 4 && id.c2 == 2 && id.d2 == 0))
          return replay_fail(id, "not an even base relation");
        break;
      case StepKind::BaseSomos:
        if (!(id.is_integral() && id.b2 == 4 && id.c2 == 2 && id.d2 == 0))
          return replay_fail(id, "not a Somos base relation");
        break;
      case StepKind::Trivial:
        if (!canonicalize(id).trivial) return replay_fail(id, "not a trivial relation");
        break;
      case StepKind::RuleI1:
        if (node.children.size() != 1 || node.children[0] != rule_I1(id))
          return replay_fail(id, "reflection child mismatch");
        break;
      case StepKind::RuleI2:
        if (node.children.size() != 1 || node.children[0] != rule_I2(id))
          return replay_fail(id, "reflection child mismatch");
        break;
      case StepKind::RuleII1:
      case StepKind::RuleII2: {
        RuleShape sh;
        try {
          sh = node.step == StepKind::RuleII1 ? rule_ii1_shape(node.variant, node.rule_params2)
                                              : rule_ii2_shape(node.rule_params2);
        } catch (const std::invalid_argument& e) {
          return replay_fail(id, e.what());
        }
        if (sh.conclusion != id) return replay_fail(id, "conclusion mismatch");
        if (sh.children != node.children) return replay_fail(id, "combination child mismatch");
        if (composite_pair(sh.lhs_pair2) != node.cofactor)
          return replay_fail(id, "cofactor mismatch");
        break;
      }
    }
  }
  // Iterative three-color depth-first search for cycles.
  std::map<RelationId, int> color;
  for (const auto& entry : nodes) {
    if (color.count(entry.first)) continue;
    std::vector<std::pair<RelationId, std::size_t>> stack{{entry.first, 0}};
    color[entry.first] = 1;
    while (!stack.empty()) {
      auto& [cur, next] = stack.back();
      const DerivationNode& node = nodes.at(cur);
      if (next < node.children.size()) {
        RelationId ch = node.children[next++];
        auto it = color.find(ch);
        if (it == color.end()) {
          color[ch] = 1;
          stack.emplace_back(ch, 0);
        } else if (it->second == 1) {
          return replay_fail(ch, "cycle in derivation");
        }
      } else {
        color[cur] = 2;
        stack.pop_back();
      }
    }
  }
  return ReplayReport{true, ""};
}

}  // namespace detail

// Re-verifies every node's defining identity as an exact polynomial equation
// in Z[h_1..h_K].  K must cover every index the derivation touches.
inline ReplayReport replay_symbolic(const DerivationTree& tree, int K) {
  long long need = tree.needed_symbolic_index();
  if (K < need)
    throw std::invalid_argument("symbolic bound " + std::to_string(K) +
                                " below required index " + std::to_string(need));
  ReplayReport rep = detail::validate_structure(tree);
  if (!rep.ok) return rep;
  SymbolicSeqRing s(K);
  for (const auto& entry : tree.nodes()) {
    const DerivationNode& node = entry.second;
    switch (node.step) {
      case StepKind::BaseOdd:
      case StepKind::BaseEven:
      case StepKind::BaseSomos:
        break;  // axioms of the chosen family; shape already validated
      case StepKind::Trivial:
        if (!symbolic_relation(s, node.goal).is_zero())
          return detail::replay_fail(node.goal, "trivial node with nonzero defect");
        break;
      case StepKind::RuleI1:
      case StepKind::RuleI2:
        if (symbolic_relation(s, node.goal) != symbolic_relation(s, node.children[0]))
          return detail::replay_fail(node.goal, "reflection changes the defect");
        break;
      case StepKind::RuleII1:
      case StepKind::RuleII2: {
        detail::RuleShape sh = node.step == StepKind::RuleII1
                                   ? detail::rule_ii1_shape(node.variant, node.rule_params2)
                                   : detail::rule_ii2_shape(node.rule_params2);
        Elem lhs = symbolic_T(s, sh.lhs_pair2[0], sh.lhs_pair2[1], node.goal);
        Elem rhs = s.ring().zero();
        for (std::size_t i = 0; i < sh.children.size(); ++i) {
          Elem t = symbolic_T(s, sh.mult2[i][0], sh.mult2[i][1], sh.children[i]);
          for (int k = 0; k < std::abs(sh.coeff[i]); ++k)
            rhs = sh.coeff[i] > 0 ? rhs + t : rhs - t;
        }
        if (lhs != rhs) return detail::replay_fail(node.goal, "combination identity fails");
        break;
      }
    }
  }
  return ReplayReport{true, ""};
}

// Defect-propagation check on a concrete sequence: every node's relation must
// evaluate to zero and every recorded side condition must be a
// non-zero-divisor.
inline ReplayReport replay_numeric(const DerivationTree& tree, const EllipticSeq& seq) {
  ReplayReport rep = detail::validate_structure(tree);
  if (!rep.ok) return rep;
  for (const auto& entry : tree.nodes()) {
    const DerivationNode& node = entry.second;
    TermResult defect = eval_relation(seq, node.goal);
    if (!defect.ok())
      return detail::replay_fail(node.goal,
                                 "defect unavailable (failure at index " +
                                     std::to_string(defect.failure().index) + ")");
    if (!defect.value().is_zero()) return detail::replay_fail(node.goal, "defect nonzero");
    if (node.has_cofactor()) {
      TermResult hx = seq.term(node.cofactor[0]);
      TermResult hy = seq.term(node.cofactor[1]);
      if (!hx.ok() || !hy.ok())
        return detail::replay_fail(node.goal, "side condition term unavailable");
      if (is_zero_divisor(hx.value() * hy.value()))
        return detail::replay_fail(node.goal,
                                   "side condition h_" + std::to_string(node.cofactor[0]) +
                                       " h_" + std::to_string(node.cofactor[1]) +
                                       " is a zero divisor");
    }
  }
  return ReplayReport{true, ""};
}

}  // namespace eds
