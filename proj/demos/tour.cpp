// A guided tour of the library: generation, the universal sequence,
// window checking, derivations, classification, and the zero-pattern
// automaton.  Every value printed here is computed exactly.

#include <iostream>
#include <string>
#include <vector>

#include "eds/classify.hpp"
#include "eds/derive.hpp"
#include "eds/eds_standard.hpp"
#include "eds/relation.hpp"
#include "eds/ring.hpp"
#include "eds/sequence.hpp"

using eds::Elem;
using eds::EllipticSeq;
using eds::RelationId;
using eds::Ring;

namespace {

void heading(const std::string& title) { std::cout << "\n== " << title << " ==\n"; }

void print_terms(const EllipticSeq& seq, long long upto) {
  std::cout << seq.describe() << ":";
  for (long long n = 1; n <= upto; ++n) std::cout << " " << eds::elem_to_string(seq.at(n));
  std::cout << "\n";
}

}  // namespace

int main() {
  heading("standard sequences");
  Ring z = Ring::integers();
  Ring q = Ring::rationals();
  print_terms(EllipticSeq::std_eds(z.parse("2"), z.parse("3"), z.parse("2")), 12);
  print_terms(EllipticSeq::std_eds(q.parse("2"), q.parse("3"), q.parse("3/2")), 8);
  print_terms(EllipticSeq::even_odd(z.parse("1"), z.parse("1"), z.parse("-1"), z.parse("1")), 15);

  heading("the universal sequence");
  const Ring& u = eds::universal_ring();
  std::cout << "h_5 = " << eds::elem_to_string(eds::universal_term(5)) << "\n";
  std::cout << "h_6 = " << eds::elem_to_string(eds::universal_term(6)) << "\n";
  eds::DivisibilityWitness w = eds::divisibility_witness(3, 2);
  std::cout << "h_6 / h_3 = " << eds::elem_to_string(w.quotient)
            << "  (constructed without polynomial division)\n";
  std::size_t relation_count = eds::family_relations(14, eds::RelationFamily::Full).size();
  std::cout << relation_count << " relations with composite index <= 14: "
            << (eds::check_window(eds::universal_eds(), 14, eds::RelationFamily::Full).clean()
                    ? "all vanish identically"
                    : "violated")
            << "\n";

  heading("window checking catches broken sequences");
  std::vector<Elem> terms;
  for (long long v : {1, 1, 1, 1, 0, -1, -1, -1, 1}) terms.push_back(q.parse(std::to_string(v)));
  EllipticSeq broken = EllipticSeq::explicit_list(q, terms);
  eds::WindowReport report = eds::check_window(broken, 9, eds::RelationFamily::Full);
  std::cout << "tampered periodic window: " << report.violations.size()
            << " violated relations, first " << eds::relation_to_string(report.violations.front())
            << "\n";

  heading("derivations from the Somos base");
  RelationId goal = RelationId::from_integers(5, 3, 2, 1);
  eds::DerivationTree tree = eds::derive_from_somos(goal);
  std::cout << eds::relation_to_string(goal) << ": " << tree.size() << " nodes, side conditions:";
  for (const auto& pair : tree.side_conditions())
    std::cout << " h_" << pair[0] << "*h_" << pair[1];
  std::cout << "\n";
  eds::ReplayReport replay =
      eds::replay_symbolic(tree, static_cast<int>(tree.needed_symbolic_index()));
  std::cout << "symbolic replay: " << (replay.ok ? "ok" : replay.message) << "\n";

  heading("classification of a singular sequence");
  EllipticSeq es = EllipticSeq::es(1, 4, q.parse("2"), q.parse("3"), q.parse("-5"));
  print_terms(es, 12);
  eds::ClassificationResult res = eds::classify(es, 40);
  std::cout << "classified as " << eds::seq_type_name(res.tag) << " with r=" << res.r
            << " s=" << res.s << " A=" << eds::elem_to_string(*res.A)
            << " B=" << eds::elem_to_string(*res.B) << " D=" << eds::elem_to_string(*res.D)
            << "\n";

  heading("zero patterns of dropped-rank sequences");
  std::cout << "admissible cycle words:";
  for (const std::string& word : eds::automaton_loops()) std::cout << " " << word;
  std::cout << "\n";
  Ring f5 = Ring::prime_field(eds::Int(5));
  EllipticSeq patterned = eds::gen_type110({1, 1, 0, 0}, {0, 0, 1}, f5.parse("1"), f5.parse("2"),
                                           {f5.parse("3")}, 20);
  print_terms(patterned, 20);
  std::cout << "Somos-family relations on that window: "
            << (eds::check_window(patterned, 18, eds::RelationFamily::Somos).clean() ? "clean"
                                                                                     : "violated")
            << "\n";

  heading("power membership of a defect");
  eds::SymbolicSeqRing s8(8);
  Elem defect = eds::symbolic_relation(s8, goal);
  std::cout << "E(5,3,2,1) defect against the index-8 relation basis: exponent "
            << *eds::nilpotency_probe(s8, defect, eds::mnr0_relation_basis(8), 4) << "\n";
  eds::SymbolicSeqRing s10(10);
  std::cout << "same defect once h_9, h_10 relations join: exponent "
            << *eds::nilpotency_probe(s10, eds::symbolic_relation(s10, goal),
                                      eds::mnr0_relation_basis(10), 4)
            << "\n";
  return 0;
}
