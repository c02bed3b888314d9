#pragma once

// Command-line adapter: argument parsing, object construction, and JSON
// Lines / TSV serialization.  All algebra lives in the library headers; this
// file only translates between the shell and the API.
//
// Exit codes: 0 success, 2 reported violations or failed verdicts, 1 usage,
// ring, or evaluation errors.

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "eds/classify.hpp"
#include "eds/derive.hpp"
#include "eds/eds_standard.hpp"
#include "eds/relation.hpp"
#include "eds/ring.hpp"
#include "eds/sequence.hpp"

namespace eds::cli {

using Json = nlohmann::ordered_json;

namespace detail {

inline long long to_ll(const std::string& s) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not an integer: " + s);
  }
  if (used != s.size()) throw std::invalid_argument("not an integer: " + s);
  return v;
}

// Relation parameters are integers or halves written like "7/2"; both are
// carried as doubled values.
inline long long parse_doubled(const std::string& s) {
  std::size_t slash = s.find('/');
  if (slash == std::string::npos) return 2 * to_ll(s);
  if (s.substr(slash + 1) != "2")
    throw std::invalid_argument("half-integer parameters use the form k/2, got: " + s);
  return to_ll(s.substr(0, slash));
}

inline RelationId parse_relation(const std::vector<std::string>& quad) {
  return RelationId::from_doubled(parse_doubled(quad[0]), parse_doubled(quad[1]),
                                  parse_doubled(quad[2]), parse_doubled(quad[3]));
}

inline std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t c = s.find(',', pos);
    if (c == std::string::npos) {
      out.push_back(s.substr(pos));
      return out;
    }
    out.push_back(s.substr(pos, c - pos));
    pos = c + 1;
  }
}

inline void require_format(const std::string& format) {
  if (format != "json" && format != "tsv")
    throw std::invalid_argument("unknown output format: " + format);
}

// Sequence-construction flags shared by the verbs that consume a sequence.
struct GenSpec {
  std::vector<std::string> std_eds, even_odd, somos, es;
  std::string list;
  std::string ring_text;

  bool any() const {
    return !std_eds.empty() || !even_odd.empty() || !somos.empty() || !es.empty() || !list.empty();
  }
};

inline void add_generator_options(CLI::App* cmd, GenSpec& g) {
  cmd->add_option("--std", g.std_eds, "standard sequence parameters: b c d")->expected(3);
  cmd->add_option("--even-odd", g.even_odd, "initial terms h1 h2 h3 h4, even/odd doubling scheme")
      ->expected(4);
  cmd->add_option("--somos", g.somos, "initial terms h1 h2 h3 h4, Somos scheme")->expected(4);
  cmd->add_option("--es", g.es, "singular sequence parameters: r s A B D")->expected(5);
  cmd->add_option("--list", g.list, "explicit terms h1,h2,... (comma separated)");
  cmd->add_option("--ring", g.ring_text,
                  "coefficient ring: Z | Q | Zmod:n | Fp:p | Poly:Z[v,...] | Frac:<ring>");
}

inline EllipticSeq build_sequence(const GenSpec& g) {
  int picked = static_cast<int>(!g.std_eds.empty()) + static_cast<int>(!g.even_odd.empty()) +
               static_cast<int>(!g.somos.empty()) + static_cast<int>(!g.es.empty()) +
               static_cast<int>(!g.list.empty());
  if (picked != 1)
    throw std::invalid_argument(
        "choose exactly one of --std / --even-odd / --somos / --es / --list");
  if (g.ring_text.empty()) throw std::invalid_argument("--ring is required");
  Ring ring = Ring::parse_description(g.ring_text);
  auto e = [&](const std::string& text) { return ring.parse(text); };
  if (!g.std_eds.empty())
    return EllipticSeq::std_eds(e(g.std_eds[0]), e(g.std_eds[1]), e(g.std_eds[2]));
  if (!g.even_odd.empty())
    return EllipticSeq::even_odd(e(g.even_odd[0]), e(g.even_odd[1]), e(g.even_odd[2]),
                                 e(g.even_odd[3]));
  if (!g.somos.empty())
    return EllipticSeq::somos4(e(g.somos[0]), e(g.somos[1]), e(g.somos[2]), e(g.somos[3]));
  if (!g.es.empty())
    return EllipticSeq::es(to_ll(g.es[0]), to_ll(g.es[1]), e(g.es[2]), e(g.es[3]), e(g.es[4]));
  std::vector<Elem> terms;
  for (const std::string& t : split_commas(g.list)) terms.push_back(e(t));
  return EllipticSeq::explicit_list(ring, std::move(terms));
}

inline RelationFamily parse_family(const std::string& name) {
  if (name == "full") return RelationFamily::Full;
  if (name == "mnr0") return RelationFamily::MNR0;
  if (name == "mn10") return RelationFamily::MN10;
  if (name == "even-odd") return RelationFamily::EvenOdd;
  if (name == "somos") return RelationFamily::Somos;
  throw std::invalid_argument("unknown relation family: " + name);
}

inline Json relation_json(const RelationId& id) {
  Json j;
  j["a2"] = id.a2;
  j["b2"] = id.b2;
  j["c2"] = id.c2;
  j["d2"] = id.d2;
  return j;
}

// Relation value on a sequence: the three pairing products and the defect
// lhs - rhs1 + rhs2.  Callers must know the terms are available.
inline Json relation_value_json(const EllipticSeq& seq, const RelationId& id) {
  Json j;
  j["relation"] = relation_to_string(id);
  j["a2"] = id.a2;
  j["b2"] = id.b2;
  j["c2"] = id.c2;
  j["d2"] = id.d2;
  auto indices = id.term_indices();
  std::array<Elem, 3> product{seq.ring().one(), seq.ring().one(), seq.ring().one()};
  for (int t = 0; t < 3; ++t)
    for (long long idx : indices[t]) product[t] = product[t] * seq.at(idx);
  j["lhs"] = elem_to_string(product[0]);
  j["rhs1"] = elem_to_string(product[1]);
  j["rhs2"] = elem_to_string(product[2]);
  j["defect"] = elem_to_string(product[0] - product[1] + product[2]);
  return j;
}

inline int run_gen(const GenSpec& spec, long long from, long long upto, const std::string& format,
                   std::ostream& out) {
  require_format(format);
  if (from > upto) throw std::invalid_argument("--from exceeds --upto");
  EllipticSeq seq = build_sequence(spec);
  if (format == "json") {
    Json header;
    header["sequence"] = seq.describe();
    header["ring"] = spec.ring_text;
    out << header.dump() << "\n";
  }
  for (long long n = from; n <= upto; ++n) {
    Elem v = seq.at(n);
    if (format == "json") {
      Json line;
      line["n"] = n;
      line["value"] = elem_to_string(v);
      out << line.dump() << "\n";
    } else {
      out << n << "\t" << elem_to_string(v) << "\n";
    }
  }
  return 0;
}

inline int run_check(const GenSpec& spec, long long window, const std::string& family_name,
                     long long sample, unsigned long seed, const std::string& format,
                     std::ostream& out) {
  require_format(format);
  if (window < 1) throw std::invalid_argument("--window must be positive");
  EllipticSeq seq = build_sequence(spec);
  RelationFamily family = parse_family(family_name);
  std::vector<RelationId> relations = family_relations(window, family);
  if (sample > 0 && sample < static_cast<long long>(relations.size())) {
    std::vector<RelationId> picked;
    std::mt19937 rng(static_cast<std::mt19937::result_type>(seed));
    std::sample(relations.begin(), relations.end(), std::back_inserter(picked),
                static_cast<std::size_t>(sample), rng);
    relations = std::move(picked);
  }
  long long violations = 0;
  for (const RelationId& id : relations) {
    TermResult defect = eval_relation(seq, id);
    if (!defect.ok())
      throw std::runtime_error("relation " + relation_to_string(id) +
                               " not evaluable: term " + std::to_string(defect.failure().index) +
                               " (" + failure_reason_name(defect.failure().reason) + ")");
    if (defect.value().is_zero()) continue;
    ++violations;
    if (format == "json") {
      out << relation_value_json(seq, id).dump() << "\n";
    } else {
      out << id.a2 << "\t" << id.b2 << "\t" << id.c2 << "\t" << id.d2 << "\t"
          << elem_to_string(defect.value()) << "\n";
    }
  }
  if (format == "json") {
    Json summary;
    summary["checked"] = relations.size();
    summary["violations"] = violations;
    summary["clean"] = violations == 0;
    out << summary.dump() << "\n";
  }
  return violations == 0 ? 0 : 2;
}

inline int run_derive(const std::vector<std::string>& goal_args, const std::string& base,
                      const std::string& replay, const GenSpec& spec, std::ostream& out) {
  RelationId goal = parse_relation(goal_args);
  DerivationTree tree;
  if (base == "somos") {
    tree = derive_from_somos(goal);
  } else if (base == "even-odd") {
    tree = derive_from_even_odd(goal);
  } else {
    throw std::invalid_argument("unknown derivation base: " + base);
  }

  Json header;
  header["root"] = relation_json(goal);
  header["base"] = base;
  header["nodes"] = tree.size();
  header["max_index"] = tree.needed_symbolic_index();
  Json sides = Json::array();
  for (const auto& pair : tree.side_conditions()) sides.push_back(Json::array({pair[0], pair[1]}));
  header["side_conditions"] = std::move(sides);
  out << header.dump() << "\n";

  for (const auto& entry : tree.nodes()) {
    const DerivationNode& node = entry.second;
    Json line;
    line["goal"] = relation_json(node.goal);
    line["step"] = step_kind_name(node.step);
    if (node.step == StepKind::RuleII1) line["variant"] = rule_ii1_variant_name(node.variant);
    if (!node.rule_params2.empty()) line["params2"] = node.rule_params2;
    if (node.has_cofactor()) line["cofactor"] = Json::array({node.cofactor[0], node.cofactor[1]});
    if (!node.children.empty()) {
      Json children = Json::array();
      for (const RelationId& child : node.children) children.push_back(relation_json(child));
      line["children"] = std::move(children);
    }
    out << line.dump() << "\n";
  }

  if (replay == "none") return 0;
  ReplayReport report;
  if (replay == "symbolic") {
    report = replay_symbolic(tree, static_cast<int>(tree.needed_symbolic_index()));
  } else if (replay == "numeric") {
    report = replay_numeric(tree, build_sequence(spec));
  } else {
    throw std::invalid_argument("unknown replay mode: " + replay);
  }
  if (report.ok) {
    out << "replay: ok\n";
    return 0;
  }
  out << "replay: failed (" << report.message << ")\n";
  return 2;
}

inline int run_witness(const std::vector<std::string>& indices, long long triple,
                       const std::string& format, std::ostream& out) {
  require_format(format);
  const EllipticSeq& h = universal_eds();
  if (triple > 0) {
    if (!indices.empty())
      throw std::invalid_argument("--triple takes no positional indices");
    Elem q = triple_product_witness(triple);
    bool checked = q * h.at(3) * h.at(2) == h.at(triple + 1) * h.at(triple) * h.at(triple - 1);
    if (format == "json") {
      Json j;
      j["n"] = triple;
      j["quotient"] = elem_to_string(q);
      j["checked"] = checked;
      out << j.dump() << "\n";
    } else {
      out << triple << "\t" << elem_to_string(q) << "\n";
    }
    return checked ? 0 : 2;
  }
  if (indices.size() != 2)
    throw std::invalid_argument("witness takes two indices m n, or --triple n");
  long long m = to_ll(indices[0]);
  long long n = to_ll(indices[1]);
  if (m < 1 || n < 1) throw std::invalid_argument("witness indices must be positive");
  DivisibilityWitness w = divisibility_witness(m, n);
  bool checked = w.quotient * h.at(m) == h.at(m * n);
  if (format == "json") {
    Json j;
    j["m"] = m;
    j["n"] = n;
    j["quotient"] = elem_to_string(w.quotient);
    j["checked"] = checked;
    out << j.dump() << "\n";
  } else {
    out << m << "\t" << n << "\t" << elem_to_string(w.quotient) << "\n";
  }
  return checked ? 0 : 2;
}

inline int run_invariant(const std::string& which, long long upto, const GenSpec& spec,
                         const std::string& format, std::ostream& out) {
  require_format(format);
  long long checked = 0;
  long long failures = 0;
  if (which == "swart") {
    if (upto < 2) throw std::invalid_argument("swart sweep needs --upto at least 2");
    for (long long m = 2; m <= upto; ++m) {
      bool ok = swart_invariant_identity_check(m);
      ++checked;
      if (!ok) ++failures;
      if (format == "json") {
        Json line;
        line["m"] = m;
        line["ok"] = ok;
        out << line.dump() << "\n";
      } else {
        out << m << "\t" << (ok ? "true" : "false") << "\n";
      }
    }
  } else if (which == "translation") {
    EllipticSeq seq = spec.any() ? build_sequence(spec) : universal_eds();
    for (long long m = 3; m <= upto; ++m)
      for (long long n = 2; n < m; ++n)
        for (long long s = 1; s < n; ++s) {
          bool ok = translation_invariant_cross_check(seq, m, n, s);
          ++checked;
          if (!ok) ++failures;
          if (format == "json") {
            Json line;
            line["m"] = m;
            line["n"] = n;
            line["s"] = s;
            line["ok"] = ok;
            out << line.dump() << "\n";
          } else {
            out << m << "\t" << n << "\t" << s << "\t" << (ok ? "true" : "false") << "\n";
          }
        }
  } else {
    throw std::invalid_argument("unknown invariant sweep: " + which);
  }
  if (format == "json") {
    Json summary;
    summary["checked"] = checked;
    summary["failures"] = failures;
    out << summary.dump() << "\n";
  }
  return failures == 0 ? 0 : 2;
}

inline int run_classify(const GenSpec& spec, long long upto, std::ostream& out) {
  EllipticSeq seq = build_sequence(spec);
  ClassificationResult res = classify(seq, upto);
  Json j;
  j["tag"] = seq_type_name(res.tag);
  if (res.tag == SeqType::TypeI || res.tag == SeqType::TypeII || res.tag == SeqType::TypeIII)
    j["r"] = res.r;
  if (res.tag == SeqType::TypeII) j["s"] = res.s;
  if (res.A) j["A"] = elem_to_string(*res.A);
  if (res.B) j["B"] = elem_to_string(*res.B);
  if (res.C) j["C"] = elem_to_string(*res.C);
  if (res.D) j["D"] = elem_to_string(*res.D);
  if (res.witness) j["witness"] = relation_value_json(seq, *res.witness);
  if (res.horizon > 0) j["horizon"] = res.horizon;
  if (!res.note.empty()) j["note"] = res.note;
  j["window"] = upto;
  j["sequence"] = seq.describe();
  out << j.dump() << "\n";
  return res.tag == SeqType::NotElliptic ? 2 : 0;
}

inline int run_automaton(bool dot, const std::string& format, std::ostream& out) {
  require_format(format);
  if (dot) {
    out << automaton_dot();
    return 0;
  }
  auto edges = automaton_transitions();
  if (format == "tsv") {
    for (const auto& edge : edges)
      out << pattern_state_name(edge.first) << "\t" << pattern_state_name(edge.second) << "\n";
    return 0;
  }
  Json initial = Json::array();
  for (const PatternState& s : automaton_initial_states()) initial.push_back(pattern_state_name(s));
  out << Json{{"initial", std::move(initial)}}.dump() << "\n";
  for (const auto& edge : edges) {
    Json line;
    line["from"] = pattern_state_name(edge.first);
    line["to"] = pattern_state_name(edge.second);
    out << line.dump() << "\n";
  }
  Json reachable = Json::array();
  for (const PatternState& s : automaton_reachable_states()) reachable.push_back(pattern_state_name(s));
  out << Json{{"reachable", std::move(reachable)}}.dump() << "\n";
  Json loops = Json::array();
  for (const std::string& word : automaton_loops()) loops.push_back(word);
  out << Json{{"loops", std::move(loops)}}.dump() << "\n";
  return 0;
}

inline int run_probe(const std::vector<std::string>& goal_args, int bound, int max_exponent,
                     std::ostream& out) {
  if (bound < 1) throw std::invalid_argument("--bound must be positive");
  if (max_exponent < 1) throw std::invalid_argument("--max-exponent must be positive");
  RelationId id = parse_relation(goal_args);
  SymbolicSeqRing sring(bound);
  Elem defect = symbolic_relation(sring, id);
  std::vector<RelationId> basis = mnr0_relation_basis(bound);
  std::optional<int> exponent = nilpotency_probe(sring, defect, basis, max_exponent);
  Json j;
  j["relation"] = relation_to_string(id);
  j["bound"] = bound;
  j["relations"] = basis.size();
  j["max_exponent"] = max_exponent;
  if (exponent)
    j["exponent"] = *exponent;
  else
    j["exponent"] = nullptr;
  out << j.dump() << "\n";
  return 0;
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact elliptic divisibility sequences: generation, checking, derivations"};
  app.name("eds");
  app.require_subcommand(1);

  detail::GenSpec gen_spec;
  long long gen_from = 1, gen_upto = 0;
  std::string gen_format = "json";
  CLI::App* gen = app.add_subcommand("gen", "generate sequence terms");
  detail::add_generator_options(gen, gen_spec);
  gen->add_option("--upto", gen_upto, "last index to emit")->required();
  gen->add_option("--from", gen_from, "first index to emit (default 1)");
  gen->add_option("--format", gen_format, "json | tsv");

  detail::GenSpec check_spec;
  long long check_window = 0, check_sample = 0;
  unsigned long check_seed = 0;
  std::string check_family = "full", check_format = "json";
  CLI::App* check = app.add_subcommand("check", "evaluate a relation family over a window");
  detail::add_generator_options(check, check_spec);
  check->add_option("--window", check_window, "largest composite index a+b")->required();
  check->add_option("--family", check_family, "full | mnr0 | mn10 | even-odd | somos");
  check->add_option("--sample", check_sample, "check a random subset of this size");
  check->add_option("--seed", check_seed, "seed for --sample selection");
  check->add_option("--format", check_format, "json | tsv");

  detail::GenSpec derive_spec;
  std::vector<std::string> derive_goal;
  std::string derive_base, derive_replay = "symbolic";
  CLI::App* derive = app.add_subcommand("derive", "derive a relation from a base family");
  derive->add_option("goal", derive_goal, "relation parameters a b c d (halves like 7/2 allowed)")
      ->expected(4);
  derive->add_option("--base", derive_base, "somos | even-odd")->required();
  derive->add_option("--replay", derive_replay, "symbolic | numeric | none (default symbolic)");
  detail::add_generator_options(derive, derive_spec);

  std::vector<std::string> witness_indices;
  long long witness_triple = 0;
  std::string witness_format = "json";
  CLI::App* witness = app.add_subcommand("witness", "divisibility witness in the universal sequence");
  witness->add_option("indices", witness_indices, "indices m n: quotient q with q*h_m = h_{m*n}")
      ->expected(-1);
  witness->add_option("--triple", witness_triple,
                      "index n: quotient q with q*h_3*h_2 = h_{n+1}*h_n*h_{n-1}");
  witness->add_option("--format", witness_format, "json | tsv");

  detail::GenSpec invariant_spec;
  std::string invariant_which, invariant_format = "json";
  long long invariant_upto = 0;
  CLI::App* invariant = app.add_subcommand("invariant", "sweep an invariant identity");
  invariant->add_option("which", invariant_which, "swart | translation")->required();
  invariant->add_option("--upto", invariant_upto, "largest index in the sweep")->required();
  detail::add_generator_options(invariant, invariant_spec);
  invariant->add_option("--format", invariant_format, "json | tsv");

  detail::GenSpec classify_spec;
  long long classify_upto = 0;
  CLI::App* classify_cmd = app.add_subcommand("classify", "classify a sequence window");
  detail::add_generator_options(classify_cmd, classify_spec);
  classify_cmd->add_option("--upto", classify_upto, "window length")->required();

  bool automaton_dot_flag = false;
  std::string automaton_format = "json";
  CLI::App* automaton = app.add_subcommand("automaton", "zero-pattern transition system");
  automaton->add_flag("--dot", automaton_dot_flag, "emit Graphviz DOT");
  automaton->add_option("--format", automaton_format, "json | tsv");

  std::vector<std::string> probe_goal;
  int probe_bound = 0, probe_max_exponent = 4;
  CLI::App* probe = app.add_subcommand("probe", "power membership in the relation ideal");
  probe->add_option("goal", probe_goal, "relation parameters a b c d")->expected(4);
  probe->add_option("--bound", probe_bound, "largest symbolic index")->required();
  probe->add_option("--max-exponent", probe_max_exponent, "largest power tried (default 4)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;
  }

  try {
    if (gen->parsed()) return detail::run_gen(gen_spec, gen_from, gen_upto, gen_format, out);
    if (check->parsed())
      return detail::run_check(check_spec, check_window, check_family, check_sample, check_seed,
                               check_format, out);
    if (derive->parsed()) return detail::run_derive(derive_goal, derive_base, derive_replay,
                                                    derive_spec, out);
    if (witness->parsed())
      return detail::run_witness(witness_indices, witness_triple, witness_format, out);
    if (invariant->parsed())
      return detail::run_invariant(invariant_which, invariant_upto, invariant_spec,
                                   invariant_format, out);
    if (classify_cmd->parsed()) return detail::run_classify(classify_spec, classify_upto, out);
    if (automaton->parsed())
      return detail::run_automaton(automaton_dot_flag, automaton_format, out);
    if (probe->parsed()) return detail::run_probe(probe_goal, probe_bound, probe_max_exponent, out);
  } catch (const std::exception& e) {
    err << "eds: " << e.what() << "\n";
    return 1;
  }
  err << "eds: no verb selected\n";
  return 1;
}

}  // namespace eds::cli
