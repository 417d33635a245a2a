#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "natlog/ccg.hpp"
#include "natlog/lexicon.hpp"
#include "natlog/term.hpp"

namespace natlog {

// Directionality removal: fa/ba become applications with the function first,
// compositions become lambda abstractions, lx becomes a TypeChange marker and
// conj nodes become applications of the and/or constant. The result is
// beta-normal and well-typed.
Term remove_directionality(const CCGTree& tree);

// A guard over a metavariable bound by a rewrite pattern.
struct RewriteGuard {
  enum class Kind { kPos, kNe, kLemma, kConst, kNotNe };
  Kind kind;
  std::string var;
  std::vector<std::string> values;  // alternatives; empty means "any non-empty"
};

struct RewriteRule {
  enum class Kind { kPattern, kRename, kMultiword };
  Kind kind = Kind::kPattern;
  std::string name;
  Term pattern;
  Term templ;
  std::vector<RewriteGuard> guards;
  // kRename: lemma `from` becomes `to`, attrs kept.
  std::string from, to;
  // kMultiword: lemmas merged into one constant joined by '_'.
  std::vector<std::string> words;
};

// Parses the rewrite file. Blocks:
//   rewrite NAME / match PATTERN / where GUARD ... / into TEMPLATE / end
//   rename FROM TO
//   multiword W1 W2 ...
// Guards: pos(?X, NNP|NNPS), ne(?X), ne(?X, PER|LOC), no_ne(?X),
// lemma(?X, which|that), const(?X).
std::vector<RewriteRule> parse_rewrite_rules(std::string_view text);
const std::vector<RewriteRule>& bundled_rewrite_rules();

struct CorrectionStats {
  std::size_t applications = 0;
  std::map<std::string, std::size_t> per_rule;
};

// Applies the rules innermost-first in list order, each rule at most once per
// occurrence, until nothing applies. Throws CorrectionIncomplete if a
// TypeChange survives.
Term correct_term(const Term& t, const std::vector<RewriteRule>& rules, CorrectionStats* stats = nullptr);
Term correct_term(const Term& t);

// Raises every quantified NP (det:(n,np) restrictor, det a quantifier in the
// signature) to the generalized-quantifier type, once per scope order.
// Readings: surface order first, then the inverse order, then the remaining
// permutations lexicographically; alpha-duplicates removed; at most
// scope_cap results.
std::vector<Term> type_raise(const Term& t, const Signature& sig, int scope_cap = 8);

enum class AlignMode { kNone, kWeak, kStrong };

std::string to_string(AlignMode m);
AlignMode parse_align_mode(std::string_view s);

struct AlignmentResult {
  std::vector<Term> premises;
  Term hypothesis;
  std::map<std::string, Term> table;  // fresh constant lemma -> shared subterm
};

// Replaces maximal shared subterms of premise and hypothesis by fresh
// constants al1, al2, ... Downward monotone positions are never aligned,
// nor are every/no QNPs; indefinite QNPs only in strong mode.
AlignmentResult align(const Term& premise, const Term& hypothesis, AlignMode mode, const Signature& sig);

// Several premises are aligned one after another against the progressively
// aligned hypothesis.
AlignmentResult align(const std::vector<Term>& premises, const Term& hypothesis, AlignMode mode, const Signature& sig);

// Substitutes the table back into a term.
Term unalign(const Term& t, const std::map<std::string, Term>& table);

struct LlfOptions {
  bool first_only = false;
  int scope_cap = 8;
};

// remove_directionality, correct_term and type_raise composed.
std::vector<Term> generate_llfs(const CCGTree& tree, const Signature& sig, const LlfOptions& opts = {});

// The corrected CCG term (before raising), as used by the aligner.
Term corrected_term(const CCGTree& tree);

}  // namespace natlog
