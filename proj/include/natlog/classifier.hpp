#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "natlog/ccg.hpp"
#include "natlog/llfgen.hpp"
#include "natlog/tableau.hpp"

namespace natlog {

enum class Label { kEntailment, kContradiction, kNeutral };

// "E", "C", "N".
std::string to_string(Label l);
// Accepts E/C/N and entailment/contradiction/neutral.
Label parse_label(std::string_view s);

// A sentence given either as a derivation or as an already corrected term.
struct SentenceInput {
  std::string id;
  std::optional<CCGTree> tree;
  std::optional<Term> llf;
};

struct Problem {
  std::string id;
  std::vector<SentenceInput> premises;
  SentenceInput hypothesis;
  std::optional<Label> gold;
};

struct ClassifierConfig {
  ProverConfig prover;
  AlignMode align = AlignMode::kNone;
  int scope_cap = 8;
  bool all_readings = false;
};

struct Judgment {
  Label label = Label::kNeutral;
  ProofResult entail;
  ProofResult contra;
  AlignMode used_alignment = AlignMode::kNone;
  int rule_applications = 0;  // over every tableau built for the problem
  bool limit_hit = false;
};

// Builds the entailment tableau {P:T.., H:F} and the contradiction tableau
// {P:T.., H:T}. With alignment on, aligned terms are proved first and the
// plain terms are used for any tableau that stays open. Throws CompileError
// when a sentence cannot be compiled.
Judgment classify(const Problem& p, const ClassifierConfig& cfg = {}, const ProverContext& ctx = bundled_context());

// Label from two closure statuses.
Label decide(bool entail_closed, bool contra_closed);

// Agreeing non-neutral judgments win; conflicts and all-neutral give neutral.
// Throws EmptyInput on an empty list.
Judgment aggregate(const std::vector<Judgment>& js);

struct BatchItem {
  std::string id;
  std::optional<Label> gold;
  std::optional<Judgment> judgment;  // empty when the problem failed
  std::string error;
  double ms = 0;
};

// Classifies problems on `workers` threads; results keep input order.
std::vector<BatchItem> classify_batch(const std::vector<Problem>& problems, const ClassifierConfig& cfg,
                                      const ProverContext& ctx, int workers = 1);

// One self-delimiting JSON line: {"id","label","rule_apps","limit_hit",
// "used_alignment","ms"} plus "gold" and "error" when present. Label is
// "error" for failed problems.
std::string batch_item_json(const BatchItem& item, bool with_timing = true);

// {"summary":{"accuracy","correct","scored","counts":{"E","C","N","error"}}};
// accuracy is over problems with a gold label.
std::string batch_summary_json(const std::vector<BatchItem>& items);

// Number of gold-labelled problems whose label differs from gold.
int gold_mismatches(const std::vector<BatchItem>& items);

// Problem file: {"problems":[{"id", "premises":[ref..], "hypothesis":ref,
// "gold":"E|C|N"|null}]}. A ref is a sentence id from `sentences` or
// {"llf": "term"}. Throws FormatError on schema errors or unknown ids.
std::vector<Problem> parse_problems(std::string_view json_text, const std::vector<Sentence>& sentences);

}  // namespace natlog
