#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "natlog/lexicon.hpp"
#include "natlog/term.hpp"

namespace natlog {

enum class Sign { kT, kF };

std::string to_string(Sign s);
Sign negate(Sign s);

// A tableau entry: modifiers : llf : args : sign.
struct TableauNode {
  std::vector<Term> mods;
  Term llf;
  std::vector<Term> args;
  Sign sign = Sign::kT;

  bool operator==(const TableauNode& o) const;
  bool operator!=(const TableauNode& o) const { return !(*this == o); }
  // Display form with types omitted, e.g. "pug : c1 : T".
  std::string str() const;
  // Typed form, parseable by parse_node.
  std::string typed_str() const;
};

// Builds a node in canonical layout: the llf is beta-normalized, leading
// arguments are fed into a lambda llf, and trailing entity or np constants
// of the llf are moved to the front of the argument list.
TableauNode make_node(const Term& llf, std::vector<Term> args, Sign sign, std::vector<Term> mods = {});

// Parses "llf : T", "llf : c1:e, c2:e : F" or "mod ; mod : llf : args : T"
// written in the term syntax.
TableauNode parse_node(std::string_view text);

enum class Feature { kEquivalence, kNonBranching, kNonProducing, kNonConsuming };

struct RuleFeatures {
  bool equivalence = false;
  bool branching = false;
  bool producer = false;
  bool consumer = false;
  bool operator==(const RuleFeatures& o) const = default;
};

struct SignPattern {
  enum class Kind { kT, kF, kVar, kNegVar };
  Kind kind = Kind::kT;
  std::string var;
};

struct NodePattern {
  enum class ArgsKind { kList, kAny };
  Term llf;
  ArgsKind args_kind = ArgsKind::kList;
  std::vector<std::string> entities;  // kList: entity variables, '@' prefixed
  std::string args_var;               // kAny
  SignPattern sign;
};

struct RuleGuard {
  enum class Kind { kLemma, kFlag, kTyped, kConst, kIntersective, kSubsective };
  Kind kind;
  std::string var;
  std::vector<std::string> values;
  Type type;
};

struct Rule {
  std::string name;
  RuleFeatures features;
  std::string subsumed_by;  // general rule whose applications this one shares
  bool derivable = false;
  std::string native;       // implemented in code (mod_pull)
  std::string fresh;        // producer entity variable
  std::string old;          // consumer entity variable
  std::vector<NodePattern> antecedents;
  std::vector<RuleGuard> guards;
  std::vector<std::vector<NodePattern>> branches;
};

// Rule file grammar, one directive per line, '#' comments:
//   rule NAME
//   feats [equi] [branching] [producer] [consumer]
//   subsumed_by NAME | derivable | native NAME
//   fresh @c | old @c
//   ante LLF : ARGS : SIGN          (one or two)
//   guard lemma(?X, a|b) | flag(thE) | typed(?X, TYPE) | const(?X)
//       | intersective(?X) | subsective(?X)
//   branch NODE ; NODE ...          (one line per consequent branch)
//   end
// ARGS is [], [@c, @d] or ?AS; SIGN is T, F, ?X or ~?X.
// Feature flags are checked against the rule's structure.
std::vector<Rule> parse_rules(std::string_view text);
const std::vector<Rule>& bundled_rules();

// Priority order of the four efficiency categories.
class Criterion {
 public:
  Criterion();  // [equi, nonBr, nonProd, nonCons]
  explicit Criterion(std::array<Feature, 4> order);
  // Four-letter permutation of "ebpc".
  static Criterion parse(std::string_view s);
  static std::vector<Criterion> all();
  std::string str() const;
  const std::array<Feature, 4>& order() const { return order_; }
  bool operator==(const Criterion& o) const { return order_ == o.order_; }

 private:
  std::array<Feature, 4> order_;
};

// Negative when a is more efficient than b, positive when less, 0 on a tie.
int compare_efficiency(const Rule& a, const Rule& b, const Criterion& c);

struct ProverFlags {
  bool thE = false;
  bool all_int = false;
  bool the = false;
  bool a2the = false;
  bool s2the = false;
  bool derivable = false;  // enable rules marked derivable
};

struct ProverConfig {
  Criterion criterion;
  int ral = 400;
  ProverFlags flags;
  bool record_tree = true;
  Cutoff sense_cutoff;
};

// Read-only resources shared by concurrent proofs.
struct ProverContext {
  const std::vector<Rule>* rules = nullptr;
  const KnowledgeBase* kb = nullptr;
  const Signature* sig = nullptr;
};

ProverContext bundled_context();

struct ProofTree {
  struct Entry {
    int id = 0;
    bool closure = false;
    TableauNode node;                 // unused for closures
    std::pair<int, int> closes{0, 0};  // closing node ids
  };
  struct Block {
    std::string rule;                // empty for the root
    std::vector<int> antecedents;
    std::string entity;
    std::vector<Entry> entries;
    std::vector<int> children;       // block indices
    bool operator==(const Block& o) const;
  };
  std::vector<Block> blocks;         // blocks[0] is the root

  std::size_t entry_count() const;
  std::size_t closure_count() const;
  bool operator==(const ProofTree& o) const;
};

struct ProofResult {
  bool closed = false;
  int rule_applications = 0;
  bool limit_hit = false;
  std::optional<ProofTree> tree;
  std::vector<std::pair<int, int>> closures;  // closing node ids per closed branch
};

struct RuleInstance {
  const Rule* rule = nullptr;
  std::vector<int> antecedents;
  std::string entity;  // consumed entity, empty otherwise
  Bindings bindings;
  std::map<std::string, Sign> signs;
  std::map<std::string, std::vector<Term>> arg_lists;
};

// A branch of a tableau under construction.
struct Branch {
  std::vector<int> nodes;
  std::vector<Term> entities;
  std::set<std::tuple<std::string, std::vector<int>, std::string>> applied;
  bool closed = false;
  std::pair<int, int> closing{0, 0};
  int block = 0;
};

class Tableau {
 public:
  Tableau(const ProverContext& ctx, const ProverConfig& cfg);

  void add_initial(const TableauNode& n);
  const TableauNode& node(int id) const { return nodes_.at(static_cast<std::size_t>(id - 1)); }
  const std::vector<Branch>& branches() const { return branches_; }

  std::vector<RuleInstance> applicable_instances(const Branch& b) const;
  ProofResult run();

 private:
  bool entity_term(const Term& t) const;
  bool leq(const Term& a, const Term& b) const;
  bool closes(const TableauNode& a, const TableauNode& b) const;
  bool guard_holds(const RuleGuard& g, const RuleInstance& inst) const;
  void match_from(const Branch& b, const Rule& r, std::size_t k, RuleInstance inst, std::vector<RuleInstance>& out) const;
  std::vector<std::vector<TableauNode>> consequents(const RuleInstance& inst, const std::string& fresh_entity) const;
  std::tuple<std::string, std::vector<int>, std::string> log_key(const RuleInstance& inst) const;
  bool better(const RuleInstance& a, const RuleInstance& b, const Branch& br) const;
  void apply(std::size_t branch_index, const RuleInstance& inst);
  void check_closure(Branch& b, std::size_t first_new);
  int add_node(const TableauNode& n);

  const ProverContext& ctx_;
  ProverConfig cfg_;
  std::vector<TableauNode> nodes_;
  std::vector<Branch> branches_;
  ProofTree tree_;
  int next_id_ = 1;
  int next_entity_ = 1;
  int applications_ = 0;
  std::map<const Rule*, std::size_t> order_;
};

// Proves the initial node set. Throws ConfigError when ral < 1.
ProofResult prove(const std::vector<TableauNode>& initial, const ProverConfig& cfg = {},
                  const ProverContext& ctx = bundled_context());

// Rewrites determiners to `the` according to the the/a2the/s2the flags.
Term apply_definite_flags(const Term& llf, const ProverFlags& flags);

enum class RenderFormat { kText, kJson, kLatex };

RenderFormat parse_render_format(std::string_view s);

// Throws NoTreeRecorded when the result carries no tree.
std::string render_tree(const ProofResult& r, RenderFormat format);

// Reads back the JSON rendering.
ProofResult parse_tree_json(std::string_view text);

}  // namespace natlog
