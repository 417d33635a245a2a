#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "natlog/type.hpp"

namespace natlog {

// CCG category in surface syntax: atoms N, NP, S[f], PP (plus the conj
// marker used on coordinating conjunctions) and slashes X/Y, X\Y.
class Category {
 public:
  enum class Dir { kForward, kBackward };

  Category() = default;
  static Category atom(std::string name, std::string feature = {});
  static Category slash(Dir dir, Category result, Category arg);

  bool is_null() const { return rep_ == nullptr; }
  bool is_slash() const;
  bool is_atom(std::string_view name) const;
  Dir dir() const;
  const std::string& name() const;
  const std::string& feature() const;
  const Category& result() const;
  const Category& arg() const;

  bool operator==(const Category& o) const;
  bool operator!=(const Category& o) const { return !(*this == o); }

  // Surface syntax with minimal parentheses: "(S[dcl]\NP)/NP".
  std::string str() const;

 private:
  struct Rep;
  explicit Category(std::shared_ptr<const Rep> r) : rep_(std::move(r)) {}
  std::shared_ptr<const Rep> rep_;
};

Category parse_category(std::string_view text);

// Same shape with features unifying: a missing feature or the variable X
// matches any feature.
bool categories_compatible(const Category& a, const Category& b);

// N -> n, NP -> np, PP -> pp, S[f] -> s_f, X/Y and X\Y -> (type(Y), type(X)).
Type category_to_type(const Category& c);

enum class CombRule { kFa, kBa, kFc, kBc, kBx, kLx, kConj };

std::string to_string(CombRule r);
CombRule parse_comb_rule(std::string_view s);

struct CCGTree {
  Category cat;

  // Leaf fields (empty for internal nodes).
  std::string token;
  std::string lemma;
  std::string pos;
  std::optional<std::string> ne;
  int index = -1;  // surface position assigned at parse time

  // Internal node fields. For lx the source category is children[0].cat.
  CombRule rule = CombRule::kFa;
  std::vector<CCGTree> children;

  bool is_leaf() const { return children.empty(); }
  std::size_t leaf_count() const;
  bool operator==(const CCGTree& o) const;
};

struct Sentence {
  std::string id;
  CCGTree root;
};

// Parses the JSON derivation format:
//   {"sentences":[{"id":str,"root":NODE}]}
//   NODE = {"rule":str,"cat":str,"children":[NODE...]}
//        | {"token":str,"lemma":str,"cat":str,"pos":str,"ne":str|null}
// Throws ParseError (malformed JSON or schema) or ValidationError (a node
// whose category does not follow from its rule).
std::vector<Sentence> parse_derivation(std::string_view document);

// Checks every node of a tree; throws ValidationError naming the node.
void validate(const CCGTree& tree);

// Inverse of parse_derivation.
std::string serialize_derivation(const std::vector<Sentence>& sentences);

}  // namespace natlog
