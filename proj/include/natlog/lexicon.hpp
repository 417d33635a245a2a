#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "natlog/type.hpp"

namespace natlog {

enum class Prop { kUp, kDw, kNon, kInt, kSub, kImpl };

std::string to_string(Prop p);
Prop parse_prop(std::string_view s);

struct SignatureEntry {
  std::string lemma;
  Type type;
  // One property set per argument position, outermost argument first.
  std::vector<std::set<Prop>> args;

  bool has(std::size_t position, Prop p) const;
  std::string str() const;  // "every : (n,vp,s) : [dw,up]"
};

// Algebraic properties of lexical items. Read-only after load.
class Signature {
 public:
  // One entry per line, `lemma : type : [p1,p2]`; a position may hold
  // several properties joined by '+', e.g. [up+int]. '#' starts a comment.
  static Signature parse(std::string_view text);
  static Signature bundled();

  void add(SignatureEntry e);

  // Exact feature-erased type match first, then an entry whose type the
  // argument's erased type is a subtype of. A null type matches any entry.
  std::optional<SignatureEntry> lookup(std::string_view lemma, const Type& type = {}) const;

  // True when the lemma has an entry of quantifier type (n,(vp,s)).
  bool is_quantifier(std::string_view lemma) const;

  const std::vector<SignatureEntry>& entries() const { return entries_; }

 private:
  std::vector<SignatureEntry> entries_;
};

enum class Relation { kIsa, kSim, kAnt };

struct Fact {
  Relation rel = Relation::kIsa;
  std::string a;
  int sense_a = 1;
  std::string b;
  int sense_b = 1;

  bool operator==(const Fact& o) const;
  bool operator<(const Fact& o) const;
  std::string str() const;  // "isa(pug.1, dog.1)"
};

// `isa(pug.1, dog.1)`; the sense suffix is optional and defaults to 1.
Fact parse_fact(std::string_view text);

// Senses with index above the cutoff are ignored; nullopt means all senses.
using Cutoff = std::optional<int>;

// Lexical relations between word senses. Values are cheap to copy and
// immutable; add_fact returns a new version.
class KnowledgeBase {
 public:
  KnowledgeBase();
  static KnowledgeBase parse(std::string_view text);
  static KnowledgeBase bundled();

  KnowledgeBase add_fact(const Fact& f) const;

  // a = b, or an isa path from an in-cutoff sense of a to an in-cutoff sense
  // of b, or a single sim edge between in-cutoff senses.
  bool subsumes(std::string_view a, std::string_view b, Cutoff cutoff = std::nullopt) const;

  // An ant edge between in-cutoff senses, in either order.
  bool disjoint(std::string_view a, std::string_view b, Cutoff cutoff = std::nullopt) const;

  const std::vector<Fact>& facts() const;
  std::size_t size() const { return facts().size(); }

 private:
  struct Store;
  explicit KnowledgeBase(std::shared_ptr<const Store> s) : store_(std::move(s)) {}
  std::shared_ptr<const Store> store_;
};

struct Lexicon {
  Signature signature;
  KnowledgeBase kb;
};

}  // namespace natlog
