#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "natlog/type.hpp"

namespace natlog {

// Token-level metadata carried by lexical constants. Never part of equality.
struct Attrs {
  std::string token;
  std::string pos;
  std::string ne;
  int index = -1;        // surface position, -1 when unknown
  bool inserted = false; // introduced by correction rather than read from a leaf
  std::optional<int> sense_cutoff;
};

// Immutable simply-typed lambda term. Copies share structure.
//
// Kinds:
//   Var(name, type)          type may be null for untyped metavariables
//   Const(lemma, type, attrs)
//   App(fun, arg)
//   Lam(var, var_type, body)
//   TypeChange(target, inner)  an unexplained CCG lexical rule, removed by correction
class Term {
 public:
  enum class Kind { kVar, kConst, kApp, kLam, kTypeChange };

  Term() = default;

  static Term var(std::string name, Type type = {});
  static Term constant(std::string lemma, Type type, Attrs attrs = {});
  static Term app(Term fun, Term arg);
  static Term app(Term fun, std::initializer_list<Term> args);
  static Term lam(std::string var, Type var_type, Term body);
  static Term type_change(Type target, Term inner);

  bool is_null() const { return rep_ == nullptr; }
  Kind kind() const;
  bool is_var() const { return !is_null() && kind() == Kind::kVar; }
  bool is_const() const { return !is_null() && kind() == Kind::kConst; }
  bool is_app() const { return !is_null() && kind() == Kind::kApp; }
  bool is_lam() const { return !is_null() && kind() == Kind::kLam; }
  bool is_type_change() const { return !is_null() && kind() == Kind::kTypeChange; }
  bool is_const(std::string_view lemma) const { return is_const() && name() == lemma; }

  // Var name, Const lemma or Lam variable.
  const std::string& name() const;
  // Var/Const type, Lam variable type, TypeChange target.
  const Type& type() const;
  const Attrs& attrs() const;
  const Term& fun() const;
  const Term& arg() const;
  const Term& body() const;   // Lam body, TypeChange inner

  // Head of an application spine and its arguments: f a b -> f, [a, b].
  const Term& head() const;
  std::vector<Term> spine_args() const;

  std::size_t size() const;  // number of nodes

  // Alpha-equivalence; constants compare by (lemma, type).
  bool operator==(const Term& o) const;
  bool operator!=(const Term& o) const { return !(*this == o); }

  // Text syntax: "lam x1:np. bark:vp_dcl x1". With typed=false constants are
  // printed by lemma only (display form).
  std::string str(bool typed = true) const;

  // Same object identity (cheap pointer test).
  bool same(const Term& o) const { return rep_ == o.rep_; }

 private:
  struct Rep;
  explicit Term(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
  std::shared_ptr<const Rep> rep_;
};

using TypeEnv = std::map<std::string, Type>;
using Bindings = std::map<std::string, Term>;

// Type of t; Var annotations are used unless env overrides them.
// Throws TypeError naming the offending subterm.
Type type_of(const Term& t, const TypeEnv& env = {});

// True when type_of succeeds.
bool well_typed(const Term& t, const TypeEnv& env = {});

std::vector<std::string> free_vars(const Term& t);
bool occurs_free(const std::string& name, const Term& t);

// Capture-avoiding substitution of free variable `name`.
Term substitute(const Term& t, const std::string& name, const Term& value);
Term substitute(const Term& t, const Bindings& b);

// Beta-normal, alpha-canonical form (bound variables x1, x2, ... in pre-order).
Term beta_normalize(const Term& t);

// Renames bound variables to x1, x2, ... in traversal order.
Term canonicalize(const Term& t);

// Removes eta-redexes lam x. F x where x is not free in F and the
// contraction does not widen the type.
Term eta_reduce(const Term& t);

// First-order matching. Free variables of `pattern` are metavariables;
// a typed metavariable only binds terms whose type is a subtype of its
// declared type. Pattern constants match by lemma and feature-erased type.
std::optional<Bindings> match_pattern(const Term& pattern, const Term& subject, Bindings seed = {});

// Substitutes bindings into a template and beta-normalizes. A metavariable
// written `?X^T` in text is replaced by the constant bound to ?X retyped to T.
Term instantiate(const Term& tmpl, const Bindings& b);

// All lexical constants of t, left to right.
std::vector<Term> constants(const Term& t);

// Smallest surface index over the constants of t, or -1.
int min_index(const Term& t);

// Parses the text syntax. Identifiers bound by an enclosing lam are
// variables; `name:type` outside a binder is a constant; names beginning
// with '?' are metavariables; `[t]:type` is a TypeChange wrapper; an
// optional `{pos=NN,ne=PER,idx=3,tok=dogs}` suffix sets constant attrs.
Term parse_term(std::string_view text);

// Retype marker used by templates (see instantiate).
inline constexpr char kRetypeSuffix = '^';

}  // namespace natlog
