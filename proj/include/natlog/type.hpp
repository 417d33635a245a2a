#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace natlog {

// Simple syntactic/semantic type. Atomic types are e, t, n, np, s and pp;
// only s carries a feature (dcl, ng, b, pt, adj, ...). vp and q are
// abbreviations that expand at construction time:
//   vp_f = (np,s_f)      q_f = (n,(vp_f,s_f))
class Type {
 public:
  enum class Kind { kAtomic, kFun };

  Type() = default;  // null type, used for untyped metavariables

  static Type atomic(std::string name, std::string feature = {});
  static Type fun(Type arg, Type result);

  static Type e() { return atomic("e"); }
  static Type t() { return atomic("t"); }
  static Type n() { return atomic("n"); }
  static Type np() { return atomic("np"); }
  static Type pp() { return atomic("pp"); }
  static Type s(std::string feature = {}) { return atomic("s", std::move(feature)); }
  static Type vp(std::string feature = {});
  static Type q(std::string feature = {});

  bool is_null() const { return rep_ == nullptr; }
  Kind kind() const;
  bool is_fun() const { return !is_null() && kind() == Kind::kFun; }
  bool is_atomic() const { return !is_null() && kind() == Kind::kAtomic; }
  bool is_atomic(std::string_view name) const;

  const std::string& name() const;
  const std::string& feature() const;
  const Type& arg() const;
  const Type& result() const;

  // Number of arguments along the result spine: (a,(b,c)) has arity 2.
  int arity() const;

  bool operator==(const Type& o) const;
  bool operator!=(const Type& o) const { return !(*this == o); }

  // Canonical text, right-associative comma lists with vp/q abbreviations,
  // e.g. "(np,pp,vp_ng)". Parses back to an equal type.
  std::string str() const;

 private:
  struct Rep;
  explicit Type(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
  std::shared_ptr<const Rep> rep_;
};

// Reflexive, transitive; e <: np; s_f <: s; functions are contravariant in
// the argument and covariant in the result.
bool subtype(const Type& a, const Type& b);

// Drops every feature, e.g. (np,s_dcl) -> (np,s).
Type erase_features(const Type& t);

// Parses "np", "s_dcl", "vp_ng", "q", "(np,(pp,vp_ng))", "(n,vp,s)".
Type parse_type(std::string_view text);

}  // namespace natlog
