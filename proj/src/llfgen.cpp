#include "natlog/llfgen.hpp"

#include "natlog/errors.hpp"

namespace natlog {

namespace {

Term build(const CCGTree& t) {
  if (t.is_leaf()) {
    Attrs a;
    a.token = t.token;
    a.pos = t.pos;
    a.ne = t.ne.value_or("");
    a.index = t.index;
    return Term::constant(t.lemma, category_to_type(t.cat), a);
  }
  const auto& ch = t.children;
  switch (t.rule) {
    case CombRule::kFa:
      return Term::app(build(ch[0]), build(ch[1]));
    case CombRule::kBa:
      return Term::app(build(ch[1]), build(ch[0]));
    case CombRule::kFc:
    case CombRule::kBc:
    case CombRule::kBx: {
      // fc: F=X/Y G=Y/Z; bc: G=Y\Z F=X\Y; bx: G=Y/Z F=X\Y.
      bool fwd = t.rule == CombRule::kFc;
      Term f = build(fwd ? ch[0] : ch[1]);
      Term g = build(fwd ? ch[1] : ch[0]);
      Type z = category_to_type(t.cat.arg());
      Term v = Term::var("v", z);
      return Term::lam("v", z, Term::app(f, Term::app(g, v)));
    }
    case CombRule::kLx:
      return Term::type_change(category_to_type(t.cat), build(ch[0]));
    case CombRule::kConj: {
      const CCGTree& c = ch[0];
      Type x = category_to_type(t.cat.arg());
      Attrs a;
      a.token = c.token;
      a.pos = c.pos;
      a.index = c.index;
      Term conj = Term::constant(c.lemma, Type::fun(x, Type::fun(x, x)), a);
      return Term::app(conj, build(ch[1]));
    }
  }
  throw ValidationError("unknown combinatory rule");
}

}  // namespace

Term remove_directionality(const CCGTree& tree) {
  Term t = beta_normalize(build(tree));
  type_of(t);
  return t;
}

std::string to_string(AlignMode m) {
  switch (m) {
    case AlignMode::kNone: return "none";
    case AlignMode::kWeak: return "weak";
    case AlignMode::kStrong: return "strong";
  }
  return "none";
}

AlignMode parse_align_mode(std::string_view s) {
  if (s == "none") return AlignMode::kNone;
  if (s == "weak") return AlignMode::kWeak;
  if (s == "strong") return AlignMode::kStrong;
  throw ConfigError("alignment mode must be none, weak or strong, got '" + std::string(s) + "'");
}

Term corrected_term(const CCGTree& tree) {
  Term t = correct_term(remove_directionality(tree));
  type_of(t);
  return t;
}

std::vector<Term> generate_llfs(const CCGTree& tree, const Signature& sig, const LlfOptions& opts) {
  auto readings = type_raise(corrected_term(tree), sig, opts.first_only ? 1 : opts.scope_cap);
  for (const auto& r : readings) type_of(r);
  return readings;
}

}  // namespace natlog
