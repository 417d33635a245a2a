#include "natlog/term.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <utility>

#include "natlog/errors.hpp"

namespace natlog {

struct Term::Rep {
  Kind kind;
  std::string name;
  Type type;
  Attrs attrs;
  Term a;  // fun, body, inner
  Term b;  // arg
  std::size_t size = 1;
};

Term Term::var(std::string name, Type type) {
  auto r = std::make_shared<Rep>();
  r->kind = Kind::kVar;
  r->name = std::move(name);
  r->type = std::move(type);
  return Term(std::move(r));
}

Term Term::constant(std::string lemma, Type type, Attrs attrs) {
  if (type.is_null()) throw TypeError("constant '" + lemma + "' without a type");
  auto r = std::make_shared<Rep>();
  r->kind = Kind::kConst;
  r->name = std::move(lemma);
  r->type = std::move(type);
  r->attrs = std::move(attrs);
  return Term(std::move(r));
}

Term Term::app(Term fun, Term arg) {
  auto r = std::make_shared<Rep>();
  r->kind = Kind::kApp;
  r->size = 1 + fun.size() + arg.size();
  r->a = std::move(fun);
  r->b = std::move(arg);
  return Term(std::move(r));
}

Term Term::app(Term fun, std::initializer_list<Term> args) {
  for (const Term& a : args) fun = app(fun, a);
  return fun;
}

Term Term::lam(std::string var, Type var_type, Term body) {
  auto r = std::make_shared<Rep>();
  r->kind = Kind::kLam;
  r->name = std::move(var);
  r->type = std::move(var_type);
  r->size = 1 + body.size();
  r->a = std::move(body);
  return Term(std::move(r));
}

Term Term::type_change(Type target, Term inner) {
  auto r = std::make_shared<Rep>();
  r->kind = Kind::kTypeChange;
  r->type = std::move(target);
  r->size = 1 + inner.size();
  r->a = std::move(inner);
  return Term(std::move(r));
}

Term::Kind Term::kind() const { return rep_->kind; }
const std::string& Term::name() const { return rep_->name; }
const Type& Term::type() const { return rep_->type; }
const Attrs& Term::attrs() const { return rep_->attrs; }
const Term& Term::fun() const { return rep_->a; }
const Term& Term::arg() const { return rep_->b; }
const Term& Term::body() const { return rep_->a; }
std::size_t Term::size() const { return is_null() ? 0 : rep_->size; }

const Term& Term::head() const {
  const Term* t = this;
  while (t->is_app()) t = &t->fun();
  return *t;
}

std::vector<Term> Term::spine_args() const {
  std::vector<Term> out;
  for (const Term* t = this; t->is_app(); t = &t->fun()) out.push_back(t->arg());
  std::reverse(out.begin(), out.end());
  return out;
}

namespace {

using Scope = std::vector<std::pair<std::string, std::string>>;

bool alpha_eq(const Term& x, const Term& y, Scope& scope) {
  if (x.same(y) && scope.empty()) return true;
  if (x.kind() != y.kind()) return false;
  switch (x.kind()) {
    case Term::Kind::kVar: {
      for (auto it = scope.rbegin(); it != scope.rend(); ++it) {
        bool lx = it->first == x.name(), ly = it->second == y.name();
        if (lx || ly) return lx && ly;
      }
      return x.name() == y.name() && x.type() == y.type();
    }
    case Term::Kind::kConst:
      return x.name() == y.name() && x.type() == y.type();
    case Term::Kind::kApp:
      return alpha_eq(x.fun(), y.fun(), scope) && alpha_eq(x.arg(), y.arg(), scope);
    case Term::Kind::kLam: {
      if (x.type() != y.type()) return false;
      scope.emplace_back(x.name(), y.name());
      bool r = alpha_eq(x.body(), y.body(), scope);
      scope.pop_back();
      return r;
    }
    case Term::Kind::kTypeChange:
      return x.type() == y.type() && alpha_eq(x.body(), y.body(), scope);
  }
  return false;
}

bool needs_parens_as_arg(const Term& t) { return t.is_app() || t.is_lam(); }

void print(const Term& t, bool typed, std::string& out) {
  switch (t.kind()) {
    case Term::Kind::kVar:
      out += t.name();
      if (!t.name().empty() && t.name().back() == kRetypeSuffix) {
        out += t.type().str();
      } else if (typed && !t.type().is_null() && !t.name().empty() && t.name()[0] == '?') {
        out += ":" + t.type().str();
      }
      return;
    case Term::Kind::kConst:
      out += t.name();
      if (typed) out += ":" + t.type().str();
      return;
    case Term::Kind::kApp: {
      const Term& h = t.head();
      if (h.is_lam()) {
        out += "(";
        print(h, typed, out);
        out += ")";
      } else {
        print(h, typed, out);
      }
      for (const Term& a : t.spine_args()) {
        out += " ";
        if (needs_parens_as_arg(a)) {
          out += "(";
          print(a, typed, out);
          out += ")";
        } else {
          print(a, typed, out);
        }
      }
      return;
    }
    case Term::Kind::kLam:
      out += "lam " + t.name() + ":" + t.type().str() + ". ";
      print(t.body(), typed, out);
      return;
    case Term::Kind::kTypeChange:
      out += "[";
      print(t.body(), typed, out);
      out += "]:" + t.type().str();
      return;
  }
}

}  // namespace

bool Term::operator==(const Term& o) const {
  if (is_null() || o.is_null()) return is_null() && o.is_null();
  Scope scope;
  return alpha_eq(*this, o, scope);
}

std::string Term::str(bool typed) const {
  if (is_null()) return "<null>";
  std::string out;
  print(*this, typed, out);
  return out;
}

// ---------------------------------------------------------------------------
// Typing

namespace {

Type type_of_rec(const Term& t, std::vector<std::pair<std::string, Type>>& bound, const TypeEnv& env) {
  switch (t.kind()) {
    case Term::Kind::kVar: {
      for (auto it = bound.rbegin(); it != bound.rend(); ++it)
        if (it->first == t.name()) return it->second;
      if (auto it = env.find(t.name()); it != env.end()) return it->second;
      if (t.type().is_null()) throw TypeError("unbound variable '" + t.name() + "'");
      return t.type();
    }
    case Term::Kind::kConst:
      return t.type();
    case Term::Kind::kApp: {
      Type f = type_of_rec(t.fun(), bound, env);
      Type a = type_of_rec(t.arg(), bound, env);
      if (!f.is_fun())
        throw TypeError("ill-typed application '" + t.str() + "': function has type " + f.str());
      if (!subtype(a, f.arg()))
        throw TypeError("ill-typed application '" + t.str() + "': expected " + f.arg().str() + ", argument has type " +
                        a.str());
      return f.result();
    }
    case Term::Kind::kLam: {
      bound.emplace_back(t.name(), t.type());
      Type b = type_of_rec(t.body(), bound, env);
      bound.pop_back();
      return Type::fun(t.type(), b);
    }
    case Term::Kind::kTypeChange:
      type_of_rec(t.body(), bound, env);
      return t.type();
  }
  throw TypeError("unknown term kind");
}

}  // namespace

Type type_of(const Term& t, const TypeEnv& env) {
  std::vector<std::pair<std::string, Type>> bound;
  return type_of_rec(t, bound, env);
}

bool well_typed(const Term& t, const TypeEnv& env) {
  try {
    type_of(t, env);
    return true;
  } catch (const TypeError&) {
    return false;
  }
}

// ---------------------------------------------------------------------------
// Variables and substitution

namespace {

void collect_free(const Term& t, std::vector<std::string>& bound, std::vector<std::string>& out) {
  switch (t.kind()) {
    case Term::Kind::kVar:
      if (std::find(bound.begin(), bound.end(), t.name()) == bound.end() &&
          std::find(out.begin(), out.end(), t.name()) == out.end())
        out.push_back(t.name());
      return;
    case Term::Kind::kConst:
      return;
    case Term::Kind::kApp:
      collect_free(t.fun(), bound, out);
      collect_free(t.arg(), bound, out);
      return;
    case Term::Kind::kLam:
      bound.push_back(t.name());
      collect_free(t.body(), bound, out);
      bound.pop_back();
      return;
    case Term::Kind::kTypeChange:
      collect_free(t.body(), bound, out);
      return;
  }
}

std::string fresh_name() {
  static std::atomic<unsigned long> counter{0};
  return "_v" + std::to_string(++counter);
}

}  // namespace

std::vector<std::string> free_vars(const Term& t) {
  std::vector<std::string> bound, out;
  collect_free(t, bound, out);
  return out;
}

bool occurs_free(const std::string& name, const Term& t) {
  auto fv = free_vars(t);
  return std::find(fv.begin(), fv.end(), name) != fv.end();
}

namespace {

Term subst_rec(const Term& t, const Bindings& b, const std::set<std::string>& value_fv) {
  switch (t.kind()) {
    case Term::Kind::kVar: {
      auto it = b.find(t.name());
      return it == b.end() ? t : it->second;
    }
    case Term::Kind::kConst:
      return t;
    case Term::Kind::kApp:
      return Term::app(subst_rec(t.fun(), b, value_fv), subst_rec(t.arg(), b, value_fv));
    case Term::Kind::kLam: {
      Bindings inner = b;
      inner.erase(t.name());
      if (inner.empty()) return t;
      if (value_fv.count(t.name())) {
        std::string v = fresh_name();
        Bindings rename{{t.name(), Term::var(v, t.type())}};
        Term body = subst_rec(t.body(), rename, {v});
        return Term::lam(v, t.type(), subst_rec(body, inner, value_fv));
      }
      return Term::lam(t.name(), t.type(), subst_rec(t.body(), inner, value_fv));
    }
    case Term::Kind::kTypeChange:
      return Term::type_change(t.type(), subst_rec(t.body(), b, value_fv));
  }
  return t;
}

}  // namespace

Term substitute(const Term& t, const Bindings& b) {
  if (b.empty()) return t;
  std::set<std::string> fv;
  for (const auto& [_, v] : b)
    for (auto& n : free_vars(v)) fv.insert(n);
  return subst_rec(t, b, fv);
}

Term substitute(const Term& t, const std::string& name, const Term& value) {
  return substitute(t, Bindings{{name, value}});
}

// ---------------------------------------------------------------------------
// Normalization

namespace {

Term normalize(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::kVar:
    case Term::Kind::kConst:
      return t;
    case Term::Kind::kLam:
      return Term::lam(t.name(), t.type(), normalize(t.body()));
    case Term::Kind::kTypeChange:
      return Term::type_change(t.type(), normalize(t.body()));
    case Term::Kind::kApp: {
      Term f = normalize(t.fun());
      if (f.is_lam()) return normalize(substitute(f.body(), f.name(), t.arg()));
      return Term::app(f, normalize(t.arg()));
    }
  }
  return t;
}

struct Canon {
  std::set<std::string> avoid;
  int next = 0;

  std::string fresh() {
    std::string n;
    do n = "x" + std::to_string(++next);
    while (avoid.count(n));
    return n;
  }

  Term run(const Term& t, std::vector<std::pair<std::string, std::string>>& scope) {
    switch (t.kind()) {
      case Term::Kind::kVar:
        for (auto it = scope.rbegin(); it != scope.rend(); ++it)
          if (it->first == t.name()) return Term::var(it->second, t.type());
        return t;
      case Term::Kind::kConst:
        return t;
      case Term::Kind::kApp: {
        Term f = run(t.fun(), scope);
        return Term::app(f, run(t.arg(), scope));
      }
      case Term::Kind::kLam: {
        std::string n = fresh();
        scope.emplace_back(t.name(), n);
        Term body = run(t.body(), scope);
        scope.pop_back();
        return Term::lam(n, t.type(), body);
      }
      case Term::Kind::kTypeChange:
        return Term::type_change(t.type(), run(t.body(), scope));
    }
    return t;
  }
};

}  // namespace

Term canonicalize(const Term& t) {
  Canon c;
  for (auto& n : free_vars(t)) c.avoid.insert(n);
  std::vector<std::pair<std::string, std::string>> scope;
  return c.run(t, scope);
}

Term beta_normalize(const Term& t) { return canonicalize(normalize(t)); }

namespace {

Term eta_rec(const Term& t, std::vector<std::pair<std::string, Type>>& bound) {
  switch (t.kind()) {
    case Term::Kind::kVar:
    case Term::Kind::kConst:
      return t;
    case Term::Kind::kApp:
      return Term::app(eta_rec(t.fun(), bound), eta_rec(t.arg(), bound));
    case Term::Kind::kTypeChange:
      return Term::type_change(t.type(), eta_rec(t.body(), bound));
    case Term::Kind::kLam: {
      bound.emplace_back(t.name(), t.type());
      Term body = eta_rec(t.body(), bound);
      bound.pop_back();
      if (body.is_app() && body.arg().is_var() && body.arg().name() == t.name() &&
          !occurs_free(t.name(), body.fun())) {
        TypeEnv env;
        for (auto& [n, ty] : bound) env[n] = ty;
        try {
          Type ft = type_of(body.fun(), env);
          Type lt = Type::fun(t.type(), type_of(body, [&] {
                                auto e = env;
                                e[t.name()] = t.type();
                                return e;
                              }()));
          if (subtype(ft, lt)) return body.fun();
        } catch (const TypeError&) {
        }
      }
      return Term::lam(t.name(), t.type(), body);
    }
  }
  return t;
}

}  // namespace

Term eta_reduce(const Term& t) {
  std::vector<std::pair<std::string, Type>> bound;
  return eta_rec(t, bound);
}

// ---------------------------------------------------------------------------
// Matching

namespace {

struct Matcher {
  std::set<std::string> metas;
  Bindings b;
  Scope scope;  // pattern bound var <-> subject bound var

  bool subject_mentions_bound(const Term& s) const {
    if (scope.empty()) return false;
    for (auto& n : free_vars(s))
      for (auto& [_, sv] : scope)
        if (sv == n) return true;
    return false;
  }

  bool run(const Term& p, const Term& s) {
    if (p.is_var()) {
      for (auto it = scope.rbegin(); it != scope.rend(); ++it) {
        if (it->first == p.name()) return s.is_var() && s.name() == it->second;
        if (s.is_var() && s.name() == it->second) break;
      }
      if (metas.count(p.name())) {
        if (subject_mentions_bound(s)) return false;
        if (auto it = b.find(p.name()); it != b.end()) return it->second == s;
        if (!p.type().is_null()) {
          Type st;
          try {
            st = type_of(s);
          } catch (const TypeError&) {
            return false;
          }
          if (!subtype(st, p.type())) return false;
        }
        b.emplace(p.name(), s);
        return true;
      }
      return s.is_var() && s.name() == p.name();
    }
    if (p.kind() != s.kind()) return false;
    switch (p.kind()) {
      case Term::Kind::kConst:
        return p.name() == s.name() && erase_features(p.type()) == erase_features(s.type());
      case Term::Kind::kApp:
        return run(p.fun(), s.fun()) && run(p.arg(), s.arg());
      case Term::Kind::kLam: {
        if (erase_features(p.type()) != erase_features(s.type())) return false;
        scope.emplace_back(p.name(), s.name());
        bool r = run(p.body(), s.body());
        scope.pop_back();
        return r;
      }
      case Term::Kind::kTypeChange:
        return erase_features(p.type()) == erase_features(s.type()) && run(p.body(), s.body());
      default:
        return false;
    }
  }
};

Term inst_rec(const Term& t, const Bindings& b) {
  switch (t.kind()) {
    case Term::Kind::kVar: {
      const std::string& n = t.name();
      if (!n.empty() && n.back() == kRetypeSuffix) {
        auto it = b.find(n.substr(0, n.size() - 1));
        if (it == b.end()) throw Error("template metavariable '" + n + "' is unbound");
        if (!it->second.is_const()) throw Error("retype of non-constant binding " + it->second.str());
        return Term::constant(it->second.name(), t.type(), it->second.attrs());
      }
      auto it = b.find(n);
      return it == b.end() ? t : it->second;
    }
    case Term::Kind::kConst:
      return t;
    case Term::Kind::kApp:
      return Term::app(inst_rec(t.fun(), b), inst_rec(t.arg(), b));
    case Term::Kind::kLam: {
      Bindings inner = b;
      inner.erase(t.name());
      return Term::lam(t.name(), t.type(), inst_rec(t.body(), inner));
    }
    case Term::Kind::kTypeChange:
      return Term::type_change(t.type(), inst_rec(t.body(), b));
  }
  return t;
}

}  // namespace

std::optional<Bindings> match_pattern(const Term& pattern, const Term& subject, Bindings seed) {
  Matcher m;
  for (auto& n : free_vars(pattern)) m.metas.insert(n);
  m.b = std::move(seed);
  if (!m.run(pattern, subject)) return std::nullopt;
  return std::move(m.b);
}

Term instantiate(const Term& tmpl, const Bindings& b) { return beta_normalize(inst_rec(tmpl, b)); }

namespace {

void collect_consts(const Term& t, std::vector<Term>& out) {
  switch (t.kind()) {
    case Term::Kind::kVar:
      return;
    case Term::Kind::kConst:
      out.push_back(t);
      return;
    case Term::Kind::kApp:
      collect_consts(t.fun(), out);
      collect_consts(t.arg(), out);
      return;
    case Term::Kind::kLam:
    case Term::Kind::kTypeChange:
      collect_consts(t.body(), out);
      return;
  }
}

}  // namespace

std::vector<Term> constants(const Term& t) {
  std::vector<Term> out;
  if (!t.is_null()) collect_consts(t, out);
  return out;
}

int min_index(const Term& t) {
  int best = -1;
  for (const Term& c : constants(t)) {
    int i = c.attrs().index;
    if (i >= 0 && (best < 0 || i < best)) best = i;
  }
  return best;
}

}  // namespace natlog
