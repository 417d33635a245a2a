#include <algorithm>
#include <optional>
#include <set>

#include "natlog/errors.hpp"
#include "natlog/llfgen.hpp"

namespace natlog {

namespace {

const std::set<std::string>& logical_lemmas() {
  static const std::set<std::string> s{"be", "do", "not", "which", "who", "that", "and", "or"};
  return s;
}

const std::set<std::string>& indefinites() {
  static const std::set<std::string> s{"a", "an", "some", "several", "a_few"};
  return s;
}

class Aligner {
 public:
  Aligner(AlignMode mode, const Signature& sig, std::map<std::string, Term>& table, int& counter)
      : mode_(mode), sig_(sig), table_(table), counter_(counter) {}

  void run(Term& p, Term& h) {
    if (mode_ == AlignMode::kNone) return;
    reuse(p);
    for (;;) {
      std::vector<Occ> cands;
      collect(p, false, cands);
      std::stable_sort(cands.begin(), cands.end(), [](const Occ& a, const Occ& b) { return a.size > b.size; });
      bool done = true;
      for (const auto& c : cands) {
        if (c.down || !candidate(c.term)) continue;
        std::vector<Occ> in_h;
        collect(h, false, in_h);
        bool shared = std::any_of(in_h.begin(), in_h.end(), [&](const Occ& o) { return !o.down && o.term == c.term; });
        if (!shared) continue;
        Term fresh = Term::constant(fresh_name(p, h), type_of(c.term));
        table_[fresh.name()] = c.term;
        p = replace(p, c.term, fresh, false);
        h = replace(h, c.term, fresh, false);
        done = false;
        break;
      }
      if (done) return;
    }
  }

 private:
  // Constants already introduced for earlier premises are reused.
  void reuse(Term& p) const {
    std::vector<std::pair<std::string, Term>> entries(table_.begin(), table_.end());
    std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.second.size() > b.second.size(); });
    for (const auto& [name, sub] : entries) p = replace(p, sub, Term::constant(name, type_of(sub)), false);
  }

  struct Occ {
    Term term;
    bool down;
    std::size_t size;
  };

  const Term* det_of(const Term& t) const {
    if (t.is_app() && t.fun().is_const() && sig_.is_quantifier(t.fun().name()) &&
        erase_features(t.fun().type()) == Type::fun(Type::n(), Type::np()))
      return &t.fun();
    return nullptr;
  }

  bool det_has(const Term& det, std::size_t pos, Prop p) const {
    auto e = sig_.lookup(det.name(), Type::q());
    return e && e->has(pos, p);
  }

  bool candidate(const Term& t) const {
    if (t.is_var() || !free_vars(t).empty()) return false;
    if (t.is_const() && table_.count(t.name())) return false;
    if (const Term* det = det_of(t)) {
      if (det_has(*det, 0, Prop::kDw) || det_has(*det, 1, Prop::kDw)) return false;
      if (indefinites().count(det->name())) return mode_ == AlignMode::kStrong;
      return true;
    }
    const Term& head = t.head();
    if (head.is_const()) {
      bool logical = logical_lemmas().count(head.name()) || sig_.is_quantifier(head.name());
      if (logical && !erase_features(type_of(t)).is_atomic("s")) return false;
    }
    return true;
  }

  // Pre-order walk recording every subterm with its monotonicity context.
  // Partial applications along a spine share the head's context.
  void collect(const Term& t, bool down, std::vector<Occ>& out) const {
    if (t.is_type_change()) return;
    out.push_back(Occ{t, down, t.size()});
    if (t.is_app()) collect_spine(t, child_contexts(t, down), t.spine_args().size(), out);
    else if (t.is_lam()) collect(t.body(), down, out);
  }

  void collect_spine(const Term& t, const std::vector<bool>& ctx, std::size_t k, std::vector<Occ>& out) const {
    if (k > 1) {
      out.push_back(Occ{t.fun(), ctx[0], t.fun().size()});
      collect_spine(t.fun(), ctx, k - 1, out);
    } else {
      collect(t.fun(), ctx[0], out);
    }
    collect(t.arg(), ctx[k], out);
  }

  // Contexts for the head (index 0) and spine arguments (1..n).
  std::vector<bool> child_contexts(const Term& t, bool down) const {
    const Term& head = t.head();
    auto args = t.spine_args();
    std::vector<bool> ctx(args.size() + 1, down);
    std::optional<SignatureEntry> e;
    if (head.is_const()) {
      if (sig_.is_quantifier(head.name())) e = sig_.lookup(head.name(), Type::q());
      else e = sig_.lookup(head.name(), head.type());
    }
    bool scope_dw = false;
    for (std::size_t k = 0; k < args.size(); ++k) {
      if (e && e->has(k, Prop::kDw)) ctx[k + 1] = true;
      if (const Term* det = det_of(args[k]); det && det_has(*det, 1, Prop::kDw)) scope_dw = true;
    }
    // The rest of a clause is the scope of a downward-scope QNP argument.
    if (scope_dw) {
      ctx[0] = true;
      for (std::size_t k = 0; k < args.size(); ++k)
        if (!det_of(args[k])) ctx[k + 1] = true;
    }
    return ctx;
  }

  Term replace(const Term& t, const Term& u, const Term& c, bool down) const {
    if (!down && t == u) return c;
    if (t.is_app()) return replace_spine(t, u, c, child_contexts(t, down), t.spine_args().size());
    if (t.is_lam()) return Term::lam(t.name(), t.type(), replace(t.body(), u, c, down));
    return t;
  }

  Term replace_spine(const Term& t, const Term& u, const Term& c, const std::vector<bool>& ctx, std::size_t k) const {
    Term f;
    if (k > 1) f = !ctx[0] && t.fun() == u ? c : replace_spine(t.fun(), u, c, ctx, k - 1);
    else f = replace(t.fun(), u, c, ctx[0]);
    return Term::app(f, replace(t.arg(), u, c, ctx[k]));
  }

  std::string fresh_name(const Term& p, const Term& h) {
    std::set<std::string> used;
    for (const auto& c : constants(p)) used.insert(c.name());
    for (const auto& c : constants(h)) used.insert(c.name());
    std::string n;
    do {
      n = "al" + std::to_string(++counter_);
    } while (used.count(n) || table_.count(n));
    return n;
  }

  AlignMode mode_;
  const Signature& sig_;
  std::map<std::string, Term>& table_;
  int& counter_;
};

}  // namespace

AlignmentResult align(const Term& premise, const Term& hypothesis, AlignMode mode, const Signature& sig) {
  return align(std::vector<Term>{premise}, hypothesis, mode, sig);
}

AlignmentResult align(const std::vector<Term>& premises, const Term& hypothesis, AlignMode mode, const Signature& sig) {
  AlignmentResult r;
  r.hypothesis = hypothesis;
  int counter = 0;
  for (const auto& p : premises) {
    Term pp = p;
    Aligner(mode, sig, r.table, counter).run(pp, r.hypothesis);
    r.premises.push_back(pp);
  }
  return r;
}

Term unalign(const Term& t, const std::map<std::string, Term>& table) {
  switch (t.kind()) {
    case Term::Kind::kConst:
      if (auto it = table.find(t.name()); it != table.end()) return unalign(it->second, table);
      return t;
    case Term::Kind::kApp:
      return Term::app(unalign(t.fun(), table), unalign(t.arg(), table));
    case Term::Kind::kLam:
      return Term::lam(t.name(), t.type(), unalign(t.body(), table));
    case Term::Kind::kTypeChange:
      return Term::type_change(t.type(), unalign(t.body(), table));
    default:
      return t;
  }
}

}  // namespace natlog
