#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "natlog/bundled.hpp"
#include "natlog/errors.hpp"
#include "natlog/llfgen.hpp"

namespace natlog {

namespace {

constexpr std::size_t kMaxApplications = 10000;

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

RewriteGuard parse_guard(const std::string& text) {
  auto open = text.find('(');
  if (open == std::string::npos || text.back() != ')') throw FormatError("malformed guard '" + text + "'");
  std::string head = trim(text.substr(0, open));
  auto args = split(text.substr(open + 1, text.size() - open - 2), ',');
  if (args.empty() || args.size() > 2) throw FormatError("guard '" + text + "' takes one or two arguments");
  RewriteGuard g;
  if (head == "pos") g.kind = RewriteGuard::Kind::kPos;
  else if (head == "ne") g.kind = RewriteGuard::Kind::kNe;
  else if (head == "no_ne") g.kind = RewriteGuard::Kind::kNotNe;
  else if (head == "lemma") g.kind = RewriteGuard::Kind::kLemma;
  else if (head == "const") g.kind = RewriteGuard::Kind::kConst;
  else throw FormatError("unknown guard '" + head + "'");
  g.var = args[0];
  if (args.size() == 2) g.values = split(args[1], '|');
  bool needs_values = g.kind == RewriteGuard::Kind::kPos || g.kind == RewriteGuard::Kind::kLemma;
  if (needs_values && g.values.empty()) throw FormatError("guard '" + text + "' needs a value list");
  return g;
}

bool has_ne(const Attrs& a) { return !a.ne.empty() && a.ne != "O"; }

bool guard_holds(const RewriteGuard& g, const Bindings& b) {
  auto it = b.find(g.var);
  if (it == b.end()) return false;
  const Term& t = it->second;
  if (g.kind == RewriteGuard::Kind::kConst) return t.is_const();
  if (!t.is_const()) return false;
  auto in = [&](const std::string& v) { return std::find(g.values.begin(), g.values.end(), v) != g.values.end(); };
  switch (g.kind) {
    case RewriteGuard::Kind::kPos: return in(t.attrs().pos);
    case RewriteGuard::Kind::kNe: return has_ne(t.attrs()) && (g.values.empty() || in(t.attrs().ne));
    case RewriteGuard::Kind::kNotNe: return !has_ne(t.attrs());
    case RewriteGuard::Kind::kLemma: return in(t.name());
    default: return false;
  }
}

void check_template_vars(const RewriteRule& r) {
  auto pv = free_vars(r.pattern);
  for (const auto& v : free_vars(r.templ)) {
    std::string base = v;
    if (!base.empty() && base.back() == kRetypeSuffix) base.pop_back();
    if (std::find(pv.begin(), pv.end(), base) == pv.end())
      throw FormatError("rewrite '" + r.name + "': template variable " + v + " is not bound by the pattern");
  }
  for (const auto& g : r.guards)
    if (std::find(pv.begin(), pv.end(), g.var) == pv.end())
      throw FormatError("rewrite '" + r.name + "': guard variable " + g.var + " is not bound by the pattern");
}

}  // namespace

std::vector<RewriteRule> parse_rewrite_rules(std::string_view text) {
  std::vector<RewriteRule> rules;
  std::optional<RewriteRule> cur;
  std::size_t line_no = 0;
  std::stringstream in{std::string(text)};
  std::string raw;
  auto fail = [&](const std::string& why) { throw FormatError("rewrite file line " + std::to_string(line_no) + ": " + why); };
  while (std::getline(in, raw)) {
    ++line_no;
    auto hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    auto sp = line.find(' ');
    std::string kw = line.substr(0, sp);
    std::string rest = sp == std::string::npos ? "" : trim(line.substr(sp + 1));
    try {
      if (!cur) {
        if (kw == "rewrite") {
          if (rest.empty()) fail("rewrite needs a name");
          cur = RewriteRule{};
          cur->name = rest;
        } else if (kw == "rename") {
          auto w = split(rest, ' ');
          if (w.size() != 2) fail("rename takes two lemmas");
          RewriteRule r;
          r.kind = RewriteRule::Kind::kRename;
          r.name = "rename_" + w[0];
          r.from = w[0];
          r.to = w[1];
          rules.push_back(r);
        } else if (kw == "multiword") {
          auto w = split(rest, ' ');
          if (w.size() < 2) fail("multiword needs at least two words");
          RewriteRule r;
          r.kind = RewriteRule::Kind::kMultiword;
          r.words = w;
          r.name = "mw";
          for (const auto& x : w) r.name += "_" + x;
          rules.push_back(r);
        } else {
          fail("unexpected '" + kw + "'");
        }
        continue;
      }
      if (kw == "match") cur->pattern = parse_term(rest);
      else if (kw == "where") cur->guards.push_back(parse_guard(rest));
      else if (kw == "into") cur->templ = parse_term(rest);
      else if (kw == "end") {
        if (cur->pattern.is_null() || cur->templ.is_null()) fail("rewrite '" + cur->name + "' needs match and into");
        check_template_vars(*cur);
        rules.push_back(*cur);
        cur.reset();
      } else {
        fail("unexpected '" + kw + "' inside rewrite '" + cur->name + "'");
      }
    } catch (const ParseError& e) {
      fail(e.what());
    }
  }
  if (cur) throw FormatError("rewrite '" + cur->name + "' is missing 'end'");
  return rules;
}

const std::vector<RewriteRule>& bundled_rewrite_rules() {
  static const std::vector<RewriteRule> rules = parse_rewrite_rules(bundled::kCorrections);
  return rules;
}

namespace {

Term with_attrs(const Term& c, const Attrs& a) { return Term::constant(c.name(), c.type(), a); }

// Constants introduced by a template carry no surface index; mark them.
Term mark_inserted(const Term& t, int index) {
  switch (t.kind()) {
    case Term::Kind::kConst:
      if (t.attrs().index < 0 && !t.attrs().inserted) {
        Attrs a = t.attrs();
        a.inserted = true;
        a.index = index;
        return with_attrs(t, a);
      }
      return t;
    case Term::Kind::kApp:
      return Term::app(mark_inserted(t.fun(), index), mark_inserted(t.arg(), index));
    case Term::Kind::kLam:
      return Term::lam(t.name(), t.type(), mark_inserted(t.body(), index));
    case Term::Kind::kTypeChange:
      return Term::type_change(t.type(), mark_inserted(t.body(), index));
    default:
      return t;
  }
}

bool contiguous_words(std::vector<Term> consts, const std::vector<std::string>& words) {
  if (consts.size() != words.size()) return false;
  std::sort(consts.begin(), consts.end(), [](const Term& a, const Term& b) { return a.attrs().index < b.attrs().index; });
  for (std::size_t i = 0; i < consts.size(); ++i) {
    if (consts[i].name() != words[i]) return false;
    if (i && consts[i].attrs().index != consts[i - 1].attrs().index + 1) return false;
  }
  return true;
}

Attrs merged_attrs(const std::vector<Term>& consts) {
  Attrs a;
  a.index = -1;
  for (const auto& c : consts) {
    if (a.index < 0 || c.attrs().index < a.index) {
      a.index = c.attrs().index;
      a.pos = c.attrs().pos;
    }
    a.token += (a.token.empty() ? "" : "_") + c.attrs().token;
  }
  return a;
}

std::string joined(const std::vector<std::string>& words) {
  std::string s;
  for (const auto& w : words) s += (s.empty() ? "" : "_") + w;
  return s;
}

std::optional<Term> try_multiword(const RewriteRule& r, const Term& t) {
  if (t.is_const() || t.is_var()) return std::nullopt;
  auto consts = constants(t);
  if (contiguous_words(consts, r.words)) return Term::constant(joined(r.words), type_of(t), merged_attrs(consts));
  // Chain w1 (w2 (... (wk X))).
  std::vector<Term> chain;
  Term cur = t;
  while (cur.is_app() && cur.fun().is_const() && chain.size() < r.words.size()) {
    chain.push_back(cur.fun());
    cur = cur.arg();
  }
  if (chain.size() == r.words.size() && contiguous_words(chain, r.words)) {
    Type ty = Type::fun(type_of(cur), type_of(t));
    return Term::app(Term::constant(joined(r.words), ty, merged_attrs(chain)), cur);
  }
  return std::nullopt;
}

std::optional<Term> try_rule(const RewriteRule& r, const Term& t) {
  switch (r.kind) {
    case RewriteRule::Kind::kRename:
      if (t.is_const(r.from)) return Term::constant(r.to, t.type(), t.attrs());
      return std::nullopt;
    case RewriteRule::Kind::kMultiword:
      return try_multiword(r, t);
    case RewriteRule::Kind::kPattern: {
      auto b = match_pattern(r.pattern, t);
      if (!b) return std::nullopt;
      for (const auto& g : r.guards)
        if (!guard_holds(g, *b)) return std::nullopt;
      Term out = mark_inserted(instantiate(r.templ, *b), min_index(t));
      if (!well_typed(out)) return std::nullopt;
      return out;
    }
  }
  return std::nullopt;
}

class Corrector {
 public:
  Corrector(const std::vector<RewriteRule>& rules, CorrectionStats* stats) : rules_(rules), stats_(stats) {}

  Term run(const Term& t) {
    Term u = children(t);
    std::set<std::size_t> applied;
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t i = 0; i < rules_.size(); ++i) {
        if (applied.count(i)) continue;
        auto r = try_rule(rules_[i], u);
        if (!r) continue;
        applied.insert(i);
        if (++count_ > kMaxApplications) throw CorrectionIncomplete("rewrite budget exhausted at '" + u.str() + "'");
        if (stats_) {
          ++stats_->applications;
          ++stats_->per_rule[rules_[i].name];
        }
        u = children(*r);
        changed = true;
        break;
      }
    }
    return u;
  }

 private:
  Term children(const Term& t) {
    switch (t.kind()) {
      case Term::Kind::kApp:
        return Term::app(run(t.fun()), run(t.arg()));
      case Term::Kind::kLam:
        return Term::lam(t.name(), t.type(), run(t.body()));
      case Term::Kind::kTypeChange:
        return Term::type_change(t.type(), run(t.body()));
      default:
        return t;
    }
  }

  const std::vector<RewriteRule>& rules_;
  CorrectionStats* stats_;
  std::size_t count_ = 0;
};

std::optional<Term> find_type_change(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::kTypeChange:
      return t;
    case Term::Kind::kApp:
      if (auto f = find_type_change(t.fun())) return f;
      return find_type_change(t.arg());
    case Term::Kind::kLam:
      return find_type_change(t.body());
    default:
      return std::nullopt;
  }
}

}  // namespace

Term correct_term(const Term& t, const std::vector<RewriteRule>& rules, CorrectionStats* stats) {
  Term out = Corrector(rules, stats).run(t);
  if (auto tc = find_type_change(out))
    throw CorrectionIncomplete("no correction rule explains the lexical rule " + tc->str());
  return beta_normalize(out);
}

Term correct_term(const Term& t) { return correct_term(t, bundled_rewrite_rules()); }

}  // namespace natlog
