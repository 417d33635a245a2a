#include <algorithm>
#include <cctype>
#include <sstream>

#include "natlog/bundled.hpp"
#include "natlog/errors.hpp"
#include "natlog/tableau.hpp"

namespace natlog {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_on(const std::string& s, const std::string& sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string::npos ? std::string::npos : pos - start)));
    if (pos == std::string::npos) break;
    start = pos + sep.size();
  }
  return out;
}

std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

SignPattern parse_sign(const std::string& s) {
  SignPattern p;
  if (s == "T") p.kind = SignPattern::Kind::kT;
  else if (s == "F") p.kind = SignPattern::Kind::kF;
  else if (s.size() > 1 && s[0] == '?') {
    p.kind = SignPattern::Kind::kVar;
    p.var = s;
  } else if (s.size() > 2 && s[0] == '~' && s[1] == '?') {
    p.kind = SignPattern::Kind::kNegVar;
    p.var = s.substr(1);
  } else {
    throw FormatError("bad sign '" + s + "'");
  }
  return p;
}

NodePattern parse_node_pattern(const std::string& text) {
  auto parts = split_on(text, " : ");
  if (parts.size() != 3) throw FormatError("node pattern '" + text + "' needs LLF : ARGS : SIGN");
  NodePattern p;
  p.llf = parse_term(parts[0]);
  const std::string& args = parts[1];
  if (args.size() >= 2 && args.front() == '[' && args.back() == ']') {
    p.args_kind = NodePattern::ArgsKind::kList;
    for (const auto& e : split_list(args.substr(1, args.size() - 2), ',')) {
      if (e.size() < 2 || e[0] != '@') throw FormatError("argument '" + e + "' must be an entity variable");
      p.entities.push_back(e);
    }
  } else if (args.size() > 1 && args[0] == '?') {
    p.args_kind = NodePattern::ArgsKind::kAny;
    p.args_var = args;
  } else {
    throw FormatError("bad argument list '" + args + "'");
  }
  p.sign = parse_sign(parts[2]);
  return p;
}

RuleGuard parse_rule_guard(const std::string& text) {
  auto open = text.find('(');
  if (open == std::string::npos || text.back() != ')') throw FormatError("malformed guard '" + text + "'");
  std::string head = trim(text.substr(0, open));
  std::string inner = text.substr(open + 1, text.size() - open - 2);
  RuleGuard g;
  auto comma = inner.find(',');
  g.var = trim(inner.substr(0, comma));
  std::string rest = comma == std::string::npos ? "" : trim(inner.substr(comma + 1));
  if (head == "lemma") {
    g.kind = RuleGuard::Kind::kLemma;
    g.values = split_list(rest, '|');
    if (g.values.empty()) throw FormatError("lemma guard needs alternatives");
  } else if (head == "flag") {
    g.kind = RuleGuard::Kind::kFlag;
    g.values = {g.var};
    g.var.clear();
    if (g.values[0] != "thE" && g.values[0] != "allInt") throw FormatError("unknown flag '" + g.values[0] + "'");
  } else if (head == "typed") {
    g.kind = RuleGuard::Kind::kTyped;
    if (rest.empty()) throw FormatError("typed guard needs a type");
    g.type = parse_type(rest);
  } else if (head == "const") {
    g.kind = RuleGuard::Kind::kConst;
  } else if (head == "intersective") {
    g.kind = RuleGuard::Kind::kIntersective;
  } else if (head == "subsective") {
    g.kind = RuleGuard::Kind::kSubsective;
  } else {
    throw FormatError("unknown guard '" + head + "'");
  }
  return g;
}

void check_rule(const Rule& r) {
  auto fail = [&](const std::string& why) { throw FormatError("rule '" + r.name + "': " + why); };
  if (!r.native.empty()) {
    if (!r.antecedents.empty() || !r.branches.empty()) fail("native rules take no patterns");
    return;
  }
  if (r.antecedents.empty() || r.antecedents.size() > 2) fail("needs one or two antecedents");
  if (r.branches.empty()) fail("needs at least one branch");
  if (r.features.branching != (r.branches.size() > 1)) fail("branching feature does not match the consequent");
  if (r.features.producer != !r.fresh.empty()) fail("producer feature requires exactly one fresh entity");
  if (r.features.consumer != !r.old.empty()) fail("consumer feature requires exactly one old entity");
  if (!r.fresh.empty() && !r.old.empty()) fail("a rule cannot both produce and consume");
  std::set<std::string> bound;
  for (const auto& a : r.antecedents) {
    for (const auto& v : free_vars(a.llf)) bound.insert(v);
    for (const auto& e : a.entities) bound.insert(e);
    if (!a.args_var.empty()) bound.insert(a.args_var);
    if (a.sign.kind == SignPattern::Kind::kVar) bound.insert(a.sign.var);
  }
  if (!r.fresh.empty() && bound.count(r.fresh)) fail("fresh entity " + r.fresh + " occurs in an antecedent");
  for (const auto& br : r.branches)
    for (const auto& n : br) {
      for (auto v : free_vars(n.llf)) {
        if (!v.empty() && v.back() == kRetypeSuffix) v.pop_back();
        if (!bound.count(v)) fail("consequent variable " + v + " is unbound");
      }
      for (const auto& e : n.entities)
        if (!bound.count(e) && e != r.fresh && e != r.old) fail("entity " + e + " is unbound");
      if (!n.args_var.empty() && !bound.count(n.args_var)) fail("argument list " + n.args_var + " is unbound");
      if (n.sign.kind != SignPattern::Kind::kT && n.sign.kind != SignPattern::Kind::kF && !bound.count(n.sign.var))
        fail("sign variable " + n.sign.var + " is unbound");
    }
  for (const auto& g : r.guards)
    if (g.kind != RuleGuard::Kind::kFlag && !bound.count(g.var)) fail("guard variable " + g.var + " is unbound");
}

}  // namespace

std::vector<Rule> parse_rules(std::string_view text) {
  std::vector<Rule> rules;
  std::optional<Rule> cur;
  std::size_t line_no = 0;
  std::stringstream in{std::string(text)};
  std::string raw;
  auto fail = [&](const std::string& why) { throw FormatError("rule file line " + std::to_string(line_no) + ": " + why); };
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
        if (kw != "rule" || rest.empty()) fail("expected 'rule NAME'");
        for (const auto& r : rules)
          if (r.name == rest) fail("duplicate rule '" + rest + "'");
        cur = Rule{};
        cur->name = rest;
        continue;
      }
      if (kw == "feats") {
        for (const auto& f : split_list(rest, ' ')) {
          if (f == "equi") cur->features.equivalence = true;
          else if (f == "branching") cur->features.branching = true;
          else if (f == "producer") cur->features.producer = true;
          else if (f == "consumer") cur->features.consumer = true;
          else fail("unknown feature '" + f + "'");
        }
      } else if (kw == "subsumed_by") {
        cur->subsumed_by = rest;
      } else if (kw == "derivable") {
        cur->derivable = true;
      } else if (kw == "native") {
        if (rest != "mod_pull") fail("unknown native rule '" + rest + "'");
        cur->native = rest;
      } else if (kw == "fresh" || kw == "old") {
        if (rest.size() < 2 || rest[0] != '@') fail(kw + " needs an entity variable");
        (kw == "fresh" ? cur->fresh : cur->old) = rest;
      } else if (kw == "ante") {
        cur->antecedents.push_back(parse_node_pattern(rest));
      } else if (kw == "guard") {
        cur->guards.push_back(parse_rule_guard(rest));
      } else if (kw == "branch") {
        std::vector<NodePattern> br;
        for (const auto& n : split_on(rest, " ; ")) br.push_back(parse_node_pattern(n));
        cur->branches.push_back(br);
      } else if (kw == "end") {
        check_rule(*cur);
        rules.push_back(*cur);
        cur.reset();
      } else {
        fail("unexpected '" + kw + "' in rule '" + cur->name + "'");
      }
    } catch (const FormatError& e) {
      if (std::string(e.what()).rfind("rule file line", 0) == 0) throw;
      fail(e.what());
    } catch (const ParseError& e) {
      fail(e.what());
    } catch (const TypeError& e) {
      fail(e.what());
    }
  }
  if (cur) throw FormatError("rule '" + cur->name + "' is missing 'end'");
  for (const auto& r : rules) {
    if (r.subsumed_by.empty()) continue;
    auto general = std::find_if(rules.begin(), rules.end(), [&](const Rule& g) { return g.name == r.subsumed_by; });
    if (general == rules.end()) throw FormatError("rule '" + r.name + "' is subsumed by unknown rule '" + r.subsumed_by + "'");
  }
  return rules;
}

const std::vector<Rule>& bundled_rules() {
  static const std::vector<Rule> rules = parse_rules(bundled::kRules);
  return rules;
}

Criterion::Criterion()
    : order_{Feature::kEquivalence, Feature::kNonBranching, Feature::kNonProducing, Feature::kNonConsuming} {}

Criterion::Criterion(std::array<Feature, 4> order) : order_(order) {
  std::set<Feature> seen(order.begin(), order.end());
  if (seen.size() != 4) throw ConfigError("efficiency criterion must list each category once");
}

Criterion Criterion::parse(std::string_view s) {
  if (s.size() != 4) throw ConfigError("efficiency criterion must be a permutation of 'ebpc', got '" + std::string(s) + "'");
  std::array<Feature, 4> order{};
  for (std::size_t i = 0; i < 4; ++i) {
    switch (s[i]) {
      case 'e': order[i] = Feature::kEquivalence; break;
      case 'b': order[i] = Feature::kNonBranching; break;
      case 'p': order[i] = Feature::kNonProducing; break;
      case 'c': order[i] = Feature::kNonConsuming; break;
      default: throw ConfigError("efficiency criterion must be a permutation of 'ebpc', got '" + std::string(s) + "'");
    }
  }
  return Criterion(order);
}

std::vector<Criterion> Criterion::all() {
  std::string letters = "bcep";
  std::vector<Criterion> out;
  do {
    out.push_back(parse(letters));
  } while (std::next_permutation(letters.begin(), letters.end()));
  return out;
}

std::string Criterion::str() const {
  std::string s;
  for (Feature f : order_) {
    switch (f) {
      case Feature::kEquivalence: s += 'e'; break;
      case Feature::kNonBranching: s += 'b'; break;
      case Feature::kNonProducing: s += 'p'; break;
      case Feature::kNonConsuming: s += 'c'; break;
    }
  }
  return s;
}

namespace {

bool desirable(const RuleFeatures& f, Feature which) {
  switch (which) {
    case Feature::kEquivalence: return f.equivalence;
    case Feature::kNonBranching: return !f.branching;
    case Feature::kNonProducing: return !f.producer;
    case Feature::kNonConsuming: return !f.consumer;
  }
  return false;
}

}  // namespace

int compare_efficiency(const Rule& a, const Rule& b, const Criterion& c) {
  for (Feature f : c.order()) {
    bool da = desirable(a.features, f), db = desirable(b.features, f);
    if (da != db) return da ? -1 : 1;
  }
  return 0;
}

}  // namespace natlog
