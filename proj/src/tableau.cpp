#include "natlog/tableau.hpp"

#include <algorithm>
#include <cctype>

#include "natlog/errors.hpp"

namespace natlog {

std::string to_string(Sign s) { return s == Sign::kT ? "T" : "F"; }
Sign negate(Sign s) { return s == Sign::kT ? Sign::kF : Sign::kT; }

namespace {

bool is_entity_type(const Type& t) {
  Type e = erase_features(t);
  return e == Type::e() || e == Type::np();
}

std::string join(const std::vector<Term>& ts, const std::string& sep, bool typed) {
  std::string s;
  for (std::size_t i = 0; i < ts.size(); ++i) s += (i ? sep : "") + ts[i].str(typed);
  return s;
}

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

std::vector<Term> parse_list(const std::string& s, const std::string& sep) {
  std::vector<Term> out;
  if (s == "[]" || s.empty()) return out;
  for (const auto& item : split_on(s, sep)) out.push_back(parse_term(item));
  return out;
}

Sign parse_sign_text(const std::string& s) {
  if (s == "T") return Sign::kT;
  if (s == "F") return Sign::kF;
  throw FormatError("sign must be T or F, got '" + s + "'");
}

}  // namespace

bool TableauNode::operator==(const TableauNode& o) const {
  return sign == o.sign && llf == o.llf && mods == o.mods && args == o.args;
}

std::string TableauNode::str() const {
  std::string s;
  if (!mods.empty()) s += join(mods, ", ", false) + " : ";
  s += llf.str(false);
  if (!args.empty()) s += " : " + join(args, ", ", false);
  return s + " : " + to_string(sign);
}

std::string TableauNode::typed_str() const {
  std::string m = mods.empty() ? "[]" : join(mods, " ; ", true);
  std::string a = args.empty() ? "[]" : join(args, ", ", true);
  return m + " : " + llf.str(true) + " : " + a + " : " + to_string(sign);
}

TableauNode make_node(const Term& llf, std::vector<Term> args, Sign sign, std::vector<Term> mods) {
  TableauNode n;
  n.sign = sign;
  n.mods = std::move(mods);
  Term t = beta_normalize(llf);
  std::size_t k = 0;
  while (t.is_lam() && k < args.size()) t = beta_normalize(Term::app(t, args[k++]));
  args.erase(args.begin(), args.begin() + static_cast<std::ptrdiff_t>(k));
  while (t.is_app() && t.arg().is_const() && is_entity_type(t.arg().type())) {
    args.insert(args.begin(), t.arg());
    t = t.fun();
  }
  n.llf = t;
  n.args = std::move(args);
  return n;
}

TableauNode parse_node(std::string_view text) {
  auto parts = split_on(std::string(text), " : ");
  if (parts.size() < 2 || parts.size() > 4) throw FormatError("node '" + std::string(text) + "' needs 2 to 4 parts");
  Sign sign = parse_sign_text(parts.back());
  std::vector<Term> mods, args;
  std::size_t llf_at = 0;
  if (parts.size() == 4) {
    mods = parse_list(parts[0], " ; ");
    llf_at = 1;
  }
  if (parts.size() >= 3) args = parse_list(parts[parts.size() - 2], ", ");
  TableauNode n;
  n.mods = mods;
  n.llf = parse_term(parts[llf_at]);
  n.args = args;
  n.sign = sign;
  return n;
}

ProverContext bundled_context() {
  static const KnowledgeBase kb = KnowledgeBase::bundled();
  static const Signature sig = Signature::bundled();
  return ProverContext{&bundled_rules(), &kb, &sig};
}

Tableau::Tableau(const ProverContext& ctx, const ProverConfig& cfg) : ctx_(ctx), cfg_(cfg) {
  if (!ctx_.rules || !ctx_.kb || !ctx_.sig) throw ConfigError("prover context is incomplete");
  branches_.push_back(Branch{});
  tree_.blocks.push_back(ProofTree::Block{});
  for (std::size_t i = 0; i < ctx_.rules->size(); ++i) order_[&(*ctx_.rules)[i]] = i;
}

int Tableau::add_node(const TableauNode& n) {
  nodes_.push_back(n);
  return next_id_++;
}

bool Tableau::entity_term(const Term& t) const { return t.is_const() && is_entity_type(t.type()); }

namespace {

void register_entities(Branch& b, const TableauNode& n) {
  for (const auto& a : n.args) {
    if (!a.is_const() || !is_entity_type(a.type())) continue;
    bool known = std::any_of(b.entities.begin(), b.entities.end(), [&](const Term& e) { return e.name() == a.name(); });
    if (!known) b.entities.push_back(a);
  }
}

}  // namespace

void Tableau::add_initial(const TableauNode& n) {
  Branch& b = branches_.front();
  int id = add_node(n);
  b.nodes.push_back(id);
  register_entities(b, n);
  tree_.blocks[0].entries.push_back(ProofTree::Entry{id, false, n, {0, 0}});
}

bool Tableau::leq(const Term& a, const Term& b) const {
  if (a == b) return true;
  if (!a.is_const() || !b.is_const()) return false;
  if (erase_features(a.type()) != erase_features(b.type())) return false;
  return ctx_.kb->subsumes(a.name(), b.name(), cfg_.sense_cutoff);
}

bool Tableau::closes(const TableauNode& a, const TableauNode& b) const {
  if (a.args != b.args || a.mods != b.mods) return false;
  if (a.sign == Sign::kT && b.sign == Sign::kF) return leq(a.llf, b.llf);
  if (a.sign == Sign::kF && b.sign == Sign::kT) return leq(b.llf, a.llf);
  if (a.sign == Sign::kT && b.sign == Sign::kT && a.llf.is_const() && b.llf.is_const())
    return ctx_.kb->disjoint(a.llf.name(), b.llf.name(), cfg_.sense_cutoff);
  return false;
}

bool Tableau::guard_holds(const RuleGuard& g, const RuleInstance& inst) const {
  if (g.kind == RuleGuard::Kind::kFlag) {
    if (g.values[0] == "thE") return cfg_.flags.thE;
    if (g.values[0] == "allInt") return cfg_.flags.all_int;
    return false;
  }
  auto it = inst.bindings.find(g.var);
  if (it == inst.bindings.end()) return false;
  const Term& t = it->second;
  switch (g.kind) {
    case RuleGuard::Kind::kLemma:
      return t.is_const() && std::find(g.values.begin(), g.values.end(), t.name()) != g.values.end();
    case RuleGuard::Kind::kConst:
      return t.is_const();
    case RuleGuard::Kind::kTyped: {
      if (!well_typed(t)) return false;
      return subtype(type_of(t), g.type);
    }
    case RuleGuard::Kind::kIntersective:
    case RuleGuard::Kind::kSubsective: {
      if (!t.is_const()) return false;
      bool modifier = erase_features(t.type()) == Type::fun(Type::n(), Type::n());
      if (!modifier) return false;
      if (auto e = ctx_.sig->lookup(t.name(), t.type())) {
        if (e->has(0, Prop::kInt)) return true;
        return g.kind == RuleGuard::Kind::kSubsective && e->has(0, Prop::kSub);
      }
      if (!cfg_.flags.all_int) return false;
      const std::string& pos = t.attrs().pos;
      return pos.empty() || pos.rfind("VB", 0) == 0 || pos.rfind("JJ", 0) == 0 || pos.rfind("NN", 0) == 0;
    }
    default:
      return false;
  }
}

void Tableau::match_from(const Branch& b, const Rule& r, std::size_t k, RuleInstance inst,
                         std::vector<RuleInstance>& out) const {
  if (k == r.antecedents.size()) {
    out.push_back(std::move(inst));
    return;
  }
  const NodePattern& p = r.antecedents[k];
  for (int id : b.nodes) {
    if (std::find(inst.antecedents.begin(), inst.antecedents.end(), id) != inst.antecedents.end()) continue;
    const TableauNode& n = node(id);
    if (!n.mods.empty()) continue;
    RuleInstance next = inst;
    if (p.sign.kind == SignPattern::Kind::kT && n.sign != Sign::kT) continue;
    if (p.sign.kind == SignPattern::Kind::kF && n.sign != Sign::kF) continue;
    if (p.sign.kind == SignPattern::Kind::kVar) {
      auto s = next.signs.find(p.sign.var);
      if (s != next.signs.end() && s->second != n.sign) continue;
      next.signs[p.sign.var] = n.sign;
    }
    if (p.args_kind == NodePattern::ArgsKind::kList) {
      if (n.args.size() != p.entities.size()) continue;
      bool ok = true;
      for (std::size_t i = 0; i < n.args.size() && ok; ++i) {
        auto e = next.bindings.find(p.entities[i]);
        if (e != next.bindings.end()) ok = e->second == n.args[i];
        else if (entity_term(n.args[i])) next.bindings[p.entities[i]] = n.args[i];
        else ok = false;
      }
      if (!ok) continue;
    } else {
      auto a = next.arg_lists.find(p.args_var);
      if (a != next.arg_lists.end() && a->second != n.args) continue;
      next.arg_lists[p.args_var] = n.args;
    }
    auto m = match_pattern(p.llf, n.llf, next.bindings);
    if (!m) continue;
    next.bindings = std::move(*m);
    next.antecedents.push_back(id);
    match_from(b, r, k + 1, std::move(next), out);
  }
}

std::vector<std::vector<TableauNode>> Tableau::consequents(const RuleInstance& inst, const std::string& fresh) const {
  const Rule& r = *inst.rule;
  std::vector<std::vector<TableauNode>> out;
  if (r.native == "mod_pull") {
    const TableauNode& n = node(inst.antecedents[0]);
    Term t = n.llf;
    for (auto it = n.mods.rbegin(); it != n.mods.rend(); ++it) t = Term::app(*it, t);
    out.push_back({make_node(t, n.args, n.sign)});
    return out;
  }
  Bindings b = inst.bindings;
  if (!r.fresh.empty()) b[r.fresh] = Term::constant(fresh, Type::e());
  for (const auto& br : r.branches) {
    std::vector<TableauNode> nodes;
    for (const auto& p : br) {
      Term llf = instantiate(p.llf, b);
      std::vector<Term> args;
      if (p.args_kind == NodePattern::ArgsKind::kList) {
        for (const auto& e : p.entities) args.push_back(b.at(e));
      } else {
        args = inst.arg_lists.at(p.args_var);
      }
      Sign s = Sign::kT;
      switch (p.sign.kind) {
        case SignPattern::Kind::kT: s = Sign::kT; break;
        case SignPattern::Kind::kF: s = Sign::kF; break;
        case SignPattern::Kind::kVar: s = inst.signs.at(p.sign.var); break;
        case SignPattern::Kind::kNegVar: s = negate(inst.signs.at(p.sign.var)); break;
      }
      nodes.push_back(make_node(llf, std::move(args), s));
    }
    out.push_back(std::move(nodes));
  }
  return out;
}

std::tuple<std::string, std::vector<int>, std::string> Tableau::log_key(const RuleInstance& inst) const {
  const Rule& r = *inst.rule;
  if (r.subsumed_by.empty()) return {r.name, inst.antecedents, inst.entity};
  return {r.subsumed_by, {inst.antecedents.front()}, inst.entity};
}

std::vector<RuleInstance> Tableau::applicable_instances(const Branch& b) const {
  std::vector<RuleInstance> out;
  if (b.closed) return out;
  auto on_branch = [&](const TableauNode& n) {
    return std::any_of(b.nodes.begin(), b.nodes.end(), [&](int id) { return node(id) == n; });
  };
  for (const auto& r : *ctx_.rules) {
    if (r.derivable && !cfg_.flags.derivable) continue;
    std::vector<RuleInstance> found;
    if (r.native == "mod_pull") {
      for (int id : b.nodes)
        if (!node(id).mods.empty()) {
          RuleInstance inst;
          inst.antecedents = {id};
          found.push_back(inst);
        }
    } else {
      RuleInstance seed;
      match_from(b, r, 0, seed, found);
    }
    for (auto& inst : found) {
      inst.rule = &r;
      bool guards = std::all_of(r.guards.begin(), r.guards.end(), [&](const RuleGuard& g) { return guard_holds(g, inst); });
      if (!guards) continue;
      std::vector<RuleInstance> expanded;
      if (!r.old.empty()) {
        if (auto e = inst.bindings.find(r.old); e != inst.bindings.end()) {
          inst.entity = e->second.name();
          expanded.push_back(inst);
        } else {
          for (const auto& ent : b.entities) {
            RuleInstance x = inst;
            x.bindings[r.old] = ent;
            x.entity = ent.name();
            expanded.push_back(std::move(x));
          }
        }
      } else {
        expanded.push_back(inst);
      }
      for (auto& x : expanded) {
        if (b.applied.count(log_key(x))) continue;
        // Skip instances that cannot extend the branch.
        if (r.fresh.empty()) {
          auto cons = consequents(x, "");
          bool useless = std::any_of(cons.begin(), cons.end(), [&](const std::vector<TableauNode>& br) {
            return std::all_of(br.begin(), br.end(), on_branch);
          });
          if (useless) continue;
        }
        out.push_back(std::move(x));
      }
    }
  }
  return out;
}

bool Tableau::better(const RuleInstance& a, const RuleInstance& b, const Branch& br) const {
  int c = compare_efficiency(*a.rule, *b.rule, cfg_.criterion);
  if (c != 0) return c < 0;
  if (a.antecedents != b.antecedents) return a.antecedents < b.antecedents;
  std::size_t oa = order_.at(a.rule), ob = order_.at(b.rule);
  if (oa != ob) return oa < ob;
  auto rank = [&](const std::string& name) {
    for (std::size_t i = 0; i < br.entities.size(); ++i)
      if (br.entities[i].name() == name) return i;
    return br.entities.size();
  };
  return rank(a.entity) < rank(b.entity);
}

void Tableau::check_closure(Branch& b, std::size_t first_new) {
  for (std::size_t i = std::max<std::size_t>(first_new, 1); i < b.nodes.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (!closes(node(b.nodes[j]), node(b.nodes[i]))) continue;
      ++applications_;
      b.closed = true;
      b.closing = {b.nodes[j], b.nodes[i]};
      int id = add_node(TableauNode{});
      tree_.blocks[static_cast<std::size_t>(b.block)].entries.push_back(ProofTree::Entry{id, true, {}, b.closing});
      return;
    }
  }
}

void Tableau::apply(std::size_t bi, const RuleInstance& inst) {
  Branch parent = branches_[bi];
  const Rule& r = *inst.rule;
  std::string fresh;
  if (!r.fresh.empty()) fresh = "c" + std::to_string(next_entity_++);
  auto cons = consequents(inst, fresh);
  ++applications_;
  parent.applied.insert(log_key(inst));
  std::string entity = fresh.empty() ? inst.entity : fresh;

  std::vector<Branch> children;
  std::vector<std::size_t> first_new;
  for (const auto& nodes : cons) {
    Branch nb = parent;
    ProofTree::Block block;
    block.rule = r.name;
    block.antecedents = inst.antecedents;
    block.entity = entity;
    first_new.push_back(nb.nodes.size());
    for (const auto& n : nodes) {
      bool dup = std::any_of(nb.nodes.begin(), nb.nodes.end(), [&](int id) { return node(id) == n; });
      if (dup) continue;
      int id = add_node(n);
      nb.nodes.push_back(id);
      register_entities(nb, n);
      block.entries.push_back(ProofTree::Entry{id, false, n, {0, 0}});
    }
    nb.block = static_cast<int>(tree_.blocks.size());
    tree_.blocks[static_cast<std::size_t>(parent.block)].children.push_back(nb.block);
    tree_.blocks.push_back(block);
    children.push_back(std::move(nb));
  }
  for (std::size_t k = 0; k < children.size(); ++k) check_closure(children[k], first_new[k]);
  branches_.erase(branches_.begin() + static_cast<std::ptrdiff_t>(bi));
  branches_.insert(branches_.begin() + static_cast<std::ptrdiff_t>(bi), children.begin(), children.end());
}

ProofResult Tableau::run() {
  if (cfg_.ral < 1) throw ConfigError("rule application limit must be positive");
  ProofResult res;
  check_closure(branches_.front(), 0);
  for (;;) {
    bool all_closed = std::all_of(branches_.begin(), branches_.end(), [](const Branch& b) { return b.closed; });
    if (all_closed) {
      res.closed = true;
      break;
    }
    if (applications_ >= cfg_.ral) {
      res.limit_hit = true;
      break;
    }
    std::size_t bi = 0;
    while (branches_[bi].closed) ++bi;
    auto insts = applicable_instances(branches_[bi]);
    // The leftmost open branch is saturated: it describes a model.
    if (insts.empty()) break;
    std::size_t best = 0;
    for (std::size_t i = 1; i < insts.size(); ++i)
      if (better(insts[i], insts[best], branches_[bi])) best = i;
    apply(bi, insts[best]);
  }
  res.rule_applications = applications_;
  for (const auto& b : branches_)
    if (b.closed) res.closures.push_back(b.closing);
  if (cfg_.record_tree) res.tree = tree_;
  return res;
}

ProofResult prove(const std::vector<TableauNode>& initial, const ProverConfig& cfg, const ProverContext& ctx) {
  if (cfg.ral < 1) throw ConfigError("rule application limit must be positive");
  Tableau t(ctx, cfg);
  for (const auto& n : initial) {
    TableauNode m = n;
    m.llf = apply_definite_flags(m.llf, cfg.flags);
    t.add_initial(make_node(m.llf, m.args, m.sign, m.mods));
  }
  return t.run();
}

namespace {

const std::set<std::string>& indefinite_dets() {
  static const std::set<std::string> s{"a", "an", "some"};
  return s;
}

const std::set<std::string>& plural_dets() {
  static const std::set<std::string> s{"a", "an", "some", "several", "a_few", "a_lot_of"};
  return s;
}

bool plural_restrictor(const Term& t) {
  for (const auto& c : constants(t)) {
    if (erase_features(c.type()) != Type::n()) continue;
    const std::string& pos = c.attrs().pos;
    if (pos == "NNS" || pos == "NNPS") return true;
  }
  return false;
}

Term definite(const Term& det) {
  return Term::constant("the", det.type(), det.attrs());
}

}  // namespace

Term apply_definite_flags(const Term& llf, const ProverFlags& flags) {
  if (!flags.the && !flags.a2the && !flags.s2the) return llf;
  switch (llf.kind()) {
    case Term::Kind::kApp: {
      Term f = apply_definite_flags(llf.fun(), flags);
      Term a = apply_definite_flags(llf.arg(), flags);
      if (f.is_const() && f.name() != "the") {
        const Attrs& at = f.attrs();
        Type ty = erase_features(f.type());
        bool det = ty == Type::fun(Type::n(), Type::np()) || ty == Type::q();
        if (det) {
          bool bare = at.inserted && f.name() == "a";
          bool rewrite = (flags.the && bare) || (flags.a2the && !bare && indefinite_dets().count(f.name())) ||
                         (flags.s2the && plural_dets().count(f.name()) && plural_restrictor(a));
          if (rewrite) f = definite(f);
        }
      }
      return Term::app(f, a);
    }
    case Term::Kind::kLam:
      return Term::lam(llf.name(), llf.type(), apply_definite_flags(llf.body(), flags));
    default:
      return llf;
  }
}

}  // namespace natlog
