#include <chrono>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "natlog/errors.hpp"
#include "natlog/tableau.hpp"
#include "oracle.hpp"

using namespace natlog;
using namespace natlog::testing;

namespace doctest {
template <>
struct StringMaker<Term> {
  static String convert(const Term& t) { return t.str().c_str(); }
};
}  // namespace doctest

namespace {

TableauNode N(const char* llf, Sign s = Sign::kT, std::vector<Term> args = {}) {
  return make_node(parse_term(llf), std::move(args), s);
}

Term E(const char* name) { return Term::constant(name, Type::e()); }

std::vector<TableauNode> pug_nodes() {
  return {N("several:q_dcl pug:n bark:vp_dcl"),
          N("every:q_dcl (which:(vp_dcl,(n,n)) bark:vp_dcl dog:n) (be:(vp_adj,vp_dcl) vicious:vp_adj)"),
          N("no:q_dcl pug:n (be:(vp_adj,vp_dcl) evil:vp_adj)")};
}

const Rule& rule(const std::string& name) {
  for (const auto& r : bundled_rules())
    if (r.name == name) return r;
  throw std::runtime_error("no rule " + name);
}

// Every entry of the tree keyed by id.
std::map<int, ProofTree::Entry> entries_by_id(const ProofTree& t) {
  std::map<int, ProofTree::Entry> out;
  for (const auto& b : t.blocks)
    for (const auto& e : b.entries) out[e.id] = e;
  return out;
}

}  // namespace

TEST_CASE("node layout") {
  TableauNode n = make_node(parse_term("lam x:np. cut:(np,vp) x c1:e"), {E("c2")}, Sign::kT);
  CHECK(n.llf == parse_term("cut:(np,vp)"));
  REQUIRE(n.args.size() == 2);
  CHECK(n.args[0].name() == "c2");
  CHECK(n.args[1].name() == "c1");
  CHECK(n.str() == "cut : c2, c1 : T");
  CHECK(parse_node(n.typed_str()) == n);
  CHECK(parse_node("dog:n : c1:e : F") == make_node(parse_term("dog:n"), {E("c1")}, Sign::kF));
  CHECK(parse_node("bark:vp john:np : T").args.empty());
  CHECK(make_node(parse_term("bark:vp john:np"), {}, Sign::kT).args.size() == 1);
  CHECK_THROWS_AS(parse_node("dog:n : X"), FormatError);
}

TEST_CASE("efficiency comparison") {
  Criterion ebpc;
  CHECK(ebpc.str() == "ebpc");
  CHECK(compare_efficiency(rule("and_f"), rule("no_n_t"), ebpc) < 0);
  CHECK(compare_efficiency(rule("no_n_t"), rule("and_f"), ebpc) > 0);
  CHECK(compare_efficiency(rule("all_t"), rule("all_t"), ebpc) == 0);
  CHECK(compare_efficiency(rule("ex_t"), rule("all_t"), ebpc) < 0);
  CHECK(compare_efficiency(rule("ex_t"), rule("no_n_t"), Criterion::parse("pcbe")) > 0);
  auto all = Criterion::all();
  CHECK(all.size() == 24);
  std::set<std::string> names;
  for (const auto& c : all) names.insert(c.str());
  CHECK(names.size() == 24);
  CHECK_THROWS_AS(Criterion::parse("eebc"), ConfigError);
  CHECK_THROWS_AS(Criterion::parse("ebp"), ConfigError);
  CHECK_THROWS_AS(Criterion::parse("ebpx"), ConfigError);
}

TEST_CASE("bundled inventory") {
  const auto& rules = bundled_rules();
  for (const char* name : {"mod_pull", "and_f", "and_t", "aux", "ex_t", "ex_f", "all_t", "all_f", "no_t", "no_n_t",
                           "no_f", "int_mod_t", "the_t", "the_c", "the_f_import", "not"})
    CHECK_NOTHROW(rule(name));
  CHECK(rule("no_n_t").subsumed_by == "no_t");
  CHECK(rule("no_n_t").derivable);
  CHECK(rule("ex_t").features == RuleFeatures{false, false, true, false});
  CHECK(rule("all_t").features == RuleFeatures{false, true, false, true});
  CHECK(rule("and_f").features == RuleFeatures{true, true, false, false});
  CHECK(rule("aux").features == RuleFeatures{true, false, false, false});
  for (const auto& r : rules) {
    CHECK(r.features.branching == (r.branches.size() > 1));
    CHECK(r.features.producer == !r.fresh.empty());
    CHECK(r.features.consumer == !r.old.empty());
  }
}

TEST_CASE("rule file validation") {
  const char* ok = "rule r\nfeats equi\nante ?A : ?AS : T\nbranch ?A : ?AS : T\nend\n";
  CHECK(parse_rules(ok).size() == 1);
  CHECK_THROWS_AS(parse_rules("rule r\nfeats equi branching\nante ?A : ?AS : T\nbranch ?A : ?AS : T\nend\n"), FormatError);
  CHECK_THROWS_AS(parse_rules("rule r\nfeats producer\nante ?A : ?AS : T\nbranch ?A : ?AS : T\nend\n"), FormatError);
  CHECK_THROWS_AS(parse_rules("rule r\nold @c\nante ?A : [] : T\nbranch ?A : [@c] : T\nend\n"), FormatError);
  CHECK_THROWS_AS(parse_rules("rule r\nante ?A : [] : T\nguard colour(?A)\nbranch ?A : [] : T\nend\n"), FormatError);
  CHECK_THROWS_AS(parse_rules("rule r\nante ?A : [] : T\nbranch ?B : [] : T\nend\n"), FormatError);
  CHECK_THROWS_AS(parse_rules("rule r\nante ?A : [] : T\nbranch ?A : [] : ?X\nend\n"), FormatError);
  CHECK_THROWS_AS(parse_rules("rule r\nante ?A : [] : T\n"), FormatError);
  CHECK_THROWS_AS(parse_rules("rule r\nsubsumed_by q\nante ?A : [] : T\nbranch ?A : [] : T\nend\n"), FormatError);
  CHECK_THROWS_AS(parse_rules("ante ?A : [] : T\n"), FormatError);
  try {
    parse_rules("# c\n\nrule r\nante ?A : [] : T\nbranch ?A : [] : Q\nend\n");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("line 5") != std::string::npos);
  }
}

TEST_CASE("the pug tableau") {
  auto start = std::chrono::steady_clock::now();
  ProofResult r = prove(pug_nodes());
  auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  CHECK(ms < 100);
  CHECK(r.closed);
  CHECK_FALSE(r.limit_hit);
  CHECK(r.rule_applications == 10);
  CHECK(r.closures == std::vector<std::pair<int, int>>{{5, 8}, {4, 9}, {4, 13}, {12, 16}});
  REQUIRE(r.tree);
  CHECK(r.tree->entry_count() == 17);
  CHECK(r.tree->closure_count() == 4);
  auto byid = entries_by_id(*r.tree);
  std::map<int, std::string> expected{{4, "pug : c1 : T"},       {5, "bark : c1 : T"},     {6, "which bark dog : c1 : F"},
                                      {7, "be vicious : c1 : T"}, {8, "bark : c1 : F"},     {9, "dog : c1 : F"},
                                      {12, "vicious : c1 : T"},   {13, "pug : c1 : F"},     {14, "be evil : c1 : F"},
                                      {16, "evil : c1 : F"}};
  for (const auto& [id, text] : expected) CHECK(byid.at(id).node.str() == text);
  for (int id : {10, 11, 15, 17}) CHECK(byid.at(id).closure);
  CHECK(byid.at(17).closes == std::pair<int, int>{12, 16});
}

TEST_CASE("the pug tableau closes under every criterion and with the derivable rule") {
  for (const auto& c : Criterion::all()) {
    ProverConfig cfg;
    cfg.criterion = c;
    CHECK(prove(pug_nodes(), cfg).closed);
    cfg.flags.derivable = true;
    CHECK(prove(pug_nodes(), cfg).closed);
  }
}

TEST_CASE("rule application limit") {
  ProverConfig cfg;
  cfg.ral = 2;
  ProofResult r = prove(pug_nodes(), cfg);
  CHECK_FALSE(r.closed);
  CHECK(r.limit_hit);
  CHECK(r.rule_applications == 2);
  cfg.ral = 0;
  CHECK_THROWS_AS(prove(pug_nodes(), cfg), ConfigError);
  cfg.ral = -3;
  CHECK_THROWS_AS(prove(pug_nodes(), cfg), ConfigError);
}

TEST_CASE("applicable instances") {
  ProverContext ctx = bundled_context();
  ProverConfig cfg;
  Tableau t(ctx, cfg);
  for (const auto& n : pug_nodes()) t.add_initial(n);
  auto insts = t.applicable_instances(t.branches()[0]);
  REQUIRE(insts.size() == 1);
  CHECK(insts[0].rule->name == "ex_t");
  CHECK(insts[0].antecedents == std::vector<int>{1});

  Tableau single(ctx, cfg);
  single.add_initial(N("dog:n", Sign::kT, {E("c")}));
  CHECK(single.applicable_instances(single.branches()[0]).empty());
  ProofResult r = single.run();
  CHECK_FALSE(r.closed);
  CHECK(r.rule_applications == 0);
}

TEST_CASE("closed branches offer nothing") {
  ProverContext ctx = bundled_context();
  Tableau t(ctx, ProverConfig{});
  t.add_initial(N("dog:n", Sign::kT, {E("c")}));
  t.add_initial(N("dog:n", Sign::kF, {E("c")}));
  t.add_initial(N("every:q dog:n bark:vp"));
  ProofResult r = t.run();
  CHECK(r.closed);
  CHECK(r.rule_applications == 1);
  CHECK(t.applicable_instances(t.branches()[0]).empty());
}

TEST_CASE("the derivable rule shares its log entry with the general rule") {
  ProverContext ctx = bundled_context();
  ProverConfig cfg;
  cfg.flags.derivable = true;
  cfg.ral = 1;
  Tableau t(ctx, cfg);
  t.add_initial(N("no:q pug:n (be:(vp,vp) evil:vp)"));
  t.add_initial(N("pug:n", Sign::kT, {E("c")}));
  auto before = t.applicable_instances(t.branches()[0]);
  std::set<std::string> names;
  for (const auto& i : before) names.insert(i.rule->name);
  CHECK(names == std::set<std::string>{"no_n_t", "no_t"});
  ProofResult r = t.run();
  CHECK(r.rule_applications == 1);
  auto after = t.applicable_instances(t.branches()[0]);
  for (const auto& i : after) CHECK(i.rule->name != "no_t");
  auto byid = entries_by_id(*r.tree);
  CHECK(byid.at(3).node.str() == "be evil : c : F");
}

TEST_CASE("existential import from definite descriptions") {
  ProverContext ctx = bundled_context();
  auto producers = [&](bool thE) {
    ProverConfig cfg;
    cfg.flags.thE = thE;
    Tableau t(ctx, cfg);
    t.add_initial(N("the:q dog:n bark:vp", Sign::kF));
    int n = 0;
    for (const auto& i : t.applicable_instances(t.branches()[0])) n += i.rule->features.producer;
    return n;
  };
  CHECK(producers(false) == 0);
  CHECK(producers(true) == 1);
}

TEST_CASE("compound nouns under allInt") {
  auto derived = [](bool all_int) {
    ProverConfig cfg;
    cfg.flags.all_int = all_int;
    ProofResult r = prove({N("baby:(n,n){pos=NN} kangaroo:n", Sign::kT, {E("c")})}, cfg);
    std::set<std::string> out;
    for (const auto& [id, e] : entries_by_id(*r.tree)) out.insert(e.node.str());
    return out;
  };
  auto on = derived(true);
  CHECK(on.count("baby : c : T"));
  CHECK(on.count("kangaroo : c : T"));
  auto off = derived(false);
  CHECK_FALSE(off.count("baby : c : T"));
  CHECK_FALSE(off.count("kangaroo : c : T"));
  // The signature overrides the flag.
  ProverConfig cfg;
  cfg.flags.all_int = true;
  ProofResult r = prove({N("big:(n,n) mouse:n", Sign::kT, {E("c")})}, cfg);
  std::set<std::string> out;
  for (const auto& [id, e] : entries_by_id(*r.tree)) out.insert(e.node.str());
  CHECK(out.count("mouse : c : T"));
  CHECK_FALSE(out.count("big : c : T"));
}

TEST_CASE("intersective modifiers close against their heads") {
  ProofResult r = prove({N("a:q (red:(n,n) apple:n) fall:vp"), N("a:q (red:(n,n) fruit:n) fall:vp", Sign::kF)});
  CHECK(r.closed);
}

TEST_CASE("modifier list layouts are interchangeable") {
  TableauNode layout1 = make_node(parse_term("loudly:(vp,vp) bark:vp"), {E("c")}, Sign::kT,
                                  {parse_term("in:(np,(vp,vp)) paris:np")});
  TableauNode layout2 = make_node(parse_term("in:(np,(vp,vp)) paris:np (loudly:(vp,vp) bark:vp) c:e"), {}, Sign::kF);
  ProofResult r = prove({layout1, layout2});
  CHECK(r.closed);
  CHECK(r.rule_applications == 2);
}

TEST_CASE("antonyms close a branch") {
  CHECK(prove({N("dead:vp john:np"), N("alive:vp john:np")}).closed);
  CHECK_FALSE(prove({N("dead:vp john:np"), N("alive:vp mary:np")}).closed);
}

TEST_CASE("definite flags") {
  ProverFlags f;
  Term bare = parse_term("a:q{pos=DT} dog:n{pos=NNS} bark:vp");
  CHECK(apply_definite_flags(bare, f) == bare);
  Term inserted = instantiate(parse_term("?D bark:vp"), {{"?D", Term::app(Term::constant("a", Type::q(), Attrs{"", "", "", 1, true, {}}), parse_term("dogs:n"))}});
  f.the = true;
  CHECK(apply_definite_flags(inserted, f).head().name() == "the");
  CHECK(apply_definite_flags(bare, f).head().name() == "a");
  f = {};
  f.a2the = true;
  CHECK(apply_definite_flags(bare, f).head().name() == "the");
  CHECK(apply_definite_flags(inserted, f).head().name() == "a");
  f = {};
  f.s2the = true;
  CHECK(apply_definite_flags(bare, f).head().name() == "the");
  CHECK(apply_definite_flags(parse_term("a:q dog:n{pos=NN} bark:vp"), f).head().name() == "a");
  CHECK(apply_definite_flags(parse_term("every:q dog:n{pos=NNS} bark:vp"), f).head().name() == "every");
}

TEST_CASE("rendering") {
  ProofResult r = prove(pug_nodes());
  std::string text = render_tree(r, RenderFormat::kText);
  CHECK(text.rfind("tableau closed, 10 rule applications\n", 0) == 0);
  int numbered = 0, crosses = 0;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    auto p = line.find_first_not_of(' ');
    if (p != std::string::npos && std::isdigit(static_cast<unsigned char>(line[p]))) ++numbered;
    if (line.find("  x (") != std::string::npos) ++crosses;
  }
  CHECK(numbered == 17);
  CHECK(crosses == 4);

  ProofResult back = parse_tree_json(render_tree(r, RenderFormat::kJson));
  CHECK(back.closed == r.closed);
  CHECK(back.rule_applications == r.rule_applications);
  CHECK(back.closures == r.closures);
  REQUIRE(back.tree);
  CHECK(*back.tree == *r.tree);

  std::string tex = render_tree(r, RenderFormat::kLatex);
  CHECK(tex.find("\\begin{forest}") != std::string::npos);
  CHECK(tex.find("$\\times$") != std::string::npos);

  ProofResult empty = prove({});
  CHECK(render_tree(empty, RenderFormat::kText) == "tableau open, 0 rule applications\n");
  CHECK(parse_tree_json(render_tree(empty, RenderFormat::kJson)).tree->entry_count() == 0);

  ProverConfig cfg;
  cfg.record_tree = false;
  CHECK_THROWS_AS(render_tree(prove(pug_nodes(), cfg), RenderFormat::kText), NoTreeRecorded);
  CHECK_THROWS_AS(parse_render_format("xml"), ConfigError);
  CHECK_THROWS_AS(parse_tree_json("{\"closed\": 1}"), FormatError);
}

TEST_CASE("random node sets: soundness against model enumeration") {
  NodeSetGen g(7);
  ProverContext ctx = empty_kb_context();
  int closed = 0, agree_open = 0;
  for (int i = 0; i < 200; ++i) {
    auto nodes = g.nodes();
    ProofResult r = prove(nodes, ProverConfig{}, ctx);
    bool sat = satisfiable(nodes, 3);
    if (r.closed) {
      ++closed;
      CHECK_MESSAGE(!sat, "closed on a satisfiable set");
    } else if (sat) {
      ++agree_open;
    }
  }
  CHECK(closed > 20);
  CHECK(agree_open > 20);
}

TEST_CASE("random node sets: no instance is applied twice on a branch") {
  NodeSetGen g(11);
  ProverContext ctx = empty_kb_context();
  for (int i = 0; i < 150; ++i) {
    ProverConfig cfg;
    cfg.flags.derivable = i % 2 == 0;
    ProofResult r = prove(g.nodes(), cfg, ctx);
    const ProofTree& t = *r.tree;
    std::function<void(int, std::set<std::tuple<std::string, std::vector<int>, std::string>>)> walk =
        [&](int bi, std::set<std::tuple<std::string, std::vector<int>, std::string>> seen) {
          const auto& b = t.blocks[static_cast<std::size_t>(bi)];
          if (bi != 0) {
            const Rule& rr = rule(b.rule);
            std::string general = rr.subsumed_by.empty() ? rr.name : rr.subsumed_by;
            std::vector<int> ants = rr.subsumed_by.empty() ? b.antecedents : std::vector<int>{b.antecedents.front()};
            std::string ent = rr.features.producer ? "" : b.entity;
            auto key = std::make_tuple(general, ants, ent);
            CHECK(seen.count(key) == 0);
            seen.insert(key);
          }
          // Siblings come from one application; only the first carries the key forward.
          for (int c : b.children) walk(c, seen);
        };
    walk(0, {});
  }
}

TEST_CASE("random node sets: closure is monotone and criterion-invariant") {
  NodeSetGen g(23);
  ProverContext ctx = empty_kb_context();
  auto all = Criterion::all();
  for (int i = 0; i < 80; ++i) {
    auto nodes = g.nodes();
    ProofResult base = prove(nodes, ProverConfig{}, ctx);
    if (base.closed) {
      auto more = nodes;
      for (const auto& n : g.nodes()) more.push_back(n);
      CHECK(prove(more, ProverConfig{}, ctx).closed);
    }
    ProverConfig cfg;
    cfg.criterion = all[static_cast<std::size_t>(i) % all.size()];
    CHECK(prove(nodes, cfg, ctx).closed == base.closed);
  }
}
