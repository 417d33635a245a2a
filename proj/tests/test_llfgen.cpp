#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "doctest.h"
#include "natlog/errors.hpp"
#include "natlog/llfgen.hpp"

using namespace natlog;

namespace doctest {
template <>
struct StringMaker<Term> {
  static String convert(const Term& t) { return t.str().c_str(); }
};
}  // namespace doctest

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(NATLOG_SOURCE_DIR) + "/data/golden/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string s = ss.str();
  while (!s.empty() && (s.back() == '\n' || s.back() == ' ')) s.pop_back();
  return s;
}

Term golden(const std::string& name) { return parse_term(slurp(name)); }
Term P(const char* s) { return parse_term(s); }

CCGTree rinse_tree() { return parse_derivation(slurp("rinse_derivation.json"))[0].root; }

const Signature& sig() {
  static const Signature s = Signature::bundled();
  return s;
}

std::multiset<std::string> lemmas(const Term& t) {
  std::multiset<std::string> out;
  for (const auto& c : constants(t)) out.insert(c.name());
  return out;
}

CCGTree leaf(const char* tok, const char* lemma, const char* cat, const char* pos = "NN", int idx = 0) {
  CCGTree t;
  t.token = tok;
  t.lemma = lemma;
  t.cat = parse_category(cat);
  t.pos = pos;
  t.index = idx;
  return t;
}

CCGTree node(CombRule r, const char* cat, std::vector<CCGTree> ch) {
  CCGTree t;
  t.rule = r;
  t.cat = parse_category(cat);
  t.children = std::move(ch);
  return t;
}

// Random corrected sentences over a small vocabulary.
struct SentenceGen {
  std::mt19937 rng;
  explicit SentenceGen(unsigned seed) : rng(seed) {}
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  std::string noun(int depth) {
    static const char* nouns[] = {"dog", "cat", "man", "pizza"};
    static const char* adjs[] = {"big", "red"};
    std::string n = std::string(nouns[pick(4)]) + ":n";
    if (depth > 0 && pick(3) == 0) return "(" + std::string(adjs[pick(2)]) + ":(n,n) " + noun(depth - 1) + ")";
    if (depth > 0 && pick(4) == 0) return "(which:(vp,(n,n)) " + vp(depth - 1) + " " + n + ")";
    return n;
  }
  std::string np(int depth) {
    static const char* dets[] = {"a", "every", "no", "some", "the"};
    if (pick(5) == 0) return "john:np";
    return "(" + std::string(dets[pick(5)]) + ":(n,np) " + noun(depth) + ")";
  }
  std::string vp(int depth) {
    static const char* iv[] = {"bark", "run", "sleep"};
    static const char* tv[] = {"eat", "cut", "chase"};
    if (depth > 0 && pick(2)) return "(" + std::string(tv[pick(3)]) + ":(np,vp) " + np(depth - 1) + ")";
    if (depth > 0 && pick(4) == 0) return "(not:(vp,vp) " + vp(depth - 1) + ")";
    return std::string(iv[pick(3)]) + ":vp";
  }
  Term sentence(int depth) { return parse_term(vp(depth) + " " + np(depth)); }
};

}  // namespace

TEST_CASE("directionality removal of the rinsing derivation gives the CCG term") {
  Term t = remove_directionality(rinse_tree());
  CHECK(t == golden("rinse_ccg_term.txt"));
  CHECK(t.str() == slurp("rinse_ccg_term.txt"));
  CHECK(type_of(t) == Type::s("dcl"));
  CHECK(t.arg().attrs().index == 0);
}

TEST_CASE("single leaf compiles to its constant") {
  Term t = remove_directionality(leaf("dogs", "dog", "N", "NNS", 0));
  CHECK(t == P("dog:n"));
  CHECK(t.attrs().token == "dogs");
  CHECK(t.attrs().pos == "NNS");
}

TEST_CASE("crossed composition yields a well-typed abstraction") {
  // "ate" (S\NP)/NP, "yesterday" (S\NP)\(S\NP); bx gives (S\NP)/NP.
  CCGTree bx = node(CombRule::kBx, "(S\\NP)/NP",
                    {leaf("ate", "eat", "(S\\NP)/NP", "VBD", 0), leaf("yesterday", "yesterday", "(S\\NP)\\(S\\NP)", "RB", 1)});
  Term t = remove_directionality(bx);
  CHECK(t == P("lam v:np. yesterday:(vp,vp) (eat:(np,vp) v)"));
  CHECK(type_of(t) == parse_type("(np,np,s)"));
  CCGTree full = node(CombRule::kFa, "S\\NP", {bx, leaf("pizza", "pizza", "NP", "NN", 2)});
  CHECK(remove_directionality(full) == P("yesterday:(vp,vp) (eat:(np,vp) pizza:np)"));
}

TEST_CASE("forward and backward composition") {
  CCGTree fc = node(CombRule::kFc, "S/NP", {leaf("f", "f", "S/PP"), leaf("g", "g", "PP/NP")});
  CHECK(remove_directionality(fc) == P("lam v:np. f:(pp,s) (g:(np,pp) v)"));
  CCGTree bc = node(CombRule::kBc, "S\\NP", {leaf("g", "g", "PP\\NP"), leaf("f", "f", "S\\PP")});
  CHECK(remove_directionality(bc) == P("lam v:np. f:(pp,s) (g:(np,pp) v)"));
}

TEST_CASE("conj nodes become and/or applications") {
  CCGTree co = node(CombRule::kConj, "(S[dcl]\\NP)\\(S[dcl]\\NP)",
                    {leaf("and", "and", "conj", "CC", 1), leaf("dances", "dance", "S[dcl]\\NP", "VBZ", 2)});
  CCGTree vp = node(CombRule::kBa, "S[dcl]\\NP", {leaf("sings", "sing", "S[dcl]\\NP", "VBZ", 0), co});
  CHECK(remove_directionality(vp) == P("and:(vp_dcl,vp_dcl,vp_dcl) dance:vp_dcl sing:vp_dcl"));
}

TEST_CASE("correction of the CCG term") {
  CorrectionStats stats;
  Term fixed = correct_term(golden("rinse_ccg_term.txt"), bundled_rewrite_rules(), &stats);
  CHECK(fixed == golden("rinse_corrected.txt"));
  CHECK(stats.per_rule["nobody"] == 1);
  CHECK(stats.per_rule["bare_noun"] == 1);
  // Inserted constants are flagged and inherit the surface position.
  Term pipeline = corrected_term(rinse_tree());
  CHECK(pipeline == golden("rinse_corrected.txt"));
  Term water_np = pipeline.fun().arg().arg().arg();
  CHECK(water_np.fun().attrs().inserted);
  CHECK(water_np.fun().attrs().index == 6);
  CHECK(pipeline.arg().fun().is_const("no"));
  CHECK(pipeline.arg().fun().attrs().index == 0);
}

TEST_CASE("correction leaves rule-free terms unchanged") {
  Term t = P("bark:vp (a:(n,np) dog:n)");
  CHECK(correct_term(t) == t);
  CHECK(correct_term(golden("rinse_corrected.txt")) == golden("rinse_corrected.txt"));
}

TEST_CASE("attributive modifier is pushed under a relative clause") {
  CHECK(correct_term(P("big:(n,n) (which:(vp,(n,n)) run:vp mouse:n)")) == P("which:(vp,(n,n)) run:vp (big:(n,n) mouse:n)"));
}

TEST_CASE("PP attaches to the noun") {
  CHECK(correct_term(P("in:(np,(np,np)) (a:(n,np) box:n) (every:(n,np) pug:n)")) ==
        P("every:(n,np) (in:(np,(n,n)) (a:(n,np) box:n) pug:n)"));
}

TEST_CASE("proper nouns, pronouns, determiners and multiwords") {
  CHECK(correct_term(P("[europe:n{ne=LOC}]:np")) == P("europe:np"));
  CHECK(correct_term(P("[john:n{pos=NNP}]:np")) == P("john:np"));
  CHECK(correct_term(P("run:vp everybody:np")) == P("run:vp (every:(n,np) person:n)"));
  CHECK(correct_term(P("run:vp [someone:n]:np")) == P("run:vp (a:(n,np) person:n)"));
  CHECK(correct_term(P("bark:vp (an:(n,np) dog:n)")) == P("bark:vp (a:(n,np) dog:n)"));
  CHECK(correct_term(P("bark:vp (each:(n,np) dog:n)")) == P("bark:vp (every:(n,np) dog:n)"));
  CHECK(correct_term(P("bark:vp (a:((n,np),(n,np)){idx=0} few:(n,np){idx=1} dog:n{idx=2})")) ==
        P("bark:vp (a_few:(n,np) dog:n)"));
  CHECK(correct_term(P("next:(pp,(np,np)){idx=1} (to:(np,pp){idx=2} (the:(n,np){idx=3} car:n{idx=4})) (a:(n,np){idx=0} dog:n)")) ==
        P("a:(n,np) (next_to:(np,(n,n)) (the:(n,np) car:n) dog:n)"));
  CHECK(correct_term(P("[bark:(np,s)]:(n,n) dog:n")) == P("which:((np,s),(n,n)) bark:(np,s) dog:n"));
}

TEST_CASE("an unexplained lexical rule is reported") {
  CHECK_THROWS_AS(correct_term(P("run:vp [with:pp]:np")), CorrectionIncomplete);
  try {
    correct_term(P("run:vp [with:pp]:np"));
  } catch (const CorrectionIncomplete& e) {
    CHECK(std::string(e.what()).find("[with:pp]:np") != std::string::npos);
  }
}

TEST_CASE("rewrite file errors") {
  CHECK_THROWS_AS(parse_rewrite_rules("rewrite x\nmatch ?A\ninto ?B\nend\n"), FormatError);
  CHECK_THROWS_AS(parse_rewrite_rules("rewrite x\nmatch ?A\n"), FormatError);
  CHECK_THROWS_AS(parse_rewrite_rules("rewrite x\nmatch ?A\nwhere colour(?A)\ninto ?A\nend\n"), FormatError);
  CHECK_THROWS_AS(parse_rewrite_rules("frobnicate\n"), FormatError);
  CHECK(parse_rewrite_rules("# nothing\n").empty());
}

TEST_CASE("correction terminates within a bounded number of applications and is idempotent") {
  SentenceGen g(17);
  const std::size_t nrules = bundled_rewrite_rules().size();
  for (int i = 0; i < 200; ++i) {
    Term t = g.sentence(3);
    CorrectionStats stats;
    Term c = correct_term(t, bundled_rewrite_rules(), &stats);
    CHECK(stats.applications <= nrules * t.size());
    CHECK(well_typed(c));
    CHECK(correct_term(c) == c);
  }
}

TEST_CASE("type raising the corrected term yields the published readings") {
  auto readings = type_raise(corrected_term(rinse_tree()), sig(), 4);
  REQUIRE(readings.size() >= 3);
  CHECK(readings[0] == golden("rinse_surface.txt"));
  CHECK(readings[1] == golden("rinse_inverse.txt"));
  CHECK(readings[2] == golden("rinse_water_over_steak.txt"));
  for (const auto& r : readings) CHECK(type_of(r) == Type::s("dcl"));
}

TEST_CASE("readings are distinct, well-typed and keep every constant") {
  auto readings = type_raise(golden("rinse_corrected.txt"), sig(), 8);
  CHECK(readings.size() >= 3);
  CHECK(readings.size() <= 8);
  auto expected = lemmas(golden("rinse_corrected.txt"));
  for (std::size_t i = 0; i < readings.size(); ++i) {
    CHECK(well_typed(readings[i]));
    CHECK(lemmas(readings[i]) == expected);
    for (std::size_t j = 0; j < i; ++j) CHECK(readings[i] != readings[j]);
  }

  SentenceGen g(99);
  for (int i = 0; i < 150; ++i) {
    Term t = correct_term(g.sentence(3));
    auto rs = type_raise(t, sig(), 8);
    REQUIRE(!rs.empty());
    for (std::size_t a = 0; a < rs.size(); ++a) {
      CHECK(type_of(rs[a]) == type_of(t));
      CHECK(lemmas(rs[a]) == lemmas(t));
      for (std::size_t b = 0; b < a; ++b) CHECK(rs[a] != rs[b]);
    }
  }
}

TEST_CASE("type raising edge cases") {
  Term plain = P("bark:vp john:np");
  auto one = type_raise(plain, sig(), 8);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == plain);

  auto two = type_raise(P("eat:(np,vp){idx=1} (a:(n,np){idx=2} pizza:n{idx=3}) (every:(n,np){idx=0} man:n{idx=1})"), sig(), 10);
  REQUIRE(two.size() == 2);
  CHECK(two[0] == P("every:q man:n (lam x:np. a:q pizza:n (lam y:np. eat:(np,vp) y x))"));
  CHECK(two[1] == P("a:q pizza:n (lam y:np. every:q man:n (eat:(np,vp) y))"));

  CHECK(type_raise(P("a:(n,np) dog:n"), sig(), 8).size() == 1);
  CHECK_THROWS_AS(type_raise(plain, sig(), 0), ConfigError);
}

TEST_CASE("quantifiers inside a restrictor scope locally or outward") {
  Term t = P("bark:vp (every:(n,np) (which:(vp,(n,n)) (chase:(np,vp) (a:(n,np) cat:n)) dog:n))");
  auto rs = type_raise(t, sig(), 8);
  REQUIRE(!rs.empty());
  CHECK(rs[0] == P("every:q (which:(vp,(n,n)) (lam x:np. a:q cat:n (lam y:np. chase:(np,vp) y x)) dog:n) bark:vp"));
  for (const auto& r : rs) CHECK(free_vars(r).empty());
}

TEST_CASE("generate_llfs composes the stages") {
  auto first = generate_llfs(rinse_tree(), sig(), LlfOptions{true, 8});
  REQUIRE(first.size() == 1);
  CHECK(first[0] == golden("rinse_surface.txt"));
  auto all = generate_llfs(rinse_tree(), sig(), LlfOptions{false, 8});
  CHECK(all.size() >= 3);
  for (const char* g : {"rinse_surface.txt", "rinse_water_over_steak.txt", "rinse_inverse.txt"}) CHECK(std::find(all.begin(), all.end(), golden(g)) != all.end());
  CHECK(generate_llfs(node(CombRule::kFa, "NP", {leaf("a", "a", "NP/N", "DT", 0), leaf("dog", "dog", "N", "NN", 1)}), sig())
            .size() == 1);
}

TEST_CASE("alignment of identical sentences") {
  Term p = P("bark:vp (a:(n,np) dog:n)");
  auto r = align(p, p, AlignMode::kWeak, sig());
  CHECK(r.premises[0] == r.hypothesis);
  CHECK(r.premises[0].is_const());
  CHECK(r.premises[0].type() == Type::s());
  auto none = align(p, p, AlignMode::kNone, sig());
  CHECK(none.premises[0] == p);
  CHECK(none.table.empty());
}

TEST_CASE("weak alignment skips indefinite NPs and strong alignment takes them") {
  Term p = P("eat:(np,vp) (a:(n,np) pizza:n) (a:(n,np) man:n)");
  Term h = P("cut:(np,vp) (a:(n,np) pizza:n) (a:(n,np) man:n)");
  auto weak = align(p, h, AlignMode::kWeak, sig());
  CHECK(weak.table.size() == 2);
  for (const auto& [k, v] : weak.table) CHECK(v.is_const());
  CHECK(weak.premises[0].str() == "eat:(np,vp) (a:(n,np) al1:n) (a:(n,np) al2:n)");
  auto strong = align(p, h, AlignMode::kStrong, sig());
  CHECK(strong.premises[0].str() == "eat:(np,vp) al1:np al2:np");
  CHECK(strong.hypothesis.str() == "cut:(np,vp) al1:np al2:np");
  CHECK(strong.table.at("al1") == P("a:(n,np) pizza:n"));
}

TEST_CASE("downward monotone positions are never aligned") {
  for (AlignMode m : {AlignMode::kWeak, AlignMode::kStrong}) {
    auto r = align(P("sleep:vp (no:(n,np) dog:n)"), P("snore:vp (no:(n,np) dog:n)"), m, sig());
    CHECK(r.table.empty());
    auto s = align(P("bark:vp (no:(n,np) dog:n)"), P("bark:vp (no:(n,np) cat:n)"), m, sig());
    CHECK(s.table.empty());
    auto e = align(P("bark:vp (every:(n,np) dog:n)"), P("run:vp (every:(n,np) dog:n)"), m, sig());
    CHECK(e.table.empty());
    auto n = align(P("not:(vp,vp) bark:vp john:np"), P("not:(vp,vp) bark:vp mary:np"), m, sig());
    CHECK(n.table.empty());
  }
}

TEST_CASE("several premises align against the progressively aligned hypothesis") {
  auto r = align({P("bark:vp john:np"), P("run:vp john:np")}, P("run:vp john:np"), AlignMode::kWeak, sig());
  REQUIRE(r.premises.size() == 2);
  CHECK(r.premises[0] == P("bark:vp al1:np"));
  CHECK(r.premises[1] == r.hypothesis);
}

TEST_CASE("alignment round-trips exactly") {
  SentenceGen g(2024);
  int aligned = 0;
  for (int i = 0; i < 300; ++i) {
    Term p = correct_term(g.sentence(2));
    Term h = correct_term(g.sentence(2));
    for (AlignMode m : {AlignMode::kNone, AlignMode::kWeak, AlignMode::kStrong}) {
      auto r = align(p, h, m, sig());
      CHECK(unalign(r.premises[0], r.table) == p);
      CHECK(unalign(r.hypothesis, r.table) == h);
      CHECK(well_typed(r.premises[0]));
      CHECK(well_typed(r.hypothesis));
      for (const auto& [name, sub] : r.table) CHECK(free_vars(sub).empty());
      aligned += static_cast<int>(r.table.size());
    }
  }
  CHECK(aligned > 100);
}
