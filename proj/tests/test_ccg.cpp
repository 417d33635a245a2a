#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "natlog/ccg.hpp"
#include "natlog/errors.hpp"

using namespace natlog;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string rinse_doc() { return slurp(std::string(NATLOG_SOURCE_DIR) + "/data/golden/rinse_derivation.json"); }

// Random well-formed derivations built from fa/ba/fc/bc/bx/lx over atoms.
struct TreeGen {
  std::mt19937 rng;
  int leaves = 0;
  explicit TreeGen(unsigned seed) : rng(seed) {}
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  Category atom() {
    static const char* names[] = {"N", "NP", "S", "PP"};
    const char* n = names[pick(4)];
    return Category::atom(n, std::string(n) == "S" && pick(2) ? "dcl" : "");
  }

  CCGTree leaf(const Category& c) {
    CCGTree t;
    t.cat = c;
    t.token = "w" + std::to_string(leaves);
    t.lemma = t.token;
    t.pos = "NN";
    if (pick(3) == 0) t.ne = "PER";
    t.index = leaves++;
    return t;
  }

  CCGTree node(CombRule r, const Category& c, std::vector<CCGTree> ch) {
    CCGTree t;
    t.rule = r;
    t.cat = c;
    t.children = std::move(ch);
    return t;
  }

  CCGTree gen(const Category& c, int depth) {
    using D = Category::Dir;
    if (depth == 0) return leaf(c);
    switch (pick(5)) {
      case 0: {
        Category y = atom();
        auto f = gen(Category::slash(D::kForward, c, y), depth - 1);
        return node(CombRule::kFa, c, {f, gen(y, depth - 1)});
      }
      case 1: {
        Category y = atom();
        auto a = gen(y, depth - 1);
        return node(CombRule::kBa, c, {a, gen(Category::slash(D::kBackward, c, y), depth - 1)});
      }
      case 2:
        if (c.is_slash() && c.dir() == D::kForward) {
          Category y = atom();
          auto f = gen(Category::slash(D::kForward, c.result(), y), depth - 1);
          return node(CombRule::kFc, c, {f, gen(Category::slash(D::kForward, y, c.arg()), depth - 1)});
        }
        return leaf(c);
      case 3:
        if (!c.is_slash()) {
          Category src = c.is_atom("N") ? Category::atom("PP") : Category::atom("N");
          return node(CombRule::kLx, c, {gen(src, depth - 1)});
        }
        return leaf(c);
      default:
        return leaf(c);
    }
  }
};

void renumber(CCGTree& t, int& next) {
  if (t.is_leaf()) {
    t.index = next++;
    return;
  }
  for (auto& c : t.children) renumber(c, next);
}

}  // namespace

TEST_CASE("category parsing and printing") {
  Category c = parse_category("(S[dcl]\\NP)/NP");
  CHECK(c.is_slash());
  CHECK(c.dir() == Category::Dir::kForward);
  CHECK(c.result().str() == "S[dcl]\\NP");
  CHECK(c.str() == "S[dcl]\\NP/NP");
  CHECK(parse_category(c.str()) == c);
  CHECK(parse_category("NP[nb]/N") == parse_category("NP/N"));
  CHECK(parse_category("S\\NP/(S\\NP)").arg().is_slash());
  CHECK_THROWS_AS(parse_category("(S\\NP"), ParseError);
  CHECK_THROWS_AS(parse_category("Q/N"), ParseError);
}

TEST_CASE("category_to_type") {
  CHECK(category_to_type(parse_category("(S[dcl]\\NP)/NP")) == parse_type("(np,(np,s_dcl))"));
  CHECK(category_to_type(parse_category("N")) == Type::n());
  CHECK(category_to_type(parse_category("((S[ng]\\NP)/PP)/NP")) == parse_type("(np,pp,vp_ng)"));
  CHECK_THROWS_AS(category_to_type(parse_category("conj")), TypeError);
}

TEST_CASE("category_to_type erases direction") {
  TreeGen g(3);
  for (int i = 0; i < 200; ++i) {
    Category x = g.atom(), y = g.atom();
    Category inner = g.pick(2) ? Category::slash(Category::Dir::kForward, x, y) : x;
    CHECK(category_to_type(Category::slash(Category::Dir::kForward, inner, y)) ==
          category_to_type(Category::slash(Category::Dir::kBackward, inner, y)));
  }
}

TEST_CASE("the rinsing derivation parses to a 7-leaf S[dcl] tree") {
  auto sents = parse_derivation(rinse_doc());
  REQUIRE(sents.size() == 1);
  const CCGTree& root = sents[0].root;
  CHECK(root.cat.str() == "S[dcl]");
  CHECK(root.leaf_count() == 7);
  CHECK(root.rule == CombRule::kBa);
  CHECK(root.children[0].token == "nobody");
  CHECK(root.children[0].index == 0);
}

TEST_CASE("empty document") {
  CHECK(parse_derivation("").empty());
  CHECK(parse_derivation("  \n").empty());
  CHECK(parse_derivation("{\"sentences\": []}").empty());
}

TEST_CASE("fa over a function child without a forward slash is rejected") {
  const char* doc = R"({"sentences":[{"id":"x","root":{"rule":"fa","cat":"S","children":[
      {"token":"dogs","lemma":"dog","cat":"NP","pos":"NNS","ne":null},
      {"token":"bark","lemma":"bark","cat":"S\\NP","pos":"VBP","ne":null}]}}]})";
  CHECK_THROWS_AS(parse_derivation(doc), ValidationError);
  try {
    parse_derivation(doc);
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("fa[S]") != std::string::npos);
  }
}

TEST_CASE("malformed JSON reports line and column") {
  try {
    parse_derivation("{\"sentences\": [\n  {\"id\": }\n]}");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
  CHECK_THROWS_AS(parse_derivation("[1,2]"), ParseError);
  CHECK_THROWS_AS(parse_derivation(R"({"sentences":[{"id":"x","root":{"cat":"N","lemma":"dog"}}]})"), ParseError);
  CHECK_THROWS_AS(parse_derivation(R"({"sentences":[{"id":"x","root":{"cat":"N","token":"","lemma":"dog"}}]})"),
                  ValidationError);
}

TEST_CASE("other rules validate their categories") {
  auto esc = [](std::string s) {
    for (std::size_t i = s.find('\\'); i != std::string::npos; i = s.find('\\', i + 2)) s.insert(i, 1, '\\');
    return s;
  };
  auto mk = [&](const char* rule, const char* cat0, const char* c10, const char* c20) {
    std::string cat = esc(cat0), c1 = esc(c10), c2s = c20 ? esc(c20) : std::string();
    const char* c2 = c20 ? c2s.c_str() : nullptr;
    std::string doc = std::string(R"({"sentences":[{"id":"x","root":{"rule":")") + rule + R"(","cat":")" + cat +
                      R"(","children":[{"token":"a","lemma":"a","cat":")" + c1 + R"(","pos":"X","ne":null})";
    if (c2) doc += std::string(R"(,{"token":"b","lemma":"b","cat":")") + c2 + R"(","pos":"X","ne":null})";
    return doc + "]}}]}";
  };
  CHECK_NOTHROW(parse_derivation(mk("fc", "S/PP", "S/NP", "NP/PP")));
  CHECK_THROWS_AS(parse_derivation(mk("fc", "S/PP", "S/NP", "N/PP")), ValidationError);
  CHECK_NOTHROW(parse_derivation(mk("bc", "S\\PP", "NP\\PP", "S\\NP")));
  CHECK_NOTHROW(parse_derivation(mk("bx", "S/PP", "NP/PP", "S\\NP")));
  CHECK_THROWS_AS(parse_derivation(mk("bx", "S/PP", "NP\\PP", "S\\NP")), ValidationError);
  CHECK_NOTHROW(parse_derivation(mk("lx", "NP", "N", nullptr)));
  CHECK_THROWS_AS(parse_derivation(mk("lx", "NP", "NP", nullptr)), ValidationError);
  CHECK_THROWS_AS(parse_derivation(mk("ba", "S", "NP", nullptr)), ValidationError);
  CHECK_NOTHROW(parse_derivation(mk("conj", "NP\\NP", "conj", "NP")));
  CHECK_THROWS_AS(parse_derivation(mk("conj", "NP\\NP", "N", "NP")), ValidationError);
  CHECK_NOTHROW(parse_derivation(mk("ba", "S[dcl]", "NP", "S[X]\\NP")));
}

TEST_CASE("serialize then parse round-trips") {
  auto sents = parse_derivation(rinse_doc());
  CHECK(parse_derivation(serialize_derivation(sents))[0].root == sents[0].root);

  TreeGen g(11);
  for (int i = 0; i < 200; ++i) {
    g.leaves = 0;
    Sentence s{"s" + std::to_string(i), g.gen(Category::atom("S", "dcl"), 4)};
    int next = 0;
    renumber(s.root, next);
    REQUIRE_NOTHROW(validate(s.root));
    auto back = parse_derivation(serialize_derivation({s}));
    REQUIRE(back.size() == 1);
    CHECK(back[0].id == s.id);
    CHECK(back[0].root == s.root);
  }
}
