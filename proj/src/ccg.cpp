#include "natlog/ccg.hpp"

#include <cctype>

#include "json.hpp"
#include "natlog/errors.hpp"

namespace natlog {

using json = nlohmann::json;

struct Category::Rep {
  bool slash;
  std::string name;
  std::string feature;
  Dir dir;
  Category result;
  Category arg;
};

Category Category::atom(std::string name, std::string feature) {
  return Category(std::make_shared<const Rep>(Rep{false, std::move(name), std::move(feature), Dir::kForward, {}, {}}));
}

Category Category::slash(Dir dir, Category result, Category arg) {
  return Category(std::make_shared<const Rep>(Rep{true, {}, {}, dir, std::move(result), std::move(arg)}));
}

bool Category::is_slash() const { return rep_ && rep_->slash; }
bool Category::is_atom(std::string_view name) const { return rep_ && !rep_->slash && rep_->name == name; }
Category::Dir Category::dir() const { return rep_->dir; }
const std::string& Category::name() const { return rep_->name; }
const std::string& Category::feature() const { return rep_->feature; }
const Category& Category::result() const { return rep_->result; }
const Category& Category::arg() const { return rep_->arg; }

bool Category::operator==(const Category& o) const {
  if (rep_ == o.rep_) return true;
  if (!rep_ || !o.rep_ || rep_->slash != o.rep_->slash) return false;
  if (!rep_->slash) return rep_->name == o.rep_->name && rep_->feature == o.rep_->feature;
  return rep_->dir == o.rep_->dir && rep_->result == o.rep_->result && rep_->arg == o.rep_->arg;
}

std::string Category::str() const {
  if (!rep_) return "?";
  if (!rep_->slash) return rep_->feature.empty() ? rep_->name : rep_->name + "[" + rep_->feature + "]";
  auto wrap = [](const Category& c) { return c.is_slash() ? "(" + c.str() + ")" : c.str(); };
  // Slashes associate to the left, so a slash result needs no parentheses.
  std::string res = rep_->result.str();
  return res + (rep_->dir == Dir::kForward ? "/" : "\\") + wrap(rep_->arg);
}

namespace {

class CategoryParser {
 public:
  explicit CategoryParser(std::string_view s) : s_(s) {}

  Category parse_all() {
    Category c = parse();
    if (pos_ != s_.size()) fail("trailing input");
    return c;
  }

 private:
  Category parse() {
    Category c = primary();
    while (pos_ < s_.size() && (s_[pos_] == '/' || s_[pos_] == '\\')) {
      auto dir = s_[pos_] == '/' ? Category::Dir::kForward : Category::Dir::kBackward;
      ++pos_;
      c = Category::slash(dir, c, primary());
    }
    return c;
  }

  Category primary() {
    if (pos_ < s_.size() && s_[pos_] == '(') {
      ++pos_;
      Category c = parse();
      if (pos_ >= s_.size() || s_[pos_] != ')') fail("expected ')'");
      ++pos_;
      return c;
    }
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    std::string name(s_.substr(start, pos_ - start));
    if (name != "N" && name != "NP" && name != "S" && name != "PP" && name != "conj")
      fail("unknown category atom '" + name + "'");
    std::string feature;
    if (pos_ < s_.size() && s_[pos_] == '[') {
      auto close = s_.find(']', pos_);
      if (close == std::string_view::npos) fail("unterminated feature");
      feature = std::string(s_.substr(pos_ + 1, close - pos_ - 1));
      pos_ = close + 1;
    }
    // Only S features matter semantically; NP[nb] and friends are dropped.
    if (name != "S") feature.clear();
    return Category::atom(name, feature);
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " in category '" + std::string(s_) + "' at offset " + std::to_string(pos_));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

bool feature_unifies(const std::string& a, const std::string& b) {
  return a.empty() || b.empty() || a == "X" || b == "X" || a == b;
}

}  // namespace

Category parse_category(std::string_view text) { return CategoryParser(text).parse_all(); }

bool categories_compatible(const Category& a, const Category& b) {
  if (a.is_null() || b.is_null() || a.is_slash() != b.is_slash()) return false;
  if (!a.is_slash()) return a.name() == b.name() && feature_unifies(a.feature(), b.feature());
  return a.dir() == b.dir() && categories_compatible(a.result(), b.result()) && categories_compatible(a.arg(), b.arg());
}

Type category_to_type(const Category& c) {
  if (c.is_slash()) return Type::fun(category_to_type(c.arg()), category_to_type(c.result()));
  if (c.is_atom("N")) return Type::n();
  if (c.is_atom("NP")) return Type::np();
  if (c.is_atom("PP")) return Type::pp();
  if (c.is_atom("S")) return Type::s(c.feature() == "X" ? std::string() : c.feature());
  throw TypeError("category " + c.str() + " has no type");
}

std::string to_string(CombRule r) {
  switch (r) {
    case CombRule::kFa: return "fa";
    case CombRule::kBa: return "ba";
    case CombRule::kFc: return "fc";
    case CombRule::kBc: return "bc";
    case CombRule::kBx: return "bx";
    case CombRule::kLx: return "lx";
    case CombRule::kConj: return "conj";
  }
  return "?";
}

CombRule parse_comb_rule(std::string_view s) {
  if (s == "fa") return CombRule::kFa;
  if (s == "ba") return CombRule::kBa;
  if (s == "fc") return CombRule::kFc;
  if (s == "bc") return CombRule::kBc;
  if (s == "bx") return CombRule::kBx;
  if (s == "lx") return CombRule::kLx;
  if (s == "conj") return CombRule::kConj;
  throw ParseError("unknown combinatory rule '" + std::string(s) + "'");
}

std::size_t CCGTree::leaf_count() const {
  if (is_leaf()) return 1;
  std::size_t n = 0;
  for (const auto& c : children) n += c.leaf_count();
  return n;
}

bool CCGTree::operator==(const CCGTree& o) const {
  return cat == o.cat && token == o.token && lemma == o.lemma && pos == o.pos && ne == o.ne && index == o.index &&
         rule == o.rule && children == o.children;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

using Dir = Category::Dir;

std::string describe(const CCGTree& t) {
  if (t.is_leaf()) return "leaf '" + t.token + "' " + t.cat.str();
  return to_string(t.rule) + "[" + t.cat.str() + "]";
}

[[noreturn]] void invalid(const CCGTree& t, const std::string& why) {
  throw ValidationError("malformed node " + describe(t) + ": " + why);
}

bool is_slash(const Category& c, Dir d) { return c.is_slash() && c.dir() == d; }

void validate_node(const CCGTree& t) {
  if (t.cat.is_null()) invalid(t, "missing category");
  if (t.is_leaf()) {
    if (t.token.empty() || t.lemma.empty()) invalid(t, "leaves need a token and a lemma");
    return;
  }
  const auto& ch = t.children;
  auto need = [&](std::size_t n) {
    if (ch.size() != n) invalid(t, "expects " + std::to_string(n) + " children, got " + std::to_string(ch.size()));
  };
  auto same = [&](const Category& a, const Category& b, const char* what) {
    if (!categories_compatible(a, b)) invalid(t, std::string(what) + ": " + a.str() + " vs " + b.str());
  };
  switch (t.rule) {
    case CombRule::kFa:
      need(2);
      if (!is_slash(ch[0].cat, Dir::kForward)) invalid(t, "function child " + ch[0].cat.str() + " lacks a forward slash");
      same(ch[0].cat.arg(), ch[1].cat, "argument mismatch");
      same(ch[0].cat.result(), t.cat, "result mismatch");
      break;
    case CombRule::kBa:
      need(2);
      if (!is_slash(ch[1].cat, Dir::kBackward)) invalid(t, "function child " + ch[1].cat.str() + " lacks a backward slash");
      same(ch[1].cat.arg(), ch[0].cat, "argument mismatch");
      same(ch[1].cat.result(), t.cat, "result mismatch");
      break;
    case CombRule::kFc:  // X/Y Y/Z => X/Z
      need(2);
      if (!is_slash(ch[0].cat, Dir::kForward) || !is_slash(ch[1].cat, Dir::kForward) || !is_slash(t.cat, Dir::kForward))
        invalid(t, "forward composition needs forward slashes");
      same(ch[0].cat.arg(), ch[1].cat.result(), "composition mismatch");
      same(ch[0].cat.result(), t.cat.result(), "result mismatch");
      same(ch[1].cat.arg(), t.cat.arg(), "argument mismatch");
      break;
    case CombRule::kBc:  // Y\Z X\Y => X\Z
      need(2);
      if (!is_slash(ch[0].cat, Dir::kBackward) || !is_slash(ch[1].cat, Dir::kBackward) || !is_slash(t.cat, Dir::kBackward))
        invalid(t, "backward composition needs backward slashes");
      same(ch[1].cat.arg(), ch[0].cat.result(), "composition mismatch");
      same(ch[1].cat.result(), t.cat.result(), "result mismatch");
      same(ch[0].cat.arg(), t.cat.arg(), "argument mismatch");
      break;
    case CombRule::kBx:  // Y/Z X\Y => X/Z
      need(2);
      if (!is_slash(ch[0].cat, Dir::kForward) || !is_slash(ch[1].cat, Dir::kBackward) || !is_slash(t.cat, Dir::kForward))
        invalid(t, "backward crossed composition needs Y/Z X\\Y => X/Z");
      same(ch[1].cat.arg(), ch[0].cat.result(), "composition mismatch");
      same(ch[1].cat.result(), t.cat.result(), "result mismatch");
      same(ch[0].cat.arg(), t.cat.arg(), "argument mismatch");
      break;
    case CombRule::kLx:
      need(1);
      if (ch[0].cat == t.cat) invalid(t, "lexical rule does not change the category");
      break;
    case CombRule::kConj:  // conj X => X\X
      need(2);
      if (!ch[0].is_leaf() || !ch[0].cat.is_atom("conj")) invalid(t, "first child must be a conj leaf");
      if (!is_slash(t.cat, Dir::kBackward)) invalid(t, "conjunction node must be X\\X");
      same(t.cat.result(), t.cat.arg(), "conjunction node must be X\\X");
      same(t.cat.arg(), ch[1].cat, "conjunct mismatch");
      break;
  }
  for (const auto& c : ch) {
    if (c.cat.is_atom("conj") && !(t.rule == CombRule::kConj && &c == &ch[0])) invalid(c, "conj outside a conj node");
  }
}

}  // namespace

void validate(const CCGTree& tree) {
  validate_node(tree);
  for (const auto& c : tree.children) validate(c);
}

// ---------------------------------------------------------------------------
// JSON

namespace {

std::string get_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) throw ParseError(std::string("node field '") + key + "' must be a string");
  return it->get<std::string>();
}

CCGTree node_from_json(const json& j, int& next_index) {
  if (!j.is_object()) throw ParseError("node must be an object");
  CCGTree t;
  t.cat = parse_category(get_string(j, "cat"));
  if (j.contains("children")) {
    t.rule = parse_comb_rule(get_string(j, "rule"));
    const json& ch = j.at("children");
    if (!ch.is_array() || ch.empty()) throw ParseError("'children' must be a non-empty array");
    for (const auto& c : ch) t.children.push_back(node_from_json(c, next_index));
    return t;
  }
  t.token = get_string(j, "token");
  t.lemma = get_string(j, "lemma");
  t.pos = j.contains("pos") ? get_string(j, "pos") : std::string();
  if (auto it = j.find("ne"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw ParseError("node field 'ne' must be a string or null");
    t.ne = it->get<std::string>();
  }
  t.index = next_index++;
  return t;
}

json node_to_json(const CCGTree& t) {
  if (t.is_leaf()) {
    json j{{"token", t.token}, {"lemma", t.lemma}, {"cat", t.cat.str()}, {"pos", t.pos}};
    j["ne"] = t.ne ? json(*t.ne) : json(nullptr);
    return j;
  }
  json ch = json::array();
  for (const auto& c : t.children) ch.push_back(node_to_json(c));
  return json{{"rule", to_string(t.rule)}, {"cat", t.cat.str()}, {"children", ch}};
}

std::pair<std::size_t, std::size_t> line_col(std::string_view doc, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < doc.size(); ++i) {
    if (doc[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

std::vector<Sentence> parse_derivation(std::string_view document) {
  std::vector<Sentence> out;
  bool blank = true;
  for (char c : document)
    if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
  if (blank) return out;

  json doc;
  try {
    doc = json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    auto [line, col] = line_col(document, e.byte ? e.byte - 1 : 0);
    throw ParseError(std::string("malformed derivation JSON: ") + e.what(), line, col);
  }
  if (!doc.is_object() || !doc.contains("sentences") || !doc["sentences"].is_array())
    throw ParseError("derivation document needs a top-level \"sentences\" array");
  for (const auto& s : doc["sentences"]) {
    if (!s.is_object() || !s.contains("root")) throw ParseError("sentence entries need \"id\" and \"root\"");
    Sentence sent;
    sent.id = get_string(s, "id");
    int next = 0;
    try {
      sent.root = node_from_json(s.at("root"), next);
      validate(sent.root);
    } catch (const ValidationError& e) {
      throw ValidationError("sentence '" + sent.id + "': " + e.what());
    } catch (const ParseError& e) {
      throw ParseError("sentence '" + sent.id + "': " + e.what());
    }
    out.push_back(std::move(sent));
  }
  return out;
}

std::string serialize_derivation(const std::vector<Sentence>& sentences) {
  json arr = json::array();
  for (const auto& s : sentences) arr.push_back(json{{"id", s.id}, {"root", node_to_json(s.root)}});
  return json{{"sentences", arr}}.dump(1);
}

}  // namespace natlog
