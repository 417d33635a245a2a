#include "natlog/type.hpp"

#include <cctype>
#include <vector>

#include "natlog/errors.hpp"

namespace natlog {

struct Type::Rep {
  Kind kind;
  std::string name;
  std::string feature;
  Type arg;
  Type result;
};

namespace {

bool known_atom(std::string_view name) {
  return name == "e" || name == "t" || name == "n" || name == "np" || name == "s" || name == "pp";
}

}  // namespace

Type Type::atomic(std::string name, std::string feature) {
  if (!known_atom(name)) throw FormatError("unknown atomic type '" + name + "'");
  if (!feature.empty() && name != "s") throw FormatError("only s carries a feature, got '" + name + "_" + feature + "'");
  return Type(std::make_shared<const Rep>(Rep{Kind::kAtomic, std::move(name), std::move(feature), {}, {}}));
}

Type Type::fun(Type arg, Type result) {
  if (arg.is_null() || result.is_null()) throw FormatError("function type over a null type");
  return Type(std::make_shared<const Rep>(Rep{Kind::kFun, {}, {}, std::move(arg), std::move(result)}));
}

Type Type::vp(std::string feature) { return fun(np(), s(std::move(feature))); }

Type Type::q(std::string feature) { return fun(n(), fun(vp(feature), s(feature))); }

Type::Kind Type::kind() const { return rep_->kind; }

bool Type::is_atomic(std::string_view name) const { return is_atomic() && rep_->name == name; }

const std::string& Type::name() const { return rep_->name; }
const std::string& Type::feature() const { return rep_->feature; }
const Type& Type::arg() const { return rep_->arg; }
const Type& Type::result() const { return rep_->result; }

int Type::arity() const {
  int k = 0;
  for (const Type* t = this; t->is_fun(); t = &t->result()) ++k;
  return k;
}

bool Type::operator==(const Type& o) const {
  if (rep_ == o.rep_) return true;
  if (is_null() || o.is_null()) return false;
  if (rep_->kind != o.rep_->kind) return false;
  if (rep_->kind == Kind::kAtomic) return rep_->name == o.rep_->name && rep_->feature == o.rep_->feature;
  return rep_->arg == o.rep_->arg && rep_->result == o.rep_->result;
}

namespace {

// Recognizes vp_f and q_f shapes for printing.
bool as_vp(const Type& t, std::string* feature) {
  if (!t.is_fun() || !t.arg().is_atomic("np") || !t.result().is_atomic("s")) return false;
  *feature = t.result().feature();
  return true;
}

bool as_q(const Type& t, std::string* feature) {
  if (!t.is_fun() || !t.arg().is_atomic("n") || !t.result().is_fun()) return false;
  std::string f;
  if (!as_vp(t.result().arg(), &f)) return false;
  const Type& r = t.result().result();
  if (!r.is_atomic("s") || r.feature() != f) return false;
  *feature = f;
  return true;
}

std::string with_feature(const std::string& base, const std::string& f) { return f.empty() ? base : base + "_" + f; }

}  // namespace

std::string Type::str() const {
  if (is_null()) return "?";
  if (is_atomic()) return with_feature(name(), feature());
  std::string f;
  if (as_vp(*this, &f)) return with_feature("vp", f);
  if (as_q(*this, &f)) return with_feature("q", f);
  std::string out = "(" + arg().str();
  const Type* r = &result();
  while (r->is_fun() && !as_vp(*r, &f) && !as_q(*r, &f)) {
    out += "," + r->arg().str();
    r = &r->result();
  }
  return out + "," + r->str() + ")";
}

bool subtype(const Type& a, const Type& b) {
  if (a.is_null() || b.is_null()) return false;
  if (a == b) return true;
  if (a.is_atomic() && b.is_atomic()) {
    if (a.name() == "e" && b.name() == "np") return true;
    if (a.name() == "s" && b.name() == "s") return b.feature().empty();
    return false;
  }
  if (a.is_fun() && b.is_fun()) return subtype(b.arg(), a.arg()) && subtype(a.result(), b.result());
  return false;
}

Type erase_features(const Type& t) {
  if (t.is_null()) return t;
  if (t.is_atomic()) return t.feature().empty() ? t : Type::atomic(t.name());
  return Type::fun(erase_features(t.arg()), erase_features(t.result()));
}

namespace {

class TypeParser {
 public:
  explicit TypeParser(std::string_view s) : s_(s) {}

  Type parse_all() {
    Type t = parse();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing input");
    return t;
  }

 private:
  Type parse() {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == '(') {
      ++pos_;
      std::vector<Type> parts{parse()};
      skip_ws();
      while (pos_ < s_.size() && s_[pos_] == ',') {
        ++pos_;
        parts.push_back(parse());
        skip_ws();
      }
      if (pos_ >= s_.size() || s_[pos_] != ')') fail("expected ')'");
      ++pos_;
      if (parts.size() == 1) return parts[0];
      Type t = parts.back();
      for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it) t = Type::fun(*it, t);
      return t;
    }
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    if (start == pos_) fail("expected a type");
    std::string word(s_.substr(start, pos_ - start));
    std::string base = word, feature;
    if (auto u = word.find('_'); u != std::string::npos) {
      base = word.substr(0, u);
      feature = word.substr(u + 1);
      if (feature.empty()) fail("empty feature");
    }
    try {
      if (base == "vp") return Type::vp(feature);
      if (base == "q") return Type::q(feature);
      return Type::atomic(base, feature);
    } catch (const FormatError& e) {
      throw ParseError(std::string(e.what()) + " in type '" + std::string(s_) + "'");
    }
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(msg + " in type '" + std::string(s_) + "' at offset " + std::to_string(pos_));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Type parse_type(std::string_view text) { return TypeParser(text).parse_all(); }

}  // namespace natlog
