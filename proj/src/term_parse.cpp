#include <cctype>
#include <string>
#include <vector>

#include "natlog/errors.hpp"
#include "natlog/term.hpp"

namespace natlog {

namespace {

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '-' || c == '?' || c == '$' ||
         c == '&';
}

class TermParser {
 public:
  explicit TermParser(std::string_view s) : s_(s) {}

  Term parse_all() {
    Term t = parse_term();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return t;
  }

 private:
  Term parse_term() {
    skip_ws();
    if (peek_word("lam")) {
      pos_ += 3;
      std::string v = ident();
      expect(':');
      Type ty = type();
      expect('.');
      bound_.push_back({v, ty});
      Term body = parse_term();
      bound_.pop_back();
      return Term::lam(v, ty, body);
    }
    Term t = atom();
    for (;;) {
      skip_ws();
      if (pos_ >= s_.size() || s_[pos_] == ')' || s_[pos_] == ']') break;
      if (peek_word("lam")) {
        t = Term::app(t, parse_term());
        break;
      }
      t = Term::app(t, atom());
    }
    return t;
  }

  Term atom() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Term t = parse_term();
      expect(')');
      return t;
    }
    if (c == '[') {
      ++pos_;
      Term inner = parse_term();
      expect(']');
      expect(':');
      return Term::type_change(type(), inner);
    }
    std::string name = ident();
    if (pos_ < s_.size() && s_[pos_] == kRetypeSuffix) {
      ++pos_;
      return Term::var(name + kRetypeSuffix, type());
    }
    for (auto it = bound_.rbegin(); it != bound_.rend(); ++it) {
      if (it->first == name) return Term::var(name, it->second);
    }
    if (pos_ < s_.size() && s_[pos_] == ':' && pos_ + 1 < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_ + 1]))) {
      ++pos_;
      Type ty = type();
      if (name[0] == '?') return Term::var(name, ty);
      Attrs attrs;
      if (pos_ < s_.size() && s_[pos_] == '{') attrs = parse_attrs();
      return Term::constant(name, ty, attrs);
    }
    return Term::var(name);
  }

  Attrs parse_attrs() {
    Attrs a;
    ++pos_;
    while (true) {
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == '}') {
        ++pos_;
        break;
      }
      std::string key = ident();
      expect('=');
      std::size_t start = pos_;
      while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != '}') ++pos_;
      std::string val(s_.substr(start, pos_ - start));
      if (key == "pos") a.pos = val;
      else if (key == "ne") a.ne = val;
      else if (key == "tok") a.token = val;
      else if (key == "idx") a.index = std::stoi(val);
      else if (key == "ins") a.inserted = (val == "1" || val == "true");
      else fail("unknown attribute '" + key + "'");
      if (pos_ < s_.size() && s_[pos_] == ',') ++pos_;
    }
    return a;
  }

  Type type() {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ < s_.size() && s_[pos_] == '(') {
      int depth = 0;
      do {
        if (s_[pos_] == '(') ++depth;
        if (s_[pos_] == ')') --depth;
        ++pos_;
      } while (pos_ < s_.size() && depth > 0);
      if (depth) fail("unbalanced type");
    } else {
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    }
    if (start == pos_) fail("expected a type");
    return parse_type(s_.substr(start, pos_ - start));
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
    if (start == pos_) fail("expected an identifier");
    return std::string(s_.substr(start, pos_ - start));
  }

  bool peek_word(std::string_view w) const {
    if (s_.substr(pos_, w.size()) != w) return false;
    std::size_t e = pos_ + w.size();
    return e < s_.size() && std::isspace(static_cast<unsigned char>(s_[e]));
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " at offset " + std::to_string(pos_) + " in term '" + std::string(s_) + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::vector<std::pair<std::string, Type>> bound_;
};

}  // namespace

Term parse_term(std::string_view text) { return TermParser(text).parse_all(); }

}  // namespace natlog
