#include "natlog/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <unordered_map>

#include "natlog/bundled.hpp"
#include "natlog/errors.hpp"

namespace natlog {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string strip_comment(std::string_view line) {
  auto h = line.find('#');
  return trim(h == std::string_view::npos ? line : line.substr(0, h));
}

bool valid_lemma(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' && c != '\'') return false;
  return true;
}

template <class F>
void for_each_line(std::string_view text, F&& f) {
  std::size_t line_no = 0, pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    std::string body = strip_comment(line);
    if (!body.empty()) f(body, line_no);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Signature

std::string to_string(Prop p) {
  switch (p) {
    case Prop::kUp: return "up";
    case Prop::kDw: return "dw";
    case Prop::kNon: return "non";
    case Prop::kInt: return "int";
    case Prop::kSub: return "sub";
    case Prop::kImpl: return "impl";
  }
  return "?";
}

Prop parse_prop(std::string_view s) {
  if (s == "up") return Prop::kUp;
  if (s == "dw") return Prop::kDw;
  if (s == "non" || s == "non-monotone") return Prop::kNon;
  if (s == "int" || s == "intersective") return Prop::kInt;
  if (s == "sub" || s == "subsective") return Prop::kSub;
  if (s == "impl" || s == "implicative") return Prop::kImpl;
  throw FormatError("unknown property '" + std::string(s) + "'");
}

bool SignatureEntry::has(std::size_t position, Prop p) const {
  return position < args.size() && args[position].count(p) > 0;
}

std::string SignatureEntry::str() const {
  std::string out = lemma + " : " + type.str() + " : [";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ",";
    bool first = true;
    for (Prop p : args[i]) {
      if (!first) out += "+";
      out += to_string(p);
      first = false;
    }
  }
  return out + "]";
}

Signature Signature::parse(std::string_view text) {
  Signature sig;
  for_each_line(text, [&](const std::string& line, std::size_t no) {
    auto fail = [&](const std::string& why) -> void {
      throw FormatError("signature line " + std::to_string(no) + ": " + why);
    };
    auto c1 = line.find(" : ");
    auto c2 = c1 == std::string::npos ? c1 : line.find(" : ", c1 + 3);
    if (c2 == std::string::npos) fail("expected 'lemma : type : [props]'");
    SignatureEntry e;
    e.lemma = trim(line.substr(0, c1));
    if (!valid_lemma(e.lemma)) fail("bad lemma '" + e.lemma + "'");
    try {
      e.type = parse_type(trim(line.substr(c1 + 3, c2 - c1 - 3)));
    } catch (const ParseError& err) {
      fail(err.what());
    }
    std::string props = trim(line.substr(c2 + 3));
    if (props.size() < 2 || props.front() != '[' || props.back() != ']') fail("properties must be bracketed");
    props = props.substr(1, props.size() - 2);
    if (!trim(props).empty()) {
      std::stringstream ss(props);
      std::string pos;
      while (std::getline(ss, pos, ',')) {
        std::set<Prop> set;
        std::stringstream ps(pos);
        std::string item;
        while (std::getline(ps, item, '+')) {
          try {
            set.insert(parse_prop(trim(item)));
          } catch (const FormatError& err) {
            fail(err.what());
          }
        }
        e.args.push_back(std::move(set));
      }
    }
    if (static_cast<int>(e.args.size()) > e.type.arity()) fail("more property sets than argument positions");
    sig.add(std::move(e));
  });
  return sig;
}

Signature Signature::bundled() { return parse(bundled::kSignature); }

void Signature::add(SignatureEntry e) { entries_.push_back(std::move(e)); }

std::optional<SignatureEntry> Signature::lookup(std::string_view lemma, const Type& type) const {
  const SignatureEntry* loose = nullptr;
  Type erased = type.is_null() ? Type() : erase_features(type);
  for (const auto& e : entries_) {
    if (e.lemma != lemma) continue;
    if (type.is_null()) return e;
    Type et = erase_features(e.type);
    if (et == erased) return e;
    if (!loose && subtype(erased, et)) loose = &e;
  }
  if (loose) return *loose;
  return std::nullopt;
}

bool Signature::is_quantifier(std::string_view lemma) const {
  static const Type q = Type::q();
  for (const auto& e : entries_)
    if (e.lemma == lemma && erase_features(e.type) == q) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Facts

bool Fact::operator==(const Fact& o) const {
  return rel == o.rel && a == o.a && sense_a == o.sense_a && b == o.b && sense_b == o.sense_b;
}

bool Fact::operator<(const Fact& o) const {
  return std::tie(rel, a, sense_a, b, sense_b) < std::tie(o.rel, o.a, o.sense_a, o.b, o.sense_b);
}

std::string Fact::str() const {
  const char* r = rel == Relation::kIsa ? "isa" : rel == Relation::kSim ? "sim" : "ant";
  return std::string(r) + "(" + a + "." + std::to_string(sense_a) + ", " + b + "." + std::to_string(sense_b) + ")";
}

Fact parse_fact(std::string_view text) {
  std::string s = trim(text);
  auto fail = [&](const std::string& why) -> Fact { throw FormatError("malformed fact '" + s + "': " + why); };
  auto open = s.find('(');
  if (open == std::string::npos || s.back() != ')') return fail("expected rel(a, b)");
  Fact f;
  std::string rel = trim(std::string_view(s).substr(0, open));
  if (rel == "isa") f.rel = Relation::kIsa;
  else if (rel == "sim") f.rel = Relation::kSim;
  else if (rel == "ant") f.rel = Relation::kAnt;
  else return fail("unknown relation '" + rel + "'");
  std::string inner = s.substr(open + 1, s.size() - open - 2);
  auto comma = inner.find(',');
  if (comma == std::string::npos || inner.find(',', comma + 1) != std::string::npos) return fail("expected two arguments");
  auto word = [&](std::string w, std::string& lemma, int& sense) {
    w = trim(w);
    auto dot = w.rfind('.');
    lemma = w.substr(0, dot);
    if (!valid_lemma(lemma)) fail("bad lemma '" + lemma + "'");
    if (dot == std::string::npos) return;
    std::string num = w.substr(dot + 1);
    if (num.empty() || num.size() > 6 || !std::all_of(num.begin(), num.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      fail("bad sense '" + num + "'");
    sense = std::stoi(num);
    if (sense < 1) fail("senses start at 1");
  };
  word(inner.substr(0, comma), f.a, f.sense_a);
  word(inner.substr(comma + 1), f.b, f.sense_b);
  return f;
}

// ---------------------------------------------------------------------------
// Knowledge base

namespace {

struct SenseKey {
  std::string lemma;
  int sense;
  bool operator==(const SenseKey& o) const { return sense == o.sense && lemma == o.lemma; }
};

struct SenseHash {
  std::size_t operator()(const SenseKey& k) const { return std::hash<std::string>()(k.lemma) * 31 + k.sense; }
};

bool in_cutoff(int sense, Cutoff c) { return !c || sense <= *c; }

}  // namespace

struct KnowledgeBase::Store {
  std::vector<Fact> facts;
  std::unordered_map<SenseKey, std::vector<SenseKey>, SenseHash> isa_up;

  // Memoized isa reachability per sense; filled on demand.
  mutable std::shared_mutex mu;
  mutable std::unordered_map<SenseKey, std::vector<SenseKey>, SenseHash> reach;

  void index() {
    for (const auto& f : facts)
      if (f.rel == Relation::kIsa) isa_up[{f.a, f.sense_a}].push_back({f.b, f.sense_b});
  }

  std::vector<SenseKey> reachable(const SenseKey& from) const {
    {
      std::shared_lock lock(mu);
      if (auto it = reach.find(from); it != reach.end()) return it->second;
    }
    std::vector<SenseKey> out, stack{from};
    std::unordered_map<SenseKey, bool, SenseHash> seen{{from, true}};
    while (!stack.empty()) {
      SenseKey k = stack.back();
      stack.pop_back();
      auto it = isa_up.find(k);
      if (it == isa_up.end()) continue;
      for (const auto& n : it->second) {
        if (seen.emplace(n, true).second) {
          out.push_back(n);
          stack.push_back(n);
        }
      }
    }
    std::unique_lock lock(mu);
    reach.emplace(from, out);
    return out;
  }
};

KnowledgeBase::KnowledgeBase() : store_(std::make_shared<Store>()) {}

KnowledgeBase KnowledgeBase::parse(std::string_view text) {
  auto store = std::make_shared<Store>();
  std::set<Fact> seen;
  for_each_line(text, [&](const std::string& line, std::size_t no) {
    Fact f;
    try {
      f = parse_fact(line);
    } catch (const FormatError& e) {
      throw FormatError("kb line " + std::to_string(no) + ": " + e.what());
    }
    if (seen.insert(f).second) store->facts.push_back(f);
  });
  store->index();
  return KnowledgeBase(store);
}

KnowledgeBase KnowledgeBase::bundled() { return parse(bundled::kKnowledgeBase); }

KnowledgeBase KnowledgeBase::add_fact(const Fact& f) const {
  if (!valid_lemma(f.a) || !valid_lemma(f.b) || f.sense_a < 1 || f.sense_b < 1)
    throw FormatError("malformed fact '" + f.str() + "'");
  if (std::find(store_->facts.begin(), store_->facts.end(), f) != store_->facts.end()) return *this;
  auto store = std::make_shared<Store>();
  store->facts = store_->facts;
  store->facts.push_back(f);
  store->index();
  return KnowledgeBase(store);
}

const std::vector<Fact>& KnowledgeBase::facts() const { return store_->facts; }

bool KnowledgeBase::subsumes(std::string_view a, std::string_view b, Cutoff cutoff) const {
  if (a == b) return true;
  for (const auto& f : store_->facts) {
    if (f.rel != Relation::kSim || !in_cutoff(f.sense_a, cutoff) || !in_cutoff(f.sense_b, cutoff)) continue;
    if ((f.a == a && f.b == b) || (f.a == b && f.b == a)) return true;
  }
  // Start from every in-cutoff sense of a that has outgoing isa edges.
  for (const auto& [key, ups] : store_->isa_up) {
    if (key.lemma != a || !in_cutoff(key.sense, cutoff)) continue;
    for (const auto& r : store_->reachable(key))
      if (r.lemma == b && in_cutoff(r.sense, cutoff)) return true;
  }
  return false;
}

bool KnowledgeBase::disjoint(std::string_view a, std::string_view b, Cutoff cutoff) const {
  for (const auto& f : store_->facts) {
    if (f.rel != Relation::kAnt || !in_cutoff(f.sense_a, cutoff) || !in_cutoff(f.sense_b, cutoff)) continue;
    if ((f.a == a && f.b == b) || (f.a == b && f.b == a)) return true;
  }
  return false;
}

}  // namespace natlog
