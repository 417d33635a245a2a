#include <functional>
#include <sstream>

#include "json.hpp"

#include "natlog/errors.hpp"
#include "natlog/tableau.hpp"

namespace natlog {

using nlohmann::json;

bool ProofTree::Block::operator==(const Block& o) const {
  if (rule != o.rule || antecedents != o.antecedents || entity != o.entity) return false;
  if (entries.size() != o.entries.size() || children.size() != o.children.size()) return false;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const Entry &a = entries[i], &b = o.entries[i];
    if (a.id != b.id || a.closure != b.closure) return false;
    if (a.closure ? a.closes != b.closes : a.node != b.node) return false;
  }
  return true;
}

bool ProofTree::operator==(const ProofTree& o) const {
  if (blocks.empty() || o.blocks.empty()) return blocks.empty() == o.blocks.empty();
  std::function<bool(int, int)> same = [&](int x, int y) {
    const Block &a = blocks[static_cast<std::size_t>(x)], &b = o.blocks[static_cast<std::size_t>(y)];
    if (!(a == b)) return false;
    for (std::size_t i = 0; i < a.children.size(); ++i)
      if (!same(a.children[i], b.children[i])) return false;
    return true;
  };
  return same(0, 0);
}

std::size_t ProofTree::entry_count() const {
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.entries.size();
  return n;
}

std::size_t ProofTree::closure_count() const {
  std::size_t n = 0;
  for (const auto& b : blocks)
    for (const auto& e : b.entries) n += e.closure ? 1 : 0;
  return n;
}

RenderFormat parse_render_format(std::string_view s) {
  if (s == "text") return RenderFormat::kText;
  if (s == "json") return RenderFormat::kJson;
  if (s == "latex") return RenderFormat::kLatex;
  throw ConfigError("output format must be text, json or latex, got '" + std::string(s) + "'");
}

namespace {

std::string status(const ProofResult& r) {
  if (r.closed) return "closed";
  return r.limit_hit ? "open (limit hit)" : "open";
}

std::string label(const ProofTree::Block& b) {
  std::string s = b.rule + "(";
  for (std::size_t i = 0; i < b.antecedents.size(); ++i) s += (i ? "," : "") + std::to_string(b.antecedents[i]);
  if (!b.entity.empty()) s += "; " + b.entity;
  return s + ")";
}

void text_block(const ProofTree& t, int bi, int depth, std::ostringstream& out) {
  const auto& b = t.blocks[static_cast<std::size_t>(bi)];
  std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  if (depth > 0) out << pad << "+ " << label(b) << "\n";
  for (const auto& e : b.entries) {
    out << pad << "  " << e.id << "  ";
    if (e.closure) out << "x (" << e.closes.first << "," << e.closes.second << ")\n";
    else out << e.node.str() << "\n";
  }
  for (int c : b.children) text_block(t, c, depth + 1, out);
}

json node_json(const TableauNode& n) {
  json mods = json::array(), args = json::array();
  for (const auto& m : n.mods) mods.push_back(m.str(true));
  for (const auto& a : n.args) args.push_back(a.str(true));
  return json{{"mods", mods}, {"llf", n.llf.str(true)}, {"args", args}, {"sign", to_string(n.sign)}, {"display", n.str()}};
}

json block_json(const ProofTree& t, int bi) {
  const auto& b = t.blocks[static_cast<std::size_t>(bi)];
  json entries = json::array(), children = json::array();
  for (const auto& e : b.entries) {
    if (e.closure) entries.push_back(json{{"id", e.id}, {"closure", {e.closes.first, e.closes.second}}});
    else entries.push_back(json{{"id", e.id}, {"node", node_json(e.node)}});
  }
  for (int c : b.children) children.push_back(block_json(t, c));
  return json{{"rule", b.rule}, {"antecedents", b.antecedents}, {"entity", b.entity}, {"entries", entries}, {"children", children}};
}

std::string latex_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '_': out += "\\_"; break;
      case '&': out += "\\&"; break;
      case '%': out += "\\%"; break;
      case '#': out += "\\#"; break;
      case '$': out += "\\$"; break;
      case '{': out += "\\{"; break;
      case '}': out += "\\}"; break;
      case '^': out += "\\^{}"; break;
      case '~': out += "\\~{}"; break;
      case '\\': out += "\\textbackslash{}"; break;
      default: out += c;
    }
  }
  return out;
}

void latex_block(const ProofTree& t, int bi, int depth, std::ostringstream& out) {
  const auto& b = t.blocks[static_cast<std::size_t>(bi)];
  std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  out << pad << "[{";
  for (std::size_t i = 0; i < b.entries.size(); ++i) {
    const auto& e = b.entries[i];
    if (i) out << "\\\\";
    out << e.id << "~";
    if (e.closure) out << "$\\times$";
    else out << "\\texttt{" << latex_escape(e.node.str()) << "}";
  }
  out << "}";
  if (depth > 0) out << ", edge label={node[midway,left,font=\\scriptsize]{" << latex_escape(label(b)) << "}}";
  out << "\n";
  for (int c : b.children) latex_block(t, c, depth + 1, out);
  out << pad << "]\n";
}

}  // namespace

std::string render_tree(const ProofResult& r, RenderFormat format) {
  if (!r.tree) throw NoTreeRecorded("proof tree recording was disabled");
  const ProofTree& t = *r.tree;
  bool empty = t.blocks.empty() || (t.blocks[0].entries.empty() && t.blocks[0].children.empty());
  std::ostringstream out;
  switch (format) {
    case RenderFormat::kText:
      out << "tableau " << status(r) << ", " << r.rule_applications << " rule applications\n";
      if (!empty) text_block(t, 0, 0, out);
      break;
    case RenderFormat::kJson: {
      json closures = json::array();
      for (const auto& [a, b] : r.closures) closures.push_back({a, b});
      json doc{{"closed", r.closed}, {"rule_applications", r.rule_applications}, {"limit_hit", r.limit_hit}, {"closures", closures}};
      doc["tree"] = empty ? json(nullptr) : block_json(t, 0);
      out << doc.dump(1) << "\n";
      break;
    }
    case RenderFormat::kLatex:
      out << "% tableau " << status(r) << ", " << r.rule_applications << " rule applications\n";
      if (!empty) {
        out << "\\begin{forest}\nfor tree={align=center, parent anchor=south, child anchor=north}\n";
        latex_block(t, 0, 0, out);
        out << "\\end{forest}\n";
      }
      break;
  }
  return out.str();
}

namespace {

TableauNode node_from_json(const json& j) {
  TableauNode n;
  for (const auto& m : j.at("mods")) n.mods.push_back(parse_term(m.get<std::string>()));
  n.llf = parse_term(j.at("llf").get<std::string>());
  for (const auto& a : j.at("args")) n.args.push_back(parse_term(a.get<std::string>()));
  std::string s = j.at("sign").get<std::string>();
  if (s != "T" && s != "F") throw FormatError("bad sign '" + s + "'");
  n.sign = s == "T" ? Sign::kT : Sign::kF;
  return n;
}

int block_from_json(const json& j, ProofTree& t) {
  int idx = static_cast<int>(t.blocks.size());
  t.blocks.emplace_back();
  ProofTree::Block b;
  b.rule = j.at("rule").get<std::string>();
  b.antecedents = j.at("antecedents").get<std::vector<int>>();
  b.entity = j.at("entity").get<std::string>();
  for (const auto& e : j.at("entries")) {
    ProofTree::Entry entry;
    entry.id = e.at("id").get<int>();
    if (e.contains("closure")) {
      entry.closure = true;
      entry.closes = {e["closure"].at(0).get<int>(), e["closure"].at(1).get<int>()};
    } else {
      entry.node = node_from_json(e.at("node"));
    }
    b.entries.push_back(entry);
  }
  for (const auto& c : j.at("children")) b.children.push_back(block_from_json(c, t));
  t.blocks[static_cast<std::size_t>(idx)] = std::move(b);
  return idx;
}

}  // namespace

ProofResult parse_tree_json(std::string_view text) {
  try {
    json doc = json::parse(text);
    ProofResult r;
    r.closed = doc.at("closed").get<bool>();
    r.rule_applications = doc.at("rule_applications").get<int>();
    r.limit_hit = doc.at("limit_hit").get<bool>();
    for (const auto& c : doc.at("closures")) r.closures.emplace_back(c.at(0).get<int>(), c.at(1).get<int>());
    ProofTree t;
    if (doc.at("tree").is_null()) t.blocks.emplace_back();
    else block_from_json(doc["tree"], t);
    r.tree = std::move(t);
    return r;
  } catch (const json::exception& e) {
    throw FormatError(std::string("proof tree json: ") + e.what());
  }
}

}  // namespace natlog
