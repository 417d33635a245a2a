#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "natlog/ccg.hpp"
#include "natlog/classifier.hpp"
#include "natlog/config.hpp"
#include "natlog/errors.hpp"
#include "natlog/llfgen.hpp"
#include "natlog/tableau.hpp"

using namespace natlog;

namespace {

constexpr int kOk = 0;
constexpr int kMismatch = 1;
constexpr int kUsage = 2;

// Values given on the command line; unset ones fall back to the config file.
struct Overrides {
  std::optional<int> ral, scope_cap, parallel, sense_cutoff;
  std::optional<std::string> effcr, align, signature, rules, format;
  std::vector<std::string> kb;
  bool thE = false, all_int = false, the = false, a2the = false, s2the = false, derivable = false;
  bool no_record_tree = false, all_readings = false;
  std::string config;
};

Config merge(const Overrides& o) {
  Config c;
  std::string path = o.config;
  if (path.empty())
    if (const char* env = std::getenv("NATLOG_CONFIG")) path = env;
  if (!path.empty()) c = load_config(path);
  if (o.ral) c.ral = *o.ral;
  if (o.scope_cap) c.scope_cap = *o.scope_cap;
  if (o.parallel) c.parallel = *o.parallel;
  if (o.sense_cutoff) c.sense_cutoff = *o.sense_cutoff;
  if (o.effcr) c.effcr = *o.effcr;
  if (o.align) c.align = parse_align_mode(*o.align);
  if (o.signature) c.signature_path = *o.signature;
  if (o.rules) c.rules_path = *o.rules;
  if (o.format) c.output = parse_render_format(*o.format);
  if (!o.kb.empty()) c.kb_paths = o.kb;
  c.flags.thE = c.flags.thE || o.thE;
  c.flags.all_int = c.flags.all_int || o.all_int;
  c.flags.the = c.flags.the || o.the;
  c.flags.a2the = c.flags.a2the || o.a2the;
  c.flags.s2the = c.flags.s2the || o.s2the;
  c.flags.derivable = c.flags.derivable || o.derivable;
  if (o.no_record_tree) c.record_tree = false;
  c.all_readings = c.all_readings || o.all_readings;
  c.validate();
  return c;
}

int cmd_llf(const Config& cfg, const std::string& path, bool first) {
  if (cfg.output == RenderFormat::kLatex) throw ConfigError("llf output is text or json");
  Resources res = load_resources(cfg);
  std::vector<Sentence> sentences = parse_derivation(read_file(path));
  LlfOptions opts{first, cfg.scope_cap};
  for (const auto& s : sentences) {
    std::vector<Term> rs = generate_llfs(s.root, res.sig, opts);
    if (cfg.output == RenderFormat::kJson) {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& r : rs) arr.push_back(r.str(true));
      std::cout << nlohmann::json{{"id", s.id}, {"readings", arr}}.dump() << "\n";
    } else {
      std::cout << "# " << s.id << "\n";
      for (const auto& r : rs) std::cout << r.str(true) << "\n";
    }
  }
  return kOk;
}

std::vector<Problem> load_problems(const std::string& problems, const std::string& derivations) {
  std::vector<Sentence> sentences;
  if (!derivations.empty()) sentences = parse_derivation(read_file(derivations));
  return parse_problems(read_file(problems), sentences);
}

int cmd_classify(const Config& cfg, const std::string& problems, const std::string& derivations, bool strict,
                 bool timing) {
  Resources res = load_resources(cfg);
  std::vector<Problem> ps = load_problems(problems, derivations);
  ClassifierConfig cc = cfg.classifier();
  cc.prover.record_tree = false;
  std::vector<BatchItem> items = classify_batch(ps, cc, res.context(), cfg.parallel);
  bool any_gold = false;
  for (const auto& it : items) {
    std::cout << batch_item_json(it, timing) << "\n";
    any_gold = any_gold || it.gold.has_value();
  }
  if (any_gold) std::cout << batch_summary_json(items) << "\n";
  return strict && gold_mismatches(items) > 0 ? kMismatch : kOk;
}

int cmd_prove(const Config& cfg, const std::string& problems, const std::string& derivations, const std::string& id,
              const std::string& which, const std::vector<std::string>& nodes) {
  if (!cfg.record_tree) throw NoTreeRecorded("prove needs tree recording; drop --no-record-tree");
  Resources res = load_resources(cfg);
  ClassifierConfig cc = cfg.classifier();
  ProofResult result;
  if (!nodes.empty()) {
    std::vector<TableauNode> initial;
    for (const auto& n : nodes) initial.push_back(parse_node(n));
    result = prove(initial, cc.prover, res.context());
  } else {
    if (problems.empty()) throw ConfigError("prove needs a problem file or --node");
    std::vector<Problem> ps = load_problems(problems, derivations);
    const Problem* p = nullptr;
    for (const auto& q : ps)
      if (id.empty() || q.id == id) {
        p = &q;
        break;
      }
    if (!p) throw ConfigError(id.empty() ? "problem file is empty" : "no problem with id '" + id + "'");
    Judgment j = classify(*p, cc, res.context());
    bool contra = which == "contra" || (which == "auto" && j.label == Label::kContradiction);
    result = contra ? j.contra : j.entail;
  }
  std::cout << render_tree(result, cfg.output);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Natural-language tableau prover: LLF generation, proofs and RTE classification"};
  app.require_subcommand(1);
  app.fallthrough();
  Overrides o;
  app.add_option("--config", o.config, "JSON config file (default: $NATLOG_CONFIG)");
  app.add_option("--ral", o.ral, "Rule application limit per tableau [default: 400]");
  app.add_option("--effcr", o.effcr, "Efficiency criterion, a permutation of ebpc [default: ebpc]");
  app.add_option("--align", o.align, "Alignment: none, weak or strong [default: none]");
  app.add_flag("--thE", o.thE, "Allow the existential rule on false definite NPs [default: off]");
  app.add_flag("--all-int", o.all_int, "Treat unknown noun modifiers as intersective [default: off]");
  app.add_flag("--the", o.the, "Inserted indefinites become definite [default: off]");
  app.add_flag("--a2the", o.a2the, "Surface indefinites become definite [default: off]");
  app.add_flag("--s2the", o.s2the, "Indefinites over plural nouns become definite [default: off]");
  app.add_flag("--derivable", o.derivable, "Enable derivable shortcut rules [default: off]");
  app.add_option("--parallel", o.parallel, "Worker threads for classify [default: 1]");
  app.add_option("--kb", o.kb, "Knowledge base file, repeatable (default: bundled)");
  app.add_option("--signature", o.signature, "Signature file (default: bundled)");
  app.add_option("--rules", o.rules, "Rule inventory file (default: bundled)");
  app.add_option("--scope-cap", o.scope_cap, "Maximum scope readings per sentence [default: 8]");
  app.add_option("--sense-cutoff", o.sense_cutoff, "Ignore word senses above this index [default: all]");
  app.add_option("--format", o.format, "Output format: text, json or latex [default: text]");
  app.add_flag("--no-record-tree", o.no_record_tree, "Do not record proof trees");
  app.add_flag("--all-readings", o.all_readings, "Try scope readings in order until a non-neutral verdict");

  std::string deriv_path, problems_path, derivations, id, which = "auto";
  bool first = false, strict = false, no_timing = false;
  std::vector<std::string> nodes;

  auto* llf = app.add_subcommand("llf", "Print the LLF readings of each sentence in a derivation file");
  llf->add_option("derivations", deriv_path, "Derivation JSON file")->required();
  llf->add_flag("--first", first, "Only the surface-scope reading");

  auto* cls = app.add_subcommand("classify", "Classify problems; one JSON line per problem");
  cls->add_option("problems", problems_path, "Problem JSON file")->required();
  cls->add_option("-d,--derivations", derivations, "Derivation JSON file with the referenced sentences");
  cls->add_flag("--strict", strict, "Exit 1 when a gold label disagrees");
  cls->add_flag("--no-timing", no_timing, "Omit the ms field");

  auto* prv = app.add_subcommand("prove", "Render the tableau of one problem or of explicit nodes");
  prv->add_option("problems", problems_path, "Problem JSON file");
  prv->add_option("-d,--derivations", derivations, "Derivation JSON file");
  prv->add_option("--id", id, "Problem id (default: the first problem)");
  prv->add_option("--tableau", which, "entail, contra or auto (the closed one)")
      ->check(CLI::IsMember({"entail", "contra", "auto"}))
      ->capture_default_str();
  prv->add_option("--node", nodes, "Initial node 'llf : args : sign', repeatable");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    Config cfg = merge(o);
    if (*llf) return cmd_llf(cfg, deriv_path, first);
    if (*cls) return cmd_classify(cfg, problems_path, derivations, strict, !no_timing);
    return cmd_prove(cfg, problems_path, derivations, id, which, nodes);
  } catch (const std::exception& e) {
    std::cerr << "natlog: " << e.what() << "\n";
    return kUsage;
  }
}
