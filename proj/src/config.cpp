#include "natlog/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "natlog/errors.hpp"

namespace natlog {

using nlohmann::json;

void Config::validate() const {
  if (ral < 1) throw ConfigError("ral must be a positive integer, got " + std::to_string(ral));
  Criterion::parse(effcr);
  if (scope_cap < 1) throw ConfigError("scope_cap must be at least 1");
  if (parallel < 1) throw ConfigError("parallel must be at least 1");
  if (sense_cutoff && *sense_cutoff < 1) throw ConfigError("sense_cutoff must be at least 1");
}

ClassifierConfig Config::classifier() const {
  validate();
  ClassifierConfig c;
  c.prover.criterion = Criterion::parse(effcr);
  c.prover.ral = ral;
  c.prover.flags = flags;
  c.prover.record_tree = record_tree;
  c.prover.sense_cutoff = sense_cutoff;
  c.align = align;
  c.scope_cap = scope_cap;
  c.all_readings = all_readings;
  return c;
}

namespace {

template <typename T>
T get(const json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

}  // namespace

Config parse_config(std::string_view json_text, Config c) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, v] : doc.items()) {
    if (key == "ral") c.ral = get<int>(v, key);
    else if (key == "effcr") c.effcr = get<std::string>(v, key);
    else if (key == "align") c.align = parse_align_mode(get<std::string>(v, key));
    else if (key == "thE") c.flags.thE = get<bool>(v, key);
    else if (key == "all_int") c.flags.all_int = get<bool>(v, key);
    else if (key == "the") c.flags.the = get<bool>(v, key);
    else if (key == "a2the") c.flags.a2the = get<bool>(v, key);
    else if (key == "s2the") c.flags.s2the = get<bool>(v, key);
    else if (key == "derivable") c.flags.derivable = get<bool>(v, key);
    else if (key == "scope_cap") c.scope_cap = get<int>(v, key);
    else if (key == "parallel") c.parallel = get<int>(v, key);
    else if (key == "kb") c.kb_paths = v.is_string() ? std::vector<std::string>{v.get<std::string>()} : get<std::vector<std::string>>(v, key);
    else if (key == "signature") c.signature_path = get<std::string>(v, key);
    else if (key == "rules") c.rules_path = get<std::string>(v, key);
    else if (key == "output") c.output = parse_render_format(get<std::string>(v, key));
    else if (key == "record_tree") c.record_tree = get<bool>(v, key);
    else if (key == "all_readings") c.all_readings = get<bool>(v, key);
    else if (key == "sense_cutoff") c.sense_cutoff = v.is_null() ? Cutoff{} : Cutoff{get<int>(v, key)};
    else throw ConfigError("unknown config key '" + key + "'");
  }
  c.validate();
  return c;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Config load_config(const std::string& path, Config base) { return parse_config(read_file(path), std::move(base)); }

Resources load_resources(const Config& cfg) {
  Resources r{cfg.rules_path.empty() ? bundled_rules() : parse_rules(read_file(cfg.rules_path)), KnowledgeBase::bundled(),
              cfg.signature_path.empty() ? Signature::bundled() : Signature::parse(read_file(cfg.signature_path))};
  if (!cfg.kb_paths.empty()) {
    r.kb = KnowledgeBase();
    for (const auto& p : cfg.kb_paths) {
      KnowledgeBase part = KnowledgeBase::parse(read_file(p));
      for (const auto& f : part.facts()) r.kb = r.kb.add_fact(f);
    }
  }
  return r;
}

}  // namespace natlog
