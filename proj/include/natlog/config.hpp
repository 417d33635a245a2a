#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "natlog/classifier.hpp"
#include "natlog/lexicon.hpp"
#include "natlog/tableau.hpp"

namespace natlog {

// Run settings shared by the command line and config files. Config files
// are JSON objects using the keys below; unknown keys are rejected.
struct Config {
  int ral = 400;                      // "ral"
  std::string effcr = "ebpc";         // "effcr"
  AlignMode align = AlignMode::kNone; // "align": none|weak|strong
  ProverFlags flags;                  // "thE", "all_int", "the", "a2the", "s2the", "derivable"
  int scope_cap = 8;                  // "scope_cap"
  int parallel = 1;                   // "parallel"
  std::vector<std::string> kb_paths;  // "kb"; empty means the bundled KB
  std::string signature_path;         // "signature"
  std::string rules_path;             // "rules"
  RenderFormat output = RenderFormat::kText;  // "output": text|json|latex
  bool record_tree = true;            // "record_tree"
  bool all_readings = false;          // "all_readings"
  Cutoff sense_cutoff;                // "sense_cutoff"

  // Throws ConfigError on out-of-range values.
  void validate() const;
  ClassifierConfig classifier() const;
};

// Applies the keys of a JSON config document over `base`.
Config parse_config(std::string_view json_text, Config base = {});
// Reads a config file; throws ConfigError when unreadable.
Config load_config(const std::string& path, Config base = {});

// Reads a whole file; throws ConfigError naming the path on failure.
std::string read_file(const std::string& path);

// Rules, KB and signature named by a config, bundled where no path is set.
struct Resources {
  std::vector<Rule> rules;
  KnowledgeBase kb;
  Signature sig;

  ProverContext context() const { return {&rules, &kb, &sig}; }
};

Resources load_resources(const Config& cfg);

}  // namespace natlog
