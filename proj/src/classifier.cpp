#include "natlog/classifier.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <thread>

#include "json.hpp"

#include "natlog/errors.hpp"

namespace natlog {

using nlohmann::json;

std::string to_string(Label l) {
  switch (l) {
    case Label::kEntailment: return "E";
    case Label::kContradiction: return "C";
    case Label::kNeutral: return "N";
  }
  return "N";
}

Label parse_label(std::string_view s) {
  if (s == "E" || s == "entailment") return Label::kEntailment;
  if (s == "C" || s == "contradiction") return Label::kContradiction;
  if (s == "N" || s == "neutral") return Label::kNeutral;
  throw FormatError("unknown label '" + std::string(s) + "'");
}

Label decide(bool entail_closed, bool contra_closed) {
  if (entail_closed == contra_closed) return Label::kNeutral;
  return entail_closed ? Label::kEntailment : Label::kContradiction;
}

namespace {

Term compile(const SentenceInput& s) {
  try {
    if (s.llf) return *s.llf;
    if (!s.tree) throw CompileError("empty sentence input");
    return corrected_term(*s.tree);
  } catch (const CompileError&) {
    throw;
  } catch (const Error& e) {
    throw CompileError("sentence '" + s.id + "': " + e.what());
  }
}

struct Readings {
  std::vector<std::vector<Term>> premises;
  std::vector<Term> hypothesis;

  std::size_t max_count() const {
    std::size_t n = hypothesis.size();
    for (const auto& p : premises) n = std::max(n, p.size());
    return n;
  }
};

std::vector<Term> raise(const Term& t, const Signature& sig, int cap) {
  std::vector<Term> rs = type_raise(t, sig, cap);
  if (rs.empty()) throw CompileError("no reading for " + t.str());
  return rs;
}

Readings readings(const std::vector<Term>& ps, const Term& h, const Signature& sig, int cap) {
  Readings r;
  for (const auto& p : ps) r.premises.push_back(raise(p, sig, cap));
  r.hypothesis = raise(h, sig, cap);
  return r;
}

const Term& pick(const std::vector<Term>& rs, std::size_t k) { return rs[std::min(k, rs.size() - 1)]; }

ProofResult run(const Readings& r, std::size_t k, Sign hyp_sign, const ClassifierConfig& cfg, const ProverContext& ctx) {
  std::vector<TableauNode> seeds;
  for (const auto& p : r.premises) seeds.push_back(make_node(pick(p, k), {}, Sign::kT));
  seeds.push_back(make_node(pick(r.hypothesis, k), {}, hyp_sign));
  return prove(seeds, cfg.prover, ctx);
}

Judgment judge(const Readings& plain, const std::optional<Readings>& aligned, std::size_t k, const ClassifierConfig& cfg,
               const ProverContext& ctx) {
  Judgment j;
  auto account = [&](const ProofResult& r) {
    j.rule_applications += r.rule_applications;
    j.limit_hit = j.limit_hit || r.limit_hit;
  };
  bool aligned_closed = false;
  auto side = [&](Sign hyp_sign) {
    if (aligned) {
      ProofResult r = run(*aligned, k, hyp_sign, cfg, ctx);
      account(r);
      if (r.closed) {
        aligned_closed = true;
        return r;
      }
    }
    ProofResult r = run(plain, k, hyp_sign, cfg, ctx);
    account(r);
    return r;
  };
  j.entail = side(Sign::kF);
  j.contra = side(Sign::kT);
  j.label = decide(j.entail.closed, j.contra.closed);
  j.used_alignment = aligned_closed ? cfg.align : AlignMode::kNone;
  return j;
}

}  // namespace

Judgment classify(const Problem& p, const ClassifierConfig& cfg, const ProverContext& ctx) {
  if (p.premises.empty()) throw CompileError("problem '" + p.id + "' has no premises");
  std::vector<Term> ps;
  for (const auto& s : p.premises) ps.push_back(compile(s));
  Term h = compile(p.hypothesis);

  Readings plain = readings(ps, h, *ctx.sig, cfg.scope_cap);
  std::optional<Readings> aligned;
  if (cfg.align != AlignMode::kNone) {
    AlignmentResult ar = align(ps, h, cfg.align, *ctx.sig);
    if (!ar.table.empty()) aligned = readings(ar.premises, ar.hypothesis, *ctx.sig, cfg.scope_cap);
  }

  std::size_t tries = 1;
  if (cfg.all_readings) {
    tries = plain.max_count();
    if (aligned) tries = std::max(tries, aligned->max_count());
  }
  Judgment out;
  int apps = 0;
  bool limit = false;
  for (std::size_t k = 0; k < tries; ++k) {
    out = judge(plain, aligned, k, cfg, ctx);
    apps += out.rule_applications;
    limit = limit || out.limit_hit;
    if (out.label != Label::kNeutral) break;
  }
  out.rule_applications = apps;
  out.limit_hit = limit;
  return out;
}

Judgment aggregate(const std::vector<Judgment>& js) {
  if (js.empty()) throw EmptyInput("aggregate needs at least one judgment");
  const Judgment* pick = nullptr;
  bool conflict = false;
  for (const auto& j : js) {
    if (j.label == Label::kNeutral) continue;
    if (!pick) pick = &j;
    else if (pick->label != j.label) conflict = true;
  }
  if (pick && !conflict) return *pick;
  Judgment out = js.front();
  out.label = Label::kNeutral;
  return out;
}

std::vector<BatchItem> classify_batch(const std::vector<Problem>& problems, const ClassifierConfig& cfg,
                                      const ProverContext& ctx, int workers) {
  if (workers < 1) throw ConfigError("parallel must be at least 1");
  std::vector<BatchItem> out(problems.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < problems.size(); i = next++) {
      const Problem& p = problems[i];
      BatchItem& item = out[i];
      item.id = p.id;
      item.gold = p.gold;
      auto start = std::chrono::steady_clock::now();
      try {
        item.judgment = classify(p, cfg, ctx);
      } catch (const ConfigError&) {
        throw;
      } catch (const std::exception& e) {
        item.error = e.what();
      }
      item.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
  };
  std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(workers), problems.size());
  if (n <= 1) {
    work();
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(n);
  for (std::size_t t = 0; t < n; ++t)
    pool.emplace_back([&, t] {
      try {
        work();
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::string batch_item_json(const BatchItem& item, bool with_timing) {
  json j;
  j["id"] = item.id;
  if (item.judgment) {
    j["label"] = to_string(item.judgment->label);
    j["rule_apps"] = item.judgment->rule_applications;
    j["limit_hit"] = item.judgment->limit_hit;
    j["used_alignment"] = to_string(item.judgment->used_alignment);
  } else {
    j["label"] = "error";
    j["rule_apps"] = 0;
    j["limit_hit"] = false;
    j["used_alignment"] = "none";
    j["error"] = item.error;
  }
  if (with_timing) j["ms"] = std::round(item.ms * 1000) / 1000;
  j["gold"] = item.gold ? json(to_string(*item.gold)) : json(nullptr);
  return j.dump();
}

int gold_mismatches(const std::vector<BatchItem>& items) {
  int n = 0;
  for (const auto& it : items)
    if (it.gold && (!it.judgment || it.judgment->label != *it.gold)) ++n;
  return n;
}

std::string batch_summary_json(const std::vector<BatchItem>& items) {
  json counts{{"E", 0}, {"C", 0}, {"N", 0}, {"error", 0}};
  int scored = 0, correct = 0;
  for (const auto& it : items) {
    std::string l = it.judgment ? to_string(it.judgment->label) : "error";
    counts[l] = counts[l].get<int>() + 1;
    if (it.gold) {
      ++scored;
      if (it.judgment && it.judgment->label == *it.gold) ++correct;
    }
  }
  double acc = scored ? static_cast<double>(correct) / scored : 0.0;
  json j{{"summary", {{"accuracy", acc}, {"correct", correct}, {"scored", scored}, {"counts", counts}}}};
  return j.dump();
}

namespace {

SentenceInput resolve(const json& ref, const std::map<std::string, const CCGTree*>& index, const std::string& pid) {
  SentenceInput s;
  if (ref.is_string()) {
    s.id = ref.get<std::string>();
    auto it = index.find(s.id);
    if (it == index.end()) throw FormatError("problem '" + pid + "': unknown sentence '" + s.id + "'");
    s.tree = *it->second;
    return s;
  }
  if (ref.is_object() && ref.contains("llf") && ref["llf"].is_string()) {
    std::string text = ref["llf"].get<std::string>();
    s.id = ref.value("id", text);
    try {
      s.llf = parse_term(text);
    } catch (const Error& e) {
      throw FormatError("problem '" + pid + "': " + e.what());
    }
    return s;
  }
  throw FormatError("problem '" + pid + "': a sentence reference is an id or {\"llf\": term}");
}

}  // namespace

std::vector<Problem> parse_problems(std::string_view json_text, const std::vector<Sentence>& sentences) {
  std::map<std::string, const CCGTree*> index;
  for (const auto& s : sentences) index[s.id] = &s.root;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("problem file: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("problems") || !doc["problems"].is_array())
    throw FormatError("problem file: expected {\"problems\": [...]}");
  std::vector<Problem> out;
  for (const auto& pj : doc["problems"]) {
    if (!pj.is_object() || !pj.contains("id") || !pj["id"].is_string())
      throw FormatError("problem file: every problem needs a string id");
    Problem p;
    p.id = pj["id"].get<std::string>();
    if (!pj.contains("premises") || !pj["premises"].is_array() || pj["premises"].empty())
      throw FormatError("problem '" + p.id + "': premises must be a non-empty list");
    if (!pj.contains("hypothesis")) throw FormatError("problem '" + p.id + "': missing hypothesis");
    for (const auto& r : pj["premises"]) p.premises.push_back(resolve(r, index, p.id));
    p.hypothesis = resolve(pj["hypothesis"], index, p.id);
    if (pj.contains("gold") && !pj["gold"].is_null()) {
      if (!pj["gold"].is_string()) throw FormatError("problem '" + p.id + "': gold must be E, C, N or null");
      p.gold = parse_label(pj["gold"].get<std::string>());
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace natlog
