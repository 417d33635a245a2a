#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "natlog/ccg.hpp"
#include "natlog/classifier.hpp"
#include "natlog/config.hpp"
#include "natlog/errors.hpp"
#include "natlog/llfgen.hpp"
#include "natlog/tableau.hpp"

namespace py = pybind11;
using namespace natlog;

namespace {

using Readings = std::vector<std::pair<std::string, std::vector<std::string>>>;

Readings py_llf(const std::string& derivations, bool first, int scope_cap, const std::string& config_json) {
  Config cfg = parse_config(config_json);
  Resources res = load_resources(cfg);
  Readings out;
  for (const auto& s : parse_derivation(derivations)) {
    std::vector<std::string> readings;
    for (const auto& t : generate_llfs(s.root, res.sig, LlfOptions{first, scope_cap})) readings.push_back(t.str(true));
    out.emplace_back(s.id, std::move(readings));
  }
  return out;
}

std::vector<std::string> py_classify(const std::string& problems, const std::string& derivations,
                                     const std::string& config_json) {
  Config cfg = parse_config(config_json);
  Resources res = load_resources(cfg);
  std::vector<Sentence> sentences;
  if (!derivations.empty()) sentences = parse_derivation(derivations);
  std::vector<Problem> ps = parse_problems(problems, sentences);
  ClassifierConfig cc = cfg.classifier();
  cc.prover.record_tree = false;
  std::vector<BatchItem> items;
  {
    py::gil_scoped_release release;
    items = classify_batch(ps, cc, res.context(), cfg.parallel);
  }
  std::vector<std::string> out;
  for (const auto& it : items) out.push_back(batch_item_json(it));
  return out;
}

std::string prove_nodes(const std::vector<std::string>& nodes, const std::string& format,
                        const std::string& config_json) {
  Config cfg = parse_config(config_json);
  Resources res = load_resources(cfg);
  std::vector<TableauNode> initial;
  for (const auto& n : nodes) initial.push_back(parse_node(n));
  ClassifierConfig cc = cfg.classifier();
  ProofResult r = prove(initial, cc.prover, res.context());
  return render_tree(r, parse_render_format(format));
}

}  // namespace

PYBIND11_MODULE(_natlog, m) {
  m.doc() = "Natural-language tableau prover";
  py::register_exception<Error>(m, "NatlogError");

  m.def("normalize", [](const std::string& text) { return beta_normalize(parse_term(text)).str(true); },
        py::arg("term"), "Beta-normal form of a term in the term syntax.");
  m.def("llf", &py_llf, py::arg("derivations"), py::arg("first") = false, py::arg("scope_cap") = 8,
        py::arg("config") = "{}", "LLF readings per sentence of a derivation document.");
  m.def("classify", &py_classify, py::arg("problems"), py::arg("derivations") = "", py::arg("config") = "{}",
        "One JSON record per problem, in input order.");
  m.def("prove", &prove_nodes, py::arg("nodes"), py::arg("format") = "text", py::arg("config") = "{}",
        "Rendered tableau for the initial nodes.");
}
