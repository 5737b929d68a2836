#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tlx/evidence.hpp"
#include "tlx/pipeline.hpp"
#include "tlx/reasoner.hpp"
#include "tlx/report.hpp"
#include "tlx/stats.hpp"
#include "tlx/transfer.hpp"

namespace py = pybind11;
using namespace tlx;

namespace {

std::vector<Entailment> parse_all(const std::vector<std::string>& xs) {
  std::vector<Entailment> out;
  for (const auto& x : xs) out.push_back(Entailment::parse(x));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::string> strings(const std::vector<Entailment>& gs) {
  std::vector<std::string> out;
  for (const auto& g : gs) out.push_back(g.to_string());
  return out;
}

py::dict rates_dict(const ChangeRates& r) {
  py::dict d;
  d["d_new"] = r.d_new;
  d["d_obs"] = r.d_obs;
  d["d_inv"] = r.d_inv;
  return d;
}

py::dict result_dict(const EvidenceResult& r) {
  py::dict d;
  d["kind"] = r.evidence.kind_name();
  d["evidence"] = r.evidence.to_string();
  d["entailments"] = strings(r.evidence.entailments);
  d["gamma"] = r.gamma;
  d["rho"] = r.rho;
  d["n"] = r.n;
  d["valid"] = r.valid;
  d["reason"] = r.reason;
  return d;
}

py::dict transfer_dict(const TransferRecord& r) {
  py::dict d;
  d["source"] = r.source;
  d["target"] = r.target;
  d["auc_base"] = r.auc_base;
  d["auc_hard"] = r.auc_hard;
  d["auc_soft"] = r.auc_soft;
  d["fsi"] = r.fsi;
  d["fgi"] = r.fgi;
  d["fti"] = r.fti;
  return d;
}

PipelineConfig make_config(const std::string& corpus, const std::string& out, const py::dict& options) {
  PipelineConfig cfg;
  cfg.corpus = corpus;
  cfg.out = out;
  KeyValues kv;
  for (auto [k, v] : options) {
    auto key = py::str(k).cast<std::string>();
    std::replace(key.begin(), key.end(), '_', '-');
    std::string value = py::isinstance<py::bool_>(v) ? (v.cast<bool>() ? "true" : "false") : py::str(v).cast<std::string>();
    kv.emplace_back(key, value);
  }
  apply_config(cfg, kv, "<python>");
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Ontology-based explanations of transfer learning outcomes";
  py::register_exception<DataError>(m, "DataError", PyExc_RuntimeError);

  m.def("change_rates", [](const std::vector<std::string>& ga, const std::vector<std::string>& gb) {
    return rates_dict(change_rates(parse_all(ga), parse_all(gb)));
  }, py::arg("source"), py::arg("target"));
  m.def("change_rates_from_counts", [](std::size_t a, std::size_t b, std::size_t n_new, std::size_t n_obs,
                                       std::size_t n_inv, std::size_t n_union) {
    return rates_dict(change_rates(a, b, n_new, n_obs, n_inv, n_union));
  }, py::arg("size_source"), py::arg("size_target"), py::arg("new"), py::arg("obsolete"), py::arg("invariant"),
     py::arg("union"));
  m.def("pearson", &pearson, py::arg("x"), py::arg("y"));
  m.def("p_value", &p_value, py::arg("r"), py::arg("n"));
  m.def("auc", &auc, py::arg("scores"), py::arg("labels"));
  m.def("fti", &fti, py::arg("fsi"), py::arg("fgi"), py::arg("w1") = 1.0, py::arg("w2") = 1.0);

  m.def("materialize", [](const std::string& text) {
    auto onto = parse_ontology(text);
    auto c = materialize(normalize_tbox(onto.tbox), onto.abox);
    py::dict d;
    d["inconsistent"] = c.inconsistent();
    d["witness"] = c.inconsistency_witness();
    d["atoms"] = strings(c.atoms());
    return d;
  }, py::arg("ontology"), "Closure of an ontology given in the functional text syntax.");

  py::class_<Pipeline>(m, "Pipeline")
      .def(py::init([](const std::string& corpus, const std::string& out, const py::dict& options) {
             return std::make_unique<Pipeline>(make_config(corpus, out, options));
           }),
           py::arg("corpus"), py::arg("out"), py::arg("options") = py::dict())
      .def("config", [](const Pipeline& p) { return describe(p.config()); })
      .def("domains", [](Pipeline& p) {
        std::vector<std::string> ids;
        for (const auto& d : p.corpus().domains) ids.push_back(d.id);
        return ids;
      })
      .def("materialize", [](Pipeline& p) {
        p.materialize();
        std::map<std::string, std::vector<std::string>> out;
        for (const auto& d : p.corpus().domains) out[d.id] = strings(d.domain_closure);
        return out;
      })
      .def("mine_roots", [](Pipeline& p) {
        std::map<std::string, py::dict> out;
        for (const auto& [id, r] : p.mine_roots()) {
          py::dict d;
          d["entailments"] = strings(r.root_entailments);
          d["individuals"] = r.root_individuals;
          out[id] = d;
        }
        return out;
      })
      .def("import_external", &Pipeline::import_external)
      .def("fti", [](Pipeline& p) {
        py::list out;
        for (const auto& [k, r] : p.fti().records) out.append(transfer_dict(r));
        return out;
      })
      .def("explain", [](Pipeline& p, const std::string& kind) {
        auto ex = p.explain(parse_kinds(kind));
        py::list out;
        for (const auto& r : ex.results) out.append(result_dict(r));
        return out;
      }, py::arg("kind") = "all")
      .def("report", [](Pipeline& p, const std::string& kind, const std::string& source, const std::string& target,
                        std::size_t limit, const std::string& format) {
        if (format != "text" && format != "json") throw std::invalid_argument("format must be text or json");
        auto rep = p.report(parse_kinds(kind), {source, target, limit});
        return format == "json" ? render_json(rep) : render_text(rep);
      }, py::arg("kind") = "all", py::arg("source") = "", py::arg("target") = "", py::arg("limit") = 0,
         py::arg("format") = "text")
      .def("path", &Pipeline::path);
}
