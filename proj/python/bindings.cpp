#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "itlkit/decide.hpp"
#include "itlkit/io.hpp"
#include "itlkit/proofs.hpp"
#include "itlkit/unwind.hpp"

namespace py = pybind11;
using namespace itlkit;

namespace {

py::dict decide_py(const std::string& text, const std::string& mode) {
  Mode m;
  if (mode == "validity")
    m = Mode::Validity;
  else if (mode == "satisfiability")
    m = Mode::Satisfiability;
  else
    throw std::invalid_argument("mode is validity or satisfiability");
  Formula f = parse(text);
  Verdict v;
  {
    py::gil_scoped_release nogil;
    v = decide(f, m);
  }
  py::dict out;
  out["status"] = to_string(v.status);
  out["formula"] = render(f);
  out["certificate"] = v.certificate ? py::object(py::str(quasimodel_to_json(*v.certificate, text)))
                                     : py::object(py::none());
  return out;
}

std::vector<std::string> validate_py(const std::string& json, bool full, bool honest,
                                     bool deterministic) {
  auto q = quasimodel_from_json(json);
  std::vector<std::string> out;
  for (const auto& v : validate_quasimodel(q, {full, honest, deterministic}))
    out.push_back(v.kind + ": " + v.detail);
  return out;
}

py::dict prove_py(const std::string& script, const std::string& logic) {
  auto s = parse_script(script);
  auto r = logic.empty() ? check_proof(s) : check_proof(s, parse_logic(logic));
  py::dict out;
  out["accepted"] = r.accepted;
  out["bad_line"] = r.bad_line ? py::object(py::int_(*r.bad_line)) : py::object(py::none());
  out["message"] = r.message;
  return out;
}

std::optional<std::string> countermodel_py(const std::string& text, size_t worlds,
                                           bool persistent) {
  auto m = find_countermodel(parse(text), worlds, persistent);
  if (!m) return std::nullopt;
  return model_to_json(*m);
}

std::vector<size_t> evaluate_py(const std::string& model_json, const std::string& text) {
  return evaluate(model_from_json(model_json), parse(text)).members();
}

py::dict unwind_py(const std::string& cert_json, size_t maxlen) {
  auto q = forall_free_reduct(quasimodel_from_json(cert_json));
  Fragment fr = limit_fragment(q, maxlen);
  std::vector<std::string> problems;
  for (const auto& v : validate_fragment(fr)) problems.push_back(v.kind + ": " + v.detail);
  py::dict out;
  out["worlds"] = fr.size();
  out["violations"] = problems;
  return out;
}

std::vector<std::string> closure_py(const std::string& text) {
  std::vector<std::string> out;
  Signature sig = closure(parse(text));
  for (Formula g : sig.formulas()) out.push_back(render(g));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Intuitionistic temporal logic toolkit";
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<CapacityError>(m, "CapacityError", PyExc_RuntimeError);

  m.def("normalize", [](const std::string& s) { return render(parse(s)); },
        "Parse a formula and print it back in canonical ASCII form.");
  m.def("closure", &closure_py, "Subformulas of a formula in canonical order.");
  m.def("translate", [](const std::string& s) { return render(gt_translate(parse(s))); },
        "Translation into the classical language with an interior modality.");
  m.def("decide", &decide_py, py::arg("formula"), py::arg("mode") = "validity");
  m.def("validate_quasimodel", &validate_py, py::arg("json"), py::arg("full") = true,
        py::arg("honest") = true, py::arg("deterministic") = false);
  m.def("check_proof", &prove_py, py::arg("script"), py::arg("logic") = "");
  m.def("find_countermodel", &countermodel_py, py::arg("formula"), py::arg("max_worlds") = 3,
        py::arg("persistent_only") = false);
  m.def("evaluate", &evaluate_py, py::arg("model_json"), py::arg("formula"));
  m.def("unwind", &unwind_py, py::arg("certificate_json"), py::arg("maxlen") = 3);
}
