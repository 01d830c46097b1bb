#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "setrel/benchgen.hpp"
#include "setrel/error.hpp"
#include "setrel/frontend.hpp"
#include "setrel/solver.hpp"

namespace py = pybind11;
using namespace setrel;

namespace {

struct PyResult {
  std::string status;
  std::string reason;
  bool in_fragment = true;
  std::map<std::string, std::string> model;
  std::map<std::string, std::size_t> rules;
  std::size_t steps = 0;
};

PyResult solve_text(const std::string& text, const std::string& oracle, std::size_t max_steps, double timeout) {
  TermManager tm;
  Script sc = parse(tm, text);
  SolverOptions opt;
  auto kind = parse_oracle_kind(oracle);
  if (!kind) throw py::value_error("unknown oracle: " + oracle);
  opt.tableau.oracle = *kind;
  opt.tableau.max_steps = max_steps;
  opt.timeout_seconds = timeout;
  SolveResult r;
  {
    py::gil_scoped_release release;
    r = solve_assertions(tm, sc.assertions, opt);
  }
  PyResult out;
  out.status = std::string(status_name(r.status));
  out.reason = r.reason;
  out.in_fragment = r.in_F;
  if (r.status == Status::Sat)
    for (Term c : sc.constants)
      if (r.model.has(c)) out.model[std::string(c.name())] = r.model.get(c).to_string(c.sort());
  for (std::size_t i = 0; i < kNumRules; ++i)
    if (r.stats.applications[i]) out.rules[std::string(rule_name(static_cast<Rule>(i)))] = r.stats.applications[i];
  out.steps = r.stats.steps;
  return out;
}

std::vector<std::string> fragment_violations(const std::string& text) {
  TermManager tm;
  Script sc = parse(tm, text);
  std::vector<std::string> out;
  for (const auto& v : preprocess(tm, sc.assertions).report.violations) out.emplace_back(violation_name(v.reason));
  return out;
}

std::string gen(const std::string& family, std::uint64_t seed) {
  TermManager tm;
  if (family == "hilbert") return print_script(tm, gen_hilbert(tm, random_hilbert(seed)));
  if (family == "random") return print_script(tm, gen_random(tm, seed));
  if (family == "uninterpreted") return print_script(tm, gen_random(tm, seed, RandomProfile::small_uninterpreted()));
  throw py::value_error("unknown family: " + family);
}

}  // namespace

PYBIND11_MODULE(_setrel, m) {
  m.doc() = "Satisfiability of constraints over finite sets and relations";

  auto& base = py::register_exception<Error>(m, "SetrelError", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", base.ptr());

  py::class_<PyResult>(m, "Result")
      .def_readonly("status", &PyResult::status)
      .def_readonly("reason", &PyResult::reason)
      .def_readonly("in_fragment", &PyResult::in_fragment)
      .def_readonly("model", &PyResult::model)
      .def_readonly("rules", &PyResult::rules)
      .def_readonly("steps", &PyResult::steps)
      .def("__repr__", [](const PyResult& r) { return "<Result " + r.status + ">"; });

  m.def("solve", &solve_text, py::arg("text"), py::arg("oracle") = "auto", py::arg("max_steps") = 100'000,
        py::arg("timeout") = 0.0, "Decide an SMT-LIB script given as text.");
  m.def("fragment_violations", &fragment_violations, py::arg("text"),
        "Names of the fragment violations of a script; empty for inputs in the decidable fragment.");
  m.def("generate", &gen, py::arg("family"), py::arg("seed") = 0,
        "Benchmark script text: family is 'random', 'uninterpreted' or 'hilbert'.");
  m.def("roundtrip", [](const std::string& text) {
    TermManager tm;
    return print_script(tm, parse(tm, text));
  }, py::arg("text"), "Parse and print a script.");
}
