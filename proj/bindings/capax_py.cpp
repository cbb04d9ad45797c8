/// Python bindings for the capax core: model parsing and serialization,
/// string-expression queries against the junction tree engine, and the flat
/// reference oracle.  Library errors surface as a small exception hierarchy
/// rooted at capax.Error.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdio>
#include <numeric>
#include <string>

#include "capax/model_io.hpp"

namespace py = pybind11;

namespace {

using namespace capax;

/// The Python ExpressionError type; kept alive for the interpreter's
/// lifetime so the custom translator below can always reach it.
PyObject* expression_error_type = nullptr;

Scope joint_scope(const Space& space) {
  std::vector<VarId> ids(space.size());
  std::iota(ids.begin(), ids.end(), 0);
  return Scope(std::move(ids));
}

py::list scope_names(const Space& space, const Scope& scope) {
  py::list out;
  for (VarId id : scope.ids()) out.append(space.var(id).name);
  return out;
}

py::dict decomposition_dict(const Space& space, const DecompositionCheck& d) {
  py::dict out;
  out["left"] = scope_names(space, d.left);
  out["right"] = scope_names(space, d.right);
  out["separator"] = scope_names(space, d.separator);
  out["ok"] = d.ok;
  out["max_gap"] = d.max_gap;
  return out;
}

py::dict report_dict(const Space& space, const MarkovReport& report) {
  py::dict out;
  out["all_ok"] = report.all_ok();
  out["rectangular_core_ok"] = report.rectangular_core_ok;
  py::list m_checks;
  for (const auto& d : report.m_factorizations) m_checks.append(decomposition_dict(space, d));
  out["m_factorizations"] = m_checks;
  py::list q_checks;
  for (const auto& d : report.q_factorizations) q_checks.append(decomposition_dict(space, d));
  out["q_factorizations"] = q_checks;
  py::list partitions;
  for (const auto& s : report.separator_partitions) {
    py::dict row;
    row["separator"] = scope_names(space, s.separator);
    row["partitions"] = s.partitions;
    partitions.append(row);
  }
  out["separator_partitions"] = partitions;
  out["notes"] = report.notes;
  return out;
}

std::string interval_repr(const Interval& iv) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "Interval(lower=%.9f, upper=%.9f, status='%s')",
                iv.lower, iv.upper, status_name(iv.status).c_str());
  return std::string(buf);
}

}  // namespace

PYBIND11_MODULE(_capax, m) {
  m.doc() =
      "Lower/upper probability models on junction trees: parse a model "
      "document, enter evidence, and query conditional probability intervals.";
  m.attr("__version__") = "0.1.0";
  m.attr("DEFAULT_JOINT_GUARD") = kDefaultJointGuard;

  // Exception hierarchy.  Leaves are registered after the base so their
  // translators are consulted first; ExpressionError gets a hand-written
  // translator (registered last, so it wins) that appends the byte position.
  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ScopeError>(m, "ScopeError", base);
  py::register_exception<SizeGuardError>(m, "SizeGuardError", base);
  py::register_exception<SchemaError>(m, "SchemaError", base);
  py::register_exception<ModelError>(m, "ModelError", base);
  py::register_exception<EvidenceError>(m, "EvidenceError", base);
  py::register_exception<NumericDomainError>(m, "NumericDomainError", base);
  py::register_exception<InvalidOrderError>(m, "InvalidOrderError", base);
  py::register_exception<ConfigError>(m, "ConfigError", base);
  expression_error_type =
      py::exception<ExpressionError>(m, "ExpressionError", base).release().ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ExpressionError& e) {
      const std::string msg =
          std::string(e.what()) + " (at position " + std::to_string(e.position()) + ")";
      PyErr_SetString(expression_error_type, msg.c_str());
    }
  });

  py::class_<Interval>(m, "Interval",
                       "A conditional probability interval with its status: "
                       "'normal', 'vacuous', or 'contradiction'.")
      .def_readonly("lower", &Interval::lower)
      .def_readonly("upper", &Interval::upper)
      .def_property_readonly(
          "status", [](const Interval& iv) { return status_name(iv.status); })
      .def("__repr__", &interval_repr);

  py::class_<Model>(m, "Model",
                    "A pair of junction trees (mass and commonality potentials) "
                    "over one variable space.  Build instances with parse_model().")
      .def_property_readonly("variables",
                             [](const Model& model) {
                               py::dict out;
                               const Space& space = model.space();
                               for (VarId id = 0; id < space.size(); ++id) {
                                 const Variable& v = space.var(id);
                                 out[py::str(v.name)] = v.domain;
                               }
                               return out;
                             },
                             "Variable domains, keyed by name in declaration order.")
      .def_property_readonly("propagated", &Model::propagated)
      .def_property_readonly(
          "status", [](const Model& model) { return model_status_name(model.status()); },
          "'normal', 'vacuous_conditioning', or 'contradiction'; meaningful "
          "after propagation.")
      .def_property_readonly(
          "evidence_count",
          [](const Model& model) { return model.evidence_log().size(); },
          "Number of findings entered so far.")
      .def("enter_evidence",
           [](Model& model, const std::string& expr) {
             model.enter_evidence(parse_event(model.space(), expr));
           },
           py::arg("finding"),
           "Restricts the model to a finding given as an event expression "
           "(grammar: atoms var=value, joined with '&' and '|').  The finding "
           "must be nonempty and fit inside a clique of each tree.")
      .def("propagate", &Model::propagate,
           "Runs the two-pass message schedule on both trees; queries call "
           "this automatically when needed.")
      .def("query",
           [](Model& model, const std::string& expr) {
             return model.query_posterior(parse_event(model.space(), expr));
           },
           py::arg("target"),
           "Conditional interval for a clique-local target event, given all "
           "evidence entered so far.")
      .def("total_evidence_bounds", &Model::total_evidence_bounds,
           "[lower, upper] bounds on the probability of the combined evidence.")
      .def("to_json",
           [](const Model& model) { return serialize_model(model); },
           "Canonical JSON document for the model's current potentials.")
      .def("__eq__",
           [](const Model& a, const Model& b) { return a == b; },
           py::is_operator());

  m.def("parse_model",
        [](const std::string& text, std::uint64_t derive_guard) {
          return parse_model(text, derive_guard);
        },
        py::arg("text"), py::arg("derive_guard") = kDefaultJointGuard,
        "Builds a Model from a JSON document.  When the document omits "
        "q_potentials the commonality side is derived from the mass side, "
        "which enumerates the joint space and is capped at derive_guard "
        "configurations.");

  m.def("flat_posterior",
        [](const Model& model, const std::string& target, const std::string& evidence,
           std::uint64_t guard) {
          const Space& space = model.space();
          const Scope full = joint_scope(space);
          const FlatJoint flat = assemble_joint(model, guard);
          const Event t = extend(space, parse_event(space, target), full);
          const Event e = extend(space, parse_event(space, evidence), full);
          return flat_posterior(space, flat, t, e);
        },
        py::arg("model"), py::arg("target"), py::arg("evidence"),
        py::arg("guard") = kDefaultJointGuard,
        "Reference conditional computed without junction-tree machinery: "
        "flattens the model onto the full space (verifying normalization and "
        "dual consistency) and conditions pointwise.  Both expressions may "
        "mention any variables; they are extended to the joint scope.");

  m.def("check_markov",
        [](const Model& model, std::uint64_t guard) {
          return report_dict(model.space(), check_markov(model, guard));
        },
        py::arg("model"), py::arg("guard") = kDefaultJointGuard,
        "Checks that the model's prior is Markov with respect to its declared "
        "trees; returns a dict with the rectangular-core flag, per-edge "
        "factorization checks, and separator partition reports.");
}
