#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qdirac/classical.hpp"
#include "qdirac/commands.hpp"
#include "qdirac/config.hpp"
#include "qdirac/diagnostics.hpp"
#include "qdirac/dirac.hpp"
#include "qdirac/jacobi.hpp"
#include "qdirac/parametrix.hpp"
#include "qdirac/weights.hpp"

namespace py = pybind11;
using namespace qdirac;

namespace {

ProductSign parse_sign(const std::string& sign) {
  if (sign == "plus") return ProductSign::kPlus;
  if (sign == "minus") return ProductSign::kMinus;
  throw py::value_error("sign must be 'plus' or 'minus'");
}

OperatorKind parse_kind(const std::string& kind) {
  if (kind == "T1") return OperatorKind::kT1;
  if (kind == "T2") return OperatorKind::kT2;
  if (kind == "T3") return OperatorKind::kT3;
  throw py::value_error("kind must be 'T1', 'T2' or 'T3'");
}

py::dict verdict_dict(const ConditionVerdict& v) {
  py::dict d;
  d["pass"] = v.pass;
  d["error"] = v.error ? py::cast(std::string(to_string(*v.error))) : py::none();
  d["witness_n"] = v.witness_n;
  d["witness_k"] = v.witness_k;
  d["detail"] = v.detail;
  return d;
}

CommandResult run_command(const std::string& name, const ExperimentConfig& config) {
  if (name == "validate") return cmd_validate(config);
  if (name == "verify") return cmd_verify(config);
  if (name == "hs") return cmd_hs(config);
  if (name == "kernel") return cmd_kernel(config);
  if (name == "classical") return cmd_classical(config);
  if (name == "report-all") return cmd_report_all(config);
  throw py::value_error("unknown command " + name);
}

}  // namespace

PYBIND11_MODULE(_qdirac, m) {
  m.doc() = "Quantum and classical glued Dirac operators: weights, parametrix and diagnostics";

  static py::exception<Error> error(m, "QdiracError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error.ptr())(e.what());
      exc.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  py::class_<TruncationSpec>(m, "TruncationSpec")
      .def(py::init<>())
      .def(py::init([](int n_max, Index k_max, Index k_tail, Index margin) {
             TruncationSpec t;
             t.n_max = n_max;
             t.k_max = k_max;
             t.k_tail = k_tail;
             t.margin = margin;
             t.check();
             return t;
           }),
           py::arg("n_max") = 16, py::arg("k_max") = 512, py::arg("k_tail") = 4096,
           py::arg("margin") = 8)
      .def_readwrite("n_max", &TruncationSpec::n_max)
      .def_readwrite("k_max", &TruncationSpec::k_max)
      .def_readwrite("k_tail", &TruncationSpec::k_tail)
      .def_readwrite("margin", &TruncationSpec::margin)
      .def_readwrite("tol_identity", &TruncationSpec::tol_identity)
      .def_readwrite("tol_tail", &TruncationSpec::tol_tail)
      .def_readwrite("tol_trace", &TruncationSpec::tol_trace)
      .def("check", &TruncationSpec::check);

  py::class_<WeightFamily>(m, "WeightFamily")
      .def_readonly("name", &WeightFamily::name)
      .def("a", [](const WeightFamily& f, int n, Index k) { return f.a(n, k); })
      .def("b", [](const WeightFamily& f, int n, Index k) { return f.b(n, k); })
      .def("c_plus", [](const WeightFamily& f, int n, Index k) { return f.c_plus(n, k); })
      .def("c_minus", [](const WeightFamily& f, int n, Index k) { return f.c_minus(n, k); })
      .def("__repr__", [](const WeightFamily& f) { return "<WeightFamily " + f.name + ">"; });

  m.def("q_weight_family", &q_weight_family, py::arg("q"));
  m.def("geometric_family", &geometric_family, py::arg("base_n"), py::arg("base_k"));
  m.def("constant_family", &constant_family);
  m.def("q_weight", &q_weight, py::arg("q"), py::arg("k"));

  py::class_<AdmissibilityReport>(m, "AdmissibilityReport")
      .def_property_readonly("passed", &AdmissibilityReport::pass)
      .def_readonly("kappa", &AdmissibilityReport::kappa)
      .def_readonly("n_max", &AdmissibilityReport::n_max)
      .def_readonly("t_bound", &AdmissibilityReport::t_bound)
      .def_property_readonly("s",
                             [](const AdmissibilityReport& r) {
                               std::vector<double> out;
                               for (const auto& s : r.s) out.push_back(s.value());
                               return out;
                             })
      .def_property_readonly("t",
                             [](const AdmissibilityReport& r) {
                               std::vector<double> out;
                               for (const auto& t : r.t) out.push_back(t.value());
                               return out;
                             })
      .def_property_readonly("conditions", [](const AdmissibilityReport& r) {
        py::dict d;
        d["weights"] = verdict_dict(r.weights);
        d["s"] = verdict_dict(r.s_condition);
        d["t"] = verdict_dict(r.t_condition);
        d["kappa"] = verdict_dict(r.kappa_condition);
        d["closed_forms"] = verdict_dict(r.closed_forms);
        return d;
      });

  m.def("validate", &validate, py::arg("family"), py::arg("trunc"));
  m.def(
      "tail_product",
      [](const WeightFamily& f, const std::string& sign, int n, Index k, const TruncationSpec& t) {
        return tail_product(f, parse_sign(sign), n, k, t);
      },
      py::arg("family"), py::arg("sign"), py::arg("n"), py::arg("k"), py::arg("trunc"));
  m.def(
      "finite_tail_product",
      [](const WeightFamily& f, const std::string& sign, int n, Index k, const TruncationSpec& t) {
        return finite_tail_product(f, parse_sign(sign), n, k, t);
      },
      py::arg("family"), py::arg("sign"), py::arg("n"), py::arg("k"), py::arg("trunc"));

  m.def(
      "build_A", [](const WeightFamily& f, int n, Index k_max) { return build_A(f, n, k_max).dense(); },
      py::arg("family"), py::arg("n"), py::arg("k_max"));
  m.def(
      "build_Abar",
      [](const WeightFamily& f, int n, Index k_max) { return build_Abar(f, n, k_max).dense(); },
      py::arg("family"), py::arg("n"), py::arg("k_max"));
  m.def("kernel_Abar", &kernel_Abar, py::arg("family"), py::arg("n"), py::arg("k_max"),
        py::arg("alpha") = 1.0);
  m.def("solve_A", &solve_A, py::arg("family"), py::arg("n"), py::arg("g"));
  m.def("solve_Abar", &solve_Abar, py::arg("family"), py::arg("n"), py::arg("g"),
        py::arg("boundary_value"), py::arg("trunc"));

  py::class_<GluedDirac>(m, "GluedDirac")
      .def(py::init<WeightFamily, TruncationSpec>(), py::arg("family"), py::arg("trunc"))
      .def_property_readonly("kernel_profile", &GluedDirac::kernel_profile)
      .def("certify_kernel", [](const GluedDirac& op) {
        const auto cert = certify_kernel(op);
        py::dict d;
        d["total_nullity"] = cert.total_nullity();
        d["basis_residual"] = cert.basis_residual;
        std::vector<Index> per_mode;
        for (const auto& mode : cert.modes) per_mode.push_back(mode.nullity);
        d["nullity"] = per_mode;
        return d;
      });

  py::class_<ParametrixSet>(m, "ParametrixSet")
      .def(py::init<WeightFamily, TruncationSpec>(), py::arg("family"), py::arg("trunc"))
      .def(
          "apply_T",
          [](const ParametrixSet& p, const std::string& kind, int n, const Vector& f) {
            return p.apply_T(parse_kind(kind), n, f);
          },
          py::arg("kind"), py::arg("n"), py::arg("f"))
      .def(
          "matrix",
          [](const ParametrixSet& p, const std::string& kind, int n) {
            return p.matrix(parse_kind(kind), n).dense();
          },
          py::arg("kind"), py::arg("n"))
      .def(
          "hs_norm",
          [](const ParametrixSet& p, const std::string& kind, int n) {
            return hs_norm(p.matrix(parse_kind(kind), n), p.family());
          },
          py::arg("kind"), py::arg("n"))
      .def(
          "top_singular_value",
          [](const ParametrixSet& p, const std::string& kind, int n) {
            return top_singular_value(p.matrix(parse_kind(kind), n), p.family());
          },
          py::arg("kind"), py::arg("n"));

  m.def(
      "verify_identities",
      [](const ParametrixSet& p, const GluedDirac& op, int samples, std::uint64_t seed) {
        py::gil_scoped_release release;
        const auto r = verify_identities(p, op, samples, seed);
        py::gil_scoped_acquire acquire;
        py::dict d;
        d["samples"] = r.samples;
        d["seed"] = r.seed;
        d["precision_bits"] = r.precision_bits;
        d["dq_max_residual"] = r.dq_max_residual;
        d["qd_max_residual"] = r.qd_max_residual;
        d["dq_double_residual"] = r.dq_double_residual;
        d["max_leakage"] = r.max_leakage;
        d["dq_pass"] = r.dq_pass;
        d["qd_pass"] = r.qd_pass;
        return d;
      },
      py::arg("pset"), py::arg("op"), py::arg("samples") = 20, py::arg("seed") = 12345);

  m.def(
      "hs_norms",
      [](const ParametrixSet& p, const AdmissibilityReport& r, int n_from, int n_to) {
        py::list rows;
        for (const auto& row : hs_norms(p, r, n_from, n_to)) {
          py::dict d;
          d["kind"] = std::string(to_string(row.kind));
          d["n"] = row.n;
          d["hs"] = row.hs;
          d["bound"] = row.bound;
          d["pass"] = row.pass;
          rows.append(d);
        }
        return rows;
      },
      py::arg("pset"), py::arg("report"), py::arg("n_from"), py::arg("n_to"));

  m.def(
      "classical_hs_norms",
      [](int n_from, int n_to, Index nodes) {
        py::list rows;
        for (const auto& row : classical_hs_norms(n_from, n_to, make_radial_grid(nodes))) {
          py::dict d;
          d["kind"] = row.kind;
          d["n"] = row.n;
          d["hs_sq"] = row.hs_sq;
          d["bound_sq"] = row.bound_sq;
          d["pass"] = row.pass;
          rows.append(d);
        }
        return rows;
      },
      py::arg("n_from"), py::arg("n_to"), py::arg("nodes") = 512);

  m.def(
      "classical_kernel_dimension",
      [](Index nodes, int n_max) { return classical_kernel_check(make_radial_grid(nodes), n_max).dimension; },
      py::arg("nodes") = 512, py::arg("n_max") = 16);

  m.def(
      "classical_parametrix_residual",
      [](Index nodes, int n_max, std::uint64_t seed) {
        const auto grid = make_radial_grid(nodes);
        const auto r = classical_parametrix_check(grid, random_smooth_rhs(grid, n_max, seed));
        return py::make_tuple(r.dbar_residual, r.boundary_residual);
      },
      py::arg("nodes") = 512, py::arg("n_max") = 16, py::arg("seed") = 12345);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_static("parse", [](const std::string& text) { return parse_config(text); })
      .def_static("load", [](const std::string& path) { return load_config(path); })
      .def("dump", &dump_config)
      .def_readwrite("samples", &ExperimentConfig::samples)
      .def_readwrite("seed", &ExperimentConfig::seed)
      .def_readwrite("grid", &ExperimentConfig::grid)
      .def_readwrite("trunc", &ExperimentConfig::trunc)
      .def_readwrite("output", &ExperimentConfig::output);

  m.def(
      "run_command",
      [](const std::string& name, const ExperimentConfig& config) {
        const auto result = run_command(name, config);
        py::dict docs;
        for (const auto& doc : result.documents) docs[py::str(doc.name)] = doc.content;
        return py::make_tuple(result.pass, result.summary, docs);
      },
      py::arg("command"), py::arg("config") = ExperimentConfig{});
}
