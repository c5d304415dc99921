#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "reallines/pipeline.hpp"
#include "reallines/schubert.hpp"
#include "reallines/surface_io.hpp"

namespace py = pybind11;
namespace rl = reallines;
namespace sch = reallines::schubert;

namespace {

py::int_ to_pyint(const sch::Int& v) {
  return py::cast<py::int_>(
      py::module_::import("builtins").attr("int")(v.str()));
}

py::dict report_dict(const rl::EnumerationReport& rep) {
  py::dict out;
  out["n"] = rep.n;
  out["degree"] = rep.degree;
  out["n_complex_found"] = rep.n_complex_found;
  out["n_real"] = rep.n_real;
  out["n_plus"] = rep.n_plus;
  out["n_minus"] = rep.n_minus;
  out["signed_sum_raw"] = rep.signed_sum;
  out["signed_sum"] = rep.signed_sum_abs;
  out["failures"] = rep.failures;
  if (rep.h) out["h"] = *rep.h;
  if (rep.e) out["e"] = *rep.e;
  py::list lines;
  for (const auto& rec : rep.lines) {
    py::dict line;
    line["params"] = rec.line.params;
    line["plucker"] = rec.plucker.coords;
    line["index"] = rec.index;
    line["jac_det"] = rec.jac_det;
    line["residual"] = rec.residual;
    if (rec.segre) line["segre"] = std::string(rl::to_string(*rec.segre));
    lines.append(std::move(line));
  }
  out["lines"] = std::move(lines);
  return out;
}

rl::HomogeneousPolynomial<double> poly_from_terms(
    int num_vars, int degree,
    const std::vector<std::pair<std::vector<int>, double>>& terms) {
  rl::HomogeneousPolynomial<double> f(num_vars, degree);
  for (const auto& [e, c] : terms) f.add_term(e, c);
  return f;
}

}  // namespace

PYBIND11_MODULE(_reallines, m) {
  m.doc() = "real lines on real projective hypersurfaces of degree 2n-1";

  m.def("n_complex", [](int n) { return to_pyint(sch::n_complex(n)); },
        py::arg("n"), "number of complex lines, via the Schubert ring");
  m.def("n_complex_oracle",
        [](int n) { return to_pyint(sch::n_complex_oracle(n)); },
        py::arg("n"), "independent coefficient-extraction count");
  m.def("double_factorial",
        [](int n) { return to_pyint(sch::double_factorial(n)); },
        py::arg("n"), "(2n-1)!!, the signed count of real lines");
  m.def("zagier_log_ratio",
        [](int n) { return sch::zagier_asymptote(n).log_ratio; },
        py::arg("n"), "ln(N_C / (sqrt(27/pi) (2n-1)^{2n-3/2}))");

  m.def(
      "residue_table",
      [](int n_max, int q) {
        auto t = sch::residue_table(n_max, q);
        py::list rows;
        for (const auto& r : t.rows)
          rows.append(py::make_tuple(r.n, r.n_complex_mod, r.n_euler_mod));
        py::dict out;
        out["q"] = t.q;
        out["rows"] = std::move(rows);
        out["n_complex_periodic"] = t.n_complex_periodic;
        out["n_euler_periodic"] = t.n_euler_periodic;
        out["mod4_coincide"] = t.mod4_coincide;
        return out;
      },
      py::arg("n_max"), py::arg("q"));

  m.def(
      "fixture_terms",
      [](const std::string& name, int n, std::uint64_t seed) {
        auto s = rl::fixture_surface(name, n, seed);
        std::vector<std::pair<std::vector<int>, double>> terms;
        for (const auto& t : s.terms)
          terms.emplace_back(t.exponents, std::stod(t.coeff));
        return terms;
      },
      py::arg("name"), py::arg("n"), py::arg("seed") = 0,
      "terms of a fixture surface as (exponents, coeff) pairs");

  m.def(
      "enumerate_lines",
      [](int num_vars, int degree,
         const std::vector<std::pair<std::vector<int>, double>>& terms,
         std::uint64_t seed) {
        auto f = poly_from_terms(num_vars, degree, terms);
        return report_dict(rl::run_pipeline(f, seed));
      },
      py::arg("num_vars"), py::arg("degree"), py::arg("terms"),
      py::arg("seed") = 20120514,
      "full enumeration report for a real hypersurface");
}
