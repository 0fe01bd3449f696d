#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "chaos/analysis.hpp"
#include "chaos/basis.hpp"
#include "chaos/error.hpp"
#include "chaos/experiments.hpp"
#include "chaos/hermite.hpp"
#include "chaos/multiindex.hpp"
#include "chaos/oracle.hpp"
#include "chaos/propagator.hpp"

namespace py = pybind11;
using namespace chaos;

namespace {

TruncationSpec make_spec(const std::string& trunc, int p, int k,
                         const std::optional<std::string>& sparse) {
  if (trunc == "full") return FullTruncation{p, k};
  if (!sparse) throw Error(ErrorCode::InvalidArgument, "sparse index required for " + trunc);
  auto spec = resolve_sparse(*sparse);
  if (truncation_token(spec) != trunc) {
    throw Error(ErrorCode::InvalidArgument, "sparse index does not match truncation " + trunc);
  }
  return spec;
}

SdeModel make_model(const std::string& sde, double mu, double b, double sigma, double x0) {
  if (sde == "gbm") return SdeModel::gbm(mu, sigma, x0);
  if (sde == "bm") return SdeModel::brownian_drift(b, sigma, x0);
  throw Error(ErrorCode::InvalidArgument, "unknown sde '" + sde + "'");
}

BasisSpec make_basis(const std::string& token, double horizon) {
  return BasisSpec{parse_basis_kind(token), horizon};
}

// Keeps the model next to the solution so sampling and closed forms can reuse it.
struct PySolution {
  ChaosSolution sol;
  SdeModel model;
  BasisSpec basis;
};

py::dict stats_dict(const SampleStats& s) {
  py::dict d;
  d["paths"] = s.paths;
  d["mean"] = s.mean;
  d["mean_se"] = s.mean_se;
  d["variance"] = s.variance;
  d["variance_se"] = s.variance_se;
  d["third_moment"] = s.third_moment;
  d["third_moment_se"] = s.third_moment_se;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Truncated Wiener chaos expansions of scalar SDEs";

  py::register_exception<Error>(m, "ChaosError", PyExc_ValueError);

  m.def("count", [](const std::string& trunc, int p, int k, std::optional<std::string> sparse) {
    return count(make_spec(trunc, p, k, sparse));
  }, py::arg("trunc") = "full", py::arg("p") = 2, py::arg("k") = 4, py::arg("sparse") = py::none());

  m.def("enumerate", [](const std::string& trunc, int p, int k, std::optional<std::string> sparse) {
    std::vector<std::string> labels;
    for (const auto& alpha : enumerate(make_spec(trunc, p, k, sparse))) labels.push_back(alpha.label());
    return labels;
  }, py::arg("trunc") = "full", py::arg("p") = 2, py::arg("k") = 4, py::arg("sparse") = py::none(),
     "Index labels in canonical order ('0', 'a1:1', ...).");

  m.def("hermite", &hermite_n, py::arg("n"), py::arg("x"));
  m.def("triple_scalar", &triple_scalar, py::arg("a"), py::arg("b"), py::arg("c"));
  m.def("psi", [](const std::string& label, const std::vector<double>& xi) {
    return psi(MultiIndex::parse_label(label), xi);
  }, py::arg("label"), py::arg("xi"));

  m.def("eval_e", [](const std::string& basis, std::size_t l, double t, double horizon) {
    return eval_e(make_basis(basis, horizon), l, t);
  }, py::arg("basis"), py::arg("l"), py::arg("t"), py::arg("horizon") = 1.0);
  m.def("eval_E", [](const std::string& basis, std::size_t l, double t, double horizon) {
    return eval_E(make_basis(basis, horizon), l, t);
  }, py::arg("basis"), py::arg("l"), py::arg("t"), py::arg("horizon") = 1.0);
  m.def("kl_partial", [](const std::string& basis, std::size_t k, double t, double horizon) {
    return kl_partial(make_basis(basis, horizon), k, t);
  }, py::arg("basis"), py::arg("k"), py::arg("t"), py::arg("horizon") = 1.0);
  m.def("tail_sum", [](const std::string& basis, std::size_t k, double t, double horizon) {
    return tail_sum(make_basis(basis, horizon), k, t);
  }, py::arg("basis"), py::arg("k"), py::arg("t"), py::arg("horizon") = 1.0);

  m.def("gbm_variance_exact", &gbm_variance_exact, py::arg("mu"), py::arg("sigma"), py::arg("x0"),
        py::arg("t"));
  m.def("rate_fit", [](const std::vector<double>& xs, const std::vector<double>& ys) {
    const auto f = rate_fit(xs, ys);
    return py::make_tuple(f.slope, f.intercept, f.r_squared);
  }, py::arg("xs"), py::arg("ys"), "Returns (slope, intercept, r_squared) of log y vs log x.");

  py::class_<PySolution>(m, "Solution")
      .def_property_readonly("labels", [](const PySolution& s) {
        std::vector<std::string> out;
        for (const auto& alpha : s.sol.index_set) out.push_back(alpha.label());
        return out;
      })
      .def_property_readonly("t", [](const PySolution& s) {
        return py::array_t<double>(static_cast<py::ssize_t>(s.sol.grid.size()), s.sol.grid.data());
      })
      .def_property_readonly("coeffs", [](const PySolution& s) {
        const auto rows = static_cast<py::ssize_t>(s.sol.coeffs.size());
        const auto cols = static_cast<py::ssize_t>(s.sol.index_set.size());
        py::array_t<double> out({rows, cols});
        auto view = out.mutable_unchecked<2>();
        for (py::ssize_t i = 0; i < rows; ++i) {
          for (py::ssize_t j = 0; j < cols; ++j) view(i, j) = s.sol.coeffs[i][j];
        }
        return out;
      })
      .def("moments", [](const PySolution& s, double t) {
        const auto mo = moments(s.sol, t);
        return py::make_tuple(mo.mean, mo.variance);
      }, py::arg("t"), "(mean, variance) at a grid time.")
      .def("third_moment", [](const PySolution& s, double t) { return third_moment(s.sol, t); },
           py::arg("t"))
      .def("closed_form", [](const PySolution& s, const std::string& label, double t) {
        const auto alpha = MultiIndex::parse_label(label);
        if (std::holds_alternative<GbmPreset>(s.model.preset)) {
          return closed_form_gbm(s.model, alpha, s.basis, t);
        }
        return closed_form_bm(s.model, alpha, s.basis, t);
      }, py::arg("label"), py::arg("t"))
      .def("sample", [](const PySolution& s, double t, std::size_t paths, std::uint64_t seed) {
        SampleStats st;
        {
          py::gil_scoped_release release;
          st = sample_expansion(s.sol, t, paths, {seed, 0});
        }
        return stats_dict(st);
      }, py::arg("t"), py::arg("paths") = 100000, py::arg("seed") = 0)
      .def_property_readonly("rhs_evaluations",
                             [](const PySolution& s) { return s.sol.stats.rhs_evaluations; });

  m.def("solve", [](const std::string& sde, double mu, double b, double sigma, double x0,
                    const std::string& basis, const std::string& trunc, int p, int k,
                    std::optional<std::string> sparse, double t_end, std::size_t grid, double rtol,
                    double atol) {
    PySolution out{{}, make_model(sde, mu, b, sigma, x0), make_basis(basis, t_end)};
    ToleranceSpec tol;
    tol.rtol = rtol;
    tol.atol = atol;
    const auto spec = make_spec(trunc, p, k, sparse);
    const auto times = uniform_grid(t_end, grid);
    py::gil_scoped_release release;
    out.sol = solve(out.model, spec, out.basis, times, tol);
    return out;
  }, py::arg("sde") = "gbm", py::arg("mu") = 1.0, py::arg("b") = 1.0, py::arg("sigma") = 1.0,
     py::arg("x0") = 1.0, py::arg("basis") = "trig", py::arg("trunc") = "full", py::arg("p") = 2,
     py::arg("k") = 4, py::arg("sparse") = py::none(), py::arg("t_end") = 1.0,
     py::arg("grid") = 101, py::arg("rtol") = 1e-3, py::arg("atol") = 1e-6);

  m.def("euler_maruyama", [](const std::string& sde, double mu, double b, double sigma, double x0,
                             double t_end, std::size_t steps, std::size_t paths, std::uint64_t seed) {
    const auto model = make_model(sde, mu, b, sigma, x0);
    SampleStats st;
    {
      py::gil_scoped_release release;
      st = euler_maruyama(model, t_end, steps, paths, {seed, 1});
    }
    return stats_dict(st);
  }, py::arg("sde") = "gbm", py::arg("mu") = 1.0, py::arg("b") = 1.0, py::arg("sigma") = 1.0,
     py::arg("x0") = 1.0, py::arg("t_end") = 1.0, py::arg("steps") = 256,
     py::arg("paths") = 100000, py::arg("seed") = 0);

  m.def("table_row", [](std::size_t row, const std::string& basis) {
    const auto rows = table1_rows();
    if (row < 1 || row > rows.size()) throw Error(ErrorCode::InvalidArgument, "row out of range");
    const auto& r = rows[row - 1];
    ExperimentReport rep;
    {
      py::gil_scoped_release release;
      rep = run_table_row(r, parse_basis_kind(basis), experiment_tolerances());
    }
    py::dict d;
    d["basis"] = rep.basis;
    d["p"] = rep.p;
    d["k"] = rep.k;
    d["truncation"] = rep.truncation;
    d["n_coeff"] = rep.n_coeff;
    d["error_at_T"] = rep.error_at_T;
    d["error_max"] = rep.error_max;
    d["published"] = std::vector<double>(r.published.begin(), r.published.end());
    return d;
  }, py::arg("row"), py::arg("basis") = "cos",
     "Runs one GBM(1,1,1) error-table row (1-based) and returns the measured errors.");
}
