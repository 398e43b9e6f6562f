#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "blt/cli.hpp"
#include "blt/error_eval.hpp"
#include "blt/io.hpp"
#include "blt/optimizer.hpp"
#include "blt/rational_approx.hpp"
#include "blt/recursive.hpp"
#include "blt/streaming.hpp"

namespace py = pybind11;
using namespace blt;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Buffered linear Toeplitz factorizations";

  py::class_<BltFactorization>(m, "BltFactorization")
      .def_readonly("theta", &BltFactorization::theta)
      .def_readonly("theta_hat", &BltFactorization::theta_hat)
      .def_readonly("omega", &BltFactorization::omega)
      .def_readonly("omega_hat", &BltFactorization::omega_hat)
      .def_readonly("n", &BltFactorization::n)
      .def_readonly("method", &BltFactorization::method)
      .def_readonly("scale", &BltFactorization::scale)
      .def_readonly("meta", &BltFactorization::meta)
      .def_property_readonly("degree", &BltFactorization::degree)
      .def("b_coeffs", [](const BltFactorization& f, std::size_t n) { return b_coeffs(f, n).coeffs(); })
      .def("c_coeffs", [](const BltFactorization& f, std::size_t n) { return c_coeffs(f, n).coeffs(); })
      .def("to_json", &blt_to_json)
      .def_static("from_json", &blt_from_json)
      .def("__repr__", [](const BltFactorization& f) {
        std::ostringstream os;
        os << "<BltFactorization method=" << f.method << " degree=" << f.degree() << " n=" << f.n << ">";
        return os.str();
      });

  py::class_<Bounds>(m, "Bounds")
      .def_readonly("opt_lt_toe", &Bounds::opt_lt_toe)
      .def_readonly("mathias_ub", &Bounds::mathias_ub)
      .def_readonly("matousek_lb", &Bounds::matousek_lb)
      .def_readonly("bintree", &Bounds::bintree);

  py::class_<MaxErrReport>(m, "MaxErrReport")
      .def_readonly("n", &MaxErrReport::n)
      .def_readonly("sensitivity", &MaxErrReport::sensitivity)
      .def_readonly("row_norm", &MaxErrReport::row_norm)
      .def_readonly("max_err", &MaxErrReport::max_err)
      .def_readonly("bounds", &MaxErrReport::bounds)
      .def_property_readonly("ratio", &MaxErrReport::ratio);

  py::class_<OptResult>(m, "OptResult")
      .def_readonly("factorization", &OptResult::factorization)
      .def_readonly("final_loss", &OptResult::final_loss)
      .def_readonly("final_max_err", &OptResult::final_max_err)
      .def_readonly("iterations", &OptResult::iterations)
      .def_readonly("converged", &OptResult::converged);

  m.def("optimal_coeffs", [](std::size_t n) { return optimal_coeffs(n).coeffs(); }, py::arg("n"));
  m.def("opt_lt_toe", &opt_lt_toe, py::arg("n"));
  m.def("bounds_table", &bounds_table, py::arg("n"));
  m.def("make_factorization", &make_factorization, py::arg("theta"), py::arg("theta_hat"),
        py::arg("n"), py::arg("method") = "opt");
  m.def("degree1_factorization", &degree1_factorization, py::arg("n"));
  m.def("ra_blt", &ra_blt_build, py::arg("degree"), py::arg("n") = 0);
  m.def("degree_for_error", &degree_for_error, py::arg("n"), py::arg("mu"));
  m.def("max_err", &max_err, py::arg("factorization"), py::arg("n"));
  m.def("max_err_direct", &max_err_direct, py::arg("factorization"), py::arg("n"));
  m.def("loss", &loss, py::arg("theta"), py::arg("theta_hat"), py::arg("n"),
        py::arg("barrier_weight") = 1e-7);
  m.def("gradient", &gradient, py::arg("theta"), py::arg("theta_hat"), py::arg("n"),
        py::arg("barrier_weight") = 1e-7);
  m.def(
      "optimize",
      [](int degree, std::uint64_t n, int max_iters) {
        OptConfig cfg;
        cfg.degree = degree;
        cfg.n = n;
        cfg.max_iters = max_iters;
        py::gil_scoped_release nogil;
        return optimize_blt(cfg);
      },
      py::arg("degree"), py::arg("n"), py::arg("max_iters") = 500);

  // Rows of correlated noise as an (n, m) array.
  m.def(
      "noise",
      [](const BltFactorization& f, std::uint64_t n, std::size_t dim, std::uint64_t seed,
         double zeta, const std::string& mode) {
        if (mode != "per-step" && mode != "prefix") throw py::value_error("mode: per-step|prefix");
        NoiseStreamConfig cfg{f, n, dim, seed, zeta,
                              mode == "prefix" ? NoiseMode::Prefix : NoiseMode::PerStep};
        RowMatrix out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
        generate_noise(cfg, [&](std::uint64_t k, const double* row) {
          std::copy_n(row, dim, out.data() + k * dim);
        });
        return out;
      },
      py::arg("factorization"), py::arg("n"), py::arg("dim") = 1, py::arg("seed") = 0,
      py::arg("zeta") = 1.0, py::arg("mode") = "per-step");

  m.def(
      "stream_apply",
      [](const std::vector<double>& theta, const std::vector<double>& omega, const Matrix& Z) {
        return stream_apply(diagonal_form(RationalBlt{theta, omega}), Z);
      },
      py::arg("theta"), py::arg("omega"), py::arg("Z"));

  m.def("polylog_params", [](std::uint64_t n) {
    const PolylogParams p = polylog_params(n);
    return py::make_tuple(p.n1, p.degree, p.levels);
  });

  m.def(
      "cli",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"blt"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        const int code = blt::cli::run(int(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run the command-line tool in-process; returns (code, stdout, stderr).");
}
