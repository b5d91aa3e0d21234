#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ncwishart/distribution.hpp"
#include "ncwishart/errors.hpp"
#include "ncwishart/existence.hpp"
#include "ncwishart/identities.hpp"
#include "ncwishart/montecarlo.hpp"
#include "ncwishart/process.hpp"

namespace py = pybind11;
using namespace ncwishart;
using Eigen::MatrixXd;

namespace {

py::array_t<double> stack(const std::vector<PsdMatrix>& xs, int d) {
  py::array_t<double> out({static_cast<py::ssize_t>(xs.size()),
                           static_cast<py::ssize_t>(d), static_cast<py::ssize_t>(d)});
  auto v = out.mutable_unchecked<3>();
  for (std::size_t k = 0; k < xs.size(); ++k) {
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) v(k, i, j) = xs[k](i, j);
    }
  }
  return out;
}

WishartProcessParams make_process(double p, const MatrixXd& alpha,
                                  const MatrixXd& beta, const std::string& mode) {
  if (mode != "strict" && mode != "formal") {
    throw ValidationError("mode must be 'strict' or 'formal'");
  }
  return WishartProcessParams(p, PsdMatrix(alpha), beta,
                              mode == "formal" ? ProcessMode::Formal : ProcessMode::Strict);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Non-central Wishart laws and Wishart processes";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  auto invalid = py::register_exception<ValidationError>(m, "ValidationError",
                                                         PyExc_ValueError);
  py::register_exception<NumericalFailure>(m, "NumericalFailure", base.ptr());
  py::register_exception<RefusalError>(m, "RefusalError", base.ptr());
  (void)invalid;

  py::class_<WishartParams>(m, "WishartParams")
      .def(py::init([](double p, const MatrixXd& omega, const MatrixXd& sigma) {
             return WishartParams(p, PsdMatrix(omega), PsdMatrix(sigma));
           }),
           py::arg("p"), py::arg("omega"), py::arg("sigma"))
      .def_property_readonly("d", &WishartParams::dim)
      .def_property_readonly("p", &WishartParams::p)
      .def_property_readonly("omega", [](const WishartParams& w) { return w.omega().mat(); })
      .def_property_readonly("sigma", [](const WishartParams& w) { return w.sigma().mat(); })
      .def("laplace",
           [](const WishartParams& w, const MatrixXd& u) { return laplace(w, PsdMatrix(u)); },
           py::arg("u"))
      .def("fourier_laplace",
           [](const WishartParams& w, const MatrixXd& u, const MatrixXd& v) {
             return fourier_laplace(w, {PsdMatrix(u), SymMatrix(v)});
           },
           py::arg("u"), py::arg("v"))
      .def("mean", [](const WishartParams& w) { return mean(w).mat(); })
      .def("verdict",
           [](const WishartParams& w) {
             const auto v = existence_verdict(w);
             return py::make_tuple(to_string(v.status), v.rule);
           })
      .def("sample",
           [](const WishartParams& w, std::size_t n, std::uint64_t seed, int euler_steps) {
             const WishartSampler sampler(w, euler_steps);
             std::vector<PsdMatrix> xs;
             {
               py::gil_scoped_release release;
               xs = draw_batch(sampler, n, seed);
             }
             return py::make_tuple(stack(xs, w.dim()), to_string(sampler.method()));
           },
           py::arg("n"), py::arg("seed"), py::arg("euler_steps") = kDefaultEulerStepsPerUnitTime)
      .def("pushforward",
           [](const WishartParams& w, const MatrixXd& g) { return pushforward_congruence(w, g); },
           py::arg("g"))
      .def("convolve", [](const WishartParams& a, const WishartParams& b) { return convolve(a, b); })
      .def("to_letac",
           [](const WishartParams& w) {
             const LetacParams lp = to_letac(w);
             return py::make_tuple(lp.p, lp.a.mat(), lp.sigma.mat());
           })
      .def("__repr__", [](const WishartParams& w) {
        return "WishartParams(d=" + std::to_string(w.dim()) + ", p=" + std::to_string(w.p()) + ")";
      });

  m.def("from_letac",
        [](double p, const MatrixXd& a, const MatrixXd& sigma) {
          return from_letac({p, PsdMatrix(a), PsdMatrix(sigma)});
        },
        py::arg("p"), py::arg("a"), py::arg("sigma"));
  m.def("from_gupta_nagar",
        [](double k, const MatrixXd& big_sigma, const MatrixXd& theta) {
          return from_gupta_nagar({k, PsdMatrix(big_sigma), SymMatrix(theta)});
        },
        py::arg("k"), py::arg("Sigma"), py::arg("Theta"));

  m.def("gindikin_contains", &gindikin_contains, py::arg("d"), py::arg("p"));
  m.def("existence_verdict",
        [](int d, double p, int rank_omega, int rank_sigma) {
          const auto v = existence_verdict(d, p, rank_omega, rank_sigma, rank_omega == 0);
          return py::make_tuple(to_string(v.status), v.rule);
        },
        py::arg("d"), py::arg("p"), py::arg("rank_omega"), py::arg("rank_sigma"));

  m.def("char_exponents",
        [](double p, const MatrixXd& alpha, const MatrixXd& beta, double t,
           const MatrixXd& u, const std::string& mode) {
          const auto c = char_exponents_closed(make_process(p, alpha, beta, mode), t, PsdMatrix(u));
          return py::make_tuple(c.phi, c.psi.mat());
        },
        py::arg("p"), py::arg("alpha"), py::arg("beta"), py::arg("t"), py::arg("u"),
        py::arg("mode") = "strict");
  m.def("riccati_integrate",
        [](double p, const MatrixXd& alpha, const MatrixXd& beta, double t,
           const MatrixXd& u, int steps, const std::string& mode) {
          const auto c = riccati_integrate(make_process(p, alpha, beta, mode), t, PsdMatrix(u), steps);
          return py::make_tuple(c.phi, c.psi.mat());
        },
        py::arg("p"), py::arg("alpha"), py::arg("beta"), py::arg("t"), py::arg("u"),
        py::arg("steps") = 1000, py::arg("mode") = "strict");
  m.def("transition_params",
        [](double p, const MatrixXd& alpha, const MatrixXd& beta, double t,
           const MatrixXd& x) {
          return transition_params(make_process(p, alpha, beta, "strict"), t, PsdMatrix(x));
        },
        py::arg("p"), py::arg("alpha"), py::arg("beta"), py::arg("t"), py::arg("x"));
  m.def("simulate_path",
        [](double p, const MatrixXd& alpha, const MatrixXd& beta, const MatrixXd& x0,
           double horizon, int steps, std::uint64_t seed) {
          const auto proc = make_process(p, alpha, beta, "strict");
          Rng rng(seed, 0);
          const SamplePath path = sde_euler_path(proc, PsdMatrix(x0), horizon, steps, rng);
          return py::make_tuple(path.times, stack(path.states, proc.dim()));
        },
        py::arg("p"), py::arg("alpha"), py::arg("beta"), py::arg("x0"), py::arg("horizon"),
        py::arg("steps"), py::arg("seed"));

  m.def("identity_suites",
        [](const WishartParams& w, int count, std::uint64_t seed) {
          const std::vector<WishartParams> bases{w};
          py::list out;
          for (const auto& r : run_identity_suites(bases, count, seed)) {
            py::dict d;
            d["name"] = r.name;
            d["instances"] = r.instances;
            d["failures"] = r.failures;
            d["max_deviation"] = r.max_deviation;
            d["tolerance"] = r.tolerance;
            d["passed"] = r.passed();
            out.append(d);
          }
          return out;
        },
        py::arg("params"), py::arg("count") = 100, py::arg("seed") = 42);
}
