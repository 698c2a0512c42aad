#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "iontomo/error.hpp"
#include "iontomo/grid.hpp"
#include "iontomo/oscillator.hpp"
#include "iontomo/states.hpp"
#include "iontomo/tomography.hpp"

namespace py = pybind11;
using namespace iontomo;

namespace {

// Explicit shape vectors; the single-size array_t constructors produced
// zero-stride arrays with the system pybind11 headers.
template <class T>
py::array_t<T> make_array(std::vector<py::ssize_t> shape) {
  return py::array_t<T>(std::move(shape));
}

py::array_t<double> to_array(const std::vector<double>& v, std::size_t rows,
                             std::size_t cols) {
  auto a = make_array<double>({static_cast<py::ssize_t>(rows), static_cast<py::ssize_t>(cols)});
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

py::array_t<cplx> to_array(const std::vector<cplx>& v) {
  auto a = make_array<cplx>({static_cast<py::ssize_t>(v.size())});
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

GridSpec grid_spec(double half_width, std::size_t count) {
  return {{-half_width, half_width, count}, {-half_width, half_width, count}};
}

py::dict grid_dict(const WignerGrid& g) {
  py::dict d;
  d["q"] = py::make_tuple(g.q_axis.min, g.q_axis.max, g.q_axis.count);
  d["p"] = py::make_tuple(g.p_axis.min, g.p_axis.max, g.p_axis.count);
  d["W"] = to_array(g.values, g.q_axis.count, g.p_axis.count);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Symplectic tomograms of a trapped ion in a parametric trap";

  py::register_exception<Error>(m, "IontomoError", PyExc_RuntimeError);

  m.def(
      "solve_epsilon",
      [](double kappa, double omega, double t_end, std::size_t n_steps, double tol) {
        SolverOptions opts;
        opts.tol = tol;
        const EpsilonTrajectory traj =
            solve_epsilon({kappa, omega}, t_end, n_steps, opts);
        auto t = make_array<double>({static_cast<py::ssize_t>(traj.size())});
        std::copy(traj.times().begin(), traj.times().end(), t.mutable_data());
        return py::make_tuple(t, to_array(traj.eps()), to_array(traj.deps()));
      },
      py::arg("kappa"), py::arg("omega"), py::arg("t_end"),
      py::arg("n_steps") = 1000, py::arg("tol") = 1e-10,
      "Returns (t, eps, deps) on n_steps + 1 uniform samples.");

  m.def(
      "gaussian_moments",
      [](cplx eps, cplx deps, cplx alpha) {
        const GaussianState s = gaussian_from_epsilon({eps, deps}, alpha);
        py::dict d;
        d["mean_q"] = s.mean_q;
        d["mean_p"] = s.mean_p;
        d["sigma_qq"] = s.sigma_qq;
        d["sigma_pp"] = s.sigma_pp;
        d["sigma_pq"] = s.sigma_pq;
        return d;
      },
      py::arg("eps"), py::arg("deps"), py::arg("alpha") = cplx{});

  m.def(
      "tomogram_cat",
      [](cplx alpha, bool odd, py::array_t<double, py::array::forcecast> X, double mu, double nu,
         double delta) {
        const CatSpec spec{alpha, odd ? Parity::kOdd : Parity::kEven};
        auto x = X.unchecked<1>();
        auto out = make_array<double>({x.shape(0)});
        auto o = out.mutable_unchecked<1>();
        for (py::ssize_t i = 0; i < x.shape(0); ++i) {
          o(i) = tomogram_cat(spec, {x(i), mu, nu, delta});
        }
        return out;
      },
      py::arg("alpha"), py::arg("odd") = false, py::arg("X"), py::arg("mu") = 1.0,
      py::arg("nu") = 0.0, py::arg("delta") = 0.0);

  m.def(
      "wigner_cat",
      [](cplx alpha, bool odd, double half_width, std::size_t count) {
        return grid_dict(sample_wigner(
            wigner_function(CatSpec{alpha, odd ? Parity::kOdd : Parity::kEven}),
            grid_spec(half_width, count)));
      },
      py::arg("alpha"), py::arg("odd") = false, py::arg("half_width") = 6.0,
      py::arg("count") = 121);

  m.def(
      "cat_sinogram",
      [](cplx alpha, bool odd, std::size_t phi_count, double x_max,
         std::size_t x_count) {
        const OpticalSinogram s = make_sinogram(
            tomogram_function(CatSpec{alpha, odd ? Parity::kOdd : Parity::kEven}),
            phi_count, {-x_max, x_max, x_count});
        return to_array(s.values, phi_count, x_count);
      },
      py::arg("alpha"), py::arg("odd") = false, py::arg("phi_count") = 180,
      py::arg("x_max") = 8.0, py::arg("x_count") = 257);

  m.def(
      "radon_reconstruct",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> sinogram,
         double x_max, double half_width, std::size_t count) {
        if (sinogram.ndim() != 2) throw std::invalid_argument("sinogram must be 2-D");
        OpticalSinogram s;
        s.phi_axis.count = static_cast<std::size_t>(sinogram.shape(0));
        s.x_axis = {-x_max, x_max, static_cast<std::size_t>(sinogram.shape(1))};
        s.values.assign(sinogram.data(), sinogram.data() + sinogram.size());
        return grid_dict(radon_reconstruct(s, grid_spec(half_width, count)));
      },
      py::arg("sinogram"), py::arg("x_max") = 8.0, py::arg("half_width") = 6.0,
      py::arg("count") = 121,
      "Filtered backprojection of a sinogram sampled at phi_i = i pi / N.");
}
