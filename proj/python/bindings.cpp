#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "crdiscs/circle.hpp"
#include "crdiscs/discs.hpp"
#include "crdiscs/families.hpp"
#include "crdiscs/hypersurface.hpp"

namespace py = pybind11;
using namespace crdiscs;
using Complex = std::complex<double>;

namespace {

using RealArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using ComplexArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

circle::BoundaryFunction to_real_function(const RealArray& a) {
  if (a.ndim() != 1) throw py::value_error("expected a 1-d array");
  return circle::BoundaryFunction::from_real(std::span<const double>(a.data(), a.size()));
}

circle::BoundaryFunction to_function(const ComplexArray& a) {
  if (a.ndim() != 1) throw py::value_error("expected a 1-d array");
  return circle::BoundaryFunction(std::vector<Complex>(a.data(), a.data() + a.size()));
}

RealArray real_array(const circle::BoundaryFunction& f) {
  const auto v = f.real_values();
  return RealArray(static_cast<py::ssize_t>(v.size()), v.data());
}

ComplexArray complex_array(const circle::BoundaryFunction& f) {
  const auto s = f.samples();
  return ComplexArray(static_cast<py::ssize_t>(s.size()), s.data());
}

hypersurface::HomogeneousPolynomial polynomial(const std::vector<std::tuple<int, int, double, double>>& recs) {
  std::vector<hypersurface::CoefficientRecord> r;
  for (const auto& [j, k, re, im] : recs) r.push_back({j, k, re, im});
  return hypersurface::HomogeneousPolynomial::from_records(r);
}

using Records = std::vector<std::tuple<int, int, double, double>>;

py::dict disc_dict(const discs::AnalyticDisc& d) {
  py::dict out;
  out["z"] = complex_array(d.z());
  out["w"] = complex_array(d.w());
  out["c"] = d.c();
  out["du_dtheta"] = discs::du_dtheta(d);
  const auto [ez, ew] = discs::exit_vector(d);
  out["exit_vector"] = py::make_tuple(ez, ew);
  out["negative_energy"] = d.negative_energy();
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Analytic discs attached to rigid hypersurfaces in C^2";

  py::register_exception<Error>(m, "CrdiscsError", PyExc_RuntimeError);

  // circle
  m.def("hilbert_transform", [](const RealArray& u) { return real_array(circle::hilbert_transform(to_real_function(u))); });
  m.def("pv_hilbert", [](const RealArray& u) { return real_array(circle::pv_hilbert(to_real_function(u))); });
  m.def("modified_hilbert", [](const RealArray& u) { return real_array(circle::modified_hilbert(to_real_function(u))); });
  m.def("spectral_derivative", [](const ComplexArray& u) { return complex_array(circle::spectral_derivative(to_function(u))); });
  m.def("poisson_extend", [](const RealArray& u, double r, double theta) {
    return circle::poisson_extend(to_real_function(u), r, theta);
  });
  m.def("holder_norm", [](const RealArray& u, int k, double alpha) {
    return circle::holder_norm(to_real_function(u), circle::HolderIndex(k, alpha));
  });

  // hypersurface
  m.def("eval_poly", [](const Records& r, Complex z) { return hypersurface::eval_poly(polynomial(r), z); });
  m.def("laplacian", [](const Records& r, Complex z) { return hypersurface::laplacian(polynomial(r), z); });
  m.def("sector_decomposition", [](const Records& r) {
    const auto map = hypersurface::sector_decomposition(polynomial(r));
    py::list sectors;
    for (const auto& s : map.sectors) sectors.append(py::make_tuple(s.theta_lo, s.theta_hi, hypersurface::to_string(s.label)));
    return py::make_tuple(map.flat_rays, sectors);
  });
  m.def("classify_point", [](const Records& r, Complex z, double tol) {
    return hypersurface::to_string(hypersurface::classify_point(hypersurface::RigidHypersurface(polynomial(r)), z, tol));
  }, py::arg("records"), py::arg("z"), py::arg("tol") = 1e-12);

  // discs
  m.def("attach_disc", [](const Records& r, const ComplexArray& z, double c) {
    const hypersurface::RigidHypersurface M(polynomial(r));
    return disc_dict(discs::attach_disc(M, discs::DiscGenerator(to_function(z)), c));
  }, py::arg("records"), py::arg("z"), py::arg("c") = 0.0);
  m.def("solve_bishop", [](const Records& r, const ComplexArray& z, double c, double tol, int max_iter) {
    const hypersurface::RigidHypersurface M(polynomial(r));
    discs::BishopOptions opts;
    opts.tol = tol;
    opts.max_iter = max_iter;
    auto sol = discs::solve_bishop(M.as_graph(), discs::DiscGenerator(to_function(z)), c, opts);
    auto out = disc_dict(sol.disc);
    out["iterations"] = sol.iterations;
    out["step_history"] = sol.step_history;
    return out;
  }, py::arg("records"), py::arg("z"), py::arg("c") = 0.0, py::arg("tol") = 1e-12, py::arg("max_iter") = 200);

  // families
  py::class_<families::EggFamily>(m, "EggFamily")
      .def_property_readonly("size", [](const families::EggFamily& f) { return f.members.size(); })
      .def_readonly("t1", &families::EggFamily::t1)
      .def_readonly("t2", &families::EggFamily::t2)
      .def("generator", [](const families::EggFamily& f, int n) { return complex_array(f.member(n).z.samples()); })
      .def("vertex", [](const families::EggFamily& f, int n) { return f.member(n).vertex; })
      .def("alpha", [](const families::EggFamily& f, int n) { return f.member(n).alpha; });

  m.def("make_egg_family", [](double theta_lo, double theta_hi, double q_modulus, int n_max, double beta,
                              std::size_t grid) {
    families::EggOptions opts;
    opts.grid = grid;
    return families::make_egg_family(families::SectorSpec::on_bisector(theta_lo, theta_hi, q_modulus), n_max,
                                     beta, opts);
  }, py::arg("theta_lo"), py::arg("theta_hi"), py::arg("q_modulus") = 1.0, py::arg("n_max") = 8,
     py::arg("beta") = 0.4, py::arg("grid") = families::kFamilyGrid);

  m.def("perturbation_slope", [](const families::EggFamily& fam, double epsilon, int n) {
    const auto tau = families::make_perturbation(fam.p_region, fam.q_region, epsilon);
    const auto tr = families::perturbation_slope(fam, tau, n);
    py::dict out;
    out["slope"] = tr.slope;
    out["slope_quadrature"] = tr.slope_quadrature;
    out["bound"] = tr.bound;
    out["floor"] = tr.floor;
    out["delta"] = tr.delta;
    out["delta_prime"] = tr.delta_prime;
    return out;
  });

  m.def("translation_experiment", [](const Records& r, const families::EggFamily& fam, double epsilon0) {
    const hypersurface::RigidHypersurface M(polynomial(r));
    const auto rep = families::translation_experiment(M, fam, epsilon0);
    py::list rows;
    for (const auto& row : rep.rows) rows.append(py::make_tuple(row.n, row.abs_c, row.diff));
    py::dict out;
    out["rows"] = rows;
    out["n0"] = rep.n0 ? py::cast(*rep.n0) : py::none();
    out["fitted_kc"] = rep.fitted_kc;
    return out;
  });
}
