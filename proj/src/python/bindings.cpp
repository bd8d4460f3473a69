#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "isospec/endospace.hpp"
#include "isospec/harmonics.hpp"
#include "isospec/hypersurface.hpp"
#include "isospec/solvgeom.hpp"
#include "isospec/spectra.hpp"

namespace py = pybind11;
using namespace isospec;

PYBIND11_MODULE(_core, m) {
  m.doc() = "isospectral-pair constructions on nilpotent groups and their solvable extensions";

  py::register_exception<Error>(m, "IsospecError");

  py::class_<EndoSpace>(m, "EndoSpace")
      .def_readonly("k", &EndoSpace::k)
      .def_readonly("l", &EndoSpace::l)
      .def_readonly("basis", &EndoSpace::basis)
      .def("J", &EndoSpace::J)
      .def("serialize", [](const EndoSpace& s) { return serialize_endo_space(s); });

  m.def("build_endo_space", &build_endo_space);
  m.def("clifford_space", &clifford_space, py::arg("l"), py::arg("a") = 1, py::arg("b") = 0);
  m.def("clifford_min_dim", &clifford_min_dim);
  m.def("parse_endo_space", &parse_endo_space);
  m.def("sigma_ab_deform", &sigma_ab_deform);
  m.def("sigma_A_deform", &sigma_A_deform);
  m.def("sigma_ab_matrix", &sigma_ab_matrix);
  m.def("is_anticommutator",
        [](const EndoSpace& s, const Vec& coeffs) {
          auto r = is_anticommutator(s, coeffs);
          return py::make_tuple(r.is_anticommutator, r.degenerate, r.residual);
        });
  m.def("rescale_to_unit", [](const Mat& A) {
    auto r = rescale_to_unit(A);
    return py::make_tuple(r.S, r.A0);
  });
  m.def("unit_endo_conjugator", [](const Mat& A0, const Mat& B0, const std::vector<Mat>& F) {
    auto u = unit_endo_conjugator(A0, B0, F);
    return py::make_tuple(u.sqrtD, u.S_hat, u.max_residual);
  });
  m.def("generated_lie_algebra_dim", &generated_lie_algebra_dim, py::arg("basis"), py::arg("tol") = 1e-9);
  m.def("nonconjugacy_certificate", [](const EndoSpace& a, const EndoSpace& b) {
    auto r = nonconjugacy_certificate(a, b);
    return py::make_tuple(r.distinguished, r.distinguishing_invariant, r.to_text());
  });

  py::class_<MetricGroup>(m, "MetricGroup")
      .def(py::init<EndoSpace>())
      .def_readonly("space", &MetricGroup::space)
      .def("dim", &MetricGroup::dim);
  py::class_<SolvGroup>(m, "SolvGroup")
      .def(py::init<MetricGroup, double>(), py::arg("nil"), py::arg("c") = 1.0)
      .def_readonly("nil", &SolvGroup::nil)
      .def_readonly("c", &SolvGroup::c);

  m.def("curvature_operator", &curvature_operator);
  m.def("curvature_operator_c", &curvature_operator_c);
  m.def("coordinate_metric", &coordinate_metric);
  m.def("ricci_eigenvalues_c", [](const SolvGroup& g) {
    SolvVector X = SolvVector::zero(g.k(), g.l());
    X.x[0] = 1.0;
    SolvVector Z = SolvVector::zero(g.k(), g.l());
    Z.z[0] = 1.0;
    SolvVector T = SolvVector::zero(g.k(), g.l());
    T.t = 1.0;
    return py::make_tuple(ricci_c(g, X, X), ricci_c(g, Z, Z), ricci_c(g, T, T));
  });
  m.def(
      "isotonal_report",
      [](const SolvGroup& g1, int a1, int b1, const SolvGroup& g2, int a2, int b2, int n_block) {
        auto r = isotonal_decomposition(g1, a1, b1, g2, a2, b2, n_block);
        return py::make_tuple(r.set.pass, r.multiset.pass, r.to_text());
      },
      py::arg("g1"), py::arg("a1"), py::arg("b1"), py::arg("g2"), py::arg("a2"), py::arg("b2"), py::arg("n_block"));

  m.def("harmonic_dim", &harmonic_dim);
  m.def("verify_intertwining",
        [](const EndoSpace& s, const EndoSpace& sp, int r_max, double tol) {
          auto cert = verify_intertwining(s, sp, r_max, tol);
          return py::make_tuple(cert.pass, cert.worst_residual, cert.to_text());
        },
        py::arg("space"), py::arg("space_p"), py::arg("r_max") = 4, py::arg("tol") = 1e-8);

  py::class_<Profile>(m, "Profile")
      .def_static("euclidean_sphere", &Profile::euclidean_sphere)
      .def_static("geodesic_sphere", &Profile::geodesic_sphere)
      .def("D", &Profile::D, py::arg("tau"), py::arg("t") = 1.0);
  py::class_<SurfacePoint>(m, "SurfacePoint")
      .def_readonly("x", &SurfacePoint::x)
      .def_readonly("z", &SurfacePoint::z)
      .def_readonly("t", &SurfacePoint::t);
  m.def("surface_point_at", &surface_point_at, py::arg("profile"), py::arg("xdir"), py::arg("z"),
        py::arg("t") = 1.0);
  m.def("scalar_curvature_nil", &scalar_curvature_nil);
  m.def("scalar_curvature_solv", &scalar_curvature_solv);
  m.def("scalar_curvature_closed_form", &scalar_curvature_closed_form);
  m.def("cayley", [](const MetricGroup& g, const Vec& x, const Vec& z, double u) {
    SolvPoint p = cayley(g, BallPoint{x, z, u});
    return py::make_tuple(p.x, p.z, p.t);
  });
  m.def("cayley_inverse", [](const MetricGroup& g, const Vec& x, const Vec& z, double t) {
    BallPoint p = cayley_inverse(g, SolvPoint{x, z, t});
    return py::make_tuple(p.x, p.z, p.u);
  });

  m.def("fourier_reduce_ground_energies", [](const MetricGroup& g, const Vec& beta, int N, int n) {
    ReducedOperator op = fourier_reduce(g, beta, N);
    return reduced_ground_energies(op, n);
  });
  m.def("exact_equivalence_route", [](const MetricGroup& g1, const MetricGroup& g2, const Vec& beta, int N) {
    auto r = exact_equivalence_route(g1, g2, beta, N);
    return py::make_tuple(r.pass, r.conj_residual, r.intertwine_residual);
  });
}
