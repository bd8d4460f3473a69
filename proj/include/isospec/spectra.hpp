#pragma once

#include <Eigen/SparseCore>

#include "isospec/nilgeom.hpp"
#include "isospec/spectrum.hpp"

namespace isospec {

using CSparse = Eigen::SparseMatrix<Cplx>;

// Z-Fourier reduced operator on the X-space for frequency beta:
//   B f = Lap_X f - 4 pi^2 |beta|^2 f - pi^2 |J_beta X|^2 f - 2 pi i D_beta f,
// assembled on the product-Hermite-function basis truncated at total degree
// N. Matrix elements are exact (operators are composed on an enlarged index
// set before restriction), so the band structure |deg m - deg n| <= 2 holds
// to machine precision. The matrix is Hermitian: the first-order term is i
// times a real skew operator.
struct ReducedOperator {
  Vec beta;
  Mat J_beta;
  int N = 0;
  int dim = 0;
  std::vector<std::vector<int>> index_set;  // Hermite multi-indices, total degree <= N
  CSparse matrix;
  double band_residual = 0.0;  // largest entry violating the degree-2 band
  double hermitian_residual = 0.0;
};

ReducedOperator fourier_reduce(const MetricGroup& g, const Vec& beta, int N);

// The n smallest energies of -B (ground states sit far from the truncation
// boundary, so these are the eigenvalues the truncation resolves). Dense
// Jacobi for dim <= 2000, deterministic Lanczos beyond.
std::vector<double> reduced_ground_energies(const ReducedOperator& op, int n);

// Full-spectrum report of a symmetric (or Hermitian) matrix.
SpectrumReport eigs_sym(const Mat& m, double cluster_tol = 1e-7, const std::string& provenance = "eigs_sym");
SpectrumReport eigs_herm(const CMat& m, double cluster_tol = 1e-7, const std::string& provenance = "eigs_herm");

// ||K P - P' K|| / (||K|| (||P|| + ||P'||)).
double conjugation_residual(const CMat& P, const CMat& Pp, const CMat& K);

// Orthogonal O with O J O^T = J' for unit skew J, J' (Jordan pairing route).
Mat conjugating_orthogonal(const Mat& J, const Mat& Jp);

// Unitary action of an orthogonal coordinate change on the Hermite basis
// (block diagonal per oscillator level): the matrix of f -> f after rotating
// coordinates by O, restricted to total degree <= N.
CMat hermite_rotation_matrix(const Mat& O, int k, int N);

// Exact unitary-equivalence route: residual of U B - B' U over the interior
// window (rows/cols of degree <= N - 2), with U induced by O J_beta O^T =
// J'_beta.
struct ExactRouteReport {
  double conj_residual = 0.0;      // ||O J O^T - J'||
  double intertwine_residual = 0.0;
  bool pass = false;
};
ExactRouteReport exact_equivalence_route(const MetricGroup& g1, const MetricGroup& g2, const Vec& beta, int N,
                                         double tol = 1e-8);

}  // namespace isospec
