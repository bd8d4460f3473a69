#pragma once

#include <Eigen/SparseCore>
#include <memory>

#include "isospec/endospace.hpp"
#include "isospec/poly.hpp"

namespace isospec {

using DSparse = Eigen::SparseMatrix<double>;

// Theta_Q(X) = <Q + i A0(Q), X> for a unit anticommutator A0.
GradedPoly theta_poly(const Vec& Q, const Mat& A0);

// Jordan directions u_j whose pairs (u_j, A0 u_j) form an orthonormal frame;
// the complexified coordinates are Theta_{u_j}. A deformation pair shares the
// directions of its source structure.
std::vector<Vec> theta_frame_directions(const Mat& A0);
// Checks that (u_j, A0p u_j) is still an orthonormal frame (holds for every
// sigma-type deformation of the structure that produced the directions).
bool theta_frame_compatible(const std::vector<Vec>& dirs, const Mat& A0p, double tol = 1e-9);

// Directional derivative along the linear field X -> F(X).
GradedPoly d_op_apply(const Mat& F, const GradedPoly& p);

// Coefficients B_0..B_{smax} of the harmonic projection
// h(p) = sum_s B_s |X|^{2s} Lap^s p for homogeneous p of degree r on R^k,
// fixed by requiring the output to be harmonic:
// 2s (k + 2r - 2s - 2) B_s + B_{s-1} = 0.
std::vector<double> harmonic_recursion(int k, int r);
// The dimension-independent variant 2s(2(s+r)-1) B_s + B_{s-1} = 0, kept
// only so reports can document that it fails the harmonicity post-condition.
std::vector<double> harmonic_recursion_printed(int r);

// Projection onto harmonics along |X|^2 P^{(r-2)}; requires homogeneous
// input; idempotent on harmonics.
GradedPoly harmonic_project(const GradedPoly& p);

// dim H^(q) = C(k+q-1, q) - C(k+q-3, q-2).
long harmonic_dim(int k, int q);

// Spherical pieces of a homogeneous polynomial: p = sum_j |X|^{2j} h_{r-2j};
// returns h_r, h_{r-2}, ... (descending degree, possibly zero polys).
std::vector<GradedPoly> T_apply(const GradedPoly& p);
// Reassembles a degree-r homogeneous polynomial from spherical pieces.
GradedPoly T_invert(const std::vector<GradedPoly>& pieces, int r);

// Rewrites p through the complexified coordinates of A0 and reinterprets the
// exponents in the coordinates of A0p. Homogeneous input required.
GradedPoly kappa_star(const GradedPoly& p, const Mat& A0, const Mat& A0p);

// kappa = T' o kappa* o T^{-1} on harmonics; since kappa* commutes with
// |X|^2-multiplication, harmonic input h may serve as its own polynomial
// representative: kappa(h) = h'(kappa*(h)).
GradedPoly kappa(const GradedPoly& h, const Mat& A0, const Mat& A0p);

// Orthonormal basis of H^(q) built from harmonic projections of
// Theta-monomials, orthonormalized per (s, q-s) bigrade; the union realizes
// the D_A eigen-splitting at the same time.
class HarmonicBasis {
 public:
  // dirs: Theta frame directions; defaults to theta_frame_directions(A0).
  // Deformation pairs must be built with the source structure's directions.
  static HarmonicBasis build(const Mat& A0, int q, const std::vector<Vec>* dirs = nullptr);

  int k = 0, q = 0;
  Mat A0;
  std::vector<Vec> frame_dirs;
  std::vector<MultiIndex> mons;       // degree-q monomial table
  DSparse mom;                         // moment pairing on the table
  CMat basis;                          // mons x N, columns orthonormal in L2(S)
  std::vector<int> bigrade;            // s value per column (eigenvalue (2s-q) i)
  std::vector<int> bigrade_offset;     // column ranges per s (size q+2)
  CMat theta_proj;                     // mons x N_P: h(theta-monomial_j) coefficients
  CMat mgs_coeffs;                     // N_P x N: basis = theta_proj * mgs_coeffs

  int N() const { return static_cast<int>(basis.cols()); }
  GradedPoly poly(int j) const;
  CVec coords(const GradedPoly& p) const;  // <p, eta_i>, p homogeneous of degree q
  CVec coords_vec(const CVec& coeffs) const;
  CVec to_coeff_vec(const GradedPoly& p) const;
  GradedPoly from_coeff_vec(const CVec& v) const;
};

// Reproducing kernel of H^(q) against the surface measure:
// int_S K(X) psi(X) dsigma = psi(Qu) for psi in H^(q).
GradedPoly zonal_kernel(const HarmonicBasis& hb, const Vec& Qu);

struct HqSplit {
  std::vector<int> dims;            // per s = 0..q
  double max_eigen_residual = 0.0;  // worst |D_A eta - (2s-q) i eta|_{L2(S)}
  bool complete = false;            // sum dims == dim H^(q)
};
HqSplit hq_split(const HarmonicBasis& hb);

// Matrix of the directional-derivative operator on H^(q) in the basis.
CMat dop_matrix(const HarmonicBasis& hb, const Mat& F);

struct OperatorMatrix {
  std::string domain, codomain;
  CMat m;
};

// Multiplication by a homogeneous quadratic polynomial followed by the
// spherical re-projection; components land in degrees q+2, q, q-2. Blocks
// are produced only for the degrees whose bases are supplied (nullptr skips).
struct MultProjectOp {
  OperatorMatrix up, same, down;
  double lower_leak = 0.0;  // largest piece below degree q-2 (should vanish)
};
MultProjectOp mult_project_operator(const GradedPoly& multiplier, const HarmonicBasis& hq,
                                    const HarmonicBasis* hq_up, const HarmonicBasis* hq_down);

// Matrix of kappa: H^(q) of src -> H^(q) of dst, in the two bases.
CMat kappa_matrix(const HarmonicBasis& src, const HarmonicBasis& dst);

// Certificate of Main Theorem-style intertwining on truncations: for every
// degree r <= r_max, kappa conjugates the operator families of the boundary
// Laplacian (spherical Laplacian eigenvalue, D_alpha for every alpha,
// multiplication-projection for perpendicular pairs, |J_A X|^2
// multiplication) within the residual tolerance.
struct FamilyResidual {
  std::string family;
  int degree = 0;
  double residual = 0.0;
  bool pass = false;
};
struct IntertwiningCertificate {
  bool pass = false;
  double worst_residual = 0.0;
  std::vector<FamilyResidual> entries;
  double identity_residual_J0c = 0.0;    // max coeff of <J_A X, J_c X> as a polynomial
  double expansion_residual = 0.0;       // J_cd minus its complexified expansion
  double vanishing_part_residual = 0.0;  // the part of the expansion that must vanish
  std::string to_text() const;
};
IntertwiningCertificate verify_intertwining(const EndoSpace& space, const EndoSpace& space_p, int r_max,
                                            double tol = 1e-8);

}  // namespace isospec
