#pragma once

#include "isospec/poly.hpp"
#include "isospec/profile.hpp"
#include "isospec/solvgeom.hpp"

namespace isospec {

// Point on a sphere-type hypersurface |X|^2 = D(|Z|^2[, t]). Construction
// validates the level-set equation at 1e-10 and refuses rim points
// (D < 1e-8).
struct SurfacePoint {
  Vec x;
  Vec z;
  double t = 1.0;
};

SurfacePoint make_surface_point(const Profile& prof, const Vec& x, const Vec& z, double t = 1.0);

// Places a point on the surface along the X-direction xdir at center (z[,t]).
SurfacePoint surface_point_at(const Profile& prof, const Vec& xdir, const Vec& z, double t = 1.0);

// --- normals --------------------------------------------------------------

AlgVector normal_nil(const MetricGroup& g, const Profile& prof, const SurfacePoint& p);
SolvVector normal_solv(const SolvGroup& g, const Profile& prof, const SurfacePoint& p);
// General boundary |X|^2 = delta2(Z) with a polynomial delta2 on the Z-space.
AlgVector normal_general(const MetricGroup& g, const GradedPoly& delta2, const SurfacePoint& p);

// Orthonormal tangent bases (algebra representation).
std::vector<AlgVector> tangent_basis_nil(const MetricGroup& g, const Profile& prof, const SurfacePoint& p);
std::vector<SolvVector> tangent_basis_solv(const SolvGroup& g, const Profile& prof, const SurfacePoint& p);

// --- second fundamental form -----------------------------------------------

// Case-formula evaluation (d_0 = D'/2 + tau D'', d_i = D'/2 in the adapted
// Z-basis; written basis-free below).
double second_fundamental_form_nil(const MetricGroup& g, const Profile& prof, const SurfacePoint& p,
                                   const AlgVector& u, const AlgVector& v);
double second_fundamental_form_solv(const SolvGroup& g, const Profile& prof, const SurfacePoint& p,
                                    const SolvVector& u, const SolvVector& v);

// Independent oracle: M(U,V) = <nabla_U nu, V> with the normal field
// differentiated through dual numbers along surface curves.
double sff_oracle_nil(const MetricGroup& g, const Profile& prof, const SurfacePoint& p, const AlgVector& u,
                      const AlgVector& v);
double sff_oracle_solv(const SolvGroup& g, const Profile& prof, const SurfacePoint& p, const SolvVector& u,
                       const SolvVector& v);

// Covariant derivative of the (unit-extended) normal field along u.
AlgVector covariant_normal_derivative_nil(const MetricGroup& g, const Profile& prof, const SurfacePoint& p,
                                          const AlgVector& u);
SolvVector covariant_normal_derivative_solv(const SolvGroup& g, const Profile& prof, const SurfacePoint& p,
                                            const SolvVector& u);

// Weingarten matrix in the given orthonormal tangent basis.
Mat weingarten_nil(const MetricGroup& g, const Profile& prof, const SurfacePoint& p,
                   const std::vector<AlgVector>& basis);
Mat weingarten_solv(const SolvGroup& g, const Profile& prof, const SurfacePoint& p,
                    const std::vector<SolvVector>& basis);

// --- induced curvature -----------------------------------------------------

// Cached per-point shape data: normal, orthonormal tangent basis, Weingarten
// matrix in that basis.
struct SurfaceShapeNil {
  AlgVector nu;
  std::vector<AlgVector> basis;
  Mat B;
  double trB = 0.0;
};
SurfaceShapeNil surface_shape_nil(const MetricGroup& g, const Profile& prof, const SurfacePoint& p);
struct SurfaceShapeSolv {
  SolvVector nu;
  std::vector<SolvVector> basis;
  Mat B;
  double trB = 0.0;
};
SurfaceShapeSolv surface_shape_solv(const SolvGroup& g, const Profile& prof, const SurfacePoint& p);

double induced_ricci_nil_cached(const MetricGroup& g, const SurfaceShapeNil& shape, const AlgVector& u,
                                const AlgVector& v);
double induced_ricci_solv_cached(const SolvGroup& g, const SurfaceShapeSolv& shape, const SolvVector& u,
                                 const SolvVector& v);

double induced_ricci_nil(const MetricGroup& g, const Profile& prof, const SurfacePoint& p, const AlgVector& u,
                         const AlgVector& v);
double scalar_curvature_nil(const MetricGroup& g, const Profile& prof, const SurfacePoint& p);
// trace route: kappa - 2 Ricc(nu,nu) + (Tr B)^2 - Tr(B^2)
double scalar_curvature_nil_trace(const MetricGroup& g, const Profile& prof, const SurfacePoint& p);

double induced_ricci_solv(const SolvGroup& g, const Profile& prof, const SurfacePoint& p, const SolvVector& u,
                          const SolvVector& v);
double scalar_curvature_solv(const SolvGroup& g, const Profile& prof, const SurfacePoint& p);
double scalar_curvature_solv_trace(const SolvGroup& g, const Profile& prof, const SurfacePoint& p);

// Closed rational form of the hypersurface scalar curvature at a point whose
// X lies in a common eigensubspace of L0 = J0^2 (eigenvalue lam0) and
// L_perp = sum_i J_i^2 (eigenvalue lam_perp), on groups whose endomorphisms
// satisfy the Heisenberg-type anticommutation relations (p2 = sum of squared
// per-direction eigenvalues of the perpendicular family at X). Derived from
// the Gauss equation; coefficients frozen from the symbolic derivation.
double scalar_curvature_closed_form(double tau, double D, double Dp, double Dpp, double lam0, double lam_perp,
                                    double p2, int k, int l);

// The same four ingredients separately (ambient kappa, -2 Ricc(nu,nu),
// (Tr B)^2, -Tr B^2), for term-by-term comparison against the Gauss-equation
// oracle.
struct ClosedFormTerms {
  double kappa_ambient = 0.0;
  double minus2_ricci_nu = 0.0;
  double trace_B_squared = 0.0;
  double minus_trace_B2 = 0.0;
  double total() const { return kappa_ambient + minus2_ricci_nu + trace_B_squared + minus_trace_B2; }
};
ClosedFormTerms scalar_curvature_closed_form_terms(double tau, double D, double Dp, double Dpp, double lam0,
                                                   double lam_perp, double p2, int k, int l);

// Solvable k=2, l=1, c=1 model closed form (complex-hyperbolic Hopf model).
double scalar_curvature_closed_form_solv(double tau, double t, double D, double Dp, double Dt, double Dpp,
                                         double Dpt, double Dtt);

// --- Hopf hulls -------------------------------------------------------------

struct HopfHullReport {
  bool total_geodesic = false;
  double worst_second_form_residual = 0.0;  // hull second form inside the surface
  double subalgebra_residual = 0.0;         // closure of span{X, J0 X, Z0} under nabla
  double lambda0 = 0.0;
  double lambda_perp = 0.0;
  int n_samples = 0;
};
HopfHullReport hopf_hull(const MetricGroup& g, const Profile& prof, const Vec& z0, const Vec& x0, int n_samples,
                         double tol = 1e-8);

struct HopfCurvatureReport {
  std::vector<double> tau;      // sample parameters
  std::vector<double> kappa;    // Hopf curvature values
  std::vector<double> dkappa;   // derivative along tau
  double min_abs_dkappa = 0.0;  // margin over the samples
  bool degenerate = false;      // profile with D' == 0 everywhere
  bool derivative_nonzero = false;
};
HopfCurvatureReport hopf_curvature(const Profile& prof, int n_samples = 50, double lam0 = -1.0);
// Solvable variant on the k=2, l=1, c=1 model; samples (tau, t) pairs.
HopfCurvatureReport hopf_curvature_solv(const Profile& prof, int n_samples = 30);

// --- adapted Ricci matrices on the quaternionic family ----------------------

struct RicciMatrixReport {
  Mat matrix;                  // in the adapted basis {K.., E_i, E_j, E_k, j, k[, t]}
  int dim_K = 0;
  double block_residual = 0.0;  // off-pattern entries
  double eps_K = 0.0;           // eigenvalue on the K block
  double E_ll = 0.0, E_LL = 0.0, E_zz = 0.0, A_lz = 0.0, B_lz = 0.0;
  double criterion = 0.0;       // (A^2 + B^2 - E_LL E_zz)^2
  // solvable extras
  double S_lt = 0.0, S_tt = 0.0;
  double distinctness_margin = 0.0;  // min |eps_K - other eigenvalues|
  double coupling_det = 0.0;         // S_ll S_tt - S_lt^2
};
RicciMatrixReport ricci_matrix_h3(const MetricGroup& g, const Profile& prof, const SurfacePoint& p, int a, int b);
RicciMatrixReport solv_ricci_matrix(const SolvGroup& g, const Profile& prof, const SurfacePoint& p, int a, int b);

// --- Cayley transform and geodesic spheres ---------------------------------

struct BallPoint {
  Vec x;
  Vec z;
  double u = 0.0;  // fourth ball coordinate (named u to avoid the group t)
};
SolvPoint cayley(const MetricGroup& g, const BallPoint& p);
BallPoint cayley_inverse(const MetricGroup& g, const SolvPoint& p);
Profile geodesic_sphere_profile(double s);

// --- tensor L ---------------------------------------------------------------

// Orthogonal projection of the bracket of rho + z~ (+ t) fields onto the
// complementary distribution K; returned as the K-component vector.
struct TensorLResult {
  Vec k_component;
  double norm = 0.0;
};
TensorLResult tensor_L_nil(const MetricGroup& g, const Profile& prof, const SurfacePoint& p, const AlgVector& u,
                           const AlgVector& v, int a, int b);
TensorLResult tensor_L_solv(const SolvGroup& g, const Profile& prof, const SurfacePoint& p, const SolvVector& u,
                            const SolvVector& v, int a, int b);

// --- boundary Laplacian -----------------------------------------------------

struct BoundaryFields {
  Vec nu_Z;          // Euclidean normal components of the Z cross-section
  Mat J_pairing;     // <J_a X, J_b X>
  double nu_t = 0.0; // solvable normal t-shift
  double t = 1.0, c = 1.0;
};
BoundaryFields boundary_laplacian_fields_nil(const MetricGroup& g, const Profile& prof, const SurfacePoint& p);
BoundaryFields boundary_laplacian_fields_solv(const SolvGroup& g, const Profile& prof, const SurfacePoint& p);

// Pointwise boundary Laplacian of a polynomial test function in the (x, z)
// coordinates: Delta f - Hess f(nu,nu) - (Tr B) nu(f).
double boundary_laplacian_apply_nil(const MetricGroup& g, const Profile& prof, const SurfacePoint& p,
                                    const GradedPoly& f);
double boundary_laplacian_apply_solv(const SolvGroup& g, const Profile& prof, const SurfacePoint& p,
                                     const GradedPoly& f);
// Ambient Laplacian of f at a point (nilpotent (1.5)-type sum / solvable
// scaled variant) for the oracle comparisons.
double ambient_laplacian_nil(const MetricGroup& g, const Vec& x, const Vec& z, const GradedPoly& f);
double ambient_laplacian_solv(const SolvGroup& g, const SurfacePoint& p, const GradedPoly& f);

}  // namespace isospec
