#pragma once

#include "isospec/endospace.hpp"
#include "isospec/linalg.hpp"

namespace isospec {

// Element of the 2-step nilpotent algebra n = v + z.
struct AlgVector {
  Vec x;  // in R^k
  Vec z;  // in R^l
  AlgVector() = default;
  AlgVector(Vec x_, Vec z_) : x(std::move(x_)), z(std::move(z_)) {}
  static AlgVector zero(int k, int l) { return {Vec::Zero(k), Vec::Zero(l)}; }
  AlgVector operator+(const AlgVector& o) const { return {x + o.x, z + o.z}; }
  AlgVector operator-(const AlgVector& o) const { return {x - o.x, z - o.z}; }
  AlgVector operator*(double s) const { return {s * x, s * z}; }
  double dot(const AlgVector& o) const { return x.dot(o.x) + z.dot(o.z); }
  double norm() const { return std::sqrt(dot(*this)); }
};

// 2-step nilpotent metric Lie group determined by an endomorphism space.
struct MetricGroup {
  EndoSpace space;
  int k() const { return space.k; }
  int l() const { return space.l; }
  int dim() const { return space.k + space.l; }
};

// <[X,Y],Z> = <J_Z(X),Y>; the bracket lands in the center.
AlgVector bracket(const MetricGroup& g, const AlgVector& u, const AlgVector& v);

// Coefficient matrix of the left-invariant frame (X_i, Z_a) at the point with
// coordinates (x, z): column a holds the coordinate components of the a-th
// frame field. Z-translation invariance makes it depend on x only.
Mat invariant_frame(const MetricGroup& g, const Vec& x);

// Covariant derivative of left-invariant fields, evaluated at the origin
// values p, q.
AlgVector nabla(const MetricGroup& g, const AlgVector& p, const AlgVector& q);

// Curvature transformation R(U,V)W of the left-invariant metric.
AlgVector riemann(const MetricGroup& g, const AlgVector& u, const AlgVector& v, const AlgVector& w);

// <R(U,V)W,S>.
double riemann4(const MetricGroup& g, const AlgVector& u, const AlgVector& v, const AlgVector& w,
                const AlgVector& s);

// Matrix of the symmetric curvature operator on Lambda^2 n in the
// lexicographic (i<j) basis over the concatenated (x, z) coordinates.
// Entries are <R(b_i, b_j) b_k, b_l>.
Mat curvature_operator(const MetricGroup& g);

// Index pairs of the lexicographic Lambda^2 basis for an n-dimensional space.
std::vector<std::pair<int, int>> wedge_basis(int n);

double ricci(const MetricGroup& g, const AlgVector& u, const AlgVector& v);

struct HTensors {
  Mat Hv;  // k x k, H_v(X,X*) = sum_a <J_a X, J_a X*>
  Mat Hz;  // l x l, H_z(Z,Z*) = sum_i <J_Z E_i, J_Z* E_i>
};
HTensors H_tensors(const MetricGroup& g);

// Metric tensor in exponential coordinates at X (independent of z).
Mat coordinate_metric(const MetricGroup& g, const Vec& x);

struct IsometryReport {
  bool pass = false;
  double residual = 0.0;
};
// Checks A J_Z A^{-1} = J'_{C(Z)} on the Z-basis.
IsometryReport verify_isometry(const MetricGroup& g1, const MetricGroup& g2, const Mat& A_map, const Mat& C_map,
                               double tol = 1e-9);

}  // namespace isospec
