#pragma once

#include "isospec/nilgeom.hpp"
#include "isospec/spectrum.hpp"

namespace isospec {

// Solvable extension SN of a nilpotent group on the half-space n x R_+, with
// metric scaling |d_t| = 1/c.
struct SolvGroup {
  MetricGroup nil;
  double c = 1.0;
  int k() const { return nil.k(); }
  int l() const { return nil.l(); }
  int dim() const { return nil.dim() + 1; }
};

struct SolvPoint {
  Vec x;
  Vec z;
  double t = 1.0;  // > 0
};

// Algebra element of s = v + z + t in the orthonormal frame (E_i, e_a, T).
struct SolvVector {
  Vec x;
  Vec z;
  double t = 0.0;
  SolvVector() = default;
  SolvVector(Vec x_, Vec z_, double t_) : x(std::move(x_)), z(std::move(z_)), t(t_) {}
  static SolvVector zero(int k, int l) { return {Vec::Zero(k), Vec::Zero(l), 0.0}; }
  SolvVector operator+(const SolvVector& o) const { return {x + o.x, z + o.z, t + o.t}; }
  SolvVector operator-(const SolvVector& o) const { return {x - o.x, z - o.z, t - o.t}; }
  SolvVector operator*(double s) const { return {s * x, s * z, s * t}; }
  double dot(const SolvVector& o) const { return x.dot(o.x) + z.dot(o.z) + t * o.t; }
  double norm() const { return std::sqrt(dot(*this)); }
};

SolvPoint multiply(const SolvGroup& g, const SolvPoint& p, const SolvPoint& q);
SolvPoint inverse(const SolvGroup& g, const SolvPoint& p);

// Coefficient matrix of the invariant frame (Y_i, V_a, T) at p in the
// coordinate basis (d_i, d_a, d_t).
Mat solv_frame(const SolvGroup& g, const SolvPoint& p);

// Covariant derivative of invariant fields; the T component is measured
// against the unit vector T.
SolvVector nabla_c(const SolvGroup& g, const SolvVector& p, const SolvVector& q);

// Curvature transformation and the Lambda^2 operator of the scaled metric.
SolvVector riemann_c(const SolvGroup& g, const SolvVector& u, const SolvVector& v, const SolvVector& w);
double riemann4_c(const SolvGroup& g, const SolvVector& u, const SolvVector& v, const SolvVector& w,
                  const SolvVector& s);
Mat curvature_operator_c(const SolvGroup& g);

double ricci_c(const SolvGroup& g, const SolvVector& u, const SolvVector& v);

// Invariant-subspace decomposition of Prop 1.3 for a sigma^{(a,b)} pair. The
// groups must come from sigma_ab_deform / clifford_space replications of the
// same irreducible block (dimension n per copy).
struct IsotonalBlock {
  std::string name;
  double invariance_residual = 0.0;
  SpectrumReport spectrum;
};
struct IsotonalReport {
  std::vector<IsotonalBlock> blocks_1, blocks_2;
  SpectrumReport total_1, total_2;
  SpectrumVerdict multiset, set;
  bool blocks_invariant = false;
  double max_invariance_residual = 0.0;
  // mixed-box reflection: F-box spectra {-Q^2 + u} vs Dg-perp-box {-Q^2 - u}
  double reflection_center = 0.0;    // fitted -Q^2
  double reflection_residual = 0.0;  // max deviation from the reflection law
  bool reflection_applicable = false;
  std::string to_text() const;
};
IsotonalReport isotonal_decomposition(const SolvGroup& g1, int a1, int b1, const SolvGroup& g2, int a2, int b2,
                                      int n_block, double tol = 1e-9);
// Nilpotent variant (operates on the curvature operator of N).
IsotonalReport isotonal_decomposition_nil(const MetricGroup& g1, int a1, int b1, const MetricGroup& g2, int a2,
                                          int b2, int n_block, double tol = 1e-9);

}  // namespace isospec
