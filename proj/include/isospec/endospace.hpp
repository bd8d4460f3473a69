#pragma once

#include <optional>
#include <string>
#include <vector>

#include "isospec/linalg.hpp"

namespace isospec {

// A single skew endomorphism of the X-space. Construction checks skewness at
// 1e-12; the integer-exact builders (pauli, quaternion, Cayley, replication)
// produce exactly skew matrices.
struct SkewEndo {
  Mat mat;
  explicit SkewEndo(Mat m);
  int dim() const { return static_cast<int>(mat.rows()); }
};

// Basis of skew endomorphisms J_1..J_l on R^k, the images of an orthonormal
// Z-basis. The Z inner product declares the basis orthonormal unless an
// explicit Gram matrix is supplied.
struct EndoSpace {
  int k = 0;
  int l = 0;
  std::vector<Mat> basis;
  std::vector<std::string> labels;
  std::optional<int> anticommutator_index;  // distinguished A, when known
  std::optional<Mat> gram;                  // optional Z Gram matrix, default identity

  Mat J(const Vec& z) const;  // J_Z = sum z_a J_a
  bool has_label(const std::string& s) const;
};

EndoSpace build_endo_space(const std::vector<Mat>& mats);

// The four 2x2 blocks: one, i (rotation generator), j, k. i*i = -one,
// j*j = k*k = one, ij = -ji = k, ki = -ik = j, kj = -jk = i.
struct PauliBlocks {
  Mat one, i, j, k;
};
PauliBlocks pauli_blocks();

// Heisenberg-type (Cliffordian) endomorphism space on R^{n_l (a+b)}.
// Irreducible modules: l=1 rotation generator, l=2,3 quaternion left
// products, l=4..7 subsets of the Cayley right products on R^8, l=8..10 by
// doubling l-1 generators G_a on R^n to {i (x) Id} u {j (x) G_a} on R^{2n}.
// Any l whose construction misses the minimal dimension n_l reports
// UnsupportedL. The distinguished anticommutator is basis index 0 and gets
// the sign flip on the last b copies.
EndoSpace clifford_space(int l, int a, int b);

// Minimal irreducible Clifford module dimension n_l.
int clifford_min_dim(int l);

struct AnticommutatorReport {
  bool is_anticommutator = false;  // non-degenerate and anticommutes with complement
  bool degenerate = false;
  double residual = 0.0;  // max |AB + BA| over a complement spanning set
  double min_singular_value = 0.0;
};
// A is given by its coefficients in the basis; the complement is taken with
// respect to the Z inner product.
AnticommutatorReport is_anticommutator(const EndoSpace& space, const Vec& a_coeffs, double tol = 1e-10);

struct JordanForm {
  Mat basis_change;                                  // orthogonal Q, columns are the Jordan basis
  std::vector<std::pair<double, int>> block_sizes;   // (a_c >= 0, multiplicity m_c)
  Mat transformed_A;                                 // Q^T A Q, block diagonal with a_c * i blocks
  std::vector<Mat> transformed_perp;                 // Q^T F Q for a complement basis
  double structure_residual = 0.0;  // worst deviation from the j/k block pattern
};
JordanForm jordan_normalize(const EndoSpace& space, const Vec& a_coeffs);

EndoSpace sigma_ab_deform(const EndoSpace& space, int a_index, int a, int b);
EndoSpace sigma_A_deform(const EndoSpace& space, int a_index, const Mat& sigma);

// The involution of the (a,b) replication: +Id on the first a copies, -Id on
// the last b copies.
Mat sigma_ab_matrix(int n, int a, int b);

struct UnitEndoConjugator {
  Mat sqrtD;  // orthogonal
  Mat S_hat;  // symmetric involution with sqrtD B0 sqrtD^{-1} = S_hat A0
  double max_residual = 0.0;
};
UnitEndoConjugator unit_endo_conjugator(const Mat& A0, const Mat& B0, const std::vector<Mat>& F_list);

struct UnitRescale {
  Mat S;   // symmetric positive, S = (-A^2)^{1/2}
  Mat A0;  // unit anticommutator with A = S A0
};
UnitRescale rescale_to_unit(const Mat& A);

struct SpectralEquivalenceReport {
  bool pass = false;
  double max_deviation = 0.0;
  int n_samples = 0;
};
SpectralEquivalenceReport verify_spectral_equivalence(const EndoSpace& s1, const EndoSpace& s2, const Mat& C_map,
                                                      int n_samples, Rng& rng, double tol = 1e-9);

struct NonconjugacyReport {
  bool distinguished = false;
  std::string distinguishing_invariant;  // empty when inconclusive
  int lie_dim_1 = 0, lie_dim_2 = 0;
  Vec sumJ2_spec_1, sumJ2_spec_2;
  Vec Hz_spec_1, Hz_spec_2;
  std::string to_text() const;
};
NonconjugacyReport nonconjugacy_certificate(const EndoSpace& s1, const EndoSpace& s2);

// Dimension of the matrix Lie algebra generated by the basis under iterated
// commutators (rank decisions at 1e-9).
int generated_lie_algebra_dim(const std::vector<Mat>& basis, double tol = 1e-9);

// Structured-text serialization; integer-valued entries round-trip exactly.
std::string serialize_endo_space(const EndoSpace& s);
EndoSpace parse_endo_space(const std::string& text);

}  // namespace isospec
