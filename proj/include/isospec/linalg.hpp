#pragma once

#include <Eigen/Dense>
#include <complex>
#include <random>
#include <vector>

namespace isospec {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using Cplx = std::complex<double>;

inline double frob(const Mat& m) { return m.norm(); }
inline double frob(const CMat& m) { return m.norm(); }

inline double skew_residual(const Mat& m) { return (m + m.transpose()).norm(); }

inline double orthogonality_residual(const Mat& m) {
  return (m.transpose() * m - Mat::Identity(m.cols(), m.cols())).norm();
}

inline double commutator_norm(const Mat& a, const Mat& b) { return (a * b - b * a).norm(); }
inline double anticommutator_norm(const Mat& a, const Mat& b) { return (a * b + b * a).norm(); }

// Deterministic RNG wrapper; every randomized routine takes one of these so a
// seeded run is reproducible end to end.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 1234567) : gen_(seed), seed_(seed) {}
  std::uint64_t seed() const { return seed_; }
  double gauss() { return normal_(gen_); }
  double uniform() { return unif_(gen_); }  // in [0,1)
  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }

  Vec gauss_vec(int n) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = gauss();
    return v;
  }
  Vec unit_vec(int n) {
    Vec v = gauss_vec(n);
    double nn = v.norm();
    while (nn < 1e-8) {
      v = gauss_vec(n);
      nn = v.norm();
    }
    return v / nn;
  }
  Mat gauss_mat(int r, int c) {
    Mat m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = gauss();
    return m;
  }
  // Haar-ish orthogonal matrix from the QR of a Gaussian matrix.
  Mat orthogonal(int n) {
    Eigen::HouseholderQR<Mat> qr(gauss_mat(n, n));
    Mat q = qr.householderQ();
    Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j)
      if (r(j, j) < 0) q.col(j) *= -1.0;
    return q;
  }
  Mat skew(int n) {
    Mat a = gauss_mat(n, n);
    return 0.5 * (a - a.transpose());
  }

 private:
  std::mt19937_64 gen_;
  std::uint64_t seed_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> unif_{0.0, 1.0};
};

// Kronecker product, used by the Clifford module constructions.
inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Rank of the span of a set of matrices viewed as vectors, with an explicit
// singular-value cutoff.
int span_rank(const std::vector<Mat>& mats, double tol);

// Symmetric square root / inverse square root via the deterministic Jacobi
// eigensolver (declared in eig.hpp, defined in eig.cpp).
Mat sym_sqrt(const Mat& s);
Mat sym_inv_sqrt(const Mat& s);

}  // namespace isospec
