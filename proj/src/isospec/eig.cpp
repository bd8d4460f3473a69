#include "isospec/eig.hpp"

#include <algorithm>
#include <cmath>

#include "isospec/errors.hpp"

namespace isospec {

namespace {

double offdiag_norm(const Mat& a) {
  double s = 0;
  for (int p = 0; p < a.rows(); ++p)
    for (int q = 0; q < a.cols(); ++q)
      if (p != q) s += a(p, q) * a(p, q);
  return std::sqrt(s);
}

double offdiag_norm(const CMat& a) {
  double s = 0;
  for (int p = 0; p < a.rows(); ++p)
    for (int q = 0; q < a.cols(); ++q)
      if (p != q) s += std::norm(a(p, q));
  return std::sqrt(s);
}

template <typename EigT, typename MatT>
void sort_ascending(EigT& e, MatT& v) {
  const int n = static_cast<int>(e.size());
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return e[a] < e[b]; });
  EigT es(n);
  MatT vs(v.rows(), n);
  for (int i = 0; i < n; ++i) {
    es[i] = e[idx[i]];
    vs.col(i) = v.col(idx[i]);
  }
  e = es;
  v = vs;
}

}  // namespace

EigenSym jacobi_eigensym(const Mat& m, double off_tol, int max_sweeps) {
  if (m.rows() != m.cols()) fail(ErrorKind::NotSymmetric, "matrix not square");
  const int n = static_cast<int>(m.rows());
  Mat a = 0.5 * (m + m.transpose());
  Mat v = Mat::Identity(n, n);
  const double scale = std::max(a.norm(), 1e-300);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (offdiag_norm(a) <= off_tol * scale) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double theta = 0.5 * (a(q, q) - a(p, p)) / apq;
        double t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        if (theta < 0) t = -t;
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int i = 0; i < n; ++i) {
          const double aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(i, q) = s * aip + c * aiq;
        }
        for (int i = 0; i < n; ++i) {
          const double api = a(p, i), aqi = a(q, i);
          a(p, i) = c * api - s * aqi;
          a(q, i) = s * api + c * aqi;
        }
        for (int i = 0; i < n; ++i) {
          const double vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
  }
  EigenSym out;
  out.values = a.diagonal();
  out.vectors = v;
  sort_ascending(out.values, out.vectors);
  return out;
}

EigenHerm jacobi_eigenherm(const CMat& m, double off_tol, int max_sweeps) {
  if (m.rows() != m.cols()) fail(ErrorKind::NotSymmetric, "matrix not square");
  const int n = static_cast<int>(m.rows());
  CMat a = 0.5 * (m + m.adjoint());
  CMat v = CMat::Identity(n, n);
  const double scale = std::max(a.norm(), 1e-300);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (offdiag_norm(a) <= off_tol * scale) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const Cplx apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag <= 1e-300) continue;
        // Phase e^{i phi} with apq = |apq| e^{i phi}; rotate so the 2x2 block
        // becomes real symmetric, then apply the classical Jacobi rotation.
        const Cplx phase = apq / mag;
        const double theta = 0.5 * (a(q, q).real() - a(p, p).real()) / mag;
        double t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        if (theta < 0) t = -t;
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Cplx sp = s * phase;  // column-q mixing factor carries the phase
        for (int i = 0; i < n; ++i) {
          const Cplx aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip - std::conj(sp) * aiq;
          a(i, q) = sp * aip + c * aiq;
        }
        for (int i = 0; i < n; ++i) {
          const Cplx api = a(p, i), aqi = a(q, i);
          a(p, i) = c * api - sp * aqi;
          a(q, i) = std::conj(sp) * api + c * aqi;
        }
        for (int i = 0; i < n; ++i) {
          const Cplx vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - std::conj(sp) * viq;
          v(i, q) = sp * vip + c * viq;
        }
      }
    }
  }
  EigenHerm out;
  out.values = a.diagonal().real();
  out.vectors = v;
  sort_ascending(out.values, out.vectors);
  return out;
}

std::vector<double> lanczos_lowest(const std::function<CVec(const CVec&)>& apply, int dim, int n_eigs, int max_iter,
                                   double tol) {
  const int m = std::min(max_iter, dim);
  std::vector<CVec> basis;
  basis.reserve(m);
  CVec v = CVec::Ones(dim);
  v /= v.norm();
  basis.push_back(v);
  std::vector<double> alpha, beta;
  std::vector<double> prev(n_eigs, 1e300);
  for (int it = 0; it < m; ++it) {
    CVec w = apply(basis[it]);
    double a = (basis[it].adjoint() * w)(0).real();
    alpha.push_back(a);
    w -= a * basis[it];
    if (it > 0) w -= beta[it - 1] * basis[it - 1];
    // full reorthogonalization keeps the recursion deterministic and stable
    for (int pass = 0; pass < 2; ++pass)
      for (const CVec& b : basis) w -= (b.adjoint() * w)(0) * b;
    const double nb = w.norm();
    const int kcur = it + 1;
    if (kcur >= n_eigs + 2 || nb < 1e-14) {
      Mat t = Mat::Zero(kcur, kcur);
      for (int i = 0; i < kcur; ++i) t(i, i) = alpha[i];
      for (int i = 0; i + 1 < kcur; ++i) t(i, i + 1) = t(i + 1, i) = beta[i];
      EigenSym es = jacobi_eigensym(t);
      const int k = std::min<int>(n_eigs, kcur);
      std::vector<double> cur(es.values.data(), es.values.data() + k);
      bool conv = (static_cast<int>(cur.size()) == n_eigs);
      if (conv)
        for (int i = 0; i < n_eigs; ++i)
          if (std::abs(cur[i] - prev[i]) > tol * std::max(1.0, std::abs(cur[i]))) conv = false;
      if (conv || nb < 1e-14 || it == m - 1) {
        cur.resize(std::min<int>(n_eigs, cur.size()));
        return cur;
      }
      prev.assign(n_eigs, 1e300);
      for (int i = 0; i < std::min<int>(n_eigs, cur.size()); ++i) prev[i] = cur[i];
    }
    beta.push_back(nb);
    basis.push_back(w / nb);
  }
  return prev;
}

Mat sym_sqrt(const Mat& s) {
  EigenSym es = jacobi_eigensym(s);
  Vec d = es.values;
  for (int i = 0; i < d.size(); ++i) d[i] = std::sqrt(std::max(0.0, d[i]));
  return es.vectors * d.asDiagonal() * es.vectors.transpose();
}

Mat sym_inv_sqrt(const Mat& s) {
  EigenSym es = jacobi_eigensym(s);
  Vec d = es.values;
  for (int i = 0; i < d.size(); ++i) d[i] = 1.0 / std::sqrt(std::max(1e-300, d[i]));
  return es.vectors * d.asDiagonal() * es.vectors.transpose();
}

int span_rank(const std::vector<Mat>& mats, double tol) {
  if (mats.empty()) return 0;
  const int n = static_cast<int>(mats.size());
  Mat gram(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gram(i, j) = (mats[i].array() * mats[j].array()).sum();
  EigenSym es = jacobi_eigensym(gram);
  double top = std::max(es.values.cwiseAbs().maxCoeff(), 1e-300);
  int rank = 0;
  for (int i = 0; i < n; ++i)
    if (es.values[i] > tol * tol * top) ++rank;
  return rank;
}

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::NonSkew: return "NonSkew";
    case ErrorKind::DependentBasis: return "DependentBasis";
    case ErrorKind::UnsupportedL: return "UnsupportedL";
    case ErrorKind::NotAnticommutator: return "NotAnticommutator";
    case ErrorKind::Degenerate: return "Degenerate";
    case ErrorKind::NotUnit: return "NotUnit";
    case ErrorKind::NotAnticommuting: return "NotAnticommuting";
    case ErrorKind::BadSigma: return "BadSigma";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotHomogeneous: return "NotHomogeneous";
    case ErrorKind::SingularTruncation: return "SingularTruncation";
    case ErrorKind::UnexpectedEigenvalue: return "UnexpectedEigenvalue";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::OffSurface: return "OffSurface";
    case ErrorKind::RimPoint: return "RimPoint";
    case ErrorKind::NotTangent: return "NotTangent";
    case ErrorKind::NotEigenvector: return "NotEigenvector";
    case ErrorKind::NotInDistribution: return "NotInDistribution";
    case ErrorKind::WrongGroupFamily: return "WrongGroupFamily";
    case ErrorKind::BlockNotInvariant: return "BlockNotInvariant";
    case ErrorKind::OutsideBall: return "OutsideBall";
    case ErrorKind::BadInput: return "BadInput";
  }
  return "Unknown";
}

}  // namespace isospec
