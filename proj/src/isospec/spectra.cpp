#include "isospec/spectra.hpp"

#include <cmath>
#include <functional>
#include <map>

#include "isospec/eig.hpp"
#include "isospec/errors.hpp"
#include "isospec/poly.hpp"

namespace isospec {

namespace {

std::vector<std::vector<int>> hermite_index_set(int k, int N) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(k, 0);
  std::function<void(int, int)> rec = [&](int pos, int budget) {
    if (pos == k) {
      out.push_back(cur);
      return;
    }
    for (int e = 0; e <= budget; ++e) {
      cur[pos] = e;
      rec(pos + 1, budget - e);
    }
    cur[pos] = 0;
  };
  rec(0, N);
  return out;
}

int total_degree(const std::vector<int>& n) {
  int d = 0;
  for (int e : n) d += e;
  return d;
}

struct HermiteAlgebra {
  int k, N;
  std::vector<std::vector<int>> idx;  // enlarged set, degree <= N + 2
  std::map<std::vector<int>, int> pos;
  std::vector<CSparse> X, P;  // position and derivative operators

  HermiteAlgebra(int k_, int N_) : k(k_), N(N_) {
    idx = hermite_index_set(k, N + 2);
    for (int i = 0; i < static_cast<int>(idx.size()); ++i) pos[idx[i]] = i;
    const int d = static_cast<int>(idx.size());
    X.assign(k, CSparse(d, d));
    P.assign(k, CSparse(d, d));
    std::vector<Eigen::Triplet<Cplx>> tx, tp;
    for (int v = 0; v < k; ++v) {
      tx.clear();
      tp.clear();
      for (int i = 0; i < d; ++i) {
        const int n = idx[i][v];
        // x h_n = sqrt((n+1)/2) h_{n+1} + sqrt(n/2) h_{n-1}
        // d h_n = -sqrt((n+1)/2) h_{n+1} + sqrt(n/2) h_{n-1}
        std::vector<int> up = idx[i];
        up[v] += 1;
        auto it = pos.find(up);
        if (it != pos.end()) {
          tx.push_back({it->second, i, std::sqrt(0.5 * (n + 1))});
          tp.push_back({it->second, i, -std::sqrt(0.5 * (n + 1))});
        }
        if (n > 0) {
          std::vector<int> dn = idx[i];
          dn[v] -= 1;
          const int j = pos.at(dn);
          tx.push_back({j, i, std::sqrt(0.5 * n)});
          tp.push_back({j, i, std::sqrt(0.5 * n)});
        }
      }
      X[v].setFromTriplets(tx.begin(), tx.end());
      P[v].setFromTriplets(tp.begin(), tp.end());
    }
  }
};

}  // namespace

ReducedOperator fourier_reduce(const MetricGroup& g, const Vec& beta, int N) {
  if (N < 2) fail(ErrorKind::BadInput, "need N >= 2");
  const int k = g.k();
  HermiteAlgebra alg(k, N);
  const int dbig = static_cast<int>(alg.idx.size());
  CSparse op(dbig, dbig);
  // Lap_X
  for (int v = 0; v < k; ++v) op += CSparse(alg.P[v] * alg.P[v]);
  // -4 pi^2 |beta|^2
  {
    CSparse id(dbig, dbig);
    id.setIdentity();
    op -= Cplx(4.0 * M_PI * M_PI * beta.squaredNorm()) * id;
  }
  // -pi^2 |J_beta X|^2 = -pi^2 x^T (J^T J) x
  Mat Jb = g.space.J(beta);
  Mat S = Jb.transpose() * Jb;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (S(i, j) != 0.0) op -= Cplx(M_PI * M_PI * S(i, j)) * CSparse(alg.X[i] * alg.X[j]);
  // -2 pi i D_beta, with D_beta f = <grad f, J_beta x> = sum_{ij} (J_beta)_{ij} x_j d_i f
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (Jb(i, j) != 0.0) op -= Cplx(0, 2.0 * M_PI * Jb(i, j)) * CSparse(alg.X[j] * alg.P[i]);

  // restrict to total degree <= N
  std::vector<int> keep;
  for (int i = 0; i < dbig; ++i)
    if (total_degree(alg.idx[i]) <= N) keep.push_back(i);
  std::vector<int> where(dbig, -1);
  for (int i = 0; i < static_cast<int>(keep.size()); ++i) where[keep[i]] = i;

  ReducedOperator out;
  out.beta = beta;
  out.J_beta = Jb;
  out.N = N;
  out.dim = static_cast<int>(keep.size());
  for (int i : keep) out.index_set.push_back(alg.idx[i]);
  std::vector<Eigen::Triplet<Cplx>> trip;
  for (int c = 0; c < dbig; ++c) {
    if (where[c] < 0) continue;
    for (CSparse::InnerIterator it(op, c); it; ++it) {
      if (where[it.row()] < 0) continue;
      trip.push_back({where[it.row()], where[c], it.value()});
    }
  }
  out.matrix = CSparse(out.dim, out.dim);
  out.matrix.setFromTriplets(trip.begin(), trip.end());

  double band = 0.0, herm = 0.0;
  CSparse adj = CSparse(out.matrix.adjoint());
  CSparse diff = out.matrix - adj;
  for (int c = 0; c < out.dim; ++c) {
    for (CSparse::InnerIterator it(out.matrix, c); it; ++it)
      if (std::abs(total_degree(out.index_set[it.row()]) - total_degree(out.index_set[c])) > 2)
        band = std::max(band, std::abs(it.value()));
    for (CSparse::InnerIterator it(diff, c); it; ++it) herm = std::max(herm, std::abs(it.value()));
  }
  out.band_residual = band;
  out.hermitian_residual = herm;
  return out;
}

std::vector<double> reduced_ground_energies(const ReducedOperator& op, int n) {
  if (op.dim <= 2000) {
    CMat dense = -CMat(op.matrix);
    EigenHerm eh = jacobi_eigenherm(dense);
    std::vector<double> out;
    for (int i = 0; i < std::min(n, op.dim); ++i) out.push_back(eh.values[i]);
    return out;
  }
  const CSparse& m = op.matrix;
  auto apply_neg = [&](const CVec& v) { return CVec(-(m * v)); };
  return lanczos_lowest(apply_neg, op.dim, n);
}

SpectrumReport eigs_sym(const Mat& m, double cluster_tol, const std::string& provenance) {
  if ((m - m.transpose()).norm() > 1e-10 * std::max(1.0, m.norm()))
    fail(ErrorKind::NotSymmetric, "matrix is not symmetric");
  return SpectrumReport::from_values(jacobi_eigensym(m).values, cluster_tol, provenance);
}

SpectrumReport eigs_herm(const CMat& m, double cluster_tol, const std::string& provenance) {
  if ((m - m.adjoint()).norm() > 1e-10 * std::max(1.0, m.norm()))
    fail(ErrorKind::NotSymmetric, "matrix is not Hermitian");
  return SpectrumReport::from_values(jacobi_eigenherm(m).values, cluster_tol, provenance);
}

double conjugation_residual(const CMat& P, const CMat& Pp, const CMat& K) {
  if (K.cols() != P.rows() || Pp.rows() != K.rows() || P.rows() != P.cols() || Pp.rows() != Pp.cols())
    fail(ErrorKind::ShapeMismatch, "incompatible shapes");
  const double denom = K.norm() * (P.norm() + Pp.norm());
  if (denom < 1e-300) return 0.0;
  return (K * P - Pp * K).norm() / denom;
}

Mat conjugating_orthogonal(const Mat& J, const Mat& Jp) {
  const int k = static_cast<int>(J.rows());
  if ((J * J + Mat::Identity(k, k)).norm() > 1e-9 || (Jp * Jp + Mat::Identity(k, k)).norm() > 1e-9)
    fail(ErrorKind::NotUnit, "conjugating_orthogonal expects unit structures");
  auto pairing = [&](const Mat& A) {
    Mat Q(k, k);
    int col = 0;
    std::vector<Vec> chosen;
    auto project_out = [&](Vec v) {
      for (const Vec& w : chosen) v -= w * w.dot(v);
      return v;
    };
    for (int seed = 0; seed < k && col < k; ++seed) {
      Vec u = project_out(Vec::Unit(k, seed));
      if (u.norm() < 1e-8) continue;
      u.normalize();
      Vec v = project_out(A * u);
      v.normalize();
      chosen.push_back(u);
      chosen.push_back(v);
      Q.col(col++) = u;
      Q.col(col++) = v;
    }
    if (col != k) fail(ErrorKind::Degenerate, "pairing failed");
    return Q;
  };
  Mat Q = pairing(J), Qp = pairing(Jp);
  return Qp * Q.transpose();
}

CMat hermite_rotation_matrix(const Mat& O, int k, int N) {
  // In Bargmann coordinates the rotation acts on creation operators by O;
  // the state with Hermite index n corresponds to z^n / sqrt(n!), so the
  // image coefficients come from expanding prod_i (sum_j O_ji z_j)^{n_i}.
  auto idx = hermite_index_set(k, N);
  std::map<std::vector<int>, int> pos;
  for (int i = 0; i < static_cast<int>(idx.size()); ++i) pos[idx[i]] = i;
  const int d = static_cast<int>(idx.size());
  CMat U = CMat::Zero(d, d);
  std::vector<GradedPoly> lin;
  for (int i = 0; i < k; ++i) {
    CVec c(k);
    for (int j = 0; j < k; ++j) c[j] = O(j, i);
    lin.push_back(GradedPoly::linear(c));
  }
  auto log_fact = [](int n) {
    double s = 0;
    for (int t = 2; t <= n; ++t) s += std::log(double(t));
    return s;
  };
  for (int col = 0; col < d; ++col) {
    GradedPoly p = GradedPoly::constant(k, 1.0);
    double lf_n = 0.0;
    for (int v = 0; v < k; ++v) {
      for (int e = 0; e < idx[col][v]; ++e) p = p * lin[v];
      lf_n += log_fact(idx[col][v]);
    }
    for (const auto& [m, c] : p.terms()) {
      std::vector<int> key(k);
      double lf_m = 0.0;
      for (int v = 0; v < k; ++v) {
        key[v] = m.exp(v);
        lf_m += log_fact(key[v]);
      }
      auto it = pos.find(key);
      if (it != pos.end()) U(it->second, col) += c * std::exp(0.5 * (lf_m - lf_n));
    }
  }
  return U;
}

ExactRouteReport exact_equivalence_route(const MetricGroup& g1, const MetricGroup& g2, const Vec& beta, int N,
                                         double tol) {
  ExactRouteReport rep;
  Mat J1 = g1.space.J(beta), J2 = g2.space.J(beta);
  UnitRescale r1 = rescale_to_unit(J1);  // requires non-degenerate J_beta
  UnitRescale r2 = rescale_to_unit(J2);
  Mat O = conjugating_orthogonal(r1.A0, r2.A0);
  rep.conj_residual = (O * J1 * O.transpose() - J2).norm();
  ReducedOperator b1 = fourier_reduce(g1, beta, N);
  ReducedOperator b2 = fourier_reduce(g2, beta, N);
  CMat U = hermite_rotation_matrix(O, g1.k(), N);
  // interior window: rows and columns of degree <= N - 2, where truncation
  // does not touch the exact matrix elements of the conjugated operator
  std::vector<int> win;
  for (int i = 0; i < b1.dim; ++i)
    if (total_degree(b1.index_set[i]) <= N - 2) win.push_back(i);
  CMat M1 = CMat(b1.matrix), M2 = CMat(b2.matrix);
  CMat lhs = U * M1 - M2 * U;
  double worst = 0.0;
  for (int a : win)
    for (int b : win) worst = std::max(worst, std::abs(lhs(a, b)));
  const double scale = std::max(1.0, M1.norm());
  rep.intertwine_residual = worst / scale;
  rep.pass = rep.conj_residual <= tol && rep.intertwine_residual <= tol;
  return rep;
}

}  // namespace isospec
