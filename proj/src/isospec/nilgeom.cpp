#include "isospec/nilgeom.hpp"

#include "isospec/errors.hpp"

namespace isospec {

AlgVector bracket(const MetricGroup& g, const AlgVector& u, const AlgVector& v) {
  AlgVector out = AlgVector::zero(g.k(), g.l());
  for (int a = 0; a < g.l(); ++a) out.z[a] = (g.space.basis[a] * u.x).dot(v.x);
  return out;
}

Mat invariant_frame(const MetricGroup& g, const Vec& x) {
  const int k = g.k(), l = g.l(), n = k + l;
  Mat frame = Mat::Identity(n, n);
  for (int i = 0; i < k; ++i)
    for (int a = 0; a < l; ++a) frame(k + a, i) = 0.5 * (g.space.basis[a] * x)(i);
  return frame;
}

AlgVector nabla(const MetricGroup& g, const AlgVector& p, const AlgVector& q) {
  // nabla_X X* = 1/2 [X,X*]; nabla_X Z = nabla_Z X = -1/2 J_Z(X); nabla_Z Z* = 0
  AlgVector out = bracket(g, {p.x, Vec::Zero(g.l())}, {q.x, Vec::Zero(g.l())}) * 0.5;
  out.x += -0.5 * (g.space.J(q.z) * p.x) - 0.5 * (g.space.J(p.z) * q.x);
  return out;
}

AlgVector riemann(const MetricGroup& g, const AlgVector& u, const AlgVector& v, const AlgVector& w) {
  const int k = g.k(), l = g.l();
  const Vec &X = u.x, &Y = v.x, &W = w.x;
  const Vec &Zu = u.z, &Zv = v.z, &Zw = w.z;
  auto Jz = [&](const Vec& z) { return g.space.J(z); };
  auto brk = [&](const Vec& a, const Vec& b) {
    Vec z(l);
    for (int c = 0; c < l; ++c) z[c] = (g.space.basis[c] * a).dot(b);
    return z;
  };
  AlgVector out = AlgVector::zero(k, l);
  // R(X,Y)X* = 1/2 J_[X,Y](X*) - 1/4 J_[Y,X*](X) + 1/4 J_[X,X*](Y)
  out.x += 0.5 * (Jz(brk(X, Y)) * W) - 0.25 * (Jz(brk(Y, W)) * X) + 0.25 * (Jz(brk(X, W)) * Y);
  // R(X,Y)Z = -1/4 [X, J_Z(Y)] + 1/4 [Y, J_Z(X)]
  out.z += -0.25 * brk(X, Jz(Zw) * Y) + 0.25 * brk(Y, Jz(Zw) * X);
  // R(X,Z)Y = -1/4 [X, J_Z(Y)]   (and the antisymmetric partner R(Z,Y)W)
  out.z += -0.25 * brk(X, Jz(Zv) * W);
  out.z -= -0.25 * brk(Y, Jz(Zu) * W);
  // R(X,Z)Z* = -1/4 J_Z J_Z*(X)
  out.x += -0.25 * (Jz(Zv) * (Jz(Zw) * X));
  out.x -= -0.25 * (Jz(Zu) * (Jz(Zw) * Y));
  // R(Z,Z*)X = -1/4 J_Z* J_Z(X) + 1/4 J_Z J_Z*(X)
  out.x += -0.25 * (Jz(Zv) * (Jz(Zu) * W)) + 0.25 * (Jz(Zu) * (Jz(Zv) * W));
  // R(Z1,Z2)Z3 = 0
  return out;
}

double riemann4(const MetricGroup& g, const AlgVector& u, const AlgVector& v, const AlgVector& w,
                const AlgVector& s) {
  return riemann(g, u, v, w).dot(s);
}

std::vector<std::pair<int, int>> wedge_basis(int n) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out.push_back({i, j});
  return out;
}

Mat curvature_operator(const MetricGroup& g) {
  const int k = g.k(), l = g.l(), n = k + l;
  auto basis_vec = [&](int i) {
    AlgVector b = AlgVector::zero(k, l);
    if (i < k)
      b.x[i] = 1.0;
    else
      b.z[i - k] = 1.0;
    return b;
  };
  auto pairs = wedge_basis(n);
  const int m = static_cast<int>(pairs.size());
  Mat op(m, m);
  for (int a = 0; a < m; ++a) {
    AlgVector u = basis_vec(pairs[a].first), v = basis_vec(pairs[a].second);
    for (int b = 0; b < m; ++b) {
      AlgVector w = basis_vec(pairs[b].first), s = basis_vec(pairs[b].second);
      op(a, b) = riemann4(g, u, v, w, s);
    }
  }
  return op;
}

HTensors H_tensors(const MetricGroup& g) {
  HTensors h;
  h.Hv = Mat::Zero(g.k(), g.k());
  for (const Mat& J : g.space.basis) h.Hv += J.transpose() * J;
  h.Hz = Mat(g.l(), g.l());
  for (int a = 0; a < g.l(); ++a)
    for (int b = 0; b < g.l(); ++b)
      h.Hz(a, b) = (g.space.basis[a].array() * g.space.basis[b].array()).sum();  // Tr(Ja^T Jb)
  return h;
}

double ricci(const MetricGroup& g, const AlgVector& u, const AlgVector& v) {
  HTensors h = H_tensors(g);
  return -0.5 * u.x.dot(h.Hv * v.x) + 0.25 * u.z.dot(h.Hz * v.z);
}

Mat coordinate_metric(const MetricGroup& g, const Vec& x) {
  const int k = g.k(), l = g.l(), n = k + l;
  Mat m = Mat::Identity(n, n);
  std::vector<Vec> jx(l);
  for (int a = 0; a < l; ++a) jx[a] = g.space.basis[a] * x;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      double s = 0;
      for (int a = 0; a < l; ++a) s += jx[a][i] * jx[a][j];
      m(i, j) += 0.25 * s;
    }
  for (int i = 0; i < k; ++i)
    for (int a = 0; a < l; ++a) m(i, k + a) = m(k + a, i) = -0.5 * jx[a][i];
  return m;
}

IsometryReport verify_isometry(const MetricGroup& g1, const MetricGroup& g2, const Mat& A_map, const Mat& C_map,
                               double tol) {
  if (g1.k() != g2.k() || g1.l() != g2.l()) fail(ErrorKind::DimensionMismatch, "group dimensions differ");
  IsometryReport rep;
  for (int a = 0; a < g1.l(); ++a) {
    Mat lhs = A_map * g1.space.basis[a] * A_map.transpose();
    Mat rhs = g2.space.J(C_map.col(a));
    rep.residual = std::max(rep.residual, (lhs - rhs).norm());
  }
  rep.pass = rep.residual <= tol;
  return rep;
}

}  // namespace isospec
