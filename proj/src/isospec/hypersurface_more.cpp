#include <cmath>

#include "isospec/eig.hpp"
#include "isospec/errors.hpp"
#include "isospec/hypersurface.hpp"

namespace isospec {

namespace {

constexpr double kRimEps = 1e-8;

// Largest tau with D(tau) > eps along t = const, by marching and bisection.
double tau_domain_limit(const Profile& prof, double t = 1.0) {
  const double d0 = prof.D(0.0, t);
  if (d0 <= kRimEps) fail(ErrorKind::RimPoint, "profile empty at tau = 0");
  double lo = 0.0, hi = 0.0;
  double step = std::max(d0, 1.0);
  for (int it = 0; it < 200; ++it) {
    hi = lo + step;
    if (prof.D(hi, t) <= kRimEps) break;
    lo = hi;
    if (it == 199) return lo;  // profile positive far out; cap the scan
  }
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (prof.D(mid, t) > kRimEps ? lo : hi) = mid;
  }
  return lo;
}

// connection coefficients for coordinate-constant fields:
// nabla_u v = (0, -[u_x, v_x]/2) + nabla(u_alg, v_alg)
AlgVector coord_nabla(const MetricGroup& g, const Vec& x, const AlgVector& u_coord, const AlgVector& v_coord) {
  auto to_alg = [&](const AlgVector& w) {
    AlgVector a = w;
    AlgVector br = bracket(g, {x, Vec::Zero(g.l())}, {w.x, Vec::Zero(g.l())});
    a.z -= 0.5 * br.z;
    return a;
  };
  AlgVector ua = to_alg(u_coord), va = to_alg(v_coord);
  AlgVector corr = AlgVector::zero(g.k(), g.l());
  AlgVector br = bracket(g, {u_coord.x, Vec::Zero(g.l())}, {v_coord.x, Vec::Zero(g.l())});
  corr.z = -0.5 * br.z;
  return corr + nabla(g, ua, va);
}

AlgVector coord_to_alg(const MetricGroup& g, const Vec& x, const AlgVector& w) {
  AlgVector a = w;
  AlgVector br = bracket(g, {x, Vec::Zero(g.l())}, {w.x, Vec::Zero(g.l())});
  a.z -= 0.5 * br.z;
  return a;
}

}  // namespace

HopfHullReport hopf_hull(const MetricGroup& g, const Profile& prof, const Vec& z0_in, const Vec& x0_in,
                         int n_samples, double tol) {
  HopfHullReport rep;
  Vec z0 = z0_in / z0_in.norm();
  AnticommutatorReport ac = is_anticommutator(g.space, z0);
  if (!ac.is_anticommutator) fail(ErrorKind::NotAnticommutator, "hull axis must be an anticommutator");
  Mat J0 = g.space.J(z0);
  Mat L0 = J0 * J0;
  Vec x0 = x0_in / x0_in.norm();
  Vec l0x = L0 * x0;
  const double lam0 = x0.dot(l0x);
  if ((l0x - lam0 * x0).norm() > 1e-9) fail(ErrorKind::NotEigenvector, "x0 is not an eigenvector of J_{Z0}^2");
  rep.lambda0 = lam0;
  Mat Lp = Mat::Zero(g.k(), g.k());
  for (int a = 0; a < g.l(); ++a) Lp += g.space.basis[a] * g.space.basis[a];
  Lp -= L0;
  rep.lambda_perp = x0.dot(Lp * x0);
  const double omega = std::sqrt(std::max(1e-300, -lam0));
  Vec y0 = (J0 * x0) / omega;

  const double tau_max = tau_domain_limit(prof);
  rep.n_samples = n_samples;
  double worst = 0.0, worst_sub = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    // low-discrepancy samples over (s, theta)
    const double fs = std::fmod(0.5 + i * 0.6180339887498949, 1.0);
    const double ft = std::fmod(0.3 + i * 0.7548776662466927, 1.0);
    const double s = std::sqrt(tau_max * (0.04 + 0.9 * fs));
    const double theta = 2.0 * M_PI * ft;

    // hull point as a function of (s, theta), exact derivatives through duals
    auto hull_x = [&](const Dual2& ss, const Dual2& th) {
      const Dual2 tauv = ss * ss;
      const Dual2 dd = prof.eval(tauv, Dual2(1.0));
      const Dual2 delta = sqrt(dd);
      // cos/sin of omega*theta through duals: use exp-free Taylor? evaluate
      // directly: th is (v + eps) so cos(v + e) expands via derivatives
      struct CS {
        Dual2 c, s;
      };
      auto trig = [&](const Dual2& a) {
        const double av = a.v.v;
        const double ca = std::cos(omega * av), sa = std::sin(omega * av);
        // second-order chain rule through the dual components of a
        Dual2 c, sn;
        c.v.v = ca;
        sn.v.v = sa;
        c.v.d = -omega * sa * a.v.d;
        sn.v.d = omega * ca * a.v.d;
        c.d.v = -omega * sa * a.d.v;
        sn.d.v = omega * ca * a.d.v;
        c.d.d = -omega * (ca * omega * a.v.d * a.d.v + sa * a.d.d);
        sn.d.d = omega * (-sa * omega * a.v.d * a.d.v + ca * a.d.d);
        return CS{c, sn};
      };
      CS cs = trig(th);
      std::vector<Dual2> out(g.k());
      for (int m = 0; m < g.k(); ++m) out[m] = delta * (cs.c * x0[m] + cs.s * y0[m]);
      return out;
    };

    // first and second parameter derivatives of the embedding
    auto eval_patch = [&](double dss, double dth, bool second_pair) {
      // directions: (dss, dth) in the first slot; second slot carries the
      // complementary direction for mixed partials
      Dual2 ss{{s, dss}, {second_pair ? 1.0 - dss : 0.0, 0.0}};
      Dual2 th{{theta, dth}, {second_pair ? 1.0 - dth : 0.0, 0.0}};
      return hull_x(ss, th);
    };

    auto extract = [&](const std::vector<Dual2>& vals, AlgVector& p, AlgVector& d1, AlgVector& d2) {
      p = AlgVector::zero(g.k(), g.l());
      d1 = AlgVector::zero(g.k(), g.l());
      d2 = AlgVector::zero(g.k(), g.l());
      for (int m = 0; m < g.k(); ++m) {
        p.x[m] = vals[m].v.v;
        d1.x[m] = vals[m].v.d;
        d2.x[m] = vals[m].d.d;
      }
    };

    // z-part of the embedding is s * z0 (linear)
    AlgVector P, Ts, Tss, Tth, Tthth, Tmix_d1, Tmix;
    {
      std::vector<Dual2> v = eval_patch(1.0, 0.0, false);
      // reuse the same evaluation with both slots along s for d^2/ds^2
      Dual2 ss{{s, 1.0}, {1.0, 0.0}}, th{{theta, 0.0}, {0.0, 0.0}};
      std::vector<Dual2> vss = hull_x(ss, th);
      extract(vss, P, Ts, Tss);
      Ts.z = z0;  // dz/ds
    }
    {
      Dual2 ss{{s, 0.0}, {0.0, 0.0}}, th{{theta, 1.0}, {1.0, 0.0}};
      std::vector<Dual2> vtt = hull_x(ss, th);
      AlgVector dummyp;
      extract(vtt, dummyp, Tth, Tthth);
    }
    {
      Dual2 ss{{s, 1.0}, {0.0, 0.0}}, th{{theta, 0.0}, {1.0, 0.0}};
      std::vector<Dual2> vmix = hull_x(ss, th);
      AlgVector dummyp;
      extract(vmix, dummyp, Tmix_d1, Tmix);
    }
    P.z = s * z0;

    SurfacePoint sp{P.x, P.z, 1.0};
    AlgVector nu = normal_nil(g, prof, sp);
    AlgVector ts_alg = coord_to_alg(g, P.x, Ts);
    AlgVector tth_alg = coord_to_alg(g, P.x, Tth);
    // orthonormal frame of the hull tangent plane
    AlgVector e1 = ts_alg * (1.0 / ts_alg.norm());
    AlgVector e2 = tth_alg - e1 * e1.dot(tth_alg);
    e2 = e2 * (1.0 / e2.norm());

    auto second_residual = [&](const AlgVector& d2coord, const AlgVector& u_coord, const AlgVector& v_coord) {
      AlgVector cov = coord_to_alg(g, P.x, d2coord) + coord_nabla(g, P.x, u_coord, v_coord);
      // remove normal and hull-tangent components; the rest must vanish
      cov = cov - nu * cov.dot(nu);
      cov = cov - e1 * cov.dot(e1);
      cov = cov - e2 * cov.dot(e2);
      return cov.norm();
    };
    worst = std::max(worst, second_residual(Tss, Ts, Ts));
    worst = std::max(worst, second_residual(Tthth, Tth, Tth));
    worst = std::max(worst, second_residual(Tmix, Ts, Tth));

    // closure of W = span{X, J0 X, Z0} under the connection
    std::vector<AlgVector> W;
    W.push_back(AlgVector{P.x, Vec::Zero(g.l())} * (1.0 / P.x.norm()));
    Vec jx = J0 * P.x;
    W.push_back(AlgVector{jx / jx.norm(), Vec::Zero(g.l())});
    W.push_back(AlgVector{Vec::Zero(g.k()), z0});
    for (const AlgVector& u : W)
      for (const AlgVector& v : W) {
        AlgVector nb = nabla(g, u, v);
        for (const AlgVector& w : W) nb = nb - w * w.dot(nb);
        worst_sub = std::max(worst_sub, nb.norm());
      }
  }
  rep.worst_second_form_residual = worst;
  rep.subalgebra_residual = worst_sub;
  rep.total_geodesic = worst <= tol && worst_sub <= tol;
  return rep;
}

SolvPoint cayley(const MetricGroup& g, const BallPoint& p) {
  const double r2 = p.x.squaredNorm() + p.z.squaredNorm() + p.u * p.u;
  if (r2 >= 1.0) fail(ErrorKind::OutsideBall, "point outside the unit ball");
  const double n = (1.0 - p.u) * (1.0 - p.u) + p.z.squaredNorm();
  SolvPoint out;
  out.x = (2.0 / n) * ((1.0 - p.u) * p.x + g.space.J(p.z) * p.x);
  out.z = (2.0 / n) * p.z;
  out.t = (1.0 - r2) / n;
  return out;
}

BallPoint cayley_inverse(const MetricGroup& g, const SolvPoint& p) {
  const double m = 1.0 + p.t + 0.25 * p.x.squaredNorm();
  const double denom = m * m + p.z.squaredNorm();
  BallPoint out;
  const double u1mt = 2.0 * m / denom;  // 1 - u
  out.u = 1.0 - u1mt;
  out.z = (2.0 / denom) * p.z;
  out.x = 0.5 * (u1mt * p.x - g.space.J(out.z) * p.x);
  return out;
}

Profile geodesic_sphere_profile(double s) { return Profile::geodesic_sphere(s); }

// ---------------------------------------------------------------------------
// adapted Ricci matrices on the quaternionic family
// ---------------------------------------------------------------------------

namespace {

void require_h3_family(const EndoSpace& s, int a, int b) {
  if (s.l != 3 || s.k != 4 * (a + b)) fail(ErrorKind::WrongGroupFamily, "expected the quaternionic (a,b) family");
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      Mat anti = s.basis[i] * s.basis[j] + s.basis[j] * s.basis[i];
      if (i == j) anti += 2.0 * Mat::Identity(s.k, s.k);
      if (anti.norm() > 1e-10) fail(ErrorKind::WrongGroupFamily, "basis is not Heisenberg-type quaternionic");
    }
}

// Orthonormal z-frame with e0 = Z/|Z|.
std::vector<Vec> adapted_z_frame(const Vec& z) {
  const int l = static_cast<int>(z.size());
  std::vector<Vec> out{z / z.norm()};
  for (int i = 0; i < l && static_cast<int>(out.size()) < l; ++i) {
    Vec v = Vec::Unit(l, i);
    for (const Vec& w : out) v -= w * w.dot(v);
    if (v.norm() < 1e-8) continue;
    out.push_back(v / v.norm());
  }
  return out;
}

}  // namespace

RicciMatrixReport ricci_matrix_h3(const MetricGroup& g, const Profile& prof, const SurfacePoint& p, int a, int b) {
  require_h3_family(g.space, a, b);
  const int k = g.k();
  make_surface_point(prof, p.x, p.z, 1.0);
  const double tau = p.z.squaredNorm();
  if (tau < 1e-12) fail(ErrorKind::BadInput, "adapted basis needs Z != 0");
  const double Dp = prof.D_tau(tau);
  std::vector<Vec> zf = adapted_z_frame(p.z);
  Vec x0 = p.x / p.x.norm();
  Mat Ji = g.space.J(zf[0]), Jj = g.space.J(zf[1]), Jk = g.space.J(zf[2]);

  // E_i ~ D'|Z| X0 + 2 J_i X0 (tangent mix of the radial and J_i directions)
  const double n0 = 1.0 / std::sqrt(4.0 + tau * Dp * Dp);
  std::vector<AlgVector> basis;
  basis.push_back({-n0 * (Dp * std::sqrt(tau) * x0 + 2.0 * (Ji * x0)), Vec::Zero(3)});
  basis.push_back({Jj * x0, Vec::Zero(3)});
  basis.push_back({Jk * x0, Vec::Zero(3)});
  basis.push_back({Vec::Zero(k), zf[1]});
  basis.push_back({Vec::Zero(k), zf[2]});
  // K block: orthonormal completion of the tangent space
  SurfaceShapeNil shape = surface_shape_nil(g, prof, p);
  std::vector<AlgVector> kbasis;
  for (const AlgVector& cand : shape.basis) {
    AlgVector v = cand;
    v = v - shape.nu * shape.nu.dot(v);
    for (const AlgVector& w : basis) v = v - w * w.dot(v);
    for (const AlgVector& w : kbasis) v = v - w * w.dot(v);
    if (v.norm() < 1e-7) continue;
    kbasis.push_back(v * (1.0 / v.norm()));
  }
  RicciMatrixReport rep;
  rep.dim_K = static_cast<int>(kbasis.size());
  std::vector<AlgVector> full = kbasis;
  full.insert(full.end(), basis.begin(), basis.end());
  const int n = static_cast<int>(full.size());
  rep.matrix = Mat(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double v = induced_ricci_nil_cached(g, shape, full[i], full[j]);
      rep.matrix(i, j) = rep.matrix(j, i) = v;
    }

  const int K = rep.dim_K;
  double block = 0.0;
  double eps = 0.0;
  for (int i = 0; i < K; ++i) eps += rep.matrix(i, i);
  eps /= std::max(1, K);
  rep.eps_K = eps;
  for (int i = 0; i < K; ++i)
    for (int j = 0; j < n; ++j) {
      if (j < K)
        block = std::max(block, std::abs(rep.matrix(i, j) - (i == j ? eps : 0.0)));
      else
        block = std::max(block, std::abs(rep.matrix(i, j)));
    }
  // E_i is its own 1x1 block
  rep.E_ll = rep.matrix(K, K) - eps;
  for (int j = K + 1; j < n; ++j) block = std::max(block, std::abs(rep.matrix(K, j)));
  // L block {E_j, E_k}
  rep.E_LL = 0.5 * (rep.matrix(K + 1, K + 1) + rep.matrix(K + 2, K + 2)) - eps;
  block = std::max(block, std::abs(rep.matrix(K + 1, K + 1) - rep.matrix(K + 2, K + 2)));
  block = std::max(block, std::abs(rep.matrix(K + 1, K + 2)));
  // z block {j, k}
  rep.E_zz = 0.5 * (rep.matrix(K + 3, K + 3) + rep.matrix(K + 4, K + 4)) - eps;
  block = std::max(block, std::abs(rep.matrix(K + 3, K + 3) - rep.matrix(K + 4, K + 4)));
  block = std::max(block, std::abs(rep.matrix(K + 3, K + 4)));
  // coupling L-z block [[A,-B],[B,A]]
  Mat Q(2, 2);
  Q << rep.matrix(K + 1, K + 3), rep.matrix(K + 1, K + 4), rep.matrix(K + 2, K + 3), rep.matrix(K + 2, K + 4);
  rep.A_lz = 0.5 * (Q(0, 0) + Q(1, 1));
  rep.B_lz = 0.5 * (Q(1, 0) - Q(0, 1));
  block = std::max(block, std::abs(Q(0, 0) - Q(1, 1)));
  block = std::max(block, std::abs(Q(0, 1) + Q(1, 0)));
  rep.block_residual = block;
  rep.criterion = std::pow(rep.A_lz * rep.A_lz + rep.B_lz * rep.B_lz - rep.E_LL * rep.E_zz, 2);

  // eigenvalue distinctness margin of the K eigenvalue
  EigenSym es = jacobi_eigensym(rep.matrix.bottomRightCorner(n - K, n - K));
  double margin = 1e300;
  for (int i = 0; i < es.values.size(); ++i) margin = std::min(margin, std::abs(es.values[i] - eps));
  rep.distinctness_margin = margin;
  return rep;
}

RicciMatrixReport solv_ricci_matrix(const SolvGroup& g, const Profile& prof, const SurfacePoint& p, int a, int b) {
  require_h3_family(g.nil.space, a, b);
  const int k = g.k();
  make_surface_point(prof, p.x, p.z, p.t);
  const double tau = p.z.squaredNorm(), t = p.t, c = g.c;
  if (tau < 1e-12) fail(ErrorKind::BadInput, "adapted basis needs Z != 0");
  const double Dv = prof.D(tau, t), Dp = prof.D_tau(tau, t), Dt = prof.D_t(tau, t);
  std::vector<Vec> zf = adapted_z_frame(p.z);
  Vec x0 = p.x / p.x.norm();
  Mat Ji = g.nil.space.J(zf[0]), Jj = g.nil.space.J(zf[1]), Jk = g.nil.space.J(zf[2]);

  SurfaceShapeSolv shape = surface_shape_solv(g, prof, p);
  std::vector<SolvVector> basis;
  const double n0 = 1.0 / std::sqrt(4.0 + tau * Dp * Dp);
  basis.push_back({-n0 * (Dp * std::sqrt(tau) * x0 + 2.0 * (Ji * x0)), Vec::Zero(3), 0.0});
  basis.push_back({Jj * x0, Vec::Zero(3), 0.0});
  basis.push_back({Jk * x0, Vec::Zero(3), 0.0});
  basis.push_back({Vec::Zero(k), zf[1], 0.0});
  basis.push_back({Vec::Zero(k), zf[2], 0.0});
  // unit tangent in span{X0, T}
  {
    const double tn = 1.0 / std::sqrt(c * c * t * Dt * Dt + 4.0 * Dv);
    SolvVector tv{tn * c * std::sqrt(t) * Dt * x0, Vec::Zero(3), tn * 2.0 * std::sqrt(Dv)};
    // orthogonalize against E_i (both live partly along x0)
    for (int rep_i = 0; rep_i < 2; ++rep_i)
      for (int bidx = 0; bidx < 1; ++bidx) tv = tv - basis[bidx] * basis[bidx].dot(tv);
    tv = tv - shape.nu * shape.nu.dot(tv);
    tv = tv * (1.0 / tv.norm());
    basis.push_back(tv);
  }
  std::vector<SolvVector> kbasis;
  for (const SolvVector& cand : shape.basis) {
    SolvVector v = cand;
    v = v - shape.nu * shape.nu.dot(v);
    for (const SolvVector& w : basis) v = v - w * w.dot(v);
    for (const SolvVector& w : kbasis) v = v - w * w.dot(v);
    if (v.norm() < 1e-7) continue;
    kbasis.push_back(v * (1.0 / v.norm()));
  }
  RicciMatrixReport rep;
  rep.dim_K = static_cast<int>(kbasis.size());
  std::vector<SolvVector> full = kbasis;
  full.insert(full.end(), basis.begin(), basis.end());
  const int n = static_cast<int>(full.size());
  rep.matrix = Mat(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double v = induced_ricci_solv_cached(g, shape, full[i], full[j]);
      rep.matrix(i, j) = rep.matrix(j, i) = v;
    }
  const int K = rep.dim_K;
  double block = 0.0;
  double eps = 0.0;
  for (int i = 0; i < K; ++i) eps += rep.matrix(i, i);
  eps /= std::max(1, K);
  rep.eps_K = eps;
  for (int i = 0; i < K; ++i)
    for (int j = 0; j < n; ++j) {
      if (j < K)
        block = std::max(block, std::abs(rep.matrix(i, j) - (i == j ? eps : 0.0)));
      else
        block = std::max(block, std::abs(rep.matrix(i, j)));
    }
  // order: K.., E_i, E_j, E_k, j, k, t
  rep.E_ll = rep.matrix(K, K) - eps;
  rep.E_LL = 0.5 * (rep.matrix(K + 1, K + 1) + rep.matrix(K + 2, K + 2)) - eps;
  rep.E_zz = 0.5 * (rep.matrix(K + 3, K + 3) + rep.matrix(K + 4, K + 4)) - eps;
  Mat Q(2, 2);
  Q << rep.matrix(K + 1, K + 3), rep.matrix(K + 1, K + 4), rep.matrix(K + 2, K + 3), rep.matrix(K + 2, K + 4);
  rep.A_lz = 0.5 * (Q(0, 0) + Q(1, 1));
  rep.B_lz = 0.5 * (Q(1, 0) - Q(0, 1));
  block = std::max(block, std::abs(Q(0, 0) - Q(1, 1)));
  block = std::max(block, std::abs(Q(0, 1) + Q(1, 0)));
  // (l, t) coupling
  rep.S_lt = rep.matrix(K, K + 5);
  rep.S_tt = rep.matrix(K + 5, K + 5) - eps;
  // remaining cross entries belong to the block pattern residual
  for (int j = K + 1; j < n - 1; ++j) block = std::max(block, std::abs(rep.matrix(K, j)));
  for (int j = K + 1; j < K + 5; ++j) block = std::max(block, std::abs(rep.matrix(j, K + 5)));
  rep.block_residual = block;
  rep.criterion = std::pow(rep.A_lz * rep.A_lz + rep.B_lz * rep.B_lz - rep.E_LL * rep.E_zz, 2);
  rep.coupling_det = (rep.E_ll + eps) * (rep.S_tt + eps) - rep.S_lt * rep.S_lt;
  EigenSym es = jacobi_eigensym(rep.matrix.bottomRightCorner(n - K, n - K));
  double margin = 1e300;
  for (int i = 0; i < es.values.size(); ++i) margin = std::min(margin, std::abs(es.values[i] - eps));
  rep.distinctness_margin = margin;
  return rep;
}

}  // namespace isospec
