#include "isospec/hypersurface.hpp"

#include <cmath>

#include "isospec/eig.hpp"
#include "isospec/errors.hpp"

namespace isospec {

namespace {

constexpr double kRimEps = 1e-8;

template <typename S>
using SVec = std::vector<S>;

template <typename S>
SVec<S> svec(const Vec& v) {
  SVec<S> out(v.size());
  for (int i = 0; i < v.size(); ++i) out[i] = S(v[i]);
  return out;
}

template <typename S>
S sdot(const SVec<S>& a, const SVec<S>& b) {
  S acc = S(0);
  for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

template <typename S>
SVec<S> smatvec(const Mat& m, const SVec<S>& v) {
  SVec<S> out(m.rows(), S(0));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0.0) out[i] += m(i, j) * v[j];
  return out;
}

template <typename S>
SVec<S> sJz(const EndoSpace& sp, const SVec<S>& z, const SVec<S>& x) {
  SVec<S> out(sp.k, S(0));
  for (int a = 0; a < sp.l; ++a) {
    SVec<S> jx = smatvec<S>(sp.basis[a], x);
    for (int i = 0; i < sp.k; ++i) out[i] += z[a] * jx[i];
  }
  return out;
}

template <typename S>
S prof_D(const Profile& prof, const S& tau, const S& t) {
  return prof.eval(tau, t);
}
template <typename S>
S prof_Dtau(const Profile& prof, const S& tau, const S& t) {
  return prof.eval(Dual<S>{tau, S(1)}, Dual<S>{t, S(0)}).d;
}
template <typename S>
S prof_Dt(const Profile& prof, const S& tau, const S& t) {
  return prof.eval(Dual<S>{tau, S(0)}, Dual<S>{t, S(1)}).d;
}

// Algebra components of the (normalized-gradient) normal field, templated so
// dual numbers flow through; valid in a neighborhood of the surface.
template <typename S>
void normal_coeffs_nil(const MetricGroup& g, const Profile& prof, const SVec<S>& x, const SVec<S>& z, SVec<S>& nx,
                       SVec<S>& nz) {
  const S tau = sdot(z, z);
  const S one_t = S(1);
  const S Dp = prof_Dtau(prof, tau, one_t);
  SVec<S> jzx = sJz(g.space, z, x);
  const S C = S(1) / sqrt(4.0 * sdot(x, x) + Dp * Dp * (sdot(jzx, jzx) + 4.0 * tau));
  nx.assign(g.k(), S(0));
  nz.assign(g.l(), S(0));
  for (int i = 0; i < g.k(); ++i) nx[i] = C * (2.0 * x[i] - Dp * jzx[i]);
  for (int a = 0; a < g.l(); ++a) nz[a] = -2.0 * C * Dp * z[a];
}

template <typename S>
void normal_coeffs_solv(const SolvGroup& g, const Profile& prof, const SVec<S>& x, const SVec<S>& z, const S& t,
                        SVec<S>& nx, SVec<S>& nz, S& nt) {
  const S tau = sdot(z, z);
  const S Dp = prof_Dtau(prof, tau, t);
  const S Dt = prof_Dt(prof, tau, t);
  const double c = g.c;
  SVec<S> jzx = sJz(g.nil.space, z, x);
  const S norm2 = t * (4.0 * sdot(x, x) + Dp * Dp * sdot(jzx, jzx)) + t * t * (4.0 * tau * Dp * Dp + c * c * Dt * Dt);
  const S C = S(1) / sqrt(norm2);
  const S rt = sqrt(t);
  nx.assign(g.k(), S(0));
  nz.assign(g.l(), S(0));
  for (int i = 0; i < g.k(); ++i) nx[i] = C * rt * (2.0 * x[i] - Dp * jzx[i]);
  for (int a = 0; a < g.l(); ++a) nz[a] = -2.0 * C * t * Dp * z[a];
  nt = -c * C * t * Dt;
}

AlgVector to_alg(const SVec<double>& x, const SVec<double>& z) {
  AlgVector v;
  v.x = Eigen::Map<const Vec>(x.data(), x.size());
  v.z = Eigen::Map<const Vec>(z.data(), z.size());
  return v;
}

// Covariant derivative of a field given by templated algebra-coefficient
// functions, along the tangent (or any) direction u at p. The field is
// differentiated along the coordinate curve matching u's frame components.
struct NilFieldDeriv {
  AlgVector value;
  AlgVector derivative;  // coefficient derivatives only
};

template <typename F>
NilFieldDeriv nil_field_along(const MetricGroup& g, const Vec& x, const Vec& z, const AlgVector& u, F&& field) {
  // coordinate velocity of the frame vector u
  Vec xdot = u.x;
  AlgVector br = bracket(g, {x, Vec::Zero(g.l())}, {u.x, Vec::Zero(g.l())});
  Vec zdot = u.z + 0.5 * br.z;
  SVec<Dual1> xd(g.k()), zd(g.l());
  for (int i = 0; i < g.k(); ++i) xd[i] = Dual1{x[i], xdot[i]};
  for (int a = 0; a < g.l(); ++a) zd[a] = Dual1{z[a], zdot[a]};
  SVec<Dual1> nx, nz;
  field(xd, zd, nx, nz);
  NilFieldDeriv out;
  out.value = AlgVector::zero(g.k(), g.l());
  out.derivative = AlgVector::zero(g.k(), g.l());
  for (int i = 0; i < g.k(); ++i) {
    out.value.x[i] = nx[i].v;
    out.derivative.x[i] = nx[i].d;
  }
  for (int a = 0; a < g.l(); ++a) {
    out.value.z[a] = nz[a].v;
    out.derivative.z[a] = nz[a].d;
  }
  return out;
}

AlgVector nabla_normal_nil(const MetricGroup& g, const Profile& prof, const SurfacePoint& p, const AlgVector& u) {
  auto field = [&](const SVec<Dual1>& x, const SVec<Dual1>& z, SVec<Dual1>& nx, SVec<Dual1>& nz) {
    normal_coeffs_nil<Dual1>(g, prof, x, z, nx, nz);
  };
  NilFieldDeriv fd = nil_field_along(g, p.x, p.z, u, field);
  return fd.derivative + nabla(g, u, fd.value);
}

struct SolvFieldDeriv {
  SolvVector value;
  SolvVector derivative;
};

template <typename F>
SolvFieldDeriv solv_field_along(const SolvGroup& g, const SurfacePoint& p, const SolvVector& u, F&& field) {
  const double rt = std::sqrt(p.t);
  Vec xdot = rt * u.x;
  AlgVector br = bracket(g.nil, {p.x, Vec::Zero(g.l())}, {u.x, Vec::Zero(g.l())});
  Vec zdot = p.t * u.z + 0.5 * rt * br.z;
  const double tdot = g.c * p.t * u.t;
  SVec<Dual1> xd(g.k()), zd(g.l());
  Dual1 td{p.t, tdot};
  for (int i = 0; i < g.k(); ++i) xd[i] = Dual1{p.x[i], xdot[i]};
  for (int a = 0; a < g.l(); ++a) zd[a] = Dual1{p.z[a], zdot[a]};
  SVec<Dual1> nx, nz;
  Dual1 nt;
  field(xd, zd, td, nx, nz, nt);
  SolvFieldDeriv out;
  out.value = SolvVector::zero(g.k(), g.l());
  out.derivative = SolvVector::zero(g.k(), g.l());
  for (int i = 0; i < g.k(); ++i) {
    out.value.x[i] = nx[i].v;
    out.derivative.x[i] = nx[i].d;
  }
  for (int a = 0; a < g.l(); ++a) {
    out.value.z[a] = nz[a].v;
    out.derivative.z[a] = nz[a].d;
  }
  out.value.t = nt.v;
  out.derivative.t = nt.d;
  return out;
}

SolvVector nabla_normal_solv(const SolvGroup& g, const Profile& prof, const SurfacePoint& p, const SolvVector& u) {
  auto field = [&](const SVec<Dual1>& x, const SVec<Dual1>& z, const Dual1& t, SVec<Dual1>& nx, SVec<Dual1>& nz,
                   Dual1& nt) {
    normal_coeffs_solv<Dual1>(g, prof, x, z, t, nx, nz, nt);
  };
  SolvFieldDeriv fd = solv_field_along(g, p, u, field);
  return fd.derivative + nabla_c(g, u, fd.value);
}

}  // namespace

SurfacePoint make_surface_point(const Profile& prof, const Vec& x, const Vec& z, double t) {
  const double tau = z.squaredNorm();
  const double D = prof.D(tau, t);
  if (D < kRimEps) fail(ErrorKind::RimPoint, "D(tau[,t]) below the rim guard");
  if (std::abs(x.squaredNorm() - D) > 1e-10 * std::max(1.0, D))
    fail(ErrorKind::OffSurface, "|X|^2 != D(|Z|^2[,t])");
  return {x, z, t};
}

SurfacePoint surface_point_at(const Profile& prof, const Vec& xdir, const Vec& z, double t) {
  const double tau = z.squaredNorm();
  const double D = prof.D(tau, t);
  if (D < kRimEps) fail(ErrorKind::RimPoint, "D(tau[,t]) below the rim guard");
  Vec xu = xdir / xdir.norm();
  return {std::sqrt(D) * xu, z, t};
}

AlgVector normal_nil(const MetricGroup& g, const Profile& prof, const SurfacePoint& p) {
  make_surface_point(prof, p.x, p.z, 1.0);
  SVec<double> nx, nz;
  normal_coeffs_nil<double>(g, prof, svec<double>(p.x), svec<double>(p.z), nx, nz);
  return to_alg(nx, nz);
}

SolvVector normal_solv(const SolvGroup& g, const Profile& prof, const SurfacePoint& p) {
  make_surface_point(prof, p.x, p.z, p.t);
  SVec<double> nx, nz;
  double nt = 0;
  SVec<double> x = svec<double>(p.x), z = svec<double>(p.z);
  normal_coeffs_solv<double>(g, prof, x, z, p.t, nx, nz, nt);
  SolvVector v{to_alg(nx, nz).x, to_alg(nx, nz).z, nt};
  return v;
}

AlgVector normal_general(const MetricGroup& g, const GradedPoly& delta2, const SurfacePoint& p) {
  // |X|^2 = delta2(Z): gradient through the invariant frame
  const int k = g.k(), l = g.l();
  if (delta2.nvars() != l) fail(ErrorKind::DimensionMismatch, "delta2 must be a polynomial on the Z-space");
  SVec<double> zs = svec<double>(p.z);
  const double d2 = delta2.eval_real<double>(zs);
  if (d2 < kRimEps) fail(ErrorKind::RimPoint, "delta^2 below the rim guard");
  if (std::abs(p.x.squaredNorm() - d2) > 1e-10 * std::max(1.0, d2)) fail(ErrorKind::OffSurface, "|X|^2 != delta^2");
  Vec grad(l);
  for (int a = 0; a < l; ++a) {
    SVec<Dual1> zd(l);
    for (int b = 0; b < l; ++b) zd[b] = Dual1{p.z[b], a == b ? 1.0 : 0.0};
    grad[a] = delta2.eval_real<Dual1>(zd).d;
  }
  AlgVector nu = AlgVector::zero(k, l);
  nu.x = 2.0 * p.x - 0.5 * (g.space.J(grad) * p.x);
  nu.z = -grad;
  return nu * (1.0 / nu.norm());
}

namespace {

template <typename V>
std::vector<V> orthonormal_complement(const std::vector<V>& excluded, int dim, int k, int l) {
  std::vector<V> chosen = excluded;
  std::vector<V> out;
  auto unit = [&](int i) {
    V v = V::zero(k, l);
    if constexpr (std::is_same_v<V, AlgVector>) {
      if (i < k)
        v.x[i] = 1.0;
      else
        v.z[i - k] = 1.0;
    } else {
      if (i < k)
        v.x[i] = 1.0;
      else if (i < k + l)
        v.z[i - k] = 1.0;
      else
        v.t = 1.0;
    }
    return v;
  };
  for (int i = 0; i < dim && static_cast<int>(out.size()) < dim - static_cast<int>(excluded.size()); ++i) {
    V v = unit(i);
    for (const V& w : chosen) v = v - w * w.dot(v);
    if (v.norm() < 1e-6) continue;
    v = v * (1.0 / v.norm());
    chosen.push_back(v);
    out.push_back(v);
  }
  return out;
}

}  // namespace

std::vector<AlgVector> tangent_basis_nil(const MetricGroup& g, const Profile& prof, const SurfacePoint& p) {
  AlgVector nu = normal_nil(g, prof, p);
  return orthonormal_complement<AlgVector>({nu}, g.dim(), g.k(), g.l());
}

std::vector<SolvVector> tangent_basis_solv(const SolvGroup& g, const Profile& prof, const SurfacePoint& p) {
  SolvVector nu = normal_solv(g, prof, p);
  return orthonormal_complement<SolvVector>({nu}, g.dim(), g.k(), g.l());
}

double second_fundamental_form_nil(const MetricGroup& g, const Profile& prof, const SurfacePoint& p,
                                   const AlgVector& u, const AlgVector& v) {
  const double tau = p.z.squaredNorm();
  const double Dp = prof.D_tau(tau), Dpp = prof.D_tautau(tau);
  Vec jzx = g.space.J(p.z) * p.x;
  const double C = 1.0 / std::sqrt(4.0 * p.x.squaredNorm() + Dp * Dp * (jzx.squaredNorm() + 4.0 * tau));
  Vec nuX = C * (2.0 * p.x - Dp * jzx);
  double m = 0.0;
  // X-X block: C (2 <u,v> - (D'/2) sum_a <J_a X,u><J_a X,v> - D'' <J_Z X,u><J_Z X,v>)
  double sum_a = 0.0;
  for (int a = 0; a < g.l(); ++a) {
    Vec jax = g.space.basis[a] * p.x;
    sum_a += jax.dot(u.x) * jax.dot(v.x);
  }
  m += C * (2.0 * u.x.dot(v.x) - 0.5 * Dp * sum_a - Dpp * jzx.dot(u.x) * jzx.dot(v.x));
  // Z-Z block
  m += -2.0 * C * Dp * u.z.dot(v.z);
  // mixed blocks: -1/2 <J_{Z~}(nu_X + 2 C D' X), X~>
  Vec core = nuX + 2.0 * C * Dp * p.x;
  m += -0.5 * (g.space.J(u.z) * core).dot(v.x);
  m += -0.5 * (g.space.J(v.z) * core).dot(u.x);
  return m;
}

double second_fundamental_form_solv(const SolvGroup& g, const Profile& prof, const SurfacePoint& p,
                                    const SolvVector& u, const SolvVector& v) {
  // Bilinear case table. Arguments are decomposed as u = X~ + Z~ + c_u * t,
  // where t is the unit tangent in span{X0, T} (it carries an X0 component,
  // so X~ = u.x - c_u * t_X).
  const double tau = p.z.squaredNorm(), t = p.t, c = g.c;
  const double Dv = prof.D(tau, t);
  const double Dp = prof.D_tau(tau, t), Dpp = prof.D_tautau(tau, t);
  const double Dt = prof.D_t(tau, t), Dtt = prof.D_tt(tau, t), Dpt = prof.D_taut(tau, t);
  const auto& J = g.nil.space;
  Vec jzx = J.J(p.z) * p.x;
  const double C = 1.0 / std::sqrt(t * (4.0 * p.x.squaredNorm() + Dp * Dp * jzx.squaredNorm()) +
                                   t * t * (4.0 * tau * Dp * Dp + c * c * Dt * Dt));
  const double delta = std::sqrt(std::max(Dv, 1e-300));
  Vec x0 = p.x / delta;
  Vec jz0x0 = (tau > 0) ? Vec((J.J(p.z) * x0) / std::sqrt(tau)) : Vec(Vec::Zero(g.k()));
  // unit tangent in span{X0, T}: proportional to c sqrt(t) D_t X0 + 2 sqrt(D) T
  const double tn = 1.0 / std::sqrt(c * c * t * Dt * Dt + 4.0 * Dv);
  const Vec tvec_x = tn * c * std::sqrt(t) * Dt * x0;
  const double tvec_t = tn * 2.0 * delta;

  const double cu = (tvec_t != 0.0) ? u.t / tvec_t : 0.0;
  const double cv = (tvec_t != 0.0) ? v.t / tvec_t : 0.0;
  const Vec ux = u.x - cu * tvec_x, vx = v.x - cv * tvec_x;
  const Vec &uz = u.z, &vz = v.z;

  // nilpotent patterns evaluated with the solvable normalizer C
  auto m_xx = [&](const Vec& a, const Vec& b) {
    double sum_a = 0.0;
    for (int al = 0; al < g.l(); ++al) {
      Vec jax = J.basis[al] * p.x;
      sum_a += jax.dot(a) * jax.dot(b);
    }
    return C * (2.0 * a.dot(b) - 0.5 * Dp * sum_a - Dpp * jzx.dot(a) * jzx.dot(b));
  };
  Vec nuX = C * std::sqrt(t) * (2.0 * p.x - Dp * jzx);
  auto m_xz = [&](const Vec& a, const Vec& zb) {
    return -0.5 * (J.J(zb) * (nuX + 2.0 * C * t * Dp * p.x)).dot(a);
  };

  double m = 0.0;
  // X-X
  m += t * m_xx(ux, vx) + 0.5 * c * c * C * t * Dt * ux.dot(vx);
  // X-Z (both orders)
  m += std::sqrt(t) * (m_xz(ux, vz) + m_xz(vx, uz));
  // Z-Z
  m += C * t * (c * c - 2.0 * Dp) * uz.dot(vz);
  // X-t
  const double P = 2.0 * c * C * t * tn;
  auto xt = [&](const Vec& a) {
    return P * (t * Dt * (1.0 + 0.25 * c * c * Dt) * x0.dot(a) - Dv * std::sqrt(tau) * Dpt * jz0x0.dot(a));
  };
  m += cu * xt(vx) + cv * xt(ux);
  // Z-t
  const double Pstar = 0.5 * c * C * tn * std::pow(t, 1.5) * std::sqrt(tau) * delta * Dp * Dt;
  auto zt = [&](const Vec& zb) { return (tau > 0) ? Pstar * jz0x0.dot(J.J(zb) * x0) : 0.0; };
  m += cu * zt(vz) + cv * zt(uz);
  // t-t; the printed |t_Z| factor is zero since the t vector has no Z part
  const double tt = C * (2.0 * t * (1.0 + 0.25 * c * c * Dt) * tvec_x.squaredNorm() -
                         c * c * (t * Dt + t * t * Dtt) * tvec_t * tvec_t);
  m += cu * cv * tt;
  return m;
}

double sff_oracle_nil(const MetricGroup& g, const Profile& prof, const SurfacePoint& p, const AlgVector& u,
                      const AlgVector& v) {
  return nabla_normal_nil(g, prof, p, u).dot(v);
}

double sff_oracle_solv(const SolvGroup& g, const Profile& prof, const SurfacePoint& p, const SolvVector& u,
                       const SolvVector& v) {
  return nabla_normal_solv(g, prof, p, u).dot(v);
}

AlgVector covariant_normal_derivative_nil(const MetricGroup& g, const Profile& prof, const SurfacePoint& p,
                                          const AlgVector& u) {
  return nabla_normal_nil(g, prof, p, u);
}

SolvVector covariant_normal_derivative_solv(const SolvGroup& g, const Profile& prof, const SurfacePoint& p,
                                            const SolvVector& u) {
  return nabla_normal_solv(g, prof, p, u);
}

Mat weingarten_nil(const MetricGroup& g, const Profile& prof, const SurfacePoint& p,
                   const std::vector<AlgVector>& basis) {
  const int n = static_cast<int>(basis.size());
  Mat b(n, n);
  for (int i = 0; i < n; ++i) {
    AlgVector dn = nabla_normal_nil(g, prof, p, basis[i]);
    for (int j = 0; j < n; ++j) b(i, j) = dn.dot(basis[j]);
  }
  return 0.5 * (b + b.transpose());
}

Mat weingarten_solv(const SolvGroup& g, const Profile& prof, const SurfacePoint& p,
                    const std::vector<SolvVector>& basis) {
  const int n = static_cast<int>(basis.size());
  Mat b(n, n);
  for (int i = 0; i < n; ++i) {
    SolvVector dn = nabla_normal_solv(g, prof, p, basis[i]);
    for (int j = 0; j < n; ++j) b(i, j) = dn.dot(basis[j]);
  }
  return 0.5 * (b + b.transpose());
}

SurfaceShapeNil surface_shape_nil(const MetricGroup& g, const Profile& prof, const SurfacePoint& p) {
  SurfaceShapeNil d;
  d.nu = normal_nil(g, prof, p);
  d.basis = tangent_basis_nil(g, prof, p);
  d.B = weingarten_nil(g, prof, p, d.basis);
  d.trB = d.B.trace();
  return d;
}

SurfaceShapeSolv surface_shape_solv(const SolvGroup& g, const Profile& prof, const SurfacePoint& p) {
  SurfaceShapeSolv d;
  d.nu = normal_solv(g, prof, p);
  d.basis = tangent_basis_solv(g, prof, p);
  d.B = weingarten_solv(g, prof, p, d.basis);
  d.trB = d.B.trace();
  return d;
}

double induced_ricci_nil_cached(const MetricGroup& g, const SurfaceShapeNil& d, const AlgVector& u,
                                const AlgVector& v) {
  if (std::abs(u.dot(d.nu)) > 1e-8 * std::max(1.0, u.norm()) ||
      std::abs(v.dot(d.nu)) > 1e-8 * std::max(1.0, v.norm()))
    fail(ErrorKind::NotTangent, "arguments must be tangent");
  Vec cu(d.basis.size()), cv(d.basis.size());
  for (size_t i = 0; i < d.basis.size(); ++i) {
    cu[i] = u.dot(d.basis[i]);
    cv[i] = v.dot(d.basis[i]);
  }
  double r = ricci(g, u, v) - riemann4(g, d.nu, u, v, d.nu);
  r += cu.dot((d.trB * d.B - d.B * d.B) * cv);
  return r;
}

double induced_ricci_solv_cached(const SolvGroup& g, const SurfaceShapeSolv& d, const SolvVector& u,
                                 const SolvVector& v) {
  if (std::abs(u.dot(d.nu)) > 1e-8 * std::max(1.0, u.norm()) ||
      std::abs(v.dot(d.nu)) > 1e-8 * std::max(1.0, v.norm()))
    fail(ErrorKind::NotTangent, "arguments must be tangent");
  Vec cu(d.basis.size()), cv(d.basis.size());
  for (size_t i = 0; i < d.basis.size(); ++i) {
    cu[i] = u.dot(d.basis[i]);
    cv[i] = v.dot(d.basis[i]);
  }
  double r = ricci_c(g, u, v) - riemann4_c(g, d.nu, u, v, d.nu);
  r += cu.dot((d.trB * d.B - d.B * d.B) * cv);
  return r;
}

double induced_ricci_nil(const MetricGroup& g, const Profile& prof, const SurfacePoint& p, const AlgVector& u,
                         const AlgVector& v) {
  return induced_ricci_nil_cached(g, surface_shape_nil(g, prof, p), u, v);
}

double scalar_curvature_nil(const MetricGroup& g, const Profile& prof, const SurfacePoint& p) {
  SurfaceShapeNil d = surface_shape_nil(g, prof, p);
  double total = 0.0;
  Mat corr = d.trB * d.B - d.B * d.B;
  for (size_t i = 0; i < d.basis.size(); ++i) {
    total += ricci(g, d.basis[i], d.basis[i]) - riemann4(g, d.nu, d.basis[i], d.basis[i], d.nu);
    total += corr(i, i);
  }
  return total;
}

double scalar_curvature_nil_trace(const MetricGroup& g, const Profile& prof, const SurfacePoint& p) {
  SurfaceShapeNil d = surface_shape_nil(g, prof, p);
  double kappa = 0.0;
  for (int i = 0; i < g.dim(); ++i) {
    AlgVector e = AlgVector::zero(g.k(), g.l());
    if (i < g.k())
      e.x[i] = 1.0;
    else
      e.z[i - g.k()] = 1.0;
    kappa += ricci(g, e, e);
  }
  return kappa - 2.0 * ricci(g, d.nu, d.nu) + d.trB * d.trB - (d.B * d.B).trace();
}

double induced_ricci_solv(const SolvGroup& g, const Profile& prof, const SurfacePoint& p, const SolvVector& u,
                          const SolvVector& v) {
  return induced_ricci_solv_cached(g, surface_shape_solv(g, prof, p), u, v);
}

double scalar_curvature_solv(const SolvGroup& g, const Profile& prof, const SurfacePoint& p) {
  SurfaceShapeSolv d = surface_shape_solv(g, prof, p);
  double total = 0.0;
  Mat corr = d.trB * d.B - d.B * d.B;
  for (size_t i = 0; i < d.basis.size(); ++i) {
    total += ricci_c(g, d.basis[i], d.basis[i]) - riemann4_c(g, d.nu, d.basis[i], d.basis[i], d.nu);
    total += corr(i, i);
  }
  return total;
}

double scalar_curvature_solv_trace(const SolvGroup& g, const Profile& prof, const SurfacePoint& p) {
  SurfaceShapeSolv d = surface_shape_solv(g, prof, p);
  double kappa = 0.0;
  for (int i = 0; i < g.dim(); ++i) {
    SolvVector e = SolvVector::zero(g.k(), g.l());
    if (i < g.k())
      e.x[i] = 1.0;
    else if (i < g.k() + g.l())
      e.z[i - g.k()] = 1.0;
    else
      e.t = 1.0;
    kappa += ricci_c(g, e, e);
  }
  return kappa - 2.0 * ricci_c(g, d.nu, d.nu) + d.trB * d.trB - (d.B * d.B).trace();
}

}  // namespace isospec
