#include "isospec/harmonics.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "isospec/eig.hpp"
#include "isospec/errors.hpp"
#include "isospec/spectra.hpp"

namespace isospec {

namespace {

long binom(long n, long r) {
  if (r < 0 || n < 0 || r > n) return 0;
  long out = 1;
  for (long i = 0; i < r; ++i) out = out * (n - i) / (i + 1);
  return out;
}

struct MonTable {
  int k = 0, q = 0;
  std::vector<MultiIndex> mons;
  std::map<std::uint64_t, int> index;
  DSparse mom;  // moment pairing within the table
};

std::mutex g_cache_mutex;
std::map<std::pair<int, int>, std::shared_ptr<const MonTable>> g_tables;
std::map<std::pair<int, int>, std::shared_ptr<const DSparse>> g_lap_ops, g_r2_ops;
std::map<std::pair<int, int>, std::shared_ptr<Eigen::SimplicialLDLT<DSparse>>> g_div_solvers;

std::shared_ptr<const MonTable> table(int k, int q) {
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  auto key = std::make_pair(k, q);
  auto it = g_tables.find(key);
  if (it != g_tables.end()) return it->second;
  auto t = std::make_shared<MonTable>();
  t->k = k;
  t->q = q;
  t->mons = monomials_of_degree(k, q);
  for (int i = 0; i < static_cast<int>(t->mons.size()); ++i) t->index[t->mons[i].bits] = i;
  // moment pairing: nonzero only for monomial pairs with equal parity mask
  std::map<std::uint64_t, std::vector<int>> by_parity;
  for (int i = 0; i < static_cast<int>(t->mons.size()); ++i) by_parity[t->mons[i].parity_mask()].push_back(i);
  std::vector<Eigen::Triplet<double>> trip;
  for (const auto& [mask, idxs] : by_parity)
    for (int a : idxs)
      for (int b : idxs) trip.push_back({a, b, sphere_moment(t->mons[a] + t->mons[b])});
  t->mom = DSparse(t->mons.size(), t->mons.size());
  t->mom.setFromTriplets(trip.begin(), trip.end());
  g_tables[key] = t;
  return t;
}

// Laplacian: degree-q coefficients to degree-(q-2) coefficients.
std::shared_ptr<const DSparse> op_lap(int k, int q) {
  {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto it = g_lap_ops.find({k, q});
    if (it != g_lap_ops.end()) return it->second;
  }
  auto src = table(k, q), dst = table(k, q - 2);
  std::vector<Eigen::Triplet<double>> trip;
  for (int c = 0; c < static_cast<int>(src->mons.size()); ++c) {
    const MultiIndex& m = src->mons[c];
    for (int i = 0; i < k; ++i) {
      const int e = m.exp(i);
      if (e >= 2) trip.push_back({dst->index.at(m.with_exp(i, e - 2).bits), c, double(e) * double(e - 1)});
    }
  }
  auto op = std::make_shared<DSparse>(dst->mons.size(), src->mons.size());
  op->setFromTriplets(trip.begin(), trip.end());
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  g_lap_ops[{k, q}] = op;
  return op;
}

// |X|^2 multiplication: degree q to degree q+2.
std::shared_ptr<const DSparse> op_r2(int k, int q) {
  {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto it = g_r2_ops.find({k, q});
    if (it != g_r2_ops.end()) return it->second;
  }
  auto src = table(k, q), dst = table(k, q + 2);
  std::vector<Eigen::Triplet<double>> trip;
  for (int c = 0; c < static_cast<int>(src->mons.size()); ++c)
    for (int i = 0; i < k; ++i)
      trip.push_back({dst->index.at(src->mons[c].with_exp(i, src->mons[c].exp(i) + 2).bits), c, 1.0});
  auto op = std::make_shared<DSparse>(dst->mons.size(), src->mons.size());
  op->setFromTriplets(trip.begin(), trip.end());
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  g_r2_ops[{k, q}] = op;
  return op;
}

// directional derivative along X -> F(X) within degree q
DSparse op_dir(int k, int q, const Mat& F) {
  auto t = table(k, q);
  std::vector<Eigen::Triplet<double>> trip;
  for (int c = 0; c < static_cast<int>(t->mons.size()); ++c) {
    const MultiIndex& m = t->mons[c];
    for (int i = 0; i < k; ++i) {
      const int e = m.exp(i);
      if (e == 0) continue;
      MultiIndex base = m.with_exp(i, e - 1);
      for (int j = 0; j < k; ++j) {
        if (F(i, j) == 0.0) continue;
        trip.push_back({t->index.at(base.with_exp(j, base.exp(j) + 1).bits), c, double(e) * F(i, j)});
      }
    }
  }
  DSparse op(t->mons.size(), t->mons.size());
  op.setFromTriplets(trip.begin(), trip.end());
  return op;
}

// multiplication by a homogeneous polynomial of degree d: q -> q + d
CSparse op_mul_poly(int k, int q, const GradedPoly& mult) {
  int d = 0;
  if (!mult.is_homogeneous(&d)) fail(ErrorKind::NotHomogeneous, "multiplier must be homogeneous");
  auto src = table(k, q), dst = table(k, q + d);
  std::vector<Eigen::Triplet<Cplx>> trip;
  for (int c = 0; c < static_cast<int>(src->mons.size()); ++c)
    for (const auto& [mm, cc] : mult.terms())
      trip.push_back({dst->index.at((src->mons[c] + mm).bits), c, cc});
  CSparse op(dst->mons.size(), src->mons.size());
  op.setFromTriplets(trip.begin(), trip.end());
  return op;
}

// exact division by |X|^2 via the cached normal equations of op_r2
std::shared_ptr<Eigen::SimplicialLDLT<DSparse>> div_solver(int k, int q) {
  {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto it = g_div_solvers.find({k, q});
    if (it != g_div_solvers.end()) return it->second;
  }
  auto r2 = op_r2(k, q);
  DSparse normal = DSparse(r2->transpose()) * (*r2);
  auto solver = std::make_shared<Eigen::SimplicialLDLT<DSparse>>();
  solver->compute(normal);
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  g_div_solvers[{k, q}] = solver;
  return solver;
}

CVec div_r2_vec(int k, int q_target, const CVec& b) {
  auto r2 = op_r2(k, q_target);
  auto solver = div_solver(k, q_target);
  Vec rb_re = r2->transpose() * b.real();
  Vec rb_im = r2->transpose() * b.imag();
  Vec xr = solver->solve(rb_re);
  Vec xi = solver->solve(rb_im);
  CVec x(xr.size());
  x.real() = xr;
  x.imag() = xi;
  return x;
}

CVec to_vec(const MonTable& t, const GradedPoly& p) {
  CVec v = CVec::Zero(t.mons.size());
  for (const auto& [m, c] : p.terms()) {
    auto it = t.index.find(m.bits);
    if (it == t.index.end()) fail(ErrorKind::NotHomogeneous, "polynomial does not live in the table degree");
    v[it->second] = c;
  }
  return v;
}

GradedPoly from_vec(const MonTable& t, const CVec& v, double prune = 1e-14) {
  GradedPoly p(t.k);
  double top = 0;
  for (int i = 0; i < v.size(); ++i) top = std::max(top, std::abs(v[i]));
  for (int i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > prune * std::max(1.0, top)) p.set_term(t.mons[i], v[i]);
  return p;
}

// h(p) on coefficient vectors of homogeneous degree q
CVec harmonic_project_vec(int k, int q, CVec v) {
  std::vector<double> B = harmonic_recursion(k, q);
  CVec acc = B[0] * v;
  CVec cur = v;
  for (int s = 1; s <= q / 2; ++s) {
    cur = (*op_lap(k, q - 2 * (s - 1))) * cur;
    if (cur.norm() == 0.0) break;
    CVec lifted = cur;
    for (int j = 0; j < s; ++j) lifted = (*op_r2(k, q - 2 * s + 2 * j)) * lifted;
    acc += B[s] * lifted;
  }
  return acc;
}

}  // namespace

GradedPoly theta_poly(const Vec& Q, const Mat& A0) {
  const int k = static_cast<int>(A0.rows());
  if ((A0 * A0 + Mat::Identity(k, k)).norm() > 1e-10) fail(ErrorKind::NotUnit, "A0 is not a unit structure");
  CVec c(k);
  Vec jq = A0 * Q;
  for (int i = 0; i < k; ++i) c[i] = Cplx(Q[i], jq[i]);
  return GradedPoly::linear(c);
}

GradedPoly d_op_apply(const Mat& F, const GradedPoly& p) { return p.directional(F); }

std::vector<double> harmonic_recursion(int k, int r) {
  std::vector<double> B{1.0};
  for (int s = 1; s <= r / 2; ++s) B.push_back(-B[s - 1] / (2.0 * s * (k + 2 * r - 2 * s - 2)));
  return B;
}

std::vector<double> harmonic_recursion_printed(int r) {
  std::vector<double> B{1.0};
  for (int s = 1; s <= r / 2; ++s) B.push_back(-B[s - 1] / (2.0 * s * (2 * (s + r) - 1)));
  return B;
}

GradedPoly harmonic_project(const GradedPoly& p) {
  int r = 0;
  if (!p.is_homogeneous(&r)) fail(ErrorKind::NotHomogeneous, "harmonic_project needs homogeneous input");
  if (r < 0) return p;
  auto t = table(p.nvars(), r);
  return from_vec(*t, harmonic_project_vec(p.nvars(), r, to_vec(*t, p)));
}

long harmonic_dim(int k, int q) { return binom(k + q - 1, q) - binom(k + q - 3, q - 2); }

std::vector<GradedPoly> T_apply(const GradedPoly& p) {
  int r = 0;
  if (!p.is_homogeneous(&r)) fail(ErrorKind::NotHomogeneous, "T_apply needs homogeneous input");
  std::vector<GradedPoly> pieces;
  const int k = p.nvars();
  CVec cur = to_vec(*table(k, r), p);
  for (int q = r; q >= 0; q -= 2) {
    CVec h = harmonic_project_vec(k, q, cur);
    pieces.push_back(from_vec(*table(k, q), h));
    if (q < 2) break;
    cur = div_r2_vec(k, q - 2, cur - h);
  }
  return pieces;
}

GradedPoly T_invert(const std::vector<GradedPoly>& pieces, int r) {
  if (pieces.empty()) fail(ErrorKind::SingularTruncation, "no pieces");
  const int k = pieces[0].nvars();
  GradedPoly out(k);
  for (size_t j = 0; j < pieces.size(); ++j) {
    const int deg = r - 2 * static_cast<int>(j);
    if (deg < 0) fail(ErrorKind::SingularTruncation, "piece degrees inconsistent with target degree");
    int pd = 0;
    if (!pieces[j].is_zero() && (!pieces[j].is_homogeneous(&pd) || pd != deg))
      fail(ErrorKind::SingularTruncation, "piece of unexpected degree");
    GradedPoly lift = pieces[j];
    for (int s = 0; s < static_cast<int>(j); ++s) lift = lift.mul_r2();
    out += lift;
  }
  return out;
}

// Jordan pairing of a unit structure: orthonormal pairs (u_j, A0 u_j).
std::vector<Vec> theta_frame_directions(const Mat& A0) {
  const int k = static_cast<int>(A0.rows());
  std::vector<Vec> chosen;
  std::vector<Vec> qdirs;
  auto project_out = [&](Vec v) {
    for (const Vec& w : chosen) v -= w * w.dot(v);
    return v;
  };
  for (int seed = 0; seed < k && static_cast<int>(chosen.size()) < k; ++seed) {
    Vec u = project_out(Vec::Unit(k, seed));
    if (u.norm() < 1e-8) continue;
    u.normalize();
    Vec v = project_out(A0 * u);
    v.normalize();
    chosen.push_back(u);
    chosen.push_back(v);
    qdirs.push_back(u);
  }
  if (static_cast<int>(chosen.size()) != k) fail(ErrorKind::NotUnit, "pairing failed; is k even?");
  return qdirs;
}

bool theta_frame_compatible(const std::vector<Vec>& dirs, const Mat& A0p, double tol) {
  const int k = static_cast<int>(A0p.rows());
  if (static_cast<int>(dirs.size()) * 2 != k) return false;
  Mat frame(k, k);
  for (size_t j = 0; j < dirs.size(); ++j) {
    frame.col(2 * j) = dirs[j];
    frame.col(2 * j + 1) = A0p * dirs[j];
  }
  return orthogonality_residual(frame) <= tol;
}

namespace {

// Expand every Theta-monomial of total degree q (symbols: k/2 thetas then
// k/2 conjugates) into x-coefficients, optionally harmonically projected.
// Columns follow monomials_of_degree(k, q) on the symbol space.
CMat theta_monomial_matrix(const Mat& A0, int q, bool project, std::vector<int>* s_out,
                           const std::vector<Vec>& qdirs) {
  const int k = static_cast<int>(A0.rows());
  auto t = table(k, q);
  const int half = k / 2;
  std::vector<GradedPoly> symbols;
  for (int j = 0; j < half; ++j) symbols.push_back(theta_poly(qdirs[j], A0));
  for (int j = 0; j < half; ++j) symbols.push_back(symbols[j].conj());
  auto sym_mons = monomials_of_degree(k, q);
  CMat out(t->mons.size(), sym_mons.size());
  if (s_out) s_out->resize(sym_mons.size());
  for (int col = 0; col < static_cast<int>(sym_mons.size()); ++col) {
    GradedPoly prod = GradedPoly::constant(k, 1.0);
    int s = 0;
    for (int sym = 0; sym < k; ++sym) {
      const int e = sym_mons[col].exp(sym);
      if (sym < half) s += e;
      for (int rep = 0; rep < e; ++rep) prod = prod * symbols[sym];
    }
    if (s_out) (*s_out)[col] = s;
    CVec v = to_vec(*t, prod);
    if (project) v = harmonic_project_vec(k, q, v);
    out.col(col) = v;
  }
  return out;
}

}  // namespace

GradedPoly kappa_star(const GradedPoly& p, const Mat& A0, const Mat& A0p) {
  int r = 0;
  if (!p.is_homogeneous(&r)) fail(ErrorKind::NotHomogeneous, "kappa_star needs homogeneous input");
  if (r == 0) return p;
  const int k = p.nvars();
  auto t = table(k, r);
  std::vector<Vec> dirs = theta_frame_directions(A0);
  if (!theta_frame_compatible(dirs, A0p))
    fail(ErrorKind::BadInput, "structures do not share a theta frame; reduce the pair first");
  CMat T = theta_monomial_matrix(A0, r, false, nullptr, dirs);
  CMat Tp = theta_monomial_matrix(A0p, r, false, nullptr, dirs);
  Eigen::PartialPivLU<CMat> lu(T);
  CVec c = lu.solve(to_vec(*t, p));
  return from_vec(*t, Tp * c);
}

GradedPoly kappa(const GradedPoly& h, const Mat& A0, const Mat& A0p) {
  return harmonic_project(kappa_star(h, A0, A0p));
}

HarmonicBasis HarmonicBasis::build(const Mat& A0, int q, const std::vector<Vec>* dirs) {
  HarmonicBasis hb;
  hb.k = static_cast<int>(A0.rows());
  hb.q = q;
  hb.A0 = A0;
  hb.frame_dirs = dirs ? *dirs : theta_frame_directions(A0);
  if (!theta_frame_compatible(hb.frame_dirs, A0))
    fail(ErrorKind::BadInput, "theta frame is not compatible with the structure");
  auto t = table(hb.k, q);
  hb.mons = t->mons;
  hb.mom = t->mom;
  std::vector<int> s_of;
  hb.theta_proj = theta_monomial_matrix(A0, q, true, &s_of, hb.frame_dirs);
  const int np = static_cast<int>(hb.theta_proj.cols());

  const long target = harmonic_dim(hb.k, q);
  hb.basis = CMat(hb.mons.size(), target);
  hb.mgs_coeffs = CMat::Zero(np, target);
  hb.bigrade_offset.assign(q + 2, 0);
  int filled = 0;
  for (int s = 0; s <= q; ++s) {
    hb.bigrade_offset[s] = filled;
    for (int j = 0; j < np; ++j) {
      if (s_of[j] != s) continue;
      CVec v = hb.theta_proj.col(j);
      CVec w = CVec::Zero(np);
      w[j] = 1.0;
      const double orig = std::sqrt(std::abs((v.adjoint() * (hb.mom * v))(0).real()));
      if (orig < 1e-300) continue;
      for (int u = hb.bigrade_offset[s]; u < filled; ++u) {
        Cplx overlap = (hb.basis.col(u).adjoint() * (hb.mom * v))(0);
        v -= overlap * hb.basis.col(u);
        w -= overlap * hb.mgs_coeffs.col(u);
      }
      double nn = std::sqrt(std::max(0.0, (v.adjoint() * (hb.mom * v))(0).real()));
      if (nn <= 1e-10 * std::max(orig, 1.0)) continue;
      if (filled >= target) fail(ErrorKind::UnexpectedEigenvalue, "basis dimension exceeds the harmonic dimension");
      hb.basis.col(filled) = v / nn;
      hb.mgs_coeffs.col(filled) = w / nn;
      hb.bigrade.push_back(s);
      ++filled;
    }
  }
  hb.bigrade_offset[q + 1] = filled;
  if (filled != target)
    fail(ErrorKind::UnexpectedEigenvalue,
         "harmonic basis dimension " + std::to_string(filled) + " != " + std::to_string(target));
  return hb;
}

GradedPoly HarmonicBasis::poly(int j) const { return from_vec(*table(k, q), basis.col(j)); }

CVec HarmonicBasis::to_coeff_vec(const GradedPoly& p) const { return to_vec(*table(k, q), p); }

GradedPoly HarmonicBasis::from_coeff_vec(const CVec& v) const { return from_vec(*table(k, q), v); }

CVec HarmonicBasis::coords_vec(const CVec& coeffs) const { return basis.adjoint() * (mom * coeffs); }

CVec HarmonicBasis::coords(const GradedPoly& p) const { return coords_vec(to_coeff_vec(p)); }

GradedPoly zonal_kernel(const HarmonicBasis& hb, const Vec& Qu) {
  CVec monvals(hb.mons.size());
  for (size_t i = 0; i < hb.mons.size(); ++i) {
    double v = 1.0;
    for (int j = 0; j < hb.k; ++j)
      for (int e = 0; e < hb.mons[i].exp(j); ++e) v *= Qu[j];
    monvals[i] = v;
  }
  CVec vals = hb.basis.transpose() * monvals;  // eta_j(Qu)
  CVec kernel = (hb.basis.conjugate() * vals) / sphere_volume(hb.k);
  return from_vec(*table(hb.k, hb.q), kernel);
}

HqSplit hq_split(const HarmonicBasis& hb) {
  HqSplit out;
  out.dims.assign(hb.q + 1, 0);
  for (int s : hb.bigrade) out.dims[s]++;
  DSparse D = op_dir(hb.k, hb.q, hb.A0);
  double worst = 0.0;
  for (int j = 0; j < hb.N(); ++j) {
    const double ev = 2.0 * hb.bigrade[j] - hb.q;
    CVec d = D * hb.basis.col(j) - Cplx(0, ev) * hb.basis.col(j);
    worst = std::max(worst, std::sqrt(std::abs((d.adjoint() * (hb.mom * d))(0).real())));
  }
  out.max_eigen_residual = worst;
  long sum = 0;
  for (int d : out.dims) sum += d;
  out.complete = (sum == harmonic_dim(hb.k, hb.q));
  if (worst > 1e-9 || !out.complete)
    fail(ErrorKind::UnexpectedEigenvalue, "eigen-splitting residual " + std::to_string(worst));
  return out;
}

CMat dop_matrix(const HarmonicBasis& hb, const Mat& F) {
  DSparse D = op_dir(hb.k, hb.q, F);
  CMat applied = D * hb.basis;
  return hb.basis.adjoint() * (hb.mom * applied);
}

MultProjectOp mult_project_operator(const GradedPoly& multiplier, const HarmonicBasis& hq,
                                    const HarmonicBasis* hq_up, const HarmonicBasis* hq_down) {
  const int k = hq.k, q = hq.q;
  auto label = [](int deg) { return "H(" + std::to_string(deg) + ")"; };
  if (multiplier.is_zero()) {
    // identically vanishing coefficient (e.g. <J_A X, J_c X> for an
    // anticommuting pair): the operator is zero on every component
    MultProjectOp out;
    out.same = {label(q), label(q), CMat::Zero(hq.N(), hq.N())};
    if (hq_up) out.up = {label(q), label(q + 2), CMat::Zero(hq_up->N(), hq.N())};
    if (hq_down && q >= 2) out.down = {label(q), label(q - 2), CMat::Zero(hq_down->N(), hq.N())};
    return out;
  }
  CSparse M = op_mul_poly(k, q, multiplier);
  CMat prod = M * hq.basis;  // degree q+2 coefficients
  const int nup = static_cast<int>(prod.rows());
  CMat up_c(nup, hq.N()), same_c(table(k, q)->mons.size(), hq.N());
  CMat down_c(q >= 2 ? table(k, q - 2)->mons.size() : 0, hq.N());
  double leak = 0.0;
  for (int j = 0; j < hq.N(); ++j) {
    CVec cur = prod.col(j);
    CVec h2 = harmonic_project_vec(k, q + 2, cur);
    up_c.col(j) = h2;
    cur = div_r2_vec(k, q, cur - h2);
    CVec h0 = harmonic_project_vec(k, q, cur);
    same_c.col(j) = h0;
    if (q >= 2) {
      cur = div_r2_vec(k, q - 2, cur - h0);
      CVec hm = harmonic_project_vec(k, q - 2, cur);
      down_c.col(j) = hm;
      if (q >= 4) leak = std::max(leak, (cur - hm).norm());
    } else {
      leak = std::max(leak, (cur - h0).norm());
    }
  }
  MultProjectOp out;
  out.lower_leak = leak;
  out.same = {label(q), label(q), hq.basis.adjoint() * (hq.mom * same_c)};
  if (hq_up) out.up = {label(q), label(q + 2), hq_up->basis.adjoint() * (hq_up->mom * up_c)};
  if (hq_down && q >= 2) out.down = {label(q), label(q - 2), hq_down->basis.adjoint() * (hq_down->mom * down_c)};
  return out;
}

CMat kappa_matrix(const HarmonicBasis& src, const HarmonicBasis& dst) {
  if (src.q != dst.q || src.k != dst.k) fail(ErrorKind::ShapeMismatch, "kappa_matrix degree mismatch");
  // kappa(eta_m) = sum_j W_jm h'(theta'-monomial_j): express in the dst basis
  CMat images = dst.theta_proj * src.mgs_coeffs;
  return dst.basis.adjoint() * (dst.mom * images);
}

namespace {

GradedPoly quad_form_poly(int k, const Mat& S) {
  // x^T S x as a polynomial (S need not be symmetric; it is symmetrized)
  GradedPoly p(k);
  Mat sym = 0.5 * (S + S.transpose());
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) {
      const double c = (i == j) ? sym(i, i) : 2.0 * sym(i, j);
      if (c != 0.0) {
        MultiIndex m = MultiIndex::zero(k).with_exp(i, 1);
        m = m.with_exp(j, m.exp(j) + 1);
        p.set_term(m, c);
      }
    }
  return p;
}

double rect_conj_residual(const CMat& K_out, const CMat& B, const CMat& Bp, const CMat& K_in) {
  const double denom = std::max(K_in.norm(), K_out.norm()) * (B.norm() + Bp.norm());
  if (denom < 1e-300) return 0.0;
  return (K_out * B - Bp * K_in).norm() / denom;
}

}  // namespace

IntertwiningCertificate verify_intertwining(const EndoSpace& space, const EndoSpace& space_p, int r_max,
                                            double tol) {
  if (space.k != space_p.k || space.l != space_p.l) fail(ErrorKind::DimensionMismatch, "spaces of different size");
  const int k = space.k, l = space.l;
  const int idx = space.anticommutator_index.value_or(0);
  if (space_p.anticommutator_index.value_or(0) != idx)
    fail(ErrorKind::BadInput, "deformed pair must share the anticommutator index");
  for (int c = 0; c < l; ++c)
    if (c != idx && (space.basis[c] - space_p.basis[c]).norm() > 1e-12)
      fail(ErrorKind::BadInput, "perpendicular endomorphisms must coincide across the pair");

  const Mat A = space.basis[idx];
  const Mat Ap = space_p.basis[idx];
  auto unit_of = [&](const Mat& m) {
    if ((m * m + Mat::Identity(k, k)).norm() <= 1e-12) return m;
    return rescale_to_unit(m).A0;
  };
  const Mat A0 = unit_of(A);
  const Mat A0p = unit_of(Ap);

  IntertwiningCertificate cert;
  cert.pass = true;

  // polynomial identities that do not depend on the degree
  for (int c = 0; c < l; ++c) {
    if (c == idx) continue;
    GradedPoly mixed = quad_form_poly(k, A.transpose() * space.basis[c]);
    GradedPoly mixed_p = quad_form_poly(k, Ap.transpose() * space_p.basis[c]);
    cert.identity_residual_J0c = std::max({cert.identity_residual_J0c, mixed.max_abs_coeff(), mixed_p.max_abs_coeff()});
  }
  // complexified expansion of <J_c X, J_d X>: the conjugate-pure part vanishes
  {
    std::vector<Vec> qdirs = theta_frame_directions(A0);
    std::vector<Vec> on_basis;  // orthonormal pairs (u_j, A0 u_j)
    for (const Vec& u : qdirs) {
      on_basis.push_back(u);
      on_basis.push_back(A0 * u);
    }
    for (int c = 0; c < l; ++c) {
      if (c == idx) continue;
      for (int d = c; d < l; ++d) {
        if (d == idx) continue;
        const Mat &Jc = space.basis[c], &Jd = space.basis[d];
        GradedPoly j1(k), j2(k);
        for (const Vec& Ei : on_basis) {
          GradedPoly qc = theta_poly(Vec(Jc * Ei), A0);
          GradedPoly qd = theta_poly(Vec(Jd * Ei), A0);
          j1 += (qc * qd.conj() + qc.conj() * qd) * Cplx(0.25);
          j2 += (qc * qd + qc.conj() * qd.conj()) * Cplx(0.25);
        }
        GradedPoly direct = quad_form_poly(k, Jc.transpose() * Jd);
        cert.expansion_residual = std::max(cert.expansion_residual, (j1 + j2 - direct).max_abs_coeff());
        cert.vanishing_part_residual = std::max(cert.vanishing_part_residual, j2.max_abs_coeff());
      }
    }
  }

  // per-degree bases and kappa matrices
  std::vector<Vec> dirs = theta_frame_directions(A0);
  if (!theta_frame_compatible(dirs, A0p))
    fail(ErrorKind::BadInput, "structures do not share a theta frame; reduce the pair first");
  std::vector<HarmonicBasis> hb, hbp;
  std::vector<CMat> K(r_max + 1);
  for (int q = 0; q <= r_max; ++q) {
    hb.push_back(HarmonicBasis::build(A0, q, &dirs));
    hbp.push_back(HarmonicBasis::build(A0p, q, &dirs));
    K[q] = kappa_matrix(hb[q], hbp[q]);
    hb[q].theta_proj.resize(0, 0);  // only mgs_coeffs enters kappa_matrix
    hbp[q].theta_proj.resize(0, 0);
    hb[q].mgs_coeffs.resize(0, 0);
    hbp[q].mgs_coeffs.resize(0, 0);
  }

  auto push = [&](const std::string& fam, int degree, double residual) {
    FamilyResidual fr{fam, degree, residual, residual <= tol};
    cert.worst_residual = std::max(cert.worst_residual, residual);
    if (!fr.pass) cert.pass = false;
    cert.entries.push_back(std::move(fr));
  };

  const GradedPoly multA = quad_form_poly(k, A.transpose() * A);
  const GradedPoly multAp = quad_form_poly(k, Ap.transpose() * Ap);

  for (int q = 0; q <= r_max; ++q) {
    // spherical Laplacian eigenvalue action
    const double lam = -double(q) * (q + k - 2);
    CMat L = lam * CMat::Identity(hb[q].N(), hb[q].N());
    push("sph_laplacian", q, conjugation_residual(L, L, K[q]));
    // D_alpha for every Z-direction
    for (int a = 0; a < l; ++a) {
      CMat Dm = dop_matrix(hb[q], space.basis[a]);
      CMat Dmp = dop_matrix(hbp[q], space_p.basis[a]);
      push("D[" + std::to_string(a) + "]", q, conjugation_residual(Dm, Dmp, K[q]));
    }
    // multiplication families; blocks whose target degree exceeds r_max are
    // outside the truncation and are reported by the q+2 <= r_max degrees
    auto mult_family = [&](const std::string& name, const GradedPoly& m1, const GradedPoly& m2) {
      const HarmonicBasis* up = (q + 2 <= r_max) ? &hb[q + 2] : nullptr;
      const HarmonicBasis* upp = (q + 2 <= r_max) ? &hbp[q + 2] : nullptr;
      const HarmonicBasis* dn = (q >= 2) ? &hb[q - 2] : nullptr;
      const HarmonicBasis* dnp = (q >= 2) ? &hbp[q - 2] : nullptr;
      MultProjectOp op1 = mult_project_operator(m1, hb[q], up, dn);
      MultProjectOp op2 = mult_project_operator(m2, hbp[q], upp, dnp);
      push(name + "@same", q, rect_conj_residual(K[q], op1.same.m, op2.same.m, K[q]));
      if (up) push(name + "@up", q, rect_conj_residual(K[q + 2], op1.up.m, op2.up.m, K[q]));
      if (dn) push(name + "@down", q, rect_conj_residual(K[q - 2], op1.down.m, op2.down.m, K[q]));
    };
    mult_family("mult|J_AX|^2", multA, multAp);
    for (int c = 0; c < l; ++c) {
      if (c == idx) continue;
      for (int d = c; d < l; ++d) {
        if (d == idx) continue;
        GradedPoly m1 = quad_form_poly(k, space.basis[c].transpose() * space.basis[d]);
        GradedPoly m2 = quad_form_poly(k, space_p.basis[c].transpose() * space_p.basis[d]);
        mult_family("M[" + std::to_string(c) + "," + std::to_string(d) + "]", m1, m2);
      }
    }
  }
  if (cert.identity_residual_J0c > tol || cert.vanishing_part_residual > tol || cert.expansion_residual > tol)
    cert.pass = false;
  return cert;
}

std::string IntertwiningCertificate::to_text() const {
  std::ostringstream os;
  os.precision(6);
  os << "intertwining_certificate\n";
  os << "  verdict " << (pass ? "PASS" : "FAIL") << "\n";
  os << "  worst_residual " << worst_residual << "\n";
  os << "  identity_residual_J0c " << identity_residual_J0c << "\n";
  os << "  expansion_residual " << expansion_residual << "\n";
  os << "  vanishing_part_residual " << vanishing_part_residual << "\n";
  for (const auto& e : entries)
    os << "  family " << e.family << " degree " << e.degree << " residual " << e.residual << " "
       << (e.pass ? "PASS" : "FAIL") << "\n";
  return os.str();
}

}  // namespace isospec
