#include "isospec/solvgeom.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "isospec/eig.hpp"
#include "isospec/errors.hpp"

namespace isospec {

SolvPoint multiply(const SolvGroup& g, const SolvPoint& p, const SolvPoint& q) {
  const double rt = std::sqrt(p.t);
  AlgVector br = bracket(g.nil, {p.x, Vec::Zero(g.l())}, {q.x, Vec::Zero(g.l())});
  SolvPoint out;
  out.x = p.x + rt * q.x;
  out.z = p.z + p.t * q.z + 0.5 * rt * br.z;
  out.t = p.t * q.t;
  return out;
}

SolvPoint inverse(const SolvGroup& g, const SolvPoint& p) {
  (void)g;  // [X,X] = 0 kills the bracket term
  SolvPoint out;
  out.x = -p.x / std::sqrt(p.t);
  out.z = -p.z / p.t;
  out.t = 1.0 / p.t;
  return out;
}

Mat solv_frame(const SolvGroup& g, const SolvPoint& p) {
  const int k = g.k(), l = g.l(), n = k + l + 1;
  Mat frame = Mat::Zero(n, n);
  const double rt = std::sqrt(p.t);
  for (int i = 0; i < k; ++i) {
    frame(i, i) = rt;
    for (int a = 0; a < l; ++a) frame(k + a, i) = rt * 0.5 * (g.nil.space.basis[a] * p.x)(i);
  }
  for (int a = 0; a < l; ++a) frame(k + a, k + a) = p.t;
  frame(n - 1, n - 1) = g.c * p.t;
  return frame;
}

SolvVector nabla_c(const SolvGroup& g, const SolvVector& p, const SolvVector& q) {
  const double c = g.c;
  AlgVector nil_part = nabla(g.nil, {p.x, p.z}, {q.x, q.z});
  SolvVector out{nil_part.x, nil_part.z, c * (0.5 * p.x.dot(q.x) + p.z.dot(q.z))};
  out.x += -q.t * (c / 2) * p.x;
  out.z += -q.t * c * p.z;
  return out;
}

namespace {

// (a ^ b)(w) = <a,w> b - <b,w> a on solvable algebra elements
SolvVector wedge_apply(const SolvVector& a, const SolvVector& b, const SolvVector& w) {
  return b * a.dot(w) - a * b.dot(w);
}

}  // namespace

SolvVector riemann_c(const SolvGroup& g, const SolvVector& u, const SolvVector& v, const SolvVector& w) {
  const int k = g.k(), l = g.l();
  const double c = g.c;
  const auto& J = g.nil.space;
  auto brk_z = [&](const Vec& a, const Vec& b) {
    Vec z(l);
    for (int m = 0; m < l; ++m) z[m] = (J.basis[m] * a).dot(b);
    return z;
  };
  SolvVector T = SolvVector::zero(k, l);
  T.t = 1.0;
  auto lift = [&](const AlgVector& a) { return SolvVector{a.x, a.z, 0.0}; };

  SolvVector out = SolvVector::zero(k, l);
  // nilpotent part on the n-components
  out = out + lift(riemann(g.nil, {u.x, u.z}, {v.x, v.z}, {w.x, w.z}));
  // (X_u, X_v): -(c/2) [Xu,Xv] ^ T + (c^2/4) Xu ^ Xv
  SolvVector bruv = SolvVector{Vec::Zero(k), brk_z(u.x, v.x), 0.0};
  SolvVector Xu{u.x, Vec::Zero(l), 0.0}, Xv{v.x, Vec::Zero(l), 0.0};
  SolvVector Zu{Vec::Zero(k), u.z, 0.0}, Zv{Vec::Zero(k), v.z, 0.0};
  out = out - wedge_apply(bruv, T, w) * (c / 2) + wedge_apply(Xu, Xv, w) * (c * c / 4);
  // (X_u, Z_v) and (Z_u, X_v): -(c/4) J_Zv(Xu) ^ T + (c^2/2) Xu ^ Zv, antisymmetrized
  SolvVector JZvXu{J.J(v.z) * u.x, Vec::Zero(l), 0.0};
  SolvVector JZuXv{J.J(u.z) * v.x, Vec::Zero(l), 0.0};
  out = out - wedge_apply(JZvXu, T, w) * (c / 4) + wedge_apply(Xu, Zv, w) * (c * c / 2);
  out = out + wedge_apply(JZuXv, T, w) * (c / 4) - wedge_apply(Xv, Zu, w) * (c * c / 2);
  // (Z_u, Z_v): c^2 Zu ^ Zv
  out = out + wedge_apply(Zu, Zv, w) * (c * c);
  // (U_n, T) parts: R_c((X+Z) ^ T) = (c/4) sum_a J_a(X) ^ e_a - (c/2) J*_Z
  //                                   + c^2 (X/4 + Z) ^ T
  auto n_wedge_T = [&](const Vec& X, const Vec& Z, double sign) {
    SolvVector acc = SolvVector::zero(k, l);
    for (int a = 0; a < l; ++a) {
      SolvVector JaX{J.basis[a] * X, Vec::Zero(l), 0.0};
      SolvVector ea{Vec::Zero(k), Vec::Unit(l, a), 0.0};
      acc = acc + wedge_apply(JaX, ea, w) * (c / 4);
    }
    acc.x += -(c / 2) * (J.J(Z) * w.x);  // (J*_Z)(w) = J_Z(w_x)
    SolvVector mix{0.25 * X, Z, 0.0};
    acc = acc + wedge_apply(mix, T, w) * (c * c);
    return acc * sign;
  };
  out = out + n_wedge_T(u.x, u.z, v.t);   // v.t * R_c(U_n ^ T)
  out = out + n_wedge_T(v.x, v.z, -u.t);  // -u.t * R_c(V_n ^ T)
  return out;
}

double riemann4_c(const SolvGroup& g, const SolvVector& u, const SolvVector& v, const SolvVector& w,
                  const SolvVector& s) {
  return riemann_c(g, u, v, w).dot(s);
}

Mat curvature_operator_c(const SolvGroup& g) {
  const int k = g.k(), l = g.l(), n = k + l + 1;
  auto basis_vec = [&](int i) {
    SolvVector b = SolvVector::zero(k, l);
    if (i < k)
      b.x[i] = 1.0;
    else if (i < k + l)
      b.z[i - k] = 1.0;
    else
      b.t = 1.0;
    return b;
  };
  auto pairs = wedge_basis(n);
  const int m = static_cast<int>(pairs.size());
  Mat op(m, m);
  for (int a = 0; a < m; ++a) {
    SolvVector u = basis_vec(pairs[a].first), v = basis_vec(pairs[a].second);
    for (int b = 0; b < m; ++b) {
      SolvVector w = basis_vec(pairs[b].first), s = basis_vec(pairs[b].second);
      op(a, b) = riemann4_c(g, u, v, w, s);
    }
  }
  return op;
}

double ricci_c(const SolvGroup& g, const SolvVector& u, const SolvVector& v) {
  const double c2 = g.c * g.c;
  const double k = g.k(), l = g.l();
  double r = ricci(g.nil, {u.x, u.z}, {v.x, v.z});
  r -= c2 * (k / 4 + l / 2) * u.x.dot(v.x);
  r -= c2 * (k / 2 + l) * u.z.dot(v.z);
  r -= c2 * (k / 4 + l) * u.t * v.t;
  return r;
}

namespace {

enum class BlockId { Dg, DgPerp, F, G };

struct BlockKey {
  BlockId id;
  int p = -1, q = -1;  // box indices where applicable
  bool operator<(const BlockKey& o) const {
    if (id != o.id) return id < o.id;
    if (p != o.p) return p < o.p;
    return q < o.q;
  }
  std::string name() const {
    switch (id) {
      case BlockId::Dg: return "Dg";
      case BlockId::DgPerp: return "Dgperp[" + std::to_string(p) + "," + std::to_string(q) + "]";
      case BlockId::F: return "F[" + std::to_string(p) + "," + std::to_string(q) + "]";
      case BlockId::G: return "G";
    }
    return "?";
  }
};

struct Decomposition {
  std::vector<std::pair<BlockKey, std::vector<int>>> blocks;
};

// Classify the lexicographic wedge basis of an operator on k(+l)(+1)
// coordinates into invariant subspaces. Nilpotent: Dg (same-copy v^v and
// z^z), the Dg-perp mixed boxes, the F boxes, G = v^z. Solvable: the scaled
// curvature couples v^z with v^t and the z^z/diagonal part with z^t, so the
// invariant grouping is {Dg + z^t}, {Dgperp}, {F}, {G + v^t}.
Decomposition classify(int k, int l, bool has_t, int n_block, int a, [[maybe_unused]] int b) {
  const int dim = k + l + (has_t ? 1 : 0);
  auto pairs = wedge_basis(dim);
  std::map<BlockKey, std::vector<int>> acc;
  auto copy_of = [&](int i) { return i / n_block; };
  auto sign_of = [&](int c) { return c < a ? +1 : -1; };
  for (int idx = 0; idx < static_cast<int>(pairs.size()); ++idx) {
    auto [i, j] = pairs[idx];
    const bool iv = i < k, jv = j < k;
    const bool iz = i >= k && i < k + l, jz = j >= k && j < k + l;
    const bool jt = j >= k + l;  // j > i, so only j can be the t slot
    BlockKey key;
    if (iv && jv) {
      int ci = copy_of(i), cj = copy_of(j);
      if (ci == cj)
        key = BlockKey{BlockId::Dg};
      else if (sign_of(ci) == sign_of(cj))
        key = BlockKey{BlockId::DgPerp, std::min(ci, cj), std::max(ci, cj)};
      else {
        int cp = sign_of(ci) > 0 ? ci : cj;  // (a)-copy index
        int cm = sign_of(ci) > 0 ? cj : ci;  // (b)-copy index
        key = BlockKey{BlockId::F, cp, cm};
      }
    } else if (iz && jz) {
      key = BlockKey{BlockId::Dg};
    } else if ((iv && jz) || (iz && jv)) {
      key = BlockKey{BlockId::G};
    } else if (iv && jt) {
      key = BlockKey{BlockId::G};  // v ^ t pairs with v ^ z
    } else {
      key = BlockKey{BlockId::Dg};  // z ^ t pairs with the diagonal space
    }
    acc[key].push_back(idx);
  }
  Decomposition d;
  for (auto& [key, idxs] : acc) d.blocks.push_back({key, idxs});
  return d;
}

std::vector<IsotonalBlock> block_spectra(const Mat& op, const Decomposition& d, double tol, double& worst,
                                         const std::string& tag) {
  std::vector<IsotonalBlock> out;
  for (const auto& [key, idxs] : d.blocks) {
    const int m = static_cast<int>(idxs.size());
    Mat sub(m, m);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) sub(r, c) = op(idxs[r], idxs[c]);
    double res = 0.0;
    for (int c : idxs)
      for (int r = 0; r < op.rows(); ++r) {
        bool inside = false;
        for (int t : idxs)
          if (t == r) {
            inside = true;
            break;
          }
        if (!inside) res = std::max(res, std::abs(op(r, c)));
      }
    worst = std::max(worst, res);
    IsotonalBlock blk;
    blk.name = key.name();
    blk.invariance_residual = res;
    blk.spectrum = SpectrumReport::from_values(jacobi_eigensym(sub).values, 1e-7, tag + ":" + key.name());
    (void)tol;
    out.push_back(std::move(blk));
  }
  return out;
}

IsotonalReport isotonal_common(const Mat& op1, const Mat& op2, int k, int l, bool has_t, int n_block, int a1,
                               int b1, int a2, int b2, double tol) {
  if (op1.rows() != op2.rows()) fail(ErrorKind::DimensionMismatch, "operators of different size");
  IsotonalReport rep;
  Decomposition d1 = classify(k, l, has_t, n_block, a1, b1);
  Decomposition d2 = classify(k, l, has_t, n_block, a2, b2);
  double worst = 0.0;
  rep.blocks_1 = block_spectra(op1, d1, tol, worst, "g1");
  rep.blocks_2 = block_spectra(op2, d2, tol, worst, "g2");
  rep.max_invariance_residual = worst;
  rep.blocks_invariant = worst <= tol;
  if (!rep.blocks_invariant)
    fail(ErrorKind::BlockNotInvariant, "off-block residual " + std::to_string(worst));
  rep.total_1 = SpectrumReport::from_values(jacobi_eigensym(op1).values, 1e-7, "g1:total");
  rep.total_2 = SpectrumReport::from_values(jacobi_eigensym(op2).values, 1e-7, "g2:total");
  rep.multiset = compare_spectra(rep.total_1, rep.total_2, SpectrumCompareMode::Multiset, 1e-8);
  rep.set = compare_spectra(rep.total_1, rep.total_2, SpectrumCompareMode::Set, 1e-8);

  // reflection law between an F box and a same-sign mixed box, when both exist
  auto find_block = [](const std::vector<IsotonalBlock>& blocks, const std::string& prefix) -> const IsotonalBlock* {
    for (const auto& b : blocks)
      if (b.name.compare(0, prefix.size(), prefix) == 0) return &b;
    return nullptr;
  };
  const IsotonalBlock* fbox = find_block(rep.blocks_1, "F[");
  const IsotonalBlock* dbox = find_block(rep.blocks_1, "Dgperp[");
  if (fbox == nullptr || dbox == nullptr) {
    fbox = find_block(rep.blocks_2, "F[");
    dbox = find_block(rep.blocks_2, "Dgperp[");
  }
  if (fbox && dbox) {
    std::vector<double> u, w;
    for (size_t i = 0; i < fbox->spectrum.values.size(); ++i)
      for (int m = 0; m < fbox->spectrum.multiplicities[i]; ++m) u.push_back(fbox->spectrum.values[i]);
    for (size_t i = 0; i < dbox->spectrum.values.size(); ++i)
      for (int m = 0; m < dbox->spectrum.multiplicities[i]; ++m) w.push_back(dbox->spectrum.values[i]);
    if (u.size() == w.size() && !u.empty()) {
      rep.reflection_applicable = true;
      double center = 0.0;
      for (size_t i = 0; i < u.size(); ++i) center += 0.5 * (u[i] + w[w.size() - 1 - i]);
      center /= double(u.size());
      double res = 0.0;
      for (size_t i = 0; i < u.size(); ++i) res = std::max(res, std::abs(u[i] + w[w.size() - 1 - i] - 2 * center));
      rep.reflection_center = center;
      rep.reflection_residual = res;
    }
  }
  return rep;
}

}  // namespace

IsotonalReport isotonal_decomposition(const SolvGroup& g1, int a1, int b1, const SolvGroup& g2, int a2, int b2,
                                      int n_block, double tol) {
  if (a1 + b1 != a2 + b2) fail(ErrorKind::BadInput, "a+b must agree");
  return isotonal_common(curvature_operator_c(g1), curvature_operator_c(g2), g1.k(), g1.l(), true, n_block, a1, b1,
                         a2, b2, tol);
}

IsotonalReport isotonal_decomposition_nil(const MetricGroup& g1, int a1, int b1, const MetricGroup& g2, int a2,
                                          int b2, int n_block, double tol) {
  if (a1 + b1 != a2 + b2) fail(ErrorKind::BadInput, "a+b must agree");
  return isotonal_common(curvature_operator(g1), curvature_operator(g2), g1.k(), g1.l(), false, n_block, a1, b1, a2,
                         b2, tol);
}

std::string IsotonalReport::to_text() const {
  std::ostringstream os;
  os.precision(15);
  os << "isotonal_decomposition\n";
  os << "  blocks_invariant " << (blocks_invariant ? 1 : 0) << " max_residual " << max_invariance_residual << "\n";
  os << "  multiset_equal " << (multiset.pass ? 1 : 0) << " deviation " << multiset.deviation << "\n";
  os << "  set_equal " << (set.pass ? 1 : 0) << " hausdorff " << set.deviation << "\n";
  os << "  left_subset " << (set.left_subset ? 1 : 0) << " right_subset " << (set.right_subset ? 1 : 0) << "\n";
  if (reflection_applicable)
    os << "  mixed_box_reflection center " << reflection_center << " residual " << reflection_residual << "\n";
  for (const auto& blocks : {blocks_1, blocks_2})
    for (const auto& b : blocks)
      os << "  block " << b.name << " dim " << b.spectrum.dimension() << " invariance_residual "
         << b.invariance_residual << "\n";
  return os.str();
}

}  // namespace isospec
