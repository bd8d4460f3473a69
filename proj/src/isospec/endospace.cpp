#include "isospec/endospace.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "isospec/eig.hpp"
#include "isospec/errors.hpp"

namespace isospec {

SkewEndo::SkewEndo(Mat m) : mat(std::move(m)) {
  if (mat.rows() != mat.cols()) fail(ErrorKind::NonSkew, "matrix not square");
  if (skew_residual(mat) > 1e-12 * std::max(1.0, mat.norm())) fail(ErrorKind::NonSkew, "matrix not skew");
}

Mat EndoSpace::J(const Vec& z) const {
  Mat out = Mat::Zero(k, k);
  for (int a = 0; a < l; ++a) out += z[a] * basis[a];
  return out;
}

bool EndoSpace::has_label(const std::string& s) const {
  return std::find(labels.begin(), labels.end(), s) != labels.end();
}

EndoSpace build_endo_space(const std::vector<Mat>& mats) {
  if (mats.empty()) fail(ErrorKind::BadInput, "empty basis");
  const int k = static_cast<int>(mats[0].rows());
  for (size_t i = 0; i < mats.size(); ++i) {
    if (mats[i].rows() != k || mats[i].cols() != k) fail(ErrorKind::DimensionMismatch, "basis sizes differ");
    if (skew_residual(mats[i]) > 1e-12 * std::max(1.0, mats[i].norm()))
      fail(ErrorKind::NonSkew, "basis element " + std::to_string(i));
  }
  if (span_rank(mats, 1e-9) < static_cast<int>(mats.size()))
    fail(ErrorKind::DependentBasis, "rank of vectorized basis < l");
  EndoSpace s;
  s.k = k;
  s.l = static_cast<int>(mats.size());
  s.basis = mats;
  return s;
}

PauliBlocks pauli_blocks() {
  PauliBlocks p;
  p.one = Mat::Identity(2, 2);
  p.i = Mat{{0, 1}, {-1, 0}};
  p.j = Mat{{-1, 0}, {0, 1}};
  p.k = Mat{{0, 1}, {1, 0}};
  return p;
}

namespace {

// Quaternion multiplication table as 4x4 matrices acting on (1,i,j,k)
// coordinates. L_q x = q*x, R_q x = x*q.
Vec quat_mul(const Vec& p, const Vec& q) {
  Vec r(4);
  r[0] = p[0] * q[0] - p[1] * q[1] - p[2] * q[2] - p[3] * q[3];
  r[1] = p[0] * q[1] + p[1] * q[0] + p[2] * q[3] - p[3] * q[2];
  r[2] = p[0] * q[2] - p[1] * q[3] + p[2] * q[0] + p[3] * q[1];
  r[3] = p[0] * q[3] + p[1] * q[2] - p[2] * q[1] + p[3] * q[0];
  return r;
}

Mat quat_left(const Vec& q) {
  Mat m(4, 4);
  for (int c = 0; c < 4; ++c) m.col(c) = quat_mul(q, Vec::Unit(4, c));
  return m;
}

Mat quat_right(const Vec& q) {
  Mat m(4, 4);
  for (int c = 0; c < 4; ++c) m.col(c) = quat_mul(Vec::Unit(4, c), q);
  return m;
}

Vec quat_conj(const Vec& q) {
  Vec r = -q;
  r[0] = q[0];
  return r;
}

std::vector<Mat> quaternion_left_basis() {
  std::vector<Mat> out;
  for (int a = 1; a <= 3; ++a) out.push_back(quat_left(Vec::Unit(4, a)));
  return out;
}

// Right products with imaginary Cayley numbers on Ca = H^2, via the split
// R_Z(v1,v2) = (v1 Phi + Psi v2, -v2 Phi - conj(Psi) v1) with
// Phi = Z1 i + Z2 j + Z3 k and Psi = Z4 + Z5 i + Z6 j + Z7 k.
std::vector<Mat> cayley_right_basis() {
  std::vector<Mat> out;
  for (int a = 0; a < 7; ++a) {
    Vec phi = Vec::Zero(4), psi = Vec::Zero(4);
    if (a < 3)
      phi[a + 1] = 1.0;
    else
      psi[a - 3] = 1.0;
    Mat m = Mat::Zero(8, 8);
    m.block(0, 0, 4, 4) = quat_right(phi);
    m.block(0, 4, 4, 4) = quat_left(psi);
    m.block(4, 0, 4, 4) = -quat_left(quat_conj(psi));
    m.block(4, 4, 4, 4) = -quat_right(phi);
    out.push_back(m);
  }
  return out;
}

// Irreducible generator set for the supported l; dimension must land on the
// minimal n_l or the caller reports UnsupportedL.
std::vector<Mat> irreducible_generators(int l) {
  if (l < 1) fail(ErrorKind::BadInput, "l must be positive");
  PauliBlocks p = pauli_blocks();
  if (l == 1) return {p.i};
  if (l == 2 || l == 3) {
    auto q = quaternion_left_basis();
    q.resize(l);
    return q;
  }
  if (l <= 7) {
    auto c = cayley_right_basis();
    c.resize(l);
    return c;
  }
  if (l <= 10) {
    // doubling: {i (x) Id} u {j (x) G_a} turns l-1 generators on R^n into l
    // generators on R^{2n}
    std::vector<Mat> prev = irreducible_generators(l - 1);
    const int n = static_cast<int>(prev[0].rows());
    std::vector<Mat> out;
    out.push_back(kron(p.i, Mat::Identity(n, n)));
    for (const Mat& g : prev) out.push_back(kron(p.j, g));
    return out;
  }
  fail(ErrorKind::UnsupportedL, "no construction reaching the minimal module dimension for l=" + std::to_string(l));
}

}  // namespace

int clifford_min_dim(int l) {
  if (l < 1) fail(ErrorKind::BadInput, "l must be positive");
  const int p = l / 8, r = l % 8;
  static const int shift[8] = {0, 1, 2, 2, 3, 3, 3, 3};
  return 1 << (4 * p + shift[r]);
}

Mat sigma_ab_matrix(int n, int a, int b) {
  Mat s = Mat::Identity(n * (a + b), n * (a + b));
  for (int c = a; c < a + b; ++c) s.block(n * c, n * c, n, n) = -Mat::Identity(n, n);
  return s;
}

EndoSpace clifford_space(int l, int a, int b) {
  if (a < 0 || b < 0 || a + b < 1) fail(ErrorKind::BadInput, "need a+b >= 1");
  std::vector<Mat> gens = irreducible_generators(l);
  const int n = static_cast<int>(gens[0].rows());
  if (n != clifford_min_dim(l))
    fail(ErrorKind::UnsupportedL, "construction for l=" + std::to_string(l) + " yields dimension " +
                                      std::to_string(n) + " != n_l = " + std::to_string(clifford_min_dim(l)));
  const int copies = a + b;
  std::vector<Mat> rep;
  for (int g = 0; g < l; ++g) {
    Mat m = Mat::Zero(n * copies, n * copies);
    for (int c = 0; c < copies; ++c) {
      double sign = (g == 0 && c >= a) ? -1.0 : 1.0;
      m.block(n * c, n * c, n, n) = sign * gens[g];
    }
    rep.push_back(m);
  }
  EndoSpace s = build_endo_space(rep);
  s.labels = {"clifford", "heisenberg-type"};
  s.anticommutator_index = 0;
  // Heisenberg-type identity J_Z^2 = -|Z|^2 Id, checked on the basis via
  // polarization: J_a J_b + J_b J_a = -2 delta_ab Id.
  for (int i = 0; i < l; ++i)
    for (int j = i; j < l; ++j) {
      Mat anti = s.basis[i] * s.basis[j] + s.basis[j] * s.basis[i];
      if (i == j) anti += 2.0 * Mat::Identity(s.k, s.k);
      if (anti.norm() > 1e-12)
        fail(ErrorKind::UnsupportedL, "constructed module is not Heisenberg-type at pair (" + std::to_string(i) +
                                          "," + std::to_string(j) + ")");
    }
  return s;
}

namespace {

// Orthonormal basis of the orthogonal complement of coeff in the Z space
// (Gram = identity unless supplied).
std::vector<Vec> z_complement(const EndoSpace& s, const Vec& coeffs) {
  Mat g = s.gram ? *s.gram : Mat::Identity(s.l, s.l);
  std::vector<Vec> out;
  Vec a = coeffs / std::sqrt(std::max(1e-300, coeffs.dot(g * coeffs)));
  for (int i = 0; i < s.l; ++i) {
    Vec v = Vec::Unit(s.l, i);
    v -= a * a.dot(g * v);
    for (const Vec& w : out) v -= w * w.dot(g * v);
    double nn = std::sqrt(std::max(0.0, v.dot(g * v)));
    if (nn > 1e-9) out.push_back(v / nn);
  }
  return out;
}

}  // namespace

AnticommutatorReport is_anticommutator(const EndoSpace& space, const Vec& a_coeffs, double tol) {
  if (a_coeffs.size() != space.l) fail(ErrorKind::DimensionMismatch, "coefficient length != l");
  AnticommutatorReport rep;
  Mat A = space.J(a_coeffs);
  EigenSym es = jacobi_eigensym(A.transpose() * A);
  rep.min_singular_value = std::sqrt(std::max(0.0, es.values[0]));
  const double top = std::sqrt(std::max(0.0, es.values[es.values.size() - 1]));
  rep.degenerate = rep.min_singular_value <= 1e-10 * std::max(1.0, top);
  double worst = 0.0;
  for (const Vec& w : z_complement(space, a_coeffs)) {
    Mat B = space.J(w);
    worst = std::max(worst, anticommutator_norm(A, B));
  }
  rep.residual = worst;
  rep.is_anticommutator = !rep.degenerate && worst <= tol * std::max(1.0, A.norm());
  return rep;
}

JordanForm jordan_normalize(const EndoSpace& space, const Vec& a_coeffs) {
  AnticommutatorReport rep = is_anticommutator(space, a_coeffs);
  if (!rep.is_anticommutator && !(rep.degenerate && rep.residual <= 1e-10))
    fail(ErrorKind::NotAnticommutator, "A does not anticommute with its complement");
  const int k = space.k;
  Mat A = space.J(a_coeffs);
  EigenSym es = jacobi_eigensym(-A * A);  // eigenvalues a_c^2 >= 0
  // cluster eigenvalues into Jordan blocks, descending a_c
  std::vector<std::pair<double, std::vector<int>>> clusters;
  for (int i = k - 1; i >= 0; --i) {
    const double v = std::max(0.0, es.values[i]);
    if (!clusters.empty() && std::abs(clusters.back().first - v) <= 1e-8 * std::max(1.0, clusters.back().first))
      clusters.back().second.push_back(i);
    else
      clusters.push_back({v, {i}});
  }
  JordanForm out;
  Mat Q(k, k);
  int col = 0;
  for (auto& [val, idx] : clusters) {
    const double ac = std::sqrt(val);
    const int m = static_cast<int>(idx.size());
    out.block_sizes.push_back({ac, m});
    Mat V(k, m);
    for (int j = 0; j < m; ++j) V.col(j) = es.vectors.col(idx[j]);
    if (ac <= 1e-9) {
      Q.block(0, col, k, m) = V;
      col += m;
      continue;
    }
    // pair columns (u, -Au/a) so the block becomes a_c * i exactly
    std::vector<Vec> chosen;
    auto project_out = [&](Vec v) {
      for (const Vec& w : chosen) v -= w * w.dot(v);
      return v;
    };
    for (int j = 0; j < m && static_cast<int>(chosen.size()) < m; ++j) {
      Vec u = project_out(V.col(j));
      if (u.norm() < 1e-8) continue;
      u.normalize();
      Vec v = project_out(-A * u / ac);
      if (v.norm() < 1.0 - 1e-6) fail(ErrorKind::NotAnticommutator, "Jordan pairing failed");
      v.normalize();
      chosen.push_back(u);
      chosen.push_back(v);
    }
    if (static_cast<int>(chosen.size()) != m) fail(ErrorKind::NotAnticommutator, "eigenspace pairing incomplete");
    for (const Vec& u : chosen) Q.col(col++) = u;
  }
  out.basis_change = Q;
  out.transformed_A = Q.transpose() * A * Q;
  for (const Vec& w : z_complement(space, a_coeffs)) out.transformed_perp.push_back(Q.transpose() * space.J(w) * Q);
  // Prop 2.1 structure residual: on a non-degenerate block every 2x2 cell of
  // a perpendicular endomorphism is j*J + k*K, i.e. [[-j,k],[k,j]], and cells
  // joining distinct Jordan blocks vanish.
  double worst = 0.0;
  std::vector<int> offsets{0};
  for (auto& [ac, m] : out.block_sizes) offsets.push_back(offsets.back() + m);
  for (const Mat& F : out.transformed_perp) {
    for (size_t b1 = 0; b1 < out.block_sizes.size(); ++b1)
      for (size_t b2 = 0; b2 < out.block_sizes.size(); ++b2) {
        if (b1 != b2) {
          worst = std::max(
              worst, F.block(offsets[b1], offsets[b2], out.block_sizes[b1].second, out.block_sizes[b2].second)
                         .cwiseAbs()
                         .maxCoeff());
          continue;
        }
        if (out.block_sizes[b1].first <= 1e-9) continue;  // degenerate block: arbitrary skew
        const int m = out.block_sizes[b1].second, o = offsets[b1];
        for (int r = o; r + 1 < o + m; r += 2)
          for (int c = o; c + 1 < o + m; c += 2) {
            worst = std::max(worst, std::abs(F(r, c) + F(r + 1, c + 1)));    // p = -s
            worst = std::max(worst, std::abs(F(r, c + 1) - F(r + 1, c)));    // q = r
          }
      }
  }
  out.structure_residual = worst;
  return out;
}

EndoSpace sigma_ab_deform(const EndoSpace& space, int a_index, int a, int b) {
  if (a_index < 0 || a_index >= space.l) fail(ErrorKind::BadInput, "bad index");
  if (a < 0 || b < 0 || a + b < 1) fail(ErrorKind::BadInput, "need a+b >= 1");
  AnticommutatorReport rep = is_anticommutator(space, Vec::Unit(space.l, a_index));
  if (!rep.is_anticommutator) fail(ErrorKind::NotAnticommutator, "indexed element is not an anticommutator");
  const int n = space.k, copies = a + b;
  EndoSpace out;
  out.k = n * copies;
  out.l = space.l;
  out.labels = space.labels;
  if (!out.has_label("sigma-deformed")) out.labels.push_back("sigma-deformed");
  out.anticommutator_index = a_index;
  for (int g = 0; g < space.l; ++g) {
    Mat m = Mat::Zero(out.k, out.k);
    for (int c = 0; c < copies; ++c) {
      double sign = (g == a_index && c >= a) ? -1.0 : 1.0;
      m.block(n * c, n * c, n, n) = sign * space.basis[g];
    }
    out.basis.push_back(m);
  }
  return out;
}

EndoSpace sigma_A_deform(const EndoSpace& space, int a_index, const Mat& sigma) {
  if (a_index < 0 || a_index >= space.l) fail(ErrorKind::BadInput, "bad index");
  if (sigma.rows() != space.k || sigma.cols() != space.k) fail(ErrorKind::DimensionMismatch, "sigma size != k");
  if ((sigma * sigma - Mat::Identity(space.k, space.k)).norm() > 1e-10)
    fail(ErrorKind::BadSigma, "not involutive");
  if (orthogonality_residual(sigma) > 1e-10) fail(ErrorKind::BadSigma, "not orthogonal");
  for (int g = 0; g < space.l; ++g)
    if (commutator_norm(sigma, space.basis[g]) > 1e-10)
      fail(ErrorKind::BadSigma, "not commuting with basis element " + std::to_string(g));
  EndoSpace out = space;
  out.basis[a_index] = sigma * space.basis[a_index];
  if (!out.has_label("sigma-deformed")) out.labels.push_back("sigma-deformed");
  out.anticommutator_index = a_index;
  return out;
}

UnitRescale rescale_to_unit(const Mat& A) {
  Mat minusA2 = -A * A;
  EigenSym es = jacobi_eigensym(minusA2);
  if (es.values[0] <= 1e-12 * std::max(1.0, es.values[es.values.size() - 1]))
    fail(ErrorKind::Degenerate, "A is degenerate");
  UnitRescale out;
  out.S = sym_sqrt(minusA2);
  out.A0 = sym_inv_sqrt(minusA2) * A;
  return out;
}

namespace {

// Complex structure on a subspace commuting with the listed operators
// (restricted m x m matrices); optionally required to (anti)commute with A0|.
// Returns empty matrix when the constraint space has no invertible skew
// element.
Mat invariant_complex_structure(const std::vector<Mat>& commute_with, const Mat& a0_restricted, int a0_sign) {
  const int m = static_cast<int>(a0_restricted.rows());
  // unknowns: strictly lower triangle of a skew matrix
  const int nvar = m * (m - 1) / 2;
  auto unpack = [&](const Vec& x) {
    Mat X = Mat::Zero(m, m);
    int t = 0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < i; ++j) {
        X(i, j) = x[t];
        X(j, i) = -x[t];
        ++t;
      }
    return X;
  };
  std::vector<Mat> ops = commute_with;
  std::vector<int> signs(ops.size(), +1);
  ops.push_back(a0_restricted);
  signs.push_back(a0_sign);
  Mat constraints(static_cast<int>(ops.size()) * m * m, nvar);
  for (int v = 0; v < nvar; ++v) {
    Vec e = Vec::Zero(nvar);
    e[v] = 1.0;
    Mat X = unpack(e);
    int r = 0;
    for (size_t o = 0; o < ops.size(); ++o) {
      Mat R = X * ops[o] - double(signs[o]) * ops[o] * X;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) constraints(r++, v) = R(i, j);
    }
  }
  Eigen::FullPivLU<Mat> lu(constraints);
  lu.setThreshold(1e-9);
  Mat null_basis = lu.kernel();
  if (null_basis.cols() == 0 || (null_basis.cols() == 1 && null_basis.norm() < 1e-12)) return Mat();
  Rng pick(424243);  // fixed internal seed; deterministic generic combination
  for (int attempt = 0; attempt < 8; ++attempt) {
    Vec combo = Vec::Zero(nvar);
    for (int c = 0; c < null_basis.cols(); ++c) combo += pick.gauss() * null_basis.col(c);
    Mat X = unpack(combo);
    EigenSym es = jacobi_eigensym(-X * X);
    if (es.values[0] > 1e-8 * std::max(1.0, es.values[es.values.size() - 1])) {
      Mat J = sym_inv_sqrt(-X * X) * X;
      if ((J * J + Mat::Identity(m, m)).norm() < 1e-8) return J;
    }
  }
  return Mat();
}

}  // namespace

UnitEndoConjugator unit_endo_conjugator(const Mat& A0, const Mat& B0, const std::vector<Mat>& F_list) {
  const int k = static_cast<int>(A0.rows());
  Mat I = Mat::Identity(k, k);
  if ((A0 * A0 + I).norm() > 1e-10 || (B0 * B0 + I).norm() > 1e-10)
    fail(ErrorKind::NotUnit, "A0 or B0 is not a unit structure");
  if (skew_residual(A0) > 1e-10 || skew_residual(B0) > 1e-10) fail(ErrorKind::NotUnit, "A0 or B0 is not skew");
  for (const Mat& F : F_list)
    if (anticommutator_norm(A0, F) > 1e-10 || anticommutator_norm(B0, F) > 1e-10)
      fail(ErrorKind::NotAnticommuting, "F does not anticommute with A0 and B0");

  const Mat E = -A0 * B0;  // orthogonal, commutes with every F
  EigenSym es = jacobi_eigensym(0.5 * (E + E.transpose()));
  Mat sqrtD = Mat::Zero(k, k);
  int i = 0;
  while (i < k) {
    int j = i + 1;
    while (j < k && std::abs(es.values[j] - es.values[i]) <= 1e-8) ++j;
    const int m = j - i;
    Mat P(k, m);
    for (int c = 0; c < m; ++c) P.col(c) = es.vectors.col(i + c);
    const double cosa = std::clamp(es.values[i], -1.0, 1.0);
    if (cosa >= 1.0 - 1e-12) {
      sqrtD += P * P.transpose();
    } else if (cosa <= -1.0 + 1e-12) {
      // E = -Id here, i.e. B0 = -A0 on this subspace; the square root is a
      // complex structure commuting with the F's. Prefer one commuting with
      // A0 (S_hat = -Id on the block), fall back to anticommuting.
      std::vector<Mat> restr;
      for (const Mat& F : F_list) restr.push_back(P.transpose() * F * P);
      Mat a0r = P.transpose() * A0 * P;
      Mat Jr = invariant_complex_structure(restr, a0r, +1);
      if (Jr.size() == 0) Jr = invariant_complex_structure(restr, a0r, -1);
      if (Jr.size() == 0)
        fail(ErrorKind::NotAnticommuting, "no invariant complex structure on the E = -Id subspace");
      sqrtD += P * Jr * P.transpose();
    } else {
      const double alpha = std::acos(cosa);
      const double sina = std::sin(alpha);
      Mat C = P.transpose() * (0.5 / sina) * (E - E.transpose()) * P;
      // polar-correct C to an exact complex structure on the block
      C = sym_inv_sqrt(-C * C) * C;
      sqrtD += P * (std::cos(alpha / 2) * Mat::Identity(m, m) + std::sin(alpha / 2) * C) * P.transpose();
    }
    i = j;
  }

  UnitEndoConjugator out;
  out.sqrtD = sqrtD;
  out.S_hat = -sqrtD * B0 * sqrtD.transpose() * A0;
  double r = 0.0;
  r = std::max(r, (out.sqrtD * B0 * out.sqrtD.transpose() - out.S_hat * A0).norm());
  r = std::max(r, (out.S_hat - out.S_hat.transpose()).norm());
  r = std::max(r, (out.S_hat * out.S_hat - I).norm());
  r = std::max(r, commutator_norm(out.S_hat, A0));
  r = std::max(r, orthogonality_residual(out.sqrtD));
  for (const Mat& F : F_list) {
    r = std::max(r, commutator_norm(out.S_hat, F));
    r = std::max(r, commutator_norm(out.sqrtD, F));
  }
  out.max_residual = r;
  return out;
}

SpectralEquivalenceReport verify_spectral_equivalence(const EndoSpace& s1, const EndoSpace& s2, const Mat& C_map,
                                                      int n_samples, Rng& rng, double tol) {
  if (s1.k != s2.k || s1.l != s2.l) fail(ErrorKind::DimensionMismatch, "spaces of different size");
  SpectralEquivalenceReport rep;
  rep.n_samples = n_samples;
  auto singvals = [](const Mat& m) {
    EigenSym es = jacobi_eigensym(m.transpose() * m);
    Vec s = es.values;
    for (int i = 0; i < s.size(); ++i) s[i] = std::sqrt(std::max(0.0, s[i]));
    return s;
  };
  for (int t = 0; t < n_samples; ++t) {
    Vec z = rng.unit_vec(s1.l);
    Vec d = singvals(s1.J(z)) - singvals(s2.J(C_map * z));
    rep.max_deviation = std::max(rep.max_deviation, d.cwiseAbs().maxCoeff());
  }
  rep.pass = rep.max_deviation <= tol;
  return rep;
}

int generated_lie_algebra_dim(const std::vector<Mat>& basis, double tol) {
  std::vector<Mat> span;  // orthonormalized in the Frobenius inner product
  auto add = [&](Mat m) {
    for (const Mat& w : span) m -= (w.array() * m.array()).sum() * w;
    double nn = m.norm();
    if (nn > tol) {
      span.push_back(m / nn);
      return true;
    }
    return false;
  };
  std::vector<Mat> generators;
  for (const Mat& b : basis) {
    Mat m = b / std::max(b.norm(), 1e-300);
    if (add(m)) generators.push_back(span.back());
  }
  size_t frontier_begin = 0;
  while (frontier_begin < span.size()) {
    const size_t frontier_end = span.size();
    for (size_t i = frontier_begin; i < frontier_end; ++i)
      for (size_t g = 0; g < generators.size(); ++g) add(generators[g] * span[i] - span[i] * generators[g]);
    frontier_begin = frontier_end;
  }
  return static_cast<int>(span.size());
}

NonconjugacyReport nonconjugacy_certificate(const EndoSpace& s1, const EndoSpace& s2) {
  if (s1.k != s2.k || s1.l != s2.l) fail(ErrorKind::DimensionMismatch, "spaces of different size");
  NonconjugacyReport rep;
  rep.lie_dim_1 = generated_lie_algebra_dim(s1.basis);
  rep.lie_dim_2 = generated_lie_algebra_dim(s2.basis);
  auto sumJ2_spec = [](const EndoSpace& s) {
    Mat m = Mat::Zero(s.k, s.k);
    for (const Mat& j : s.basis) m += j * j;
    return jacobi_eigensym(m).values;
  };
  auto hz_spec = [](const EndoSpace& s) {
    Mat h(s.l, s.l);
    for (int a = 0; a < s.l; ++a)
      for (int b = 0; b < s.l; ++b) h(a, b) = (s.basis[a].array() * s.basis[b].array()).sum();  // Tr(Ja^T Jb)
    return jacobi_eigensym(h).values;
  };
  rep.sumJ2_spec_1 = sumJ2_spec(s1);
  rep.sumJ2_spec_2 = sumJ2_spec(s2);
  rep.Hz_spec_1 = hz_spec(s1);
  rep.Hz_spec_2 = hz_spec(s2);
  const double tol = 1e-7;
  if (rep.lie_dim_1 != rep.lie_dim_2) {
    rep.distinguished = true;
    rep.distinguishing_invariant = "generated-lie-algebra-dimension";
  } else if ((rep.sumJ2_spec_1 - rep.sumJ2_spec_2).cwiseAbs().maxCoeff() > tol) {
    rep.distinguished = true;
    rep.distinguishing_invariant = "sum-J2-spectrum";
  } else if ((rep.Hz_spec_1 - rep.Hz_spec_2).cwiseAbs().maxCoeff() > tol) {
    rep.distinguished = true;
    rep.distinguishing_invariant = "Hz-spectrum";
  }
  return rep;
}

std::string NonconjugacyReport::to_text() const {
  std::ostringstream os;
  os.precision(15);
  os << "nonconjugacy_certificate\n";
  os << "  verdict " << (distinguished ? "DISTINGUISHED" : "INCONCLUSIVE") << "\n";
  if (distinguished) os << "  invariant " << distinguishing_invariant << "\n";
  os << "  lie_dim " << lie_dim_1 << " " << lie_dim_2 << "\n";
  return os.str();
}

std::string serialize_endo_space(const EndoSpace& s) {
  std::ostringstream os;
  os.precision(17);
  os << "endospace\n"
     << "k " << s.k << "\n"
     << "l " << s.l << "\n";
  for (const auto& lab : s.labels) os << "label " << lab << "\n";
  if (s.anticommutator_index) os << "anticommutator_index " << *s.anticommutator_index << "\n";
  for (int a = 0; a < s.l; ++a) {
    os << "J " << a << "\n";
    for (int i = 0; i < s.k; ++i) {
      for (int j = 0; j < s.k; ++j) os << (j ? " " : "") << s.basis[a](i, j);
      os << "\n";
    }
  }
  os << "end\n";
  return os.str();
}

EndoSpace parse_endo_space(const std::string& text) {
  std::istringstream is(text);
  std::string tok;
  if (!(is >> tok) || tok != "endospace") fail(ErrorKind::BadInput, "missing endospace header");
  EndoSpace s;
  std::vector<Mat> mats;
  while (is >> tok) {
    if (tok == "k")
      is >> s.k;
    else if (tok == "l")
      is >> s.l;
    else if (tok == "label") {
      std::string lab;
      is >> lab;
      s.labels.push_back(lab);
    } else if (tok == "anticommutator_index") {
      int idx;
      is >> idx;
      s.anticommutator_index = idx;
    } else if (tok == "J") {
      int a;
      is >> a;
      Mat m(s.k, s.k);
      for (int i = 0; i < s.k; ++i)
        for (int j = 0; j < s.k; ++j) is >> m(i, j);
      mats.push_back(m);
    } else if (tok == "end")
      break;
    else
      fail(ErrorKind::BadInput, "unexpected token " + tok);
  }
  if (static_cast<int>(mats.size()) != s.l) fail(ErrorKind::BadInput, "basis count != l");
  EndoSpace built = build_endo_space(mats);
  built.labels = s.labels;
  built.anticommutator_index = s.anticommutator_index;
  return built;
}

}  // namespace isospec
