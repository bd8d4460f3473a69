#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "isospec/eig.hpp"
#include "isospec/harmonics.hpp"
#include "isospec/spectra.hpp"

using namespace isospec;

namespace {

Mat unit_A0_k4() { return clifford_space(3, 1, 0).basis[0]; }

GradedPoly inner_poly(const Vec& q) {
  CVec c = q.cast<Cplx>();
  return GradedPoly::linear(c);
}

GradedPoly random_homog(int k, int deg, Rng& rng) {
  GradedPoly p(k);
  for (const MultiIndex& m : monomials_of_degree(k, deg)) p.set_term(m, Cplx(rng.gauss(), rng.gauss()));
  return p;
}

}  // namespace

TEST_CASE("theta polynomial identities") {
  Mat A0 = unit_A0_k4();
  Rng rng(1);
  Vec Q = rng.gauss_vec(4);
  GradedPoly th = theta_poly(Q, A0);
  CHECK(theta_poly(Vec(Vec::Zero(4)), A0).is_zero());
  // D_A theta = i theta, D_A conj(theta) = -i conj(theta)
  GradedPoly d = d_op_apply(A0, th);
  CHECK((d - th * Cplx(0, 1)).max_abs_coeff() <= 1e-13);
  GradedPoly db = d_op_apply(A0, th.conj());
  CHECK((db + th.conj() * Cplx(0, 1)).max_abs_coeff() <= 1e-13);
  // pure products are harmonic
  Vec Q2 = rng.gauss_vec(4);
  GradedPoly pure = th * theta_poly(Q2, A0) * th;
  CHECK(pure.laplacian().max_abs_coeff() <= 1e-12 * pure.max_abs_coeff());
  // mixed product: Lap(theta_Q conj(theta_Q*)) = 4<Q,Q*> + 4i<A0 Q, Q*>
  GradedPoly mixed = th * theta_poly(Q2, A0).conj();
  GradedPoly lap = mixed.laplacian();
  Cplx expect = 4.0 * Q.dot(Q2) + Cplx(0, 4) * (A0 * Q).dot(Q2);
  CHECK(std::abs(lap.coeff(MultiIndex::zero(4)) - expect) <= 1e-12);
  // anticommuting direction switches the conjugation: D_c theta_Q = -conj(theta_{J_c Q})
  Mat Jc = clifford_space(3, 1, 0).basis[1];
  GradedPoly dc = d_op_apply(Jc, th);
  GradedPoly target = theta_poly(Vec(Jc * Q), A0).conj() * Cplx(-1);
  CHECK((dc - target).max_abs_coeff() <= 1e-12);
}

TEST_CASE("harmonic projection: recursion, idempotence, known values") {
  const int k = 4;
  Rng rng(2);
  // <Q,X>^2 projects to <Q,X>^2 - |Q|^2 |X|^2 / k
  Vec Q = rng.gauss_vec(k);
  GradedPoly p = inner_poly(Q) * inner_poly(Q);
  GradedPoly h = harmonic_project(p);
  GradedPoly r2(k);
  for (int i = 0; i < k; ++i) r2.set_term(MultiIndex::zero(k).with_exp(i, 2), 1.0);
  GradedPoly expect = p - r2 * Cplx(Q.squaredNorm() / k);
  CHECK((h - expect).max_abs_coeff() <= 1e-12);
  CHECK(h.laplacian().max_abs_coeff() <= 1e-12);
  CHECK((harmonic_project(h) - h).max_abs_coeff() <= 1e-12);
  // degree-3 zonal polynomial projects to a harmonic one
  GradedPoly p3 = inner_poly(Q) * inner_poly(Q) * inner_poly(Q);
  GradedPoly h3 = harmonic_project(p3);
  CHECK(h3.laplacian().max_abs_coeff() <= 1e-12 * std::max(1.0, h3.max_abs_coeff()));
  // random homogeneous inputs up to degree 8
  for (int deg = 2; deg <= 8; ++deg) {
    GradedPoly q = random_homog(k, deg, rng);
    CHECK(harmonic_project(q).laplacian().max_abs_coeff() <= 1e-10 * std::max(1.0, q.max_abs_coeff()));
  }
  // the dimension-independent recursion demonstrably fails harmonicity
  std::vector<double> printed = harmonic_recursion_printed(2);
  GradedPoly bad = p + r2.mul_r2() * 0.0;  // p itself
  GradedPoly wrong = p + p.laplacian().mul_r2() * 0.0;
  GradedPoly h_wrong = p;
  {
    GradedPoly lap = p.laplacian();
    GradedPoly lift = lap.mul_r2();
    h_wrong = p + lift * printed[1];
  }
  CHECK(h_wrong.laplacian().max_abs_coeff() > 1e-3);
  (void)bad;
  (void)wrong;
}

TEST_CASE("harmonic dimensions") {
  for (int k : {4, 8, 16})
    for (int q = 0; q <= 6; ++q) {
      long expect = 0;
      auto binom = [](long n, long r) {
        if (r < 0 || n < 0 || r > n) return 0L;
        long out = 1;
        for (long i = 0; i < r; ++i) out = out * (n - i) / (i + 1);
        return out;
      };
      expect = binom(k + q - 1, q) - binom(k + q - 3, q - 2);
      CHECK(harmonic_dim(k, q) == expect);
    }
}

TEST_CASE("T decomposition round trip and commutation") {
  const int k = 4;
  Rng rng(3);
  GradedPoly p = random_homog(k, 5, rng);
  std::vector<GradedPoly> pieces = T_apply(p);
  REQUIRE(pieces.size() == 3);
  GradedPoly back = T_invert(pieces, 5);
  CHECK((back - p).max_abs_coeff() <= 1e-9 * std::max(1.0, p.max_abs_coeff()));
  // harmonic input is a fixed point of the top piece
  GradedPoly h = harmonic_project(p);
  std::vector<GradedPoly> hp = T_apply(h);
  CHECK((hp[0] - h).max_abs_coeff() <= 1e-10);
  for (size_t j = 1; j < hp.size(); ++j) CHECK(hp[j].max_abs_coeff() <= 1e-10);
  // T commutes with every D_alpha on truncations
  EndoSpace s = clifford_space(3, 1, 0);
  for (int a = 0; a < 3; ++a) {
    std::vector<GradedPoly> lhs = T_apply(d_op_apply(s.basis[a], p));
    std::vector<GradedPoly> rhs = T_apply(p);
    for (size_t j = 0; j < rhs.size(); ++j) {
      GradedPoly diff = lhs[j] - d_op_apply(s.basis[a], rhs[j]);
      CHECK(diff.max_abs_coeff() <= 1e-9 * std::max(1.0, p.max_abs_coeff()));
    }
  }
}

TEST_CASE("harmonic basis and eigen splitting at k=4") {
  Mat A0 = unit_A0_k4();
  for (int q = 0; q <= 4; ++q) {
    HarmonicBasis hb = HarmonicBasis::build(A0, q);
    CHECK(hb.N() == harmonic_dim(4, q));
    HqSplit split = hq_split(hb);
    CHECK(split.complete);
    CHECK(split.max_eigen_residual <= 1e-9);
    if (q == 1) {
      REQUIRE(split.dims.size() == 2);
      CHECK(split.dims[0] == 2);  // eigenvalue -i with multiplicity k/2
      CHECK(split.dims[1] == 2);
    }
    // orthonormality
    CMat gram = hb.basis.adjoint() * (hb.mom * hb.basis);
    CHECK((gram - CMat::Identity(hb.N(), hb.N())).norm() <= 1e-10);
    // cross-check the splitting against a dense Hermitian eigensolve
    if (q >= 1 && hb.N() <= 120) {
      CMat D = dop_matrix(hb, A0);
      EigenHerm eh = jacobi_eigenherm(CMat(Cplx(0, 1) * D));
      for (int i = 0; i < eh.values.size(); ++i) {
        double nearest = 1e300;
        for (int s2 = 0; s2 <= q; ++s2) nearest = std::min(nearest, std::abs(eh.values[i] + (2.0 * s2 - q)));
        CHECK(nearest <= 1e-9);
      }
    }
  }
}

TEST_CASE("zonal kernel reproduces") {
  Mat A0 = unit_A0_k4();
  Rng rng(4);
  for (int q : {0, 2, 3}) {
    HarmonicBasis hb = HarmonicBasis::build(A0, q);
    Vec Qu = rng.unit_vec(4);
    GradedPoly ker = zonal_kernel(hb, Qu);
    if (q == 0) {
      CHECK(std::abs(ker.coeff(MultiIndex::zero(4)) - Cplx(1.0 / sphere_volume(4))) <= 1e-12);
    }
    // reproducing property on random members of H^(q): the surface integral
    // of K * psi equals psi(Qu)
    for (int t = 0; t < 20; ++t) {
      CVec coef = CVec::Zero(hb.N());
      for (int j = 0; j < hb.N(); ++j) coef[j] = Cplx(rng.gauss(), rng.gauss());
      GradedPoly psi = hb.from_coeff_vec(hb.basis * coef);
      Cplx integral = sphere_volume(4) * sphere_inner(psi, ker.conj());
      Cplx at = psi.eval(Qu.cast<Cplx>());
      CHECK(std::abs(integral - at) <= 1e-8 * std::max(1.0, std::abs(at)));
    }
    // radial form: kernel is a combination of <Qu,X>^(q-2j) |X|^(2j)
    GradedPoly residual = ker;
    std::vector<GradedPoly> zonals;
    GradedPoly r2(4);
    for (int i = 0; i < 4; ++i) r2.set_term(MultiIndex::zero(4).with_exp(i, 2), 1.0);
    GradedPoly qu = inner_poly(Qu);
    for (int j = 0; 2 * j <= q; ++j) {
      GradedPoly term = GradedPoly::constant(4, 1.0);
      for (int e = 0; e < q - 2 * j; ++e) term = term * qu;
      for (int e = 0; e < j; ++e) term = term * r2;
      zonals.push_back(term);
    }
    // least-squares fit in coefficient space
    const auto mons = monomials_of_degree(4, q);
    CMat Amat(mons.size(), zonals.size());
    CVec bvec(mons.size());
    for (size_t i = 0; i < mons.size(); ++i) {
      bvec[i] = ker.coeff(mons[i]);
      for (size_t j = 0; j < zonals.size(); ++j) Amat(i, j) = zonals[j].coeff(mons[i]);
    }
    CVec fit = Amat.colPivHouseholderQr().solve(bvec);
    CHECK((Amat * fit - bvec).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("kappa_star identities at k=4") {
  EndoSpace s20 = sigma_ab_deform(clifford_space(3, 1, 0), 0, 1, 0);
  Mat A0 = s20.basis[0];
  Mat sig = -Mat::Identity(4, 4);
  Mat A0p = sig * A0;
  Rng rng(5);
  // A0' = A0 gives the identity
  GradedPoly p = random_homog(4, 3, rng);
  CHECK((kappa_star(p, A0, A0) - p).max_abs_coeff() <= 1e-10 * std::max(1.0, p.max_abs_coeff()));
  // kappa*(theta^p conj^q) = theta'^p conj'^q
  Vec Q = rng.gauss_vec(4);
  GradedPoly th = theta_poly(Q, A0), thp = theta_poly(Q, A0p);
  GradedPoly lhs = kappa_star(th * th * th.conj(), A0, A0p);
  GradedPoly rhs = thp * thp * thp.conj();
  CHECK((lhs - rhs).max_abs_coeff() <= 1e-10 * std::max(1.0, rhs.max_abs_coeff()));
  // invertibility on the degree <= 6 truncation
  for (int deg = 1; deg <= 6; ++deg) {
    GradedPoly q = random_homog(4, deg, rng);
    GradedPoly back = kappa_star(kappa_star(q, A0, A0p), A0p, A0);
    CHECK((back - q).max_abs_coeff() <= 1e-10 * std::max(1.0, q.max_abs_coeff()));
  }
  // kappa* preserves the bigrading: eigenpolynomials stay eigen
  GradedPoly mixed = th * th.conj();
  GradedPoly im = kappa_star(mixed, A0, A0p);
  GradedPoly dm = d_op_apply(A0p, im);
  CHECK((dm - im * Cplx(0, 0)).max_abs_coeff() <= 1e-10 * std::max(1.0, im.max_abs_coeff()));
}

TEST_CASE("kappa maps harmonics to harmonics and preserves the splitting") {
  EndoSpace base = clifford_space(3, 1, 0);
  EndoSpace s11 = sigma_ab_deform(base, 0, 1, 1);
  Mat A0 = s11.basis[0];
  Mat A0p = sigma_ab_matrix(4, 1, 1) * A0;  // the (2,0) anticommutator
  Rng rng(6);
  GradedPoly h = harmonic_project(random_homog(8, 3, rng));
  GradedPoly kh = kappa(h, A0, A0p);
  CHECK(kh.laplacian().max_abs_coeff() <= 1e-9 * std::max(1.0, kh.max_abs_coeff()));
  CHECK(kappa(GradedPoly::constant(8, 2.0), A0, A0p).coeff(MultiIndex::zero(8)) == Cplx(2.0));
  // matrix path agrees with the polynomial path
  HarmonicBasis hb = HarmonicBasis::build(A0, 2);
  HarmonicBasis hbp = HarmonicBasis::build(A0p, 2);
  CMat K = kappa_matrix(hb, hbp);
  for (int j = 0; j < 5; ++j) {
    GradedPoly eta = hb.poly(j);
    CVec via_matrix = K.col(j);
    CVec via_poly = hbp.coords(kappa(eta, A0, A0p));
    CHECK((via_matrix - via_poly).norm() <= 1e-9);
  }
  // kappa conjugates D_alpha for perpendicular directions
  CMat Dm = dop_matrix(hb, s11.basis[1]);
  CMat Dmp = dop_matrix(hbp, s11.basis[1]);
  CHECK(conjugation_residual(Dm, Dmp, K) <= 1e-9);
  // eigen-splitting is preserved degree by degree
  HqSplit sp = hq_split(hb), spp = hq_split(hbp);
  REQUIRE(sp.dims == spp.dims);
  for (int s2 = 0; s2 <= 2; ++s2) {
    // kappa of an eigenbasis member stays in the same eigenvalue block
    int off = hb.bigrade_offset[s2];
    if (hb.bigrade_offset[s2 + 1] == off) continue;
    GradedPoly eta = hb.poly(off);
    GradedPoly keta = kappa(eta, A0, A0p);
    GradedPoly deta = d_op_apply(A0p, keta) - keta * Cplx(0, 2.0 * s2 - 2);
    CHECK(deta.max_abs_coeff() <= 1e-8 * std::max(1.0, keta.max_abs_coeff()));
  }
}

TEST_CASE("mult_project_operator structure") {
  EndoSpace s = clifford_space(3, 1, 0);
  Mat A0 = s.basis[0];
  HarmonicBasis h2 = HarmonicBasis::build(A0, 2);
  HarmonicBasis h4 = HarmonicBasis::build(A0, 4);
  HarmonicBasis h0 = HarmonicBasis::build(A0, 0);
  // c = d on a Heisenberg-type space: multiplier is |X|^2, so on the sphere
  // the operator is the identity on each H^(r): up and down parts vanish and
  // the same-part is the identity
  GradedPoly mult(4);
  for (int i = 0; i < 4; ++i) mult.set_term(MultiIndex::zero(4).with_exp(i, 2), 1.0);
  MultProjectOp op = mult_project_operator(mult, h2, &h4, &h0);
  CHECK(op.up.m.norm() <= 1e-10);
  CHECK(op.down.m.norm() <= 1e-10);
  CHECK((op.same.m - CMat::Identity(h2.N(), h2.N())).norm() <= 1e-10);
  CHECK(op.lower_leak <= 1e-10);
  // <J_A X, J_c X> vanishes identically for anticommuting pairs
  GradedPoly mixed(4);
  Mat S = s.basis[0].transpose() * s.basis[1];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double v = 0.5 * (S(i, j) + S(j, i));
      if (i == j && v != 0.0) mixed.set_term(MultiIndex::zero(4).with_exp(i, 2), v);
    }
  CHECK(mixed.max_abs_coeff() <= 1e-14);
}

TEST_CASE("verify_intertwining certificate on the quaternionic pair, small truncation") {
  EndoSpace base = clifford_space(3, 1, 0);
  EndoSpace s11 = sigma_ab_deform(base, 0, 1, 1);
  EndoSpace s20 = sigma_ab_deform(base, 0, 2, 0);
  IntertwiningCertificate cert = verify_intertwining(s11, s20, 3, 1e-8);
  CHECK(cert.pass);
  CHECK(cert.worst_residual <= 1e-8);
  CHECK(cert.identity_residual_J0c <= 1e-12);
  CHECK(cert.expansion_residual <= 1e-10);
  CHECK(cert.vanishing_part_residual <= 1e-10);

  // negative control: scaling one endomorphism breaks the certificate badly
  EndoSpace broken = s20;
  broken.basis[0] = 1.1 * broken.basis[0];
  IntertwiningCertificate bad = verify_intertwining(s11, broken, 2, 1e-8);
  CHECK(!bad.pass);
  CHECK(bad.worst_residual >= 1e-2);
}
