#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "isospec/eig.hpp"
#include "isospec/endospace.hpp"
#include <cmath>

#include "isospec/errors.hpp"

using namespace isospec;

namespace {
Mat rot2() { return Mat{{0, 1}, {-1, 0}}; }
}  // namespace

TEST_CASE("pauli blocks multiplication table") {
  PauliBlocks p = pauli_blocks();
  CHECK((p.i * p.i + p.one).norm() == 0.0);
  CHECK((p.j * p.j - p.one).norm() == 0.0);
  CHECK((p.k * p.k - p.one).norm() == 0.0);
  CHECK((p.i * p.j - p.k).norm() == 0.0);
  CHECK((p.k * p.i - p.j).norm() == 0.0);
  CHECK((p.k * p.j - p.i).norm() == 0.0);
  CHECK((p.j * p.i + p.k).norm() == 0.0);
}

TEST_CASE("build_endo_space validates") {
  CHECK(build_endo_space({rot2()}).k == 2);
  CHECK(build_endo_space({rot2()}).l == 1);
  Mat sym(2, 2);
  sym << 0, 1, 1, 0;
  CHECK_THROWS_AS(build_endo_space({sym}), Error);
  CHECK_THROWS_AS(build_endo_space({rot2(), 2.0 * rot2()}), Error);  // dependent
  EndoSpace q = clifford_space(3, 1, 0);
  CHECK(q.k == 4);
  CHECK(q.l == 3);
}

TEST_CASE("clifford_space dimensions follow the minimal module table") {
  CHECK(clifford_min_dim(1) == 2);
  CHECK(clifford_min_dim(2) == 4);
  CHECK(clifford_min_dim(3) == 4);
  CHECK(clifford_min_dim(7) == 8);
  CHECK(clifford_min_dim(8) == 16);
  CHECK(clifford_min_dim(9) == 32);
  for (int l : {1, 2, 3, 4, 5, 6, 7, 8, 9}) {
    EndoSpace s = clifford_space(l, 1, 0);
    CHECK(s.k == clifford_min_dim(l));
    // J_Z^2 = -|Z|^2 id on random Z
    Rng rng(100 + l);
    for (int t = 0; t < 4; ++t) {
      Vec z = rng.gauss_vec(l);
      Mat jz = s.J(z);
      CHECK((jz * jz + z.squaredNorm() * Mat::Identity(s.k, s.k)).norm() <= 1e-12 * z.squaredNorm() * s.k);
    }
  }
  CHECK_THROWS_AS(clifford_space(11, 1, 0), Error);
}

TEST_CASE("clifford_space (a,b) replication flips the distinguished block") {
  EndoSpace s = clifford_space(3, 1, 1);
  CHECK(s.k == 8);
  // distinguished acts as (A(X1), -A(X2))
  EndoSpace irr = clifford_space(3, 1, 0);
  CHECK((s.basis[0].topLeftCorner(4, 4) - irr.basis[0]).norm() == 0.0);
  CHECK((s.basis[0].bottomRightCorner(4, 4) + irr.basis[0]).norm() == 0.0);
  CHECK((s.basis[1].bottomRightCorner(4, 4) - irr.basis[1]).norm() == 0.0);
  EndoSpace s7 = clifford_space(7, 1, 0);
  CHECK(s7.k == 8);
}

TEST_CASE("anticommutator detection") {
  EndoSpace s = clifford_space(3, 1, 0);
  for (int a = 0; a < 3; ++a) {
    auto rep = is_anticommutator(s, Vec::Unit(3, a));
    CHECK(rep.is_anticommutator);
    CHECK(rep.residual <= 1e-12);
  }
  // l = 1 with a non-degenerate element: vacuous complement
  EndoSpace h = build_endo_space({rot2()});
  CHECK(is_anticommutator(h, Vec::Ones(1)).is_anticommutator);
  // two commuting non-equal complex structures on R^4: left and right
  // quaternion products both square to -1 and commute
  EndoSpace q3 = clifford_space(3, 1, 0);
  Mat L_i = q3.basis[0];
  Mat R_i(4, 4);
  R_i << 0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, -1, 0;
  EndoSpace comm = build_endo_space({L_i, R_i});
  CHECK(commutator_norm(L_i, R_i) <= 1e-14);
  auto rep = is_anticommutator(comm, Vec::Unit(2, 0));
  CHECK(!rep.is_anticommutator);
  CHECK(rep.residual > 0.1);
}

TEST_CASE("jordan_normalize block structure and round trip") {
  EndoSpace s = clifford_space(3, 1, 0);
  JordanForm jf = jordan_normalize(s, Vec::Unit(3, 0));
  REQUIRE(jf.block_sizes.size() == 1);
  CHECK(jf.block_sizes[0].first == doctest::Approx(1.0));
  CHECK(jf.block_sizes[0].second == 4);
  CHECK(orthogonality_residual(jf.basis_change) <= 1e-10);
  // A already in standard form stays put: transformed_A has exact a*i blocks
  PauliBlocks pb = pauli_blocks();
  for (int b = 0; b < 2; ++b)
    CHECK((jf.transformed_A.block(2 * b, 2 * b, 2, 2) - pb.i).norm() <= 1e-10);
  CHECK(jf.structure_residual <= 1e-10);

  // round trip through a random orthogonal conjugation and mixed scalings
  Rng rng(42);
  Mat q = rng.orthogonal(8);
  Mat blocks = Mat::Zero(8, 8);
  double vals[4] = {2.0, 2.0, 3.0, 0.5};
  for (int b = 0; b < 4; ++b) blocks.block(2 * b, 2 * b, 2, 2) = vals[b] * pb.i;
  Mat A = q * blocks * q.transpose();
  // perpendicular family: conjugated j/k pattern in the first two blocks
  Mat F = Mat::Zero(8, 8);
  F.block(0, 2, 2, 2) = pb.j;
  F.block(2, 0, 2, 2) = -pb.j.transpose();
  Mat Fc = q * F * q.transpose();
  EndoSpace es = build_endo_space({A, Fc});
  JordanForm jf2 = jordan_normalize(es, Vec::Unit(2, 0));
  std::vector<std::pair<double, int>> expect{{3.0, 2}, {2.0, 4}, {0.5, 2}};
  REQUIRE(jf2.block_sizes.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(jf2.block_sizes[i].first == doctest::Approx(expect[i].first).epsilon(1e-9));
    CHECK(jf2.block_sizes[i].second == expect[i].second);
  }
  Mat back = jf2.basis_change * jf2.transformed_A * jf2.basis_change.transpose();
  CHECK((back - A).norm() <= 1e-10);
  CHECK(jf2.structure_residual <= 1e-10);
}

TEST_CASE("sigma_ab_deform identities") {
  EndoSpace s = clifford_space(3, 1, 0);
  EndoSpace copy = sigma_ab_deform(s, 0, 1, 0);
  for (int a = 0; a < 3; ++a) CHECK((copy.basis[a] - s.basis[a]).norm() == 0.0);

  EndoSpace ab = sigma_ab_deform(s, 0, 1, 1);
  EndoSpace a20 = sigma_ab_deform(s, 0, 2, 0);
  // (F + cA^{(a,b)})^2 = (F + cA^{(a+b,0)})^2 for random F in the complement
  Rng rng(7);
  for (int t = 0; t < 6; ++t) {
    double c1 = rng.gauss(), c2 = rng.gauss();
    Mat F_ab = c1 * ab.basis[1] + c2 * ab.basis[2];
    Mat F_20 = c1 * a20.basis[1] + c2 * a20.basis[2];
    double c = rng.gauss();
    Mat lhs = (F_ab + c * ab.basis[0]) * (F_ab + c * ab.basis[0]);
    Mat rhs = (F_20 + c * a20.basis[0]) * (F_20 + c * a20.basis[0]);
    CHECK((lhs - rhs).norm() <= 1e-12 * std::max(1.0, lhs.norm()));
  }
  // sigma^{(a,b)} composed with A^{(a+b,0)} gives A^{(a,b)} entrywise
  Mat sig = sigma_ab_matrix(4, 1, 1);
  CHECK((sig * a20.basis[0] - ab.basis[0]).norm() == 0.0);
  // (2,1) and (1,2) are conjugate via the copy-reversal permutation paired
  // with the sign flip of the distinguished Z-direction
  EndoSpace s21 = sigma_ab_deform(s, 0, 2, 1);
  EndoSpace s12 = sigma_ab_deform(s, 0, 1, 2);
  Mat P = Mat::Zero(12, 12);
  for (int c = 0; c < 3; ++c) P.block(4 * c, 4 * (2 - c), 4, 4) = Mat::Identity(4, 4);
  for (int a = 0; a < 3; ++a) {
    Mat lhs = P * s21.basis[a] * P.transpose();
    Mat rhs = (a == 0) ? Mat(-s12.basis[a]) : s12.basis[a];
    CHECK((lhs - rhs).norm() == 0.0);
  }
}

TEST_CASE("sigma_A_deform validation and identities") {
  EndoSpace s20 = sigma_ab_deform(clifford_space(3, 1, 0), 0, 2, 0);
  Mat sig = sigma_ab_matrix(4, 1, 1);
  EndoSpace def = sigma_A_deform(s20, 0, sig);
  EndoSpace ab = sigma_ab_deform(clifford_space(3, 1, 0), 0, 1, 1);
  for (int a = 0; a < 3; ++a) CHECK((def.basis[a] - ab.basis[a]).norm() == 0.0);

  // sigma = Id and sigma = -Id
  EndoSpace same = sigma_A_deform(s20, 0, Mat::Identity(8, 8));
  CHECK((same.basis[0] - s20.basis[0]).norm() == 0.0);
  EndoSpace neg = sigma_A_deform(s20, 0, -Mat::Identity(8, 8));
  CHECK((neg.basis[0] + s20.basis[0]).norm() == 0.0);

  Mat bad = Mat::Identity(8, 8);
  bad(0, 0) = 2.0;  // not involutive
  CHECK_THROWS_AS(sigma_A_deform(s20, 0, bad), Error);
  // orthogonal, involutive, but not commuting
  Mat refl = Mat::Identity(8, 8);
  refl(0, 0) = -1.0;
  CHECK_THROWS_AS(sigma_A_deform(s20, 0, refl), Error);
}

TEST_CASE("rescale_to_unit") {
  EndoSpace s = clifford_space(3, 1, 0);
  Mat A = s.basis[0];
  UnitRescale r = rescale_to_unit(A);
  CHECK((r.S - Mat::Identity(4, 4)).norm() <= 1e-12);
  UnitRescale r2 = rescale_to_unit(Mat(2.0 * A));
  CHECK((r2.S - 2.0 * Mat::Identity(4, 4)).norm() <= 1e-12);
  PauliBlocks pb = pauli_blocks();
  Mat blocks = Mat::Zero(4, 4);
  blocks.block(0, 0, 2, 2) = 1.0 * pb.i;
  blocks.block(2, 2, 2, 2) = 3.0 * pb.i;
  UnitRescale r3 = rescale_to_unit(blocks);
  EigenSym es = jacobi_eigensym(r3.S);
  CHECK(es.values[0] == doctest::Approx(1.0));
  CHECK(es.values[3] == doctest::Approx(3.0));
  CHECK((r3.A0 * r3.A0 + Mat::Identity(4, 4)).norm() <= 1e-12);
  CHECK(commutator_norm(r3.S, r3.A0) <= 1e-12);
  CHECK_THROWS_AS(rescale_to_unit(Mat(Mat::Zero(4, 4))), Error);
}

TEST_CASE("unit_endo_conjugator identities") {
  EndoSpace s = clifford_space(3, 1, 0);
  Mat A0 = s.basis[0];
  std::vector<Mat> F{s.basis[1], s.basis[2]};

  SUBCASE("B0 = A0 gives the identity") {
    UnitEndoConjugator u = unit_endo_conjugator(A0, A0, F);
    CHECK((u.sqrtD - Mat::Identity(4, 4)).norm() <= 1e-9);
    CHECK((u.S_hat - Mat::Identity(4, 4)).norm() <= 1e-9);
    CHECK(u.max_residual <= 1e-9);
  }

  SUBCASE("sigma-deformed B0 recovers the involution") {
    EndoSpace s20 = sigma_ab_deform(s, 0, 2, 0);
    Mat sig = sigma_ab_matrix(4, 1, 1);
    Mat A8 = s20.basis[0];
    std::vector<Mat> F8{s20.basis[1], s20.basis[2]};
    UnitEndoConjugator u = unit_endo_conjugator(A8, sig * A8, F8);
    CHECK(u.max_residual <= 1e-9);
    CHECK((u.S_hat - sig).norm() <= 1e-8);
  }

  SUBCASE("rotated unit structure on R^4, empty family") {
    Rng rng(5);
    for (int t = 0; t < 10; ++t) {
      Mat q = rng.orthogonal(4);
      Mat B0 = q * A0 * q.transpose();
      UnitEndoConjugator u = unit_endo_conjugator(A0, B0, {});
      CHECK(u.max_residual <= 1e-9);
    }
  }

  SUBCASE("random unit anticommutators for a one-dimensional family") {
    // For F = {L_j} the unit anticommutators form the circle
    // cos(t) L_i + sin(t) L_k; on two blocks independent angles give a rich
    // set of instances, including the -Id rotation block at t = pi.
    Rng rng(6);
    Mat Li = s.basis[0], Lj = s.basis[1], Lk = s.basis[2];
    Mat A8 = Mat::Zero(8, 8), Fj = Mat::Zero(8, 8);
    A8.block(0, 0, 4, 4) = Li;
    A8.block(4, 4, 4, 4) = Li;
    Fj.block(0, 0, 4, 4) = Lj;
    Fj.block(4, 4, 4, 4) = Lj;
    for (int t = 0; t < 100; ++t) {
      double a1 = rng.uniform() * 2 * M_PI;
      double a2 = (t % 7 == 0) ? M_PI : rng.uniform() * 2 * M_PI;  // hit the -Id branch too
      Mat B8 = Mat::Zero(8, 8);
      B8.block(0, 0, 4, 4) = std::cos(a1) * Li + std::sin(a1) * Lk;
      B8.block(4, 4, 4, 4) = std::cos(a2) * Li + std::sin(a2) * Lk;
      UnitEndoConjugator u = unit_endo_conjugator(A8, B8, {Fj});
      CHECK(u.max_residual <= 1e-9);
    }
  }

  CHECK_THROWS_AS(unit_endo_conjugator(Mat(2.0 * A0), A0, {}), Error);
}

TEST_CASE("verify_spectral_equivalence") {
  Rng rng(21);
  EndoSpace s = clifford_space(3, 2, 1);
  auto r = verify_spectral_equivalence(s, s, Mat::Identity(3, 3), 10, rng);
  CHECK(r.pass);
  CHECK(r.max_deviation <= 1e-12);

  EndoSpace def = sigma_A_deform(s, 0, sigma_ab_matrix(4, 2, 1));
  auto r2 = verify_spectral_equivalence(s, def, Mat::Identity(3, 3), 10, rng);
  CHECK(r2.pass);

  EndoSpace scaled = s;
  scaled.basis[1] = 2.0 * scaled.basis[1];
  auto r3 = verify_spectral_equivalence(s, scaled, Mat::Identity(3, 3), 10, rng);
  CHECK(!r3.pass);
  CHECK(r3.max_deviation > 1e-2);
}

TEST_CASE("nonconjugacy certificate distinguishes (1,1) from (2,0)") {
  EndoSpace base = clifford_space(3, 1, 0);
  EndoSpace s11 = sigma_ab_deform(base, 0, 1, 1);
  EndoSpace s20 = sigma_ab_deform(base, 0, 2, 0);
  auto same = nonconjugacy_certificate(s11, s11);
  CHECK(!same.distinguished);
  auto rep = nonconjugacy_certificate(s11, s20);
  CHECK(rep.distinguished);
  CHECK(rep.distinguishing_invariant == "generated-lie-algebra-dimension");
  CHECK(rep.lie_dim_2 == 3);   // the (2,0) basis closes into an so(3) replica
  CHECK(rep.lie_dim_1 > 3);

  // (1,2) vs (2,1) are conjugate up to order: inconclusive
  EndoSpace s12 = sigma_ab_deform(base, 0, 1, 2);
  EndoSpace s21 = sigma_ab_deform(base, 0, 2, 1);
  auto rep2 = nonconjugacy_certificate(s12, s21);
  CHECK(!rep2.distinguished);
}

TEST_CASE("heisenberg-type polarization identity on random pairs") {
  Rng rng(31);
  for (int l : {2, 3, 7}) {
    EndoSpace s = clifford_space(l, 1, 0);
    for (int t = 0; t < 5; ++t) {
      Vec z1 = rng.gauss_vec(l), z2 = rng.gauss_vec(l);
      Mat lhs = s.J(z1) * s.J(z2) + s.J(z2) * s.J(z1) + 2.0 * z1.dot(z2) * Mat::Identity(s.k, s.k);
      CHECK(lhs.norm() <= 1e-12 * std::max(1.0, z1.norm() * z2.norm() * s.k));
    }
  }
}

TEST_CASE("two-dimensional quaternionic family: explicit diagonal conjugator") {
  // A = 2 L_i, F = 3 L_j on R^4; sigma = -Id deforms A to -A, and the unit
  // version of F conjugates the pair back while fixing F.
  EndoSpace q = clifford_space(3, 1, 0);
  Mat A = 2.0 * q.basis[0], F = 3.0 * q.basis[1];
  Mat F0 = q.basis[1];
  Mat Ap = -A;  // sigma = -Id deformation
  CHECK((F0 * A * F0.inverse() - Ap).norm() <= 1e-10);
  CHECK((F0 * F * F0.inverse() - F).norm() <= 1e-10);
}

TEST_CASE("serialization round trip is exact on integer entries") {
  EndoSpace s = clifford_space(3, 2, 1);
  std::string text = serialize_endo_space(s);
  EndoSpace back = parse_endo_space(text);
  CHECK(back.k == s.k);
  CHECK(back.l == s.l);
  for (int a = 0; a < s.l; ++a) CHECK((back.basis[a] - s.basis[a]).norm() == 0.0);
  CHECK(back.has_label("clifford"));
}
