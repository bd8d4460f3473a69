#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "isospec/eig.hpp"
#include "isospec/spectrum.hpp"

using namespace isospec;

TEST_CASE("jacobi eigensym on a known diagonalizable matrix") {
  Mat m(3, 3);
  m << 1, 0, 0, 0, 2, 0, 0, 0, 2;
  EigenSym es = jacobi_eigensym(m);
  CHECK(es.values[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(es.values[1] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(es.values[2] == doctest::Approx(2.0).epsilon(1e-14));
  SpectrumReport rep = SpectrumReport::from_values(es.values, 1e-7, "diag");
  REQUIRE(rep.values.size() == 2);
  CHECK(rep.multiplicities[0] == 1);
  CHECK(rep.multiplicities[1] == 2);
}

TEST_CASE("random symmetric: trace identity and residuals") {
  Rng rng(11);
  Mat a = rng.gauss_mat(50, 50);
  Mat m = 0.5 * (a + a.transpose());
  EigenSym es = jacobi_eigensym(m);
  CHECK(std::abs(es.values.sum() - m.trace()) <= 1e-9 * std::max(1.0, std::abs(m.trace())));
  // reconstruction
  Mat rec = es.vectors * es.values.asDiagonal() * es.vectors.transpose();
  CHECK((rec - m).norm() <= 1e-10 * m.norm());
  CHECK(orthogonality_residual(es.vectors) <= 1e-12);
}

TEST_CASE("orthogonal conjugation leaves the spectrum report unchanged") {
  Rng rng(12);
  Mat a = rng.gauss_mat(20, 20);
  Mat m = 0.5 * (a + a.transpose());
  Mat q = rng.orthogonal(20);
  EigenSym e1 = jacobi_eigensym(m);
  EigenSym e2 = jacobi_eigensym(q * m * q.transpose());
  CHECK((e1.values - e2.values).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("hermitian jacobi") {
  Rng rng(13);
  const int n = 30;
  CMat h(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) h(i, j) = Cplx(rng.gauss(), rng.gauss());
  h = 0.5 * (h + h.adjoint()).eval();
  EigenHerm eh = jacobi_eigenherm(h);
  CMat rec = eh.vectors * eh.values.asDiagonal().toDenseMatrix().cast<Cplx>() * eh.vectors.adjoint();
  CHECK((rec - h).norm() <= 1e-10 * h.norm());
}

TEST_CASE("lanczos lowest matches dense on a sparse-like operator") {
  Rng rng(14);
  const int n = 400;
  CMat h = CMat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    h(i, i) = i * 0.1;
    if (i + 1 < n) {
      h(i, i + 1) = Cplx(0.05, 0.02);
      h(i + 1, i) = std::conj(h(i, i + 1));
    }
  }
  auto apply = [&](const CVec& v) { return CVec(h * v); };
  std::vector<double> low = lanczos_lowest(apply, n, 5);
  EigenHerm eh = jacobi_eigenherm(h);
  REQUIRE(low.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(low[i] == doctest::Approx(eh.values[i]).epsilon(1e-9));
}

TEST_CASE("spectrum comparison modes") {
  Vec a(4), b(4);
  a << 1, 2, 2, 3;
  b << 1, 2, 3, 3;
  SpectrumReport ra = SpectrumReport::from_values(a, 1e-7, "a");
  SpectrumReport rb = SpectrumReport::from_values(b, 1e-7, "b");
  CHECK(compare_spectra(ra, ra, SpectrumCompareMode::Multiset, 1e-9).pass);
  CHECK(!compare_spectra(ra, rb, SpectrumCompareMode::Multiset, 1e-9).pass);
  CHECK(compare_spectra(ra, rb, SpectrumCompareMode::Set, 1e-9).pass);
  Vec c(2);
  c << 1, 2;
  SpectrumReport rc = SpectrumReport::from_values(c, 1e-7, "c");
  auto v = compare_spectra(rc, ra, SpectrumCompareMode::Set, 1e-9);
  CHECK(v.left_subset);
  CHECK(!v.right_subset);
}
