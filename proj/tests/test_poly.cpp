#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "isospec/poly.hpp"

using namespace isospec;

TEST_CASE("basic arithmetic and grading") {
  GradedPoly x = GradedPoly::monomial(MultiIndex::zero(3).with_exp(0, 1), 1.0);
  GradedPoly y = GradedPoly::monomial(MultiIndex::zero(3).with_exp(1, 1), 1.0);
  GradedPoly p = x * x + y * x * 2.0;
  CHECK(p.degree() == 2);
  CHECK(p.is_homogeneous());
  GradedPoly q = p + GradedPoly::constant(3, 1.0);
  CHECK(!q.is_homogeneous());
  CHECK(q.homogeneous_part(2).terms().size() == 2);
  CVec pt(3);
  pt << Cplx(2, 0), Cplx(3, 0), Cplx(0, 0);
  CHECK(p.eval(pt).real() == doctest::Approx(4 + 12));
}

TEST_CASE("derivatives laplacian and directional") {
  // p = x^2 y on R^2
  MultiIndex m = MultiIndex::zero(2).with_exp(0, 2).with_exp(1, 1);
  GradedPoly p = GradedPoly::monomial(m, 1.0);
  GradedPoly dpx = p.derivative(0);
  CHECK(dpx.coeff(MultiIndex::zero(2).with_exp(0, 1).with_exp(1, 1)) == Cplx(2.0));
  GradedPoly lap = p.laplacian();
  CHECK(lap.coeff(MultiIndex::zero(2).with_exp(1, 1)) == Cplx(2.0));
  CHECK(GradedPoly::constant(2, 5.0).directional(Mat::Identity(2, 2)).is_zero());
  // rotation field: D p should rotate the arguments infinitesimally
  Mat rot{{0, -1}, {1, 0}};
  GradedPoly dp = p.directional(rot);
  // d/dt p(x - t y, y + t x) at 0 = -2xy*y + x^2*x = x^3 - 2xy^2
  CHECK(dp.coeff(MultiIndex::zero(2).with_exp(0, 3)) == Cplx(1.0));
  CHECK(dp.coeff(MultiIndex::zero(2).with_exp(0, 1).with_exp(1, 2)) == Cplx(-2.0));
}

TEST_CASE("mul_r2 and exact division") {
  Rng rng(9);
  GradedPoly p(4);
  for (const MultiIndex& m : monomials_of_degree(4, 3)) p.set_term(m, Cplx(rng.gauss(), rng.gauss()));
  GradedPoly q = p.mul_r2();
  GradedPoly back(4);
  REQUIRE(q.div_r2(back));
  CHECK((back - p).max_abs_coeff() <= 1e-12);
  // a generic degree-2 polynomial is not divisible
  GradedPoly bad = GradedPoly::monomial(MultiIndex::zero(4).with_exp(0, 1).with_exp(1, 1), 1.0);
  GradedPoly out(4);
  CHECK(!bad.div_r2(out));
}

TEST_CASE("sphere moments") {
  // normalized moments: <x_i^2> = 1/k, <x_i^4> = 3/(k(k+2)), <x^2 y^2> = 1/(k(k+2))
  for (int k : {2, 3, 4, 8}) {
    MultiIndex m2 = MultiIndex::zero(k).with_exp(0, 2);
    CHECK(sphere_moment(m2) == doctest::Approx(1.0 / k));
    MultiIndex m4 = MultiIndex::zero(k).with_exp(0, 4);
    CHECK(sphere_moment(m4) == doctest::Approx(3.0 / (k * (k + 2.0))));
    MultiIndex m22 = MultiIndex::zero(k).with_exp(0, 2).with_exp(1, 2);
    CHECK(sphere_moment(m22) == doctest::Approx(1.0 / (k * (k + 2.0))));
    CHECK(sphere_moment(MultiIndex::zero(k).with_exp(0, 1)) == 0.0);
  }
  // |X|^2 integrates to 1 on the sphere
  int k = 5;
  GradedPoly r2(k);
  for (int i = 0; i < k; ++i) r2.set_term(MultiIndex::zero(k).with_exp(i, 2), 1.0);
  CHECK(sphere_inner(r2, GradedPoly::constant(k, 1.0)).real() == doctest::Approx(1.0));
}

TEST_CASE("sphere volume") {
  CHECK(sphere_volume(2) == doctest::Approx(2 * M_PI));
  CHECK(sphere_volume(3) == doctest::Approx(4 * M_PI));
  CHECK(sphere_volume(4) == doctest::Approx(2 * M_PI * M_PI));
}

TEST_CASE("parity pairing shortcut agrees with direct integration") {
  Rng rng(10);
  const int k = 4;
  GradedPoly f(k), g(k);
  for (const MultiIndex& m : monomials_of_degree(k, 3)) {
    f.set_term(m, Cplx(rng.gauss(), rng.gauss()));
    g.set_term(m, Cplx(rng.gauss(), rng.gauss()));
  }
  Cplx direct = 0;
  for (const auto& [mf, cf] : f.terms())
    for (const auto& [mg, cg] : g.terms()) direct += cf * std::conj(cg) * sphere_moment(mf + mg);
  Cplx fast = sphere_inner(f, g);
  CHECK(std::abs(direct - fast) <= 1e-12);
}
