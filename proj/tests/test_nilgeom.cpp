#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "isospec/nilgeom.hpp"

using namespace isospec;

namespace {

MetricGroup heisenberg3() {
  Mat J{{0, 1}, {-1, 0}};
  return MetricGroup{build_endo_space({J})};
}

MetricGroup h_type(int l, int a, int b) { return MetricGroup{clifford_space(l, a, b)}; }

AlgVector rand_vec(const MetricGroup& g, Rng& rng) { return {rng.gauss_vec(g.k()), rng.gauss_vec(g.l())}; }

}  // namespace

TEST_CASE("bracket basics") {
  MetricGroup g = heisenberg3();
  Rng rng(1);
  AlgVector u = rand_vec(g, rng);
  CHECK(bracket(g, u, u).z.norm() <= 1e-15);
  AlgVector z1{Vec::Zero(2), Vec::Ones(1)}, z2{Vec::Zero(2), 2 * Vec::Ones(1)};
  CHECK(bracket(g, z1, z2).z.norm() == 0.0);
  // [e_x, e_y] has z-component <J e_x, e_y> = -1 for the rotation generator
  AlgVector ex{Vec::Unit(2, 0), Vec::Zero(1)}, ey{Vec::Unit(2, 1), Vec::Zero(1)};
  CHECK(bracket(g, ex, ey).z[0] == doctest::Approx(-1.0));
  // 2-step: [[u,v],w] = 0
  AlgVector v = rand_vec(g, rng), w = rand_vec(g, rng);
  CHECK(bracket(g, bracket(g, u, v), w).z.norm() <= 1e-15);
}

TEST_CASE("invariant frame") {
  MetricGroup g = heisenberg3();
  CHECK((invariant_frame(g, Vec::Zero(2)) - Mat::Identity(3, 3)).norm() == 0.0);
  // at X = E1 the second frame field gets a half z-shift <J E1, E2>
  Mat f = invariant_frame(g, Vec::Unit(2, 0));
  Mat J{{0, 1}, {-1, 0}};
  CHECK(f(2, 1) == doctest::Approx(0.5 * (J * Vec::Unit(2, 0)).dot(Vec::Unit(2, 1))));
  // frame Gram with respect to the coordinate metric is the identity
  Rng rng(2);
  MetricGroup g2 = h_type(3, 1, 1);
  for (int t = 0; t < 5; ++t) {
    Vec x = rng.gauss_vec(g2.k());
    Mat fr = invariant_frame(g2, x);
    Mat gram = fr.transpose() * coordinate_metric(g2, x) * fr;
    CHECK((gram - Mat::Identity(g2.dim(), g2.dim())).norm() <= 1e-12);
  }
}

TEST_CASE("nabla: metric compatibility and torsion freeness") {
  MetricGroup g = h_type(3, 1, 0);
  Rng rng(3);
  AlgVector zz{Vec::Zero(4), rng.gauss_vec(3)}, zz2{Vec::Zero(4), rng.gauss_vec(3)};
  CHECK(nabla(g, zz, zz2).norm() == 0.0);
  for (int t = 0; t < 10; ++t) {
    AlgVector p = rand_vec(g, rng), q = rand_vec(g, rng), r = rand_vec(g, rng);
    CHECK(std::abs(nabla(g, p, q).dot(r) + q.dot(nabla(g, p, r))) <= 1e-12);
    AlgVector tors = nabla(g, p, q) - nabla(g, q, p) - bracket(g, p, q);
    CHECK(tors.norm() <= 1e-12);
  }
}

TEST_CASE("curvature formulas") {
  MetricGroup g = heisenberg3();
  // R(Z,Z,Z) = 0 exactly
  AlgVector z{Vec::Zero(2), Vec::Ones(1)};
  CHECK(riemann(g, z, z, z).norm() == 0.0);
  // standard Heisenberg sectional curvature of the X-plane
  AlgVector X{Vec::Unit(2, 0), Vec::Zero(1)}, Y{Vec::Unit(2, 1), Vec::Zero(1)};
  CHECK(riemann4(g, X, Y, Y, X) == doctest::Approx(-0.75).epsilon(1e-14));
  AlgVector ryy = riemann(g, X, Y, Y);
  AlgVector expect{0.75 * (g.space.J(bracket(g, X, Y).z) * Y.x), Vec::Zero(1)};
  CHECK((ryy - expect).norm() <= 1e-14);

  // oracle: connection commutator on invariant fields
  MetricGroup g2 = h_type(3, 1, 1);
  Rng rng(4);
  for (int t = 0; t < 6; ++t) {
    AlgVector u = rand_vec(g2, rng), v = rand_vec(g2, rng), w = rand_vec(g2, rng);
    AlgVector lhs = riemann(g2, u, v, w);
    AlgVector rhs = nabla(g2, u, nabla(g2, v, w)) - nabla(g2, v, nabla(g2, u, w)) -
                    nabla(g2, bracket(g2, u, v), w);
    CHECK((lhs - rhs).norm() <= 1e-12 * std::max(1.0, lhs.norm()));
    // pair symmetry and first Bianchi
    AlgVector s = rand_vec(g2, rng);
    CHECK(std::abs(riemann4(g2, u, v, w, s) - riemann4(g2, w, s, u, v)) <= 1e-10);
    AlgVector bianchi = riemann(g2, u, v, w) + riemann(g2, v, w, u) + riemann(g2, w, u, v);
    CHECK(bianchi.norm() <= 1e-10);
  }
}

TEST_CASE("curvature operator is symmetric") {
  MetricGroup g = h_type(3, 1, 1);
  Mat op = curvature_operator(g);
  CHECK((op - op.transpose()).norm() <= 1e-12);
}

TEST_CASE("ricci values") {
  MetricGroup g = h_type(3, 2, 1);
  Rng rng(5);
  AlgVector X{rng.gauss_vec(g.k()), Vec::Zero(3)};
  AlgVector Z{Vec::Zero(g.k()), rng.gauss_vec(3)};
  CHECK(std::abs(ricci(g, X, Z)) <= 1e-14);
  // Heisenberg-type eigenvalues: -l/2 on v and k/4 on z
  CHECK(ricci(g, X, X) == doctest::Approx(-1.5 * X.x.squaredNorm()).epsilon(1e-12));
  CHECK(ricci(g, Z, Z) == doctest::Approx(0.25 * g.k() * Z.z.squaredNorm()).epsilon(1e-12));
  // contraction oracle: Ricc(u,v) = sum_a <R(e_a,u)v,e_a>
  MetricGroup g2 = h_type(3, 1, 1);
  for (int t = 0; t < 5; ++t) {
    AlgVector u = rand_vec(g2, rng), v = rand_vec(g2, rng);
    double contracted = 0.0;
    for (int i = 0; i < g2.dim(); ++i) {
      AlgVector e = AlgVector::zero(g2.k(), g2.l());
      if (i < g2.k())
        e.x[i] = 1.0;
      else
        e.z[i - g2.k()] = 1.0;
      contracted += riemann4(g2, e, u, v, e);
    }
    CHECK(contracted == doctest::Approx(ricci(g2, u, v)).epsilon(1e-9));
  }
}

TEST_CASE("coordinate metric") {
  MetricGroup g = h_type(3, 1, 1);
  CHECK((coordinate_metric(g, Vec::Zero(8)) - Mat::Identity(11, 11)).norm() == 0.0);
  Rng rng(6);
  for (int t = 0; t < 5; ++t) {
    Vec x = rng.gauss_vec(8);
    Mat m = coordinate_metric(g, x);
    CHECK((m - m.transpose()).norm() == 0.0);
    Eigen::LLT<Mat> llt(m);
    CHECK(llt.info() == Eigen::Success);
  }
}

TEST_CASE("verify_isometry") {
  MetricGroup g = h_type(3, 1, 1);
  CHECK(verify_isometry(g, g, Mat::Identity(8, 8), Mat::Identity(3, 3)).pass);
  Rng rng(7);
  Mat A = rng.orthogonal(8);
  std::vector<Mat> conj;
  for (const Mat& J : g.space.basis) conj.push_back(A * J * A.transpose());
  MetricGroup g2{build_endo_space(conj)};
  CHECK(verify_isometry(g, g2, A, Mat::Identity(3, 3)).pass);

  MetricGroup g20 = h_type(3, 2, 0);
  MetricGroup g11 = h_type(3, 1, 1);
  for (int t = 0; t < 5; ++t) {
    auto rep = verify_isometry(g11, g20, rng.orthogonal(8), rng.orthogonal(3));
    CHECK(!rep.pass);
  }
  CHECK(nonconjugacy_certificate(g11.space, g20.space).distinguished);
}
