#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "isospec/solvgeom.hpp"

using namespace isospec;

namespace {

SolvGroup sh_type(int l, int a, int b, double c = 1.0) {
  return SolvGroup{MetricGroup{clifford_space(l, a, b)}, c};
}

SolvPoint rand_point(const SolvGroup& g, Rng& rng) {
  return {rng.gauss_vec(g.k()), rng.gauss_vec(g.l()), 0.3 + rng.uniform() * 2.0};
}

SolvVector rand_vec(const SolvGroup& g, Rng& rng) {
  return {rng.gauss_vec(g.k()), rng.gauss_vec(g.l()), rng.gauss()};
}

}  // namespace

TEST_CASE("group law") {
  SolvGroup g = sh_type(3, 1, 0);
  Rng rng(1);
  SolvPoint e{Vec::Zero(4), Vec::Zero(3), 1.0};
  for (int t = 0; t < 5; ++t) {
    SolvPoint p = rand_point(g, rng);
    SolvPoint pe = multiply(g, p, e), ep = multiply(g, e, p);
    CHECK((pe.x - p.x).norm() <= 1e-14);
    CHECK((ep.z - p.z).norm() <= 1e-14);
    CHECK(pe.t == doctest::Approx(p.t));
    SolvPoint inv = inverse(g, p);
    SolvPoint id = multiply(g, p, inv);
    CHECK(id.x.norm() <= 1e-12);
    CHECK(id.z.norm() <= 1e-12);
    CHECK(id.t == doctest::Approx(1.0).epsilon(1e-12));
    // associativity
    SolvPoint q = rand_point(g, rng), r = rand_point(g, rng);
    SolvPoint lhs = multiply(g, multiply(g, p, q), r);
    SolvPoint rhs = multiply(g, p, multiply(g, q, r));
    CHECK((lhs.x - rhs.x).norm() <= 1e-12);
    CHECK((lhs.z - rhs.z).norm() <= 1e-12);
    CHECK(lhs.t == doctest::Approx(rhs.t).epsilon(1e-12));
  }
  // restriction to t = t' = 1 is the nilpotent product
  SolvPoint p{Vec::Ones(4), Vec::Zero(3), 1.0}, q{Vec::Unit(4, 1), Vec::Ones(3), 1.0};
  SolvPoint pr = multiply(g, p, q);
  AlgVector br = bracket(g.nil, {p.x, Vec::Zero(3)}, {q.x, Vec::Zero(3)});
  CHECK((pr.x - (p.x + q.x)).norm() == 0.0);
  CHECK((pr.z - (p.z + q.z + 0.5 * br.z)).norm() <= 1e-15);
  CHECK(pr.t == 1.0);
}

TEST_CASE("solv frame") {
  SolvGroup g = sh_type(3, 1, 0, 0.7);
  SolvPoint origin{Vec::Zero(4), Vec::Zero(3), 1.0};
  Mat f = solv_frame(g, origin);
  CHECK((f.topLeftCorner(7, 7) - Mat::Identity(7, 7)).norm() == 0.0);
  CHECK(f(7, 7) == doctest::Approx(0.7));
  // frame push through left multiplication: finite-difference transport of
  // the coordinate curves matches the frame columns to O(h^2)
  Rng rng(2);
  SolvPoint p = rand_point(g, rng);
  Mat fr = solv_frame(g, p);
  const double h = 1e-6;
  for (int a = 0; a < g.dim(); ++a) {
    Vec dx = Vec::Zero(4), dz = Vec::Zero(3);
    double dt = 0.0;
    if (a < 4)
      dx[a] = h;
    else if (a < 7)
      dz[a - 4] = h;
    else
      dt = h;
    SolvPoint step{dx, dz, 1.0 + g.c * dt};  // curve with unit frame velocity at the origin
    SolvPoint moved = multiply(g, p, step);
    Vec got(g.dim());
    got.head(4) = (moved.x - p.x) / h;
    got.segment(4, 3) = (moved.z - p.z) / h;
    got[7] = (moved.t - p.t) / h;
    CHECK((got - fr.col(a)).norm() <= 1e-4 * std::max(1.0, fr.col(a).norm()));
  }
  // frame Gram against the scaled coordinate metric at z-independent points:
  // the algebra inner product of frame columns is the identity by definition;
  // here check the t-scalings explicitly
  CHECK(fr.col(0).head(4).norm() == doctest::Approx(std::sqrt(p.t)));
  CHECK(fr(7, 7) == doctest::Approx(g.c * p.t));
}

TEST_CASE("nabla_c case table") {
  SolvGroup g = sh_type(3, 1, 0, 1.3);
  Rng rng(3);
  SolvVector T = SolvVector::zero(4, 3);
  T.t = 1.0;
  SolvVector X{rng.gauss_vec(4), Vec::Zero(3), 0.0};
  SolvVector Z{Vec::Zero(4), rng.gauss_vec(3), 0.0};
  CHECK(nabla_c(g, T, X).norm() == 0.0);
  CHECK(nabla_c(g, T, Z).norm() == 0.0);
  CHECK(nabla_c(g, T, T).norm() == 0.0);
  SolvVector nx = nabla_c(g, X, T);
  CHECK((nx.x + (g.c / 2) * X.x).norm() <= 1e-14);
  SolvVector nz = nabla_c(g, Z, T);
  CHECK((nz.z + g.c * Z.z).norm() <= 1e-14);
  // metric compatibility and torsion-freeness with the (1.9)-style brackets
  auto bracket_s = [&](const SolvVector& u, const SolvVector& v) {
    AlgVector nb = bracket(g.nil, {u.x, u.z}, {v.x, v.z});
    SolvVector out{Vec::Zero(4), nb.z, 0.0};
    out.x = g.c * (u.t * 0.5 * v.x - v.t * 0.5 * u.x);
    out.z += g.c * (u.t * v.z - v.t * u.z);
    return out;
  };
  for (int t = 0; t < 8; ++t) {
    SolvVector u = rand_vec(g, rng), v = rand_vec(g, rng), w = rand_vec(g, rng);
    CHECK(std::abs(nabla_c(g, u, v).dot(w) + v.dot(nabla_c(g, u, w))) <= 1e-12);
    SolvVector tors = nabla_c(g, u, v) - nabla_c(g, v, u) - bracket_s(u, v);
    CHECK(tors.norm() <= 1e-12);
  }
}

TEST_CASE("curvature of the scaled metric") {
  SolvGroup g = sh_type(3, 1, 0, 0.9);
  Rng rng(4);
  auto bracket_s = [&](const SolvVector& u, const SolvVector& v) {
    AlgVector nb = bracket(g.nil, {u.x, u.z}, {v.x, v.z});
    SolvVector out{Vec::Zero(4), nb.z, 0.0};
    out.x = g.c * (u.t * 0.5 * v.x - v.t * 0.5 * u.x);
    out.z += g.c * (u.t * v.z - v.t * u.z);
    return out;
  };
  // independent connection-commutator oracle
  for (int t = 0; t < 8; ++t) {
    SolvVector u = rand_vec(g, rng), v = rand_vec(g, rng), w = rand_vec(g, rng);
    SolvVector lhs = riemann_c(g, u, v, w);
    SolvVector rhs = nabla_c(g, u, nabla_c(g, v, w)) - nabla_c(g, v, nabla_c(g, u, w)) -
                     nabla_c(g, bracket_s(u, v), w);
    CHECK((lhs - rhs).norm() <= 1e-9 * std::max(1.0, lhs.norm()));
  }
  // R_c(Z* ^ Z) = R(Z* ^ Z) + c^2 Z* ^ Z on Z-pairs
  for (int t = 0; t < 5; ++t) {
    SolvVector z1{Vec::Zero(4), rng.gauss_vec(3), 0.0}, z2{Vec::Zero(4), rng.gauss_vec(3), 0.0};
    SolvVector w{Vec::Zero(4), rng.gauss_vec(3), 0.0};
    SolvVector lhs = riemann_c(g, z1, z2, w);
    AlgVector nil = riemann(g.nil, {z1.x, z1.z}, {z2.x, z2.z}, {w.x, w.z});
    SolvVector rhs{nil.x, nil.z, 0.0};
    rhs = rhs + (z2 * z1.dot(w) - z1 * z2.dot(w)) * (g.c * g.c);
    CHECK((lhs - rhs).norm() <= 1e-12 * std::max(1.0, lhs.norm()));
  }
  Mat op = curvature_operator_c(g);
  CHECK((op - op.transpose()).norm() <= 1e-12);
}

TEST_CASE("ricci_c eigenvalues; SH3(1,0) with c=1 is Einstein") {
  SolvGroup g = sh_type(3, 1, 0, 1.0);
  SolvVector X{Vec::Unit(4, 0), Vec::Zero(3), 0.0};
  SolvVector Z{Vec::Zero(4), Vec::Unit(3, 0), 0.0};
  SolvVector T = SolvVector::zero(4, 3);
  T.t = 1.0;
  CHECK(ricci_c(g, X, X) == doctest::Approx(-4.0).epsilon(1e-13));
  CHECK(ricci_c(g, Z, Z) == doctest::Approx(-4.0).epsilon(1e-13));
  CHECK(ricci_c(g, T, T) == doctest::Approx(-4.0).epsilon(1e-13));
  CHECK(std::abs(ricci_c(g, X, Z)) <= 1e-14);
  CHECK(std::abs(ricci_c(g, X, T)) <= 1e-14);
  CHECK(std::abs(ricci_c(g, Z, T)) <= 1e-14);
  // T eigenvalue -c^2(k/4 + l) for a scaled metric
  SolvGroup g2 = sh_type(3, 2, 1, 0.5);
  CHECK(ricci_c(g2, SolvVector{Vec::Zero(12), Vec::Zero(3), 1.0}, SolvVector{Vec::Zero(12), Vec::Zero(3), 1.0}) ==
        doctest::Approx(-0.25 * (12.0 / 4 + 3)));
  // contraction oracle against riemann_c
  Rng rng(5);
  for (int t = 0; t < 4; ++t) {
    SolvVector u = rand_vec(g, rng), v = rand_vec(g, rng);
    double acc = 0.0;
    for (int i = 0; i < g.dim(); ++i) {
      SolvVector e = SolvVector::zero(4, 3);
      if (i < 4)
        e.x[i] = 1.0;
      else if (i < 7)
        e.z[i - 4] = 1.0;
      else
        e.t = 1.0;
      acc += riemann_c(g, e, u, v).dot(e);
    }
    CHECK(acc == doctest::Approx(ricci_c(g, u, v)).epsilon(1e-9));
  }
}

TEST_CASE("isotonal decomposition for the (1,3) vs (2,2) nilpotent pair") {
  MetricGroup g13{clifford_space(3, 1, 3)};
  MetricGroup g22{clifford_space(3, 2, 2)};
  IsotonalReport rep = isotonal_decomposition_nil(g13, 1, 3, g22, 2, 2, 4);
  CHECK(rep.blocks_invariant);
  CHECK(rep.max_invariance_residual <= 1e-9);
  CHECK(rep.reflection_applicable);
  CHECK(rep.reflection_residual <= 1e-8);
  // the mechanism that does hold: F boxes and G agree exactly across the
  // pair; the Dg block carries z-coupled triples that differ, so the total
  // spectra are not set-equal (documented deviation ~0.25)
  auto block_of = [](const std::vector<IsotonalBlock>& blocks, const std::string& name) -> const IsotonalBlock& {
    for (const auto& b : blocks)
      if (b.name == name) return b;
    REQUIRE(false);
    return blocks.front();
  };
  auto fcmp = compare_spectra(block_of(rep.blocks_1, "F[0,1]").spectrum,
                              block_of(rep.blocks_2, "F[0,2]").spectrum, SpectrumCompareMode::Multiset, 1e-8);
  CHECK(fcmp.pass);
  auto gcmp = compare_spectra(block_of(rep.blocks_1, "G").spectrum, block_of(rep.blocks_2, "G").spectrum,
                              SpectrumCompareMode::Multiset, 1e-8);
  CHECK(gcmp.pass);
  CHECK(!rep.multiset.pass);
  CHECK(!rep.set.pass);
  CHECK(rep.set.deviation > 0.1);
  CHECK(rep.set.deviation < 0.5);
}

TEST_CASE("isotonal decomposition on the solvable pair: boxes and G agree, Dg carries the defect") {
  SolvGroup g13 = sh_type(3, 1, 3);
  SolvGroup g22 = sh_type(3, 2, 2);
  IsotonalReport rep = isotonal_decomposition(g13, 1, 3, g22, 2, 2, 4);
  CHECK(rep.blocks_invariant);
  CHECK(rep.max_invariance_residual <= 1e-9);
  CHECK(rep.reflection_applicable);
  CHECK(rep.reflection_residual <= 1e-8);
  auto block_of = [](const std::vector<IsotonalBlock>& blocks, const std::string& name) -> const IsotonalBlock& {
    for (const auto& b : blocks)
      if (b.name == name) return b;
    REQUIRE(false);
    return blocks.front();
  };
  auto fcmp = compare_spectra(block_of(rep.blocks_1, "F[0,1]").spectrum,
                              block_of(rep.blocks_2, "F[0,2]").spectrum, SpectrumCompareMode::Multiset, 1e-8);
  CHECK(fcmp.pass);
  auto gcmp = compare_spectra(block_of(rep.blocks_1, "G").spectrum, block_of(rep.blocks_2, "G").spectrum,
                              SpectrumCompareMode::Multiset, 1e-8);
  CHECK(gcmp.pass);
  auto dperp = compare_spectra(block_of(rep.blocks_1, "Dgperp[1,2]").spectrum,
                               block_of(rep.blocks_2, "Dgperp[0,1]").spectrum, SpectrumCompareMode::Multiset, 1e-8);
  CHECK(dperp.pass);
  CHECK(!rep.set.pass);
  // trace equality of the differing Dg blocks (same trace, different values)
  const auto& d1 = block_of(rep.blocks_1, "Dg").spectrum;
  const auto& d2 = block_of(rep.blocks_2, "Dg").spectrum;
  double t1 = 0, t2 = 0;
  for (size_t i = 0; i < d1.values.size(); ++i) t1 += d1.values[i] * d1.multiplicities[i];
  for (size_t i = 0; i < d2.values.size(); ++i) t2 += d2.values[i] * d2.multiplicities[i];
  CHECK(t1 == doctest::Approx(t2).epsilon(1e-9));
}
