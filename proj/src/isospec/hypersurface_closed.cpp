#include <cmath>

#include "isospec/errors.hpp"
#include "isospec/hypersurface.hpp"

namespace isospec {

namespace {

// Generated numerators of the Gauss-equation scalar curvature on eigenpoints
// of anticommuting scaled families (see closed_form_coeffs.inc).
#include "closed_form_coeffs.inc"

struct Invariants {
  double K, L, W0, E1, P2, E2;
};

Invariants invariants_of(double lam0, double lam_perp, double p2, int k, int l) {
  Invariants inv;
  inv.K = k;
  inv.L = l;
  inv.W0 = -lam0;
  inv.E1 = -lam_perp;
  inv.P2 = p2;
  inv.E2 = 0.5 * (lam_perp * lam_perp - p2);
  return inv;
}

template <typename S>
S cm2_of(const S& tau, const S& Dv, const S& Dp, double W0) {
  return Dp * Dp * Dv * tau * W0 + 4.0 * (Dp * Dp * tau) + 4.0 * Dv;
}

}  // namespace

double scalar_curvature_closed_form(double tau, double D, double Dp, double Dpp, double lam0, double lam_perp,
                                    double p2, int k, int l) {
  Invariants inv = invariants_of(lam0, lam_perp, p2, k, l);
  const double cm2 = cm2_of(tau, D, Dp, inv.W0);
  return closed_total_num<double>(tau, D, Dp, Dpp, inv.K, inv.L, inv.W0, inv.E1, inv.P2, inv.E2) /
         (2.0 * cm2 * cm2);
}

ClosedFormTerms scalar_curvature_closed_form_terms(double tau, double D, double Dp, double Dpp, double lam0,
                                                   double lam_perp, double p2, int k, int l) {
  Invariants inv = invariants_of(lam0, lam_perp, p2, k, l);
  const double cm2 = cm2_of(tau, D, Dp, inv.W0);
  ClosedFormTerms t;
  t.kappa_ambient = 0.25 * k * (lam0 + lam_perp);
  t.minus2_ricci_nu = closed_m2ric_num<double>(tau, D, Dp, Dpp, inv.K, inv.L, inv.W0, inv.E1, inv.P2, inv.E2) / cm2;
  t.trace_B_squared =
      closed_trbsq_num<double>(tau, D, Dp, Dpp, inv.K, inv.L, inv.W0, inv.E1, inv.P2, inv.E2) / (cm2 * cm2 * cm2);
  t.minus_trace_B2 =
      closed_trb2m_num<double>(tau, D, Dp, Dpp, inv.K, inv.L, inv.W0, inv.E1, inv.P2, inv.E2) / (cm2 * cm2 * cm2);
  return t;
}

double scalar_curvature_closed_form_solv(double tau, double t, double D, double Dp, double Dt, double Dpp,
                                         double Dpt, double Dtt) {
  const double base = Dp * Dp * D * tau + 4.0 * Dp * Dp * t * tau + Dt * Dt * t + 4.0 * D;
  return closed_solv_num<double>(tau, t, D, Dp, Dt, Dpp, Dpt, Dtt) / (2.0 * base * base);
}

HopfCurvatureReport hopf_curvature(const Profile& prof, int n_samples, double lam0) {
  if (prof.kind() != Profile::Kind::Nilpotent) fail(ErrorKind::BadInput, "nilpotent profile expected");
  HopfCurvatureReport rep;
  // probe the tau domain
  double tau_max = 0.0;
  {
    double lo = 0.0, step = std::max(prof.D(0.0), 1.0);
    for (int i = 0; i < 200 && prof.D(lo + step) > 1e-6; ++i) lo += step;
    double hi = lo + step;
    for (int i = 0; i < 100; ++i) {
      double mid = 0.5 * (lo + hi);
      (prof.D(mid) > 1e-6 ? lo : hi) = mid;
    }
    tau_max = lo;
  }
  const Invariants inv = invariants_of(lam0, 0.0, 0.0, 2, 1);
  double maxDp = 0.0;
  double min_margin = 1e300;
  for (int i = 0; i < n_samples; ++i) {
    const double f = std::fmod(0.5 + i * 0.6180339887498949, 1.0);
    const double tau = tau_max * (0.02 + 0.95 * f);
    // dual pass for d/dtau: D, D', D'' as duals carrying the tau-derivative
    Dual1 taud{tau, 1.0};
    Dual1 Dd = prof.eval(taud, Dual1(1.0));
    Dual1 Dpd = prof.eval(Dual2{{tau, 1.0}, {1.0, 0.0}}, Dual2{{1.0, 0.0}, {0.0, 0.0}}).d;
    Dual1 Dppd{prof.D_tautau(tau),
               prof.eval(Dual<Dual2>{{{tau, 1.0}, {1.0, 0.0}}, {{1.0, 0.0}, {0.0, 0.0}}},
                         Dual<Dual2>{{{1.0, 0.0}, {0.0, 0.0}}, {{0.0, 0.0}, {0.0, 0.0}}})
                   .d.d.d};
    Dual1 cm2 = cm2_of(taud, Dd, Dpd, inv.W0);
    Dual1 num = closed_total_num<Dual1>(taud, Dd, Dpd, Dppd, inv.K, inv.L, inv.W0, inv.E1, inv.P2, inv.E2);
    Dual1 kappa = num / (2.0 * cm2 * cm2);
    rep.tau.push_back(tau);
    rep.kappa.push_back(kappa.v);
    rep.dkappa.push_back(kappa.d);
    maxDp = std::max(maxDp, std::abs(Dpd.v));
    min_margin = std::min(min_margin, std::abs(kappa.d));
  }
  rep.min_abs_dkappa = min_margin;
  rep.degenerate = maxDp < 1e-12;
  rep.derivative_nonzero = !rep.degenerate && min_margin > 1e-10;
  return rep;
}

HopfCurvatureReport hopf_curvature_solv(const Profile& prof, int n_samples) {
  if (prof.kind() != Profile::Kind::Solvable) fail(ErrorKind::BadInput, "solvable profile expected");
  HopfCurvatureReport rep;
  double min_margin = 1e300;
  double maxDp = 0.0;
  int accepted = 0;
  for (int i = 0; accepted < n_samples && i < 50 * n_samples; ++i) {
    const double f1 = std::fmod(0.5 + i * 0.6180339887498949, 1.0);
    const double f2 = std::fmod(0.3 + i * 0.7548776662466927, 1.0);
    const double t = 0.4 + 2.2 * f2;
    // tau domain at this t
    double lo = 0.0, step = 1.0;
    if (prof.D(0.0, t) <= 1e-6) continue;
    for (int it = 0; it < 200 && prof.D(lo + step, t) > 1e-6; ++it) lo += step;
    double hi = lo + step;
    for (int it = 0; it < 80; ++it) {
      double mid = 0.5 * (lo + hi);
      (prof.D(mid, t) > 1e-6 ? lo : hi) = mid;
    }
    const double tau = lo * (0.05 + 0.9 * f1);
    const double Dv = prof.D(tau, t);
    if (Dv < 1e-6) continue;
    ++accepted;
    // gradient through duals in tau and in t separately
    auto eval_dir = [&](double dtau, double dt) {
      Dual1 taud{tau, dtau}, td{t, dt};
      Dual1 Dd = prof.eval(taud, td);
      Dual1 Dpd = prof.eval(Dual2{{tau, dtau}, {1.0, 0.0}}, Dual2{{t, dt}, {0.0, 0.0}}).d;
      Dual1 Dtd = prof.eval(Dual2{{tau, dtau}, {0.0, 0.0}}, Dual2{{t, dt}, {1.0, 0.0}}).d;
      auto d2 = [&](int a, int b) {
        // D_ab as a Dual1 carrying its (dtau, dt)-directional derivative
        Dual<Dual2> taa{{{tau, dtau}, {a == 0 ? 1.0 : 0.0, 0.0}}, {{b == 0 ? 1.0 : 0.0, 0.0}, {0.0, 0.0}}};
        Dual<Dual2> tbb{{{t, dt}, {a == 1 ? 1.0 : 0.0, 0.0}}, {{b == 1 ? 1.0 : 0.0, 0.0}, {0.0, 0.0}}};
        return prof.eval(taa, tbb).d.d;
      };
      Dual1 Dppd = d2(0, 0);
      Dual1 Dptd = d2(0, 1);
      Dual1 Dttd = d2(1, 1);
      Dual1 base = Dpd * Dpd * Dd * taud + 4.0 * Dpd * Dpd * td * taud + Dtd * Dtd * td + 4.0 * Dd;
      Dual1 num = closed_solv_num<Dual1>(taud, td, Dd, Dpd, Dtd, Dppd, Dptd, Dttd);
      return num / (2.0 * base * base);
    };
    Dual1 k_tau = eval_dir(1.0, 0.0);
    Dual1 k_t = eval_dir(0.0, 1.0);
    rep.tau.push_back(tau);
    rep.kappa.push_back(k_tau.v);
    const double grad = std::hypot(k_tau.d, k_t.d);
    rep.dkappa.push_back(grad);
    min_margin = std::min(min_margin, grad);
    maxDp = std::max(maxDp, std::abs(prof.D_tau(tau, t)));
  }
  rep.min_abs_dkappa = min_margin;
  rep.degenerate = maxDp < 1e-12;
  rep.derivative_nonzero = !rep.degenerate && min_margin > 1e-10;
  return rep;
}

}  // namespace isospec
