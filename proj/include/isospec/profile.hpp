#pragma once

#include <cmath>
#include <vector>

#include "isospec/dual.hpp"
#include "isospec/errors.hpp"

namespace isospec {

// Radius-squared profile of a sphere-type hypersurface: |X|^2 = D(tau[, t])
// with tau = |Z|^2. Supported forms: bivariate polynomial in (tau, t) and the
// geodesic-sphere closed form 4 ((e^s + e^-s + 2) t - tau)^{1/2} - 4 (t + 1).
// All derivatives come from dual-number evaluation of the defining formula.
class Profile {
 public:
  enum class Kind { Nilpotent, Solvable };
  enum class Form { Poly, GeodesicSphere };

  // coeffs[i][j] multiplies tau^i t^j; nilpotent profiles must not use t.
  static Profile polynomial(Kind kind, std::vector<std::vector<double>> coeffs);
  // D(tau) = R^2 - tau, the Euclidean-sphere profile.
  static Profile euclidean_sphere(double radius);
  static Profile geodesic_sphere(double s);

  Kind kind() const { return kind_; }
  Form form() const { return form_; }
  double geodesic_radius() const { return s_; }

  template <typename S>
  S eval(const S& tau, const S& t) const {
    if (form_ == Form::GeodesicSphere) {
      const double ch = std::exp(s_) + std::exp(-s_) + 2.0;
      return 4.0 * sqrt(ch * t - tau) - 4.0 * (t + 1.0);
    }
    S acc = S(0);
    for (size_t i = coeffs_.size(); i-- > 0;) {
      S row = S(0);
      for (size_t j = coeffs_[i].size(); j-- > 0;) row = row * t + coeffs_[i][j];
      acc = acc * tau + row;
    }
    return acc;
  }

  double D(double tau, double t = 1.0) const { return eval(tau, t); }
  double D_tau(double tau, double t = 1.0) const { return eval(Dual1{tau, 1.0}, Dual1{t, 0.0}).d; }
  double D_t(double tau, double t = 1.0) const { return eval(Dual1{tau, 0.0}, Dual1{t, 1.0}).d; }
  double D_tautau(double tau, double t = 1.0) const {
    return eval(Dual2{{tau, 1.0}, {1.0, 0.0}}, Dual2{{t, 0.0}, {0.0, 0.0}}).d.d;
  }
  double D_taut(double tau, double t = 1.0) const {
    return eval(Dual2{{tau, 1.0}, {0.0, 0.0}}, Dual2{{t, 0.0}, {1.0, 0.0}}).d.d;
  }
  double D_tt(double tau, double t = 1.0) const {
    return eval(Dual2{{tau, 0.0}, {0.0, 0.0}}, Dual2{{t, 1.0}, {1.0, 0.0}}).d.d;
  }

 private:
  Kind kind_ = Kind::Nilpotent;
  Form form_ = Form::Poly;
  std::vector<std::vector<double>> coeffs_;
  double s_ = 0.0;
};

}  // namespace isospec
