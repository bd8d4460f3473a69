#include "isospec/profile.hpp"

namespace isospec {

Profile Profile::polynomial(Kind kind, std::vector<std::vector<double>> coeffs) {
  Profile p;
  p.kind_ = kind;
  p.form_ = Form::Poly;
  p.coeffs_ = std::move(coeffs);
  if (kind == Kind::Nilpotent)
    for (const auto& row : p.coeffs_)
      if (row.size() > 1) fail(ErrorKind::BadInput, "nilpotent profile must not depend on t");
  return p;
}

Profile Profile::euclidean_sphere(double radius) {
  return polynomial(Kind::Nilpotent, {{radius * radius}, {-1.0}});
}

Profile Profile::geodesic_sphere(double s) {
  if (s <= 0) fail(ErrorKind::BadInput, "radius must be positive");
  Profile p;
  p.kind_ = Kind::Solvable;
  p.form_ = Form::GeodesicSphere;
  p.s_ = s;
  return p;
}

}  // namespace isospec
