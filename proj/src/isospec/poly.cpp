#include "isospec/poly.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "isospec/errors.hpp"

namespace isospec {

GradedPoly GradedPoly::constant(int nvars, Cplx c) {
  GradedPoly p(nvars);
  if (std::abs(c) > 0) p.terms_[MultiIndex::zero(nvars)] = c;
  return p;
}

GradedPoly GradedPoly::monomial(const MultiIndex& m, Cplx c) {
  GradedPoly p(m.nvars);
  if (std::abs(c) > 0) p.terms_[m] = c;
  return p;
}

GradedPoly GradedPoly::linear(const CVec& q) {
  GradedPoly p(static_cast<int>(q.size()));
  for (int i = 0; i < q.size(); ++i)
    if (std::abs(q[i]) > 0) p.terms_[MultiIndex::zero(p.nvars_).with_exp(i, 1)] = q[i];
  return p;
}

int GradedPoly::degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
  return d;
}

bool GradedPoly::is_homogeneous(int* deg) const {
  int d = -1;
  for (const auto& [m, c] : terms_) {
    if (d < 0)
      d = m.degree();
    else if (m.degree() != d)
      return false;
  }
  if (deg) *deg = d;
  return true;
}

GradedPoly GradedPoly::homogeneous_part(int deg) const {
  GradedPoly out(nvars_);
  for (const auto& [m, c] : terms_)
    if (m.degree() == deg) out.terms_[m] = c;
  return out;
}

GradedPoly& GradedPoly::operator+=(const GradedPoly& o) {
  for (const auto& [m, c] : o.terms_) terms_[m] += c;
  normalize();
  return *this;
}

GradedPoly& GradedPoly::operator-=(const GradedPoly& o) {
  for (const auto& [m, c] : o.terms_) terms_[m] -= c;
  normalize();
  return *this;
}

GradedPoly GradedPoly::operator+(const GradedPoly& o) const {
  GradedPoly out = *this;
  out += o;
  return out;
}

GradedPoly GradedPoly::operator-(const GradedPoly& o) const {
  GradedPoly out = *this;
  out -= o;
  return out;
}

GradedPoly GradedPoly::operator*(const GradedPoly& o) const {
  GradedPoly out(nvars_);
  for (const auto& [m1, c1] : terms_)
    for (const auto& [m2, c2] : o.terms_) out.terms_[m1 + m2] += c1 * c2;
  out.normalize();
  return out;
}

GradedPoly GradedPoly::operator*(Cplx s) const {
  GradedPoly out(nvars_);
  if (std::abs(s) == 0) return out;
  for (const auto& [m, c] : terms_) out.terms_[m] = c * s;
  return out;
}

GradedPoly GradedPoly::conj() const {
  GradedPoly out(nvars_);
  for (const auto& [m, c] : terms_) out.terms_[m] = std::conj(c);
  return out;
}

GradedPoly GradedPoly::derivative(int var) const {
  GradedPoly out(nvars_);
  for (const auto& [m, c] : terms_) {
    const int e = m.exp(var);
    if (e > 0) out.terms_[m.with_exp(var, e - 1)] += double(e) * c;
  }
  out.normalize();
  return out;
}

GradedPoly GradedPoly::laplacian() const {
  GradedPoly out(nvars_);
  for (const auto& [m, c] : terms_)
    for (int i = 0; i < nvars_; ++i) {
      const int e = m.exp(i);
      if (e >= 2) out.terms_[m.with_exp(i, e - 2)] += double(e) * double(e - 1) * c;
    }
  out.normalize();
  return out;
}

GradedPoly GradedPoly::directional(const Mat& field) const {
  // (D_F p)(X) = <grad p, F X> = sum_{i,j} F_ij x_j d_i p
  GradedPoly out(nvars_);
  for (const auto& [m, c] : terms_)
    for (int i = 0; i < nvars_; ++i) {
      const int e = m.exp(i);
      if (e == 0) continue;
      for (int j = 0; j < nvars_; ++j) {
        const double f = field(i, j);
        if (f == 0.0) continue;
        MultiIndex mm = m.with_exp(i, e - 1);
        mm = mm.with_exp(j, mm.exp(j) + 1);
        out.terms_[mm] += double(e) * f * c;
      }
    }
  out.normalize();
  return out;
}

GradedPoly GradedPoly::mul_r2() const {
  GradedPoly out(nvars_);
  for (const auto& [m, c] : terms_)
    for (int i = 0; i < nvars_; ++i) out.terms_[m.with_exp(i, m.exp(i) + 2)] += c;
  out.normalize();
  return out;
}

bool GradedPoly::div_r2(GradedPoly& quotient) const {
  // synthetic division by x_1^2 + ... + x_k^2 using the largest remaining
  // monomial; exact when the remainder vanishes
  GradedPoly rem = *this;
  GradedPoly q(nvars_);
  const double scale = std::max(1e-300, max_abs_coeff());
  while (!rem.terms_.empty()) {
    auto it = std::prev(rem.terms_.end());
    MultiIndex m = it->first;
    Cplx c = it->second;
    int var = -1;
    for (int i = nvars_ - 1; i >= 0; --i)
      if (m.exp(i) >= 2) {
        var = i;
        break;
      }
    if (var < 0) return false;
    MultiIndex qm = m.with_exp(var, m.exp(var) - 2);
    q.terms_[qm] += c;
    for (int i = 0; i < nvars_; ++i) rem.terms_[qm.with_exp(i, qm.exp(i) + 2)] -= c;
    (void)scale;
    rem.normalize(1e-13);
  }
  q.normalize();
  quotient = q;
  return true;
}

Cplx GradedPoly::eval(const CVec& x) const {
  Cplx acc = 0;
  for (const auto& [m, c] : terms_) {
    Cplx term = c;
    for (int i = 0; i < nvars_; ++i)
      for (int e = 0; e < m.exp(i); ++e) term *= x[i];
    acc += term;
  }
  return acc;
}

void GradedPoly::normalize(double tol) {
  double top = 0;
  for (const auto& [m, c] : terms_) top = std::max(top, std::abs(c));
  const double cut = tol * std::max(top, 1.0);
  for (auto it = terms_.begin(); it != terms_.end();)
    if (std::abs(it->second) <= cut)
      it = terms_.erase(it);
    else
      ++it;
}

void GradedPoly::set_term(const MultiIndex& m, Cplx c) {
  if (std::abs(c) == 0)
    terms_.erase(m);
  else
    terms_[m] = c;
}

Cplx GradedPoly::coeff(const MultiIndex& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Cplx(0) : it->second;
}

double GradedPoly::max_abs_coeff() const {
  double top = 0;
  for (const auto& [m, c] : terms_) top = std::max(top, std::abs(c));
  return top;
}

std::string GradedPoly::to_string() const {
  std::ostringstream os;
  os.precision(12);
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.real() << (c.imag() >= 0 ? "+" : "") << c.imag() << "i)";
    for (int i = 0; i < nvars_; ++i)
      if (m.exp(i) > 0) os << "*x" << i << "^" << m.exp(i);
  }
  if (first) os << "0";
  return os.str();
}

std::vector<MultiIndex> monomials_of_degree(int nvars, int degree) {
  std::vector<MultiIndex> out;
  std::vector<int> exps(nvars, 0);
  std::function<void(int, int)> rec = [&](int pos, int remaining) {
    if (pos == nvars - 1) {
      exps[pos] = remaining;
      MultiIndex m = MultiIndex::zero(nvars);
      for (int i = 0; i < nvars; ++i) m = m.with_exp(i, exps[i]);
      out.push_back(m);
      exps[pos] = 0;
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      exps[pos] = e;
      rec(pos + 1, remaining - e);
    }
    exps[pos] = 0;
  };
  rec(0, degree);
  return out;
}

double sphere_moment(const MultiIndex& m) {
  const int k = m.nvars;
  int total = 0;
  double num = 1.0;
  for (int i = 0; i < k; ++i) {
    const int e = m.exp(i);
    if (e % 2 != 0) return 0.0;
    total += e;
    for (int f = e - 1; f >= 1; f -= 2) num *= double(f);  // (e-1)!!
  }
  double den = 1.0;
  for (int j = 0; j < total / 2; ++j) den *= double(k + 2 * j);
  return num / den;
}

Cplx sphere_inner(const GradedPoly& f, const GradedPoly& g) {
  // group g's terms by parity mask so only moment-compatible pairs meet
  std::map<std::uint64_t, std::vector<std::pair<MultiIndex, Cplx>>> by_parity;
  for (const auto& [m, c] : g.terms()) by_parity[m.parity_mask()].push_back({m, std::conj(c)});
  Cplx acc = 0;
  for (const auto& [m, c] : f.terms()) {
    auto it = by_parity.find(m.parity_mask());
    if (it == by_parity.end()) continue;
    for (const auto& [m2, c2] : it->second) acc += c * c2 * sphere_moment(m + m2);
  }
  return acc;
}

double sphere_volume(int k) {
  // 2 pi^{k/2} / Gamma(k/2)
  return 2.0 * std::pow(M_PI, 0.5 * k) / std::tgamma(0.5 * k);
}

}  // namespace isospec
