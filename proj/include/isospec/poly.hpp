#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "isospec/dual.hpp"
#include "isospec/linalg.hpp"

namespace isospec {

// Exponent multi-index over up to 16 variables, packed 4 bits per variable.
// Total degree <= 15 per variable is far beyond anything used here.
struct MultiIndex {
  std::uint64_t bits = 0;
  int nvars = 0;

  static MultiIndex zero(int nvars) { return {0, nvars}; }
  int exp(int i) const { return static_cast<int>((bits >> (4 * i)) & 0xFULL); }
  MultiIndex with_exp(int i, int e) const {
    MultiIndex m = *this;
    m.bits = (bits & ~(0xFULL << (4 * i))) | (std::uint64_t(e) << (4 * i));
    return m;
  }
  int degree() const {
    int d = 0;
    for (int i = 0; i < nvars; ++i) d += exp(i);
    return d;
  }
  MultiIndex operator+(const MultiIndex& o) const { return {bits + o.bits, nvars}; }
  bool operator<(const MultiIndex& o) const { return bits < o.bits; }
  bool operator==(const MultiIndex& o) const { return bits == o.bits; }
  std::uint64_t parity_mask() const {
    std::uint64_t m = 0;
    for (int i = 0; i < nvars; ++i) m |= std::uint64_t(exp(i) & 1) << i;
    return m;
  }
};

// Sparse complex-coefficient polynomial on R^k. Coefficients below 1e-14 of
// the largest are pruned on normalization.
class GradedPoly {
 public:
  using Terms = std::map<MultiIndex, Cplx>;

  GradedPoly() = default;
  explicit GradedPoly(int nvars) : nvars_(nvars) {}
  static GradedPoly constant(int nvars, Cplx c);
  static GradedPoly monomial(const MultiIndex& m, Cplx c);
  // degree-1 polynomial <q, X> with complex coefficient vector q
  static GradedPoly linear(const CVec& q);

  int nvars() const { return nvars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;
  bool is_homogeneous(int* deg = nullptr) const;
  GradedPoly homogeneous_part(int deg) const;

  GradedPoly& operator+=(const GradedPoly& o);
  GradedPoly& operator-=(const GradedPoly& o);
  GradedPoly operator+(const GradedPoly& o) const;
  GradedPoly operator-(const GradedPoly& o) const;
  GradedPoly operator*(const GradedPoly& o) const;
  GradedPoly operator*(Cplx s) const;
  GradedPoly conj() const;

  GradedPoly derivative(int var) const;
  GradedPoly laplacian() const;
  // directional derivative along the linear vector field X -> F(X)
  GradedPoly directional(const Mat& field) const;
  GradedPoly mul_r2() const;  // multiply by |X|^2
  // exact division by |X|^2; fails (returns false) when not divisible
  bool div_r2(GradedPoly& quotient) const;

  Cplx eval(const CVec& x) const;
  // evaluation with real scalar type (double or Dual); coefficients must be
  // real within 1e-12 or the imaginary part is carried separately by caller
  template <typename S>
  S eval_real(const std::vector<S>& x) const {
    S acc = S(0);
    for (const auto& [m, c] : terms_) {
      S term = S(c.real());
      for (int i = 0; i < nvars_; ++i)
        for (int e = 0; e < m.exp(i); ++e) term = term * x[i];
      acc += term;
    }
    return acc;
  }

  void normalize(double tol = 1e-14);
  void set_term(const MultiIndex& m, Cplx c);
  Cplx coeff(const MultiIndex& m) const;
  double max_abs_coeff() const;
  std::string to_string() const;

 private:
  int nvars_ = 0;
  Terms terms_;
};

// All monomial multi-indices of the given total degree, lexicographic.
std::vector<MultiIndex> monomials_of_degree(int nvars, int degree);

// Normalized sphere moment: integral over S^{k-1} of x^m divided by the
// sphere volume. Zero unless every exponent is even; otherwise
// prod (m_i - 1)!! / prod_{j=0}^{|m|/2-1} (k + 2j).
double sphere_moment(const MultiIndex& m);

// L2(S^{k-1}) inner product <f, g> = integral f conj(g) w.r.t. the
// normalized measure; exact via monomial moments.
Cplx sphere_inner(const GradedPoly& f, const GradedPoly& g);

// Surface volume of the unit sphere S^{k-1}.
double sphere_volume(int k);

}  // namespace isospec
