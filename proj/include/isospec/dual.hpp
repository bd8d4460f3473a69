#pragma once

#include <cmath>
#include <type_traits>

namespace isospec {

// Forward-mode dual number carrying one directional derivative. Nest as
// Dual<Dual<double>> for exact second directional derivatives. Used by the
// hypersurface oracles so no finite differences appear anywhere.
template <typename S>
struct Dual {
  S v{};  // value
  S d{};  // derivative

  Dual() = default;
  Dual(S value) : v(value), d(S(0)) {}  // NOLINT(google-explicit-constructor)
  Dual(S value, S deriv) : v(value), d(deriv) {}
  template <typename T = S, typename = std::enable_if_t<!std::is_same_v<T, double>>>
  Dual(double value) : v(value), d(S(0)) {}  // NOLINT(google-explicit-constructor)

  Dual operator-() const { return {-v, -d}; }
  Dual& operator+=(const Dual& o) {
    v += o.v;
    d += o.d;
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    d -= o.d;
    return *this;
  }
};

template <typename S>
Dual<S> operator+(Dual<S> a, const Dual<S>& b) {
  return {a.v + b.v, a.d + b.d};
}
template <typename S>
Dual<S> operator-(Dual<S> a, const Dual<S>& b) {
  return {a.v - b.v, a.d - b.d};
}
template <typename S>
Dual<S> operator*(const Dual<S>& a, const Dual<S>& b) {
  return {a.v * b.v, a.v * b.d + a.d * b.v};
}
template <typename S>
Dual<S> operator/(const Dual<S>& a, const Dual<S>& b) {
  S inv = S(1) / b.v;
  return {a.v * inv, (a.d * b.v - a.v * b.d) * inv * inv};
}

template <typename S>
Dual<S> operator+(double a, const Dual<S>& b) {
  return Dual<S>(S(a)) + b;
}
template <typename S>
Dual<S> operator-(double a, const Dual<S>& b) {
  return Dual<S>(S(a)) - b;
}
template <typename S>
Dual<S> operator*(double a, const Dual<S>& b) {
  return {S(a) * b.v, S(a) * b.d};
}
template <typename S>
Dual<S> operator+(const Dual<S>& a, double b) {
  return a + Dual<S>(S(b));
}
template <typename S>
Dual<S> operator-(const Dual<S>& a, double b) {
  return a - Dual<S>(S(b));
}
template <typename S>
Dual<S> operator*(const Dual<S>& a, double b) {
  return {a.v * S(b), a.d * S(b)};
}
template <typename S>
Dual<S> operator/(const Dual<S>& a, double b) {
  return {a.v / S(b), a.d / S(b)};
}
template <typename S>
Dual<S> operator/(double a, const Dual<S>& b) {
  return Dual<S>(S(a)) / b;
}

using std::exp;
using std::sqrt;

template <typename S>
Dual<S> sqrt(const Dual<S>& a) {
  S r = sqrt(a.v);
  return {r, a.d / (S(2) * r)};
}
template <typename S>
Dual<S> exp(const Dual<S>& a) {
  S e = exp(a.v);
  return {e, a.d * e};
}

inline double value_of(double x) { return x; }
template <typename S>
auto value_of(const Dual<S>& x) {
  return value_of(x.v);
}

using Dual1 = Dual<double>;
using Dual2 = Dual<Dual<double>>;

}  // namespace isospec
