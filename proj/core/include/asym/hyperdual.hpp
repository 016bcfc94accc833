#pragma once

// Forward-mode automatic differentiation.
//
// HyperDual carries a value together with its exact gradient and Hessian with
// respect to up to kMaxDim independent variables. Dual<T> carries one extra
// directional derivative and nests over HyperDual, which is how third-order
// quantities (the 2-jet of a divergence) are obtained without finite
// differences.

#include <array>
#include <cmath>
#include <utility>

#include "asym/tensor.hpp"

namespace asym {

class HyperDual {
 public:
  HyperDual() = default;
  HyperDual(double v) : val_(v) {}  // NOLINT: constants convert implicitly

  // The independent variable with the given index among `dim` variables.
  static HyperDual variable(double v, int index, int dim) {
    HyperDual h(v);
    h.dim_ = dim;
    h.d_[index] = 1.0;
    return h;
  }

  // A number with prescribed derivatives, e.g. a component of a MetricJet.
  static HyperDual from_jet(double v, const Vec& grad, const Mat& hess, int dim) {
    HyperDual h(v);
    h.dim_ = dim;
    h.d_ = grad;
    h.dd_ = hess;
    return h;
  }

  double value() const { return val_; }
  double d(int i) const { return d_[i]; }
  double dd(int i, int j) const { return dd_[i][j]; }
  int dim() const { return dim_; }
  const Vec& gradient() const { return d_; }
  const Mat& hessian() const { return dd_; }

  bool is_constant() const {
    for (int i = 0; i < dim_; ++i)
      if (d_[i] != 0.0) return false;
    return true;
  }

  // Composition f(*this) given f, f' and f'' at the current value.
  HyperDual chain(double f0, double f1, double f2) const {
    HyperDual r;
    r.val_ = f0;
    r.dim_ = dim_;
    for (int i = 0; i < dim_; ++i) {
      r.d_[i] = f1 * d_[i];
      for (int j = 0; j < dim_; ++j) r.dd_[i][j] = f1 * dd_[i][j] + f2 * d_[i] * d_[j];
    }
    return r;
  }

  HyperDual operator-() const { return chain(-val_, -1.0, 0.0); }

  HyperDual& operator+=(const HyperDual& o) {
    val_ += o.val_;
    dim_ = dim_ > o.dim_ ? dim_ : o.dim_;
    for (int i = 0; i < dim_; ++i) {
      d_[i] += o.d_[i];
      for (int j = 0; j < dim_; ++j) dd_[i][j] += o.dd_[i][j];
    }
    return *this;
  }
  HyperDual& operator-=(const HyperDual& o) { return *this += -o; }

  friend HyperDual operator+(HyperDual a, const HyperDual& b) { return a += b; }
  friend HyperDual operator-(HyperDual a, const HyperDual& b) { return a -= b; }

  friend HyperDual operator*(const HyperDual& a, const HyperDual& b) {
    HyperDual r;
    r.val_ = a.val_ * b.val_;
    r.dim_ = a.dim_ > b.dim_ ? a.dim_ : b.dim_;
    for (int i = 0; i < r.dim_; ++i) {
      r.d_[i] = a.d_[i] * b.val_ + a.val_ * b.d_[i];
      for (int j = 0; j < r.dim_; ++j)
        r.dd_[i][j] = a.dd_[i][j] * b.val_ + a.val_ * b.dd_[i][j] +
                      a.d_[i] * b.d_[j] + b.d_[i] * a.d_[j];
    }
    return r;
  }

  friend HyperDual reciprocal(const HyperDual& b) {
    const double inv = 1.0 / b.val_;
    return b.chain(inv, -inv * inv, 2.0 * inv * inv * inv);
  }

  friend HyperDual operator/(const HyperDual& a, const HyperDual& b) {
    if (b.is_constant()) return a * HyperDual(1.0 / b.val_);
    return a * reciprocal(b);
  }

  HyperDual& operator*=(const HyperDual& o) { return *this = *this * o; }
  HyperDual& operator/=(const HyperDual& o) { return *this = *this / o; }

 private:
  double val_ = 0.0;
  int dim_ = 0;
  Vec d_{};
  Mat dd_{};
};

inline double primal(double x) { return x; }
inline double primal(const HyperDual& x) { return x.value(); }

inline HyperDual sqrt(const HyperDual& x) {
  const double s = std::sqrt(x.value());
  return x.chain(s, 0.5 / s, -0.25 / (s * x.value()));
}
inline HyperDual exp(const HyperDual& x) {
  const double e = std::exp(x.value());
  return x.chain(e, e, e);
}
inline HyperDual expm1(const HyperDual& x) {
  const double e = std::exp(x.value());
  return x.chain(std::expm1(x.value()), e, e);
}
inline HyperDual log(const HyperDual& x) {
  const double v = x.value();
  return x.chain(std::log(v), 1.0 / v, -1.0 / (v * v));
}
inline HyperDual log1p(const HyperDual& x) {
  const double v = 1.0 + x.value();
  return x.chain(std::log1p(x.value()), 1.0 / v, -1.0 / (v * v));
}
inline HyperDual sin(const HyperDual& x) {
  const double s = std::sin(x.value()), c = std::cos(x.value());
  return x.chain(s, c, -s);
}
inline HyperDual cos(const HyperDual& x) {
  const double s = std::sin(x.value()), c = std::cos(x.value());
  return x.chain(c, -s, -c);
}
inline HyperDual tan(const HyperDual& x) {
  const double t = std::tan(x.value());
  const double sec2 = 1.0 + t * t;
  return x.chain(t, sec2, 2.0 * t * sec2);
}
inline HyperDual sinh(const HyperDual& x) {
  const double s = std::sinh(x.value()), c = std::cosh(x.value());
  return x.chain(s, c, s);
}
inline HyperDual cosh(const HyperDual& x) {
  const double s = std::sinh(x.value()), c = std::cosh(x.value());
  return x.chain(c, s, c);
}
inline HyperDual tanh(const HyperDual& x) {
  const double t = std::tanh(x.value());
  const double sech2 = 1.0 - t * t;
  return x.chain(t, sech2, -2.0 * t * sech2);
}
inline HyperDual asinh(const HyperDual& x) {
  const double v = x.value();
  const double q = 1.0 + v * v;
  const double s = std::sqrt(q);
  return x.chain(std::asinh(v), 1.0 / s, -v / (q * s));
}
inline HyperDual acos(const HyperDual& x) {
  const double v = x.value();
  const double q = 1.0 - v * v;
  const double s = std::sqrt(q);
  return x.chain(std::acos(v), -1.0 / s, -v / (q * s));
}

// Integer powers keep negative bases valid; the general case goes through
// exp(b log a).
inline HyperDual pow(const HyperDual& a, double b) {
  const double v = a.value();
  if (b == 0.0) return HyperDual(1.0);
  if (b == std::round(b)) {
    const double f0 = std::pow(v, b);
    const double f1 = b * std::pow(v, b - 1.0);
    const double f2 = b * (b - 1.0) * (b == 1.0 ? 1.0 : std::pow(v, b - 2.0));
    return a.chain(f0, f1, f2);
  }
  const double f0 = std::pow(v, b);
  return a.chain(f0, b * f0 / v, b * (b - 1.0) * f0 / (v * v));
}
inline HyperDual pow(const HyperDual& a, const HyperDual& b) {
  if (b.is_constant()) return pow(a, b.value());
  return exp(b * log(a));
}

// Value plus one directional derivative; T is double or HyperDual.
template <typename T>
struct Dual {
  T v{};
  T d{};

  Dual() = default;
  Dual(double c) : v(c), d(0.0) {}  // NOLINT
  Dual(T value, T deriv) : v(std::move(value)), d(std::move(deriv)) {}

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
  Dual& operator*=(const Dual& o) { return *this = *this * o; }
  Dual& operator/=(const Dual& o) { return *this = *this / o; }

  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend Dual operator*(const Dual& a, const Dual& b) {
    return {a.v * b.v, a.d * b.v + a.v * b.d};
  }
  friend Dual operator/(const Dual& a, const Dual& b) {
    T inv = T(1.0) / b.v;
    return {a.v * inv, (a.d - a.v * inv * b.d) * inv};
  }
  friend Dual operator+(const Dual& a, double b) { return a + Dual(b); }
  friend Dual operator+(double a, const Dual& b) { return Dual(a) + b; }
  friend Dual operator-(const Dual& a, double b) { return a - Dual(b); }
  friend Dual operator-(double a, const Dual& b) { return Dual(a) - b; }
  friend Dual operator*(const Dual& a, double b) { return {a.v * T(b), a.d * T(b)}; }
  friend Dual operator*(double a, const Dual& b) { return {T(a) * b.v, T(a) * b.d}; }
  friend Dual operator/(const Dual& a, double b) { return a * (1.0 / b); }
  friend Dual operator/(double a, const Dual& b) { return Dual(a) / b; }
};

template <typename T>
double primal(const Dual<T>& x) {
  return primal(x.v);
}

namespace detail {
// Unqualified calls resolve to std:: for double and to the asym overloads
// above for HyperDual.
using std::acos;
using std::asinh;
using std::cos;
using std::cosh;
using std::exp;
using std::expm1;
using std::log;
using std::log1p;
using std::pow;
using std::sin;
using std::sinh;
using std::sqrt;
using std::tan;
using std::tanh;

template <typename T>
T do_sqrt(const T& x) { return sqrt(x); }
template <typename T>
T do_exp(const T& x) { return exp(x); }
template <typename T>
T do_expm1(const T& x) { return expm1(x); }
template <typename T>
T do_log(const T& x) { return log(x); }
template <typename T>
T do_log1p(const T& x) { return log1p(x); }
template <typename T>
T do_sin(const T& x) { return sin(x); }
template <typename T>
T do_cos(const T& x) { return cos(x); }
template <typename T>
T do_tan(const T& x) { return tan(x); }
template <typename T>
T do_sinh(const T& x) { return sinh(x); }
template <typename T>
T do_cosh(const T& x) { return cosh(x); }
template <typename T>
T do_tanh(const T& x) { return tanh(x); }
template <typename T>
T do_asinh(const T& x) { return asinh(x); }
template <typename T>
T do_acos(const T& x) { return acos(x); }
template <typename T>
T do_pow(const T& x, double b) { return pow(x, b); }
}  // namespace detail

template <typename T>
Dual<T> sqrt(const Dual<T>& x) {
  T s = detail::do_sqrt(x.v);
  return {s, x.d / (T(2.0) * s)};
}
template <typename T>
Dual<T> exp(const Dual<T>& x) {
  T e = detail::do_exp(x.v);
  return {e, e * x.d};
}
template <typename T>
Dual<T> expm1(const Dual<T>& x) {
  return {detail::do_expm1(x.v), detail::do_exp(x.v) * x.d};
}
template <typename T>
Dual<T> log(const Dual<T>& x) {
  return {detail::do_log(x.v), x.d / x.v};
}
template <typename T>
Dual<T> log1p(const Dual<T>& x) {
  return {detail::do_log1p(x.v), x.d / (T(1.0) + x.v)};
}
template <typename T>
Dual<T> sin(const Dual<T>& x) {
  return {detail::do_sin(x.v), detail::do_cos(x.v) * x.d};
}
template <typename T>
Dual<T> cos(const Dual<T>& x) {
  return {detail::do_cos(x.v), -(detail::do_sin(x.v) * x.d)};
}
template <typename T>
Dual<T> tan(const Dual<T>& x) {
  T t = detail::do_tan(x.v);
  return {t, (T(1.0) + t * t) * x.d};
}
template <typename T>
Dual<T> sinh(const Dual<T>& x) {
  return {detail::do_sinh(x.v), detail::do_cosh(x.v) * x.d};
}
template <typename T>
Dual<T> cosh(const Dual<T>& x) {
  return {detail::do_cosh(x.v), detail::do_sinh(x.v) * x.d};
}
template <typename T>
Dual<T> tanh(const Dual<T>& x) {
  T t = detail::do_tanh(x.v);
  return {t, (T(1.0) - t * t) * x.d};
}
template <typename T>
Dual<T> asinh(const Dual<T>& x) {
  return {detail::do_asinh(x.v), x.d / detail::do_sqrt(T(1.0) + x.v * x.v)};
}
template <typename T>
Dual<T> acos(const Dual<T>& x) {
  return {detail::do_acos(x.v), -(x.d / detail::do_sqrt(T(1.0) - x.v * x.v))};
}
template <typename T>
Dual<T> pow(const Dual<T>& x, double b) {
  if (b == 0.0) return Dual<T>(1.0);
  return {detail::do_pow(x.v, b), T(b) * detail::do_pow(x.v, b - 1.0) * x.d};
}
template <typename T>
Dual<T> pow(const Dual<T>& a, const Dual<T>& b) {
  return exp(b * log(a));
}

// Generic entry points for templated geometry code: `using namespace
// asym::math;` is not needed, call asym::math::sqrt(x) for any scalar type.
namespace math {
template <typename S>
S sqrt(const S& x) { return detail::do_sqrt(x); }
template <typename S>
S exp(const S& x) { return detail::do_exp(x); }
template <typename S>
S expm1(const S& x) { return detail::do_expm1(x); }
template <typename S>
S log(const S& x) { return detail::do_log(x); }
template <typename S>
S log1p(const S& x) { return detail::do_log1p(x); }
template <typename S>
S sin(const S& x) { return detail::do_sin(x); }
template <typename S>
S cos(const S& x) { return detail::do_cos(x); }
template <typename S>
S tan(const S& x) { return detail::do_tan(x); }
template <typename S>
S sinh(const S& x) { return detail::do_sinh(x); }
template <typename S>
S cosh(const S& x) { return detail::do_cosh(x); }
template <typename S>
S tanh(const S& x) { return detail::do_tanh(x); }
template <typename S>
S asinh(const S& x) { return detail::do_asinh(x); }
template <typename S>
S acos(const S& x) { return detail::do_acos(x); }
template <typename S>
S pow(const S& x, double b) { return detail::do_pow(x, b); }
}  // namespace math

}  // namespace asym
