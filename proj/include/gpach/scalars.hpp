#pragma once

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace gpach {

struct Tolerance {
  double zero = 1e-10;      // zero test for float decisions
  double residual = 1e-8;   // relative residual of integral identities
};

// Complex number with exact rational real and imaginary parts.
struct ExactScalar {
  mpq_class re, im;

  ExactScalar() : re(0), im(0) {}
  ExactScalar(int n) : re(n), im(0) {}
  ExactScalar(long n) : re(n), im(0) {}
  ExactScalar(const mpq_class& r) : re(r), im(0) {}
  ExactScalar(const mpq_class& r, const mpq_class& i) : re(r), im(i) {}

  static ExactScalar unit_i() { return ExactScalar(mpq_class(0), mpq_class(1)); }

  bool is_zero() const { return re == 0 && im == 0; }
  ExactScalar operator-() const { return ExactScalar(-re, -im); }

  ExactScalar& operator+=(const ExactScalar& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  ExactScalar& operator-=(const ExactScalar& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  ExactScalar& operator*=(const ExactScalar& o) {
    mpq_class r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = r;
    return *this;
  }
  ExactScalar& operator/=(const ExactScalar& o);

  double abs_approx() const {
    double x = re.get_d(), y = im.get_d();
    return std::hypot(x, y);
  }
  std::string str() const;
};

inline ExactScalar operator+(ExactScalar a, const ExactScalar& b) { return a += b; }
inline ExactScalar operator-(ExactScalar a, const ExactScalar& b) { return a -= b; }
inline ExactScalar operator*(ExactScalar a, const ExactScalar& b) { return a *= b; }
inline ExactScalar operator/(ExactScalar a, const ExactScalar& b) { return a /= b; }
inline bool operator==(const ExactScalar& a, const ExactScalar& b) { return a.re == b.re && a.im == b.im; }
inline bool operator!=(const ExactScalar& a, const ExactScalar& b) { return !(a == b); }
inline ExactScalar conj(const ExactScalar& a) { return ExactScalar(a.re, -a.im); }

// Complex double backend for the trigonometric parameter family.
struct FloatScalar {
  std::complex<double> v;

  FloatScalar() : v(0.0) {}
  FloatScalar(int n) : v(double(n)) {}
  FloatScalar(long n) : v(double(n)) {}
  FloatScalar(double x) : v(x) {}
  FloatScalar(std::complex<double> z) : v(z) {}

  static FloatScalar unit_i() { return FloatScalar(std::complex<double>(0.0, 1.0)); }

  bool is_zero() const { return v.real() == 0.0 && v.imag() == 0.0; }
  FloatScalar operator-() const { return FloatScalar(-v); }

  FloatScalar& operator+=(const FloatScalar& o) {
    v += o.v;
    return *this;
  }
  FloatScalar& operator-=(const FloatScalar& o) {
    v -= o.v;
    return *this;
  }
  FloatScalar& operator*=(const FloatScalar& o) {
    v *= o.v;
    return *this;
  }
  FloatScalar& operator/=(const FloatScalar& o) {
    v /= o.v;
    return *this;
  }

  double abs_approx() const { return std::abs(v); }
  std::string str() const;
};

inline FloatScalar operator+(FloatScalar a, const FloatScalar& b) { return a += b; }
inline FloatScalar operator-(FloatScalar a, const FloatScalar& b) { return a -= b; }
inline FloatScalar operator*(FloatScalar a, const FloatScalar& b) { return a *= b; }
inline FloatScalar operator/(FloatScalar a, const FloatScalar& b) { return a /= b; }
inline bool operator==(const FloatScalar& a, const FloatScalar& b) { return a.v == b.v; }
inline bool operator!=(const FloatScalar& a, const FloatScalar& b) { return !(a == b); }
inline FloatScalar conj(const FloatScalar& a) { return FloatScalar(std::conj(a.v)); }

template <class S>
inline constexpr bool is_exact_v = std::is_same_v<S, ExactScalar>;

// Zero decision: structural for the exact backend, |x| < tol for floats.
template <class S>
bool near_zero(const S& x, const Tolerance& tol) {
  if constexpr (is_exact_v<S>)
    return x.is_zero();
  else
    return x.abs_approx() < tol.zero;
}

inline FloatScalar to_float(const ExactScalar& x) {
  return FloatScalar(std::complex<double>(x.re.get_d(), x.im.get_d()));
}

// sqrt in Q(i) when it exists; float backend always succeeds.
std::optional<ExactScalar> scalar_sqrt(const ExactScalar& x);
inline std::optional<FloatScalar> scalar_sqrt(const FloatScalar& x) {
  return FloatScalar(std::sqrt(x.v));
}

// (cos, sin) pair; c^2 + s^2 = 1.
template <class S>
struct CirclePoint {
  S c, s;
};

// Rational point on the unit circle: ((1-t^2)/(1+t^2), 2t/(1+t^2)).
CirclePoint<ExactScalar> exact_circle_point(const mpq_class& t);

template <class S>
CirclePoint<S> circle_point(const mpq_class& t) {
  CirclePoint<ExactScalar> e = exact_circle_point(t);
  if constexpr (is_exact_v<S>)
    return e;
  else
    return CirclePoint<FloatScalar>{to_float(e.c), to_float(e.s)};
}

// Reads "p", "p/q", with optional sign; nullopt on malformed input or zero denominator.
std::optional<mpq_class> parse_rational(const std::string& text);

}  // namespace gpach
