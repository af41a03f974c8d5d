#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace spinlab {

// Exact rational number. mpq_class keeps values canonical (gcd-reduced,
// positive denominator), so equality is plain comparison.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rat: zero denominator");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

inline double to_double(const Rat& q) { return q.get_d(); }

inline std::string to_string(const Rat& q) { return q.get_str(); }

// Accepts "3", "-1/4" and decimal literals like "0.25" (parsed exactly).
inline Rat parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("parse_rational: empty string");
  auto dot = text.find('.');
  if (dot == std::string::npos) {
    Rat q;
    if (q.set_str(text, 10) != 0)
      throw std::invalid_argument("parse_rational: bad literal '" + text + "'");
    q.canonicalize();
    return q;
  }
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  std::size_t frac_len = text.size() - dot - 1;
  if (frac_len == 0) throw std::invalid_argument("parse_rational: bad literal '" + text + "'");
  mpz_class num;
  if (num.set_str(digits, 10) != 0)
    throw std::invalid_argument("parse_rational: bad literal '" + text + "'");
  mpz_class den = 1;
  for (std::size_t k = 0; k < frac_len; ++k) den *= 10;
  Rat q(num, den);
  q.canonicalize();
  return q;
}

// ---------------------------------------------------------------------------
// Scalar backends. Every algebraic object in the library is templated on one
// of these. The exact backend is a Gaussian rational (complex number with
// rational real and imaginary parts); it is closed under +,-,*,/ and compares
// to zero exactly. The float backend is std::complex<double>; identity checks
// against it take an explicit tolerance.
// ---------------------------------------------------------------------------

struct ExactScalar {
  using Real = Rat;
  static constexpr bool is_exact = true;

  Rat re, im;

  ExactScalar() : re(0), im(0) {}
  ExactScalar(long v) : re(v), im(0) {}
  explicit ExactScalar(Rat r) : re(std::move(r)), im(0) {}
  ExactScalar(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}

  static ExactScalar zero() { return ExactScalar(); }
  static ExactScalar one() { return ExactScalar(1); }
  static ExactScalar imag_unit() { return ExactScalar(Rat(0), Rat(1)); }
  static ExactScalar from_real(const Real& r) { return ExactScalar(r); }
  static ExactScalar from_ratio(long num, long den) { return ExactScalar(rat(num, den)); }

  static Real real_zero() { return Rat(0); }
  static Real real_from_rat(const Rat& q) { return q; }

  ExactScalar operator-() const { return {-re, -im}; }
  ExactScalar operator+(const ExactScalar& o) const { return {re + o.re, im + o.im}; }
  ExactScalar operator-(const ExactScalar& o) const { return {re - o.re, im - o.im}; }
  ExactScalar operator*(const ExactScalar& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  ExactScalar operator/(const ExactScalar& o) const {
    Rat d = o.re * o.re + o.im * o.im;
    if (d == 0) throw std::domain_error("ExactScalar: division by zero");
    return {(re * o.re + im * o.im) / d, (im * o.re - re * o.im) / d};
  }
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
  ExactScalar& operator*=(const ExactScalar& o) { return *this = *this * o; }

  bool operator==(const ExactScalar& o) const { return re == o.re && im == o.im; }
  bool operator!=(const ExactScalar& o) const { return !(*this == o); }

  bool is_zero() const { return re == 0 && im == 0; }
  ExactScalar conj() const { return {re, -im}; }
  Real re_part() const { return re; }

  // Magnitude for reporting. Exactly zero maps to 0.0; anything nonzero is
  // clamped away from 0.0 so a tiny exact residual can never read as a pass.
  double abs_approx() const {
    if (is_zero()) return 0.0;
    double a = std::abs(to_double(re)) + std::abs(to_double(im));
    return a > 1e-300 ? a : 1e-300;
  }
  std::complex<double> to_complex() const { return {to_double(re), to_double(im)}; }
  std::string str() const {
    if (im == 0) return to_string(re);
    return to_string(re) + (im > 0 ? "+" : "") + to_string(im) + "i";
  }
};

struct FloatScalar {
  using Real = double;
  static constexpr bool is_exact = false;

  std::complex<double> v;

  FloatScalar() : v(0.0) {}
  FloatScalar(long x) : v(double(x)) {}
  explicit FloatScalar(std::complex<double> z) : v(z) {}
  explicit FloatScalar(double x) : v(x) {}

  static FloatScalar zero() { return FloatScalar(); }
  static FloatScalar one() { return FloatScalar(1.0); }
  static FloatScalar imag_unit() { return FloatScalar(std::complex<double>(0.0, 1.0)); }
  static FloatScalar from_real(double r) { return FloatScalar(r); }
  static FloatScalar from_ratio(long num, long den) { return FloatScalar(double(num) / double(den)); }

  static Real real_zero() { return 0.0; }
  static Real real_from_rat(const Rat& q) { return to_double(q); }

  FloatScalar operator-() const { return FloatScalar(-v); }
  FloatScalar operator+(const FloatScalar& o) const { return FloatScalar(v + o.v); }
  FloatScalar operator-(const FloatScalar& o) const { return FloatScalar(v - o.v); }
  FloatScalar operator*(const FloatScalar& o) const { return FloatScalar(v * o.v); }
  FloatScalar operator/(const FloatScalar& o) const { return FloatScalar(v / o.v); }
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

  bool operator==(const FloatScalar& o) const { return v == o.v; }
  bool operator!=(const FloatScalar& o) const { return v != o.v; }

  bool is_zero() const { return v == 0.0; }
  FloatScalar conj() const { return FloatScalar(std::conj(v)); }
  Real re_part() const { return v.real(); }
  double abs_approx() const { return std::abs(v); }
  std::complex<double> to_complex() const { return v; }
  std::string str() const {
    return std::to_string(v.real()) + (v.imag() >= 0 ? "+" : "") + std::to_string(v.imag()) + "i";
  }
};

template <class S>
S scalar_from_rat(const Rat& q) {
  return S::from_real(S::real_from_rat(q));
}

template <class S>
typename S::Real real_of(long num, long den = 1) {
  return S::real_from_rat(rat(num, den));
}

// Default comparison tolerance of the float backend. The exact backend always
// compares against literal zero.
inline constexpr double kDefaultTolerance = 1e-10;

template <class S>
constexpr double backend_zero_tolerance(double float_tol = kDefaultTolerance) {
  return S::is_exact ? 0.0 : float_tol;
}

}  // namespace spinlab
