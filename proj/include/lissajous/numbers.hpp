#pragma once

#include <complex>
#include <ostream>
#include <sstream>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace lissajous {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Numbers re + i*im over an exact ring (Z[i] or Q[i]).
template <class T>
struct Gaussian {
  T re{0};
  T im{0};

  Gaussian() = default;
  Gaussian(T r) : re(std::move(r)), im(0) {}  // NOLINT(google-explicit-constructor)
  Gaussian(T r, T i) : re(std::move(r)), im(std::move(i)) {}
  Gaussian(int r) : re(r), im(0) {}  // NOLINT(google-explicit-constructor)

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }
  Gaussian conj() const { return {re, -im}; }
  T norm() const { return re * re + im * im; }

  Gaussian& operator+=(const Gaussian& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Gaussian& operator-=(const Gaussian& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Gaussian& operator*=(const Gaussian& o) {
    T r = re * o.re - im * o.im;
    T i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }

  friend Gaussian operator+(Gaussian a, const Gaussian& b) { return a += b; }
  friend Gaussian operator-(Gaussian a, const Gaussian& b) { return a -= b; }
  friend Gaussian operator*(Gaussian a, const Gaussian& b) { return a *= b; }
  friend Gaussian operator-(const Gaussian& a) { return {-a.re, -a.im}; }
  friend bool operator==(const Gaussian& a, const Gaussian& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const Gaussian& a, const Gaussian& b) { return !(a == b); }
};

using GaussInt = Gaussian<BigInt>;
using GaussRat = Gaussian<Rational>;

inline GaussRat operator/(const GaussRat& a, const GaussRat& b) {
  Rational n = b.norm();
  GaussRat p = a * b.conj();
  return {p.re / n, p.im / n};
}
inline GaussRat& operator/=(GaussRat& a, const GaussRat& b) { return a = a / b; }

/// Division that is known to be exact in the ring (Bareiss steps, content removal).
inline BigInt exact_div(const BigInt& a, const BigInt& b) { return a / b; }
inline Rational exact_div(const Rational& a, const Rational& b) { return a / b; }
inline GaussRat exact_div(const GaussRat& a, const GaussRat& b) { return a / b; }
inline GaussInt exact_div(const GaussInt& a, const GaussInt& b) {
  BigInt n = b.norm();
  GaussInt p = a * b.conj();
  return {p.re / n, p.im / n};
}

inline bool is_zero(const BigInt& x) { return x == 0; }
inline bool is_zero(const Rational& x) { return x == 0; }
template <class T>
bool is_zero(const Gaussian<T>& x) {
  return x.is_zero();
}

inline GaussRat to_rational(const GaussInt& z) { return {Rational(z.re), Rational(z.im)}; }

inline std::complex<double> to_complex(const GaussRat& z) {
  return {static_cast<double>(z.re), static_cast<double>(z.im)};
}
inline std::complex<double> to_complex(const GaussInt& z) {
  return {static_cast<double>(z.re), static_cast<double>(z.im)};
}

/// i^k for integer k, the value of exp(-i*b*pi/2) is unit_power(-b).
inline GaussInt unit_power(long long k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

inline std::string to_string(const BigInt& x) { return x.str(); }
inline std::string to_string(const Rational& x) {
  std::ostringstream os;
  os << x;
  return os.str();
}
inline std::string to_string(const GaussRat& z) {
  if (z.im == 0) return to_string(z.re);
  std::string im = to_string(boost::multiprecision::abs(z.im));
  std::string sign = z.im < 0 ? "-" : "+";
  if (z.re == 0) return (z.im < 0 ? "-" : "") + im + "i";
  return to_string(z.re) + sign + im + "i";
}

template <class T>
std::ostream& operator<<(std::ostream& os, const Gaussian<T>& z) {
  return os << to_string(GaussRat{Rational(z.re), Rational(z.im)});
}

inline BigInt ipow(const BigInt& base, unsigned e) { return boost::multiprecision::pow(base, e); }

}  // namespace lissajous
