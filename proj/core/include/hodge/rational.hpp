#pragma once

// Exact scalar fields: arbitrary-precision rationals, Gaussian rationals
// Q(i), and double-precision complex floats.  All exact arithmetic in the
// library bottoms out here.

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "hodge/error.hpp"

namespace hodge {

// Rationals are GMP rationals kept in canonical form: reduced, positive
// denominator.  All arithmetic on canonical values stays canonical; the
// constructors below canonicalize explicitly.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
  if (den == 0) throw InvalidInput("rational with zero denominator");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

Rat rat_from_decimal(std::string_view text);  // "1.25" -> 5/4

inline bool is_integer(const Rat& q) { return q.get_den() == 1; }
inline bool is_zero(const Rat& q) { return sgn(q) == 0; }

// Exact square root when one exists in Q.
std::optional<Rat> exact_sqrt(const Rat& q);

// Text form "p/q" with the sign on the numerator; "/q" omitted when q == 1.
std::string to_string(const Rat& q);
std::optional<Rat> parse_rat(std::string_view text);

double to_double(const Rat& q);

// ---------------------------------------------------------------------------
// Gaussian rationals a + b*i with a, b in Q.  Conjugation is the field
// involution; division is exact.
struct Gauss {
  Rat re, im;

  Gauss() : re(0), im(0) {}
  Gauss(Rat r) : re(std::move(r)), im(0) {}         // NOLINT(hicpp-explicit)
  Gauss(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}
  Gauss(long r) : re(r), im(0) {}                   // NOLINT(hicpp-explicit)

  static Gauss i() { return Gauss(Rat(0), Rat(1)); }

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  bool is_real() const { return sgn(im) == 0; }

  friend Gauss operator+(const Gauss& a, const Gauss& b) {
    return Gauss(a.re + b.re, a.im + b.im);
  }
  friend Gauss operator-(const Gauss& a, const Gauss& b) {
    return Gauss(a.re - b.re, a.im - b.im);
  }
  friend Gauss operator-(const Gauss& a) { return Gauss(-a.re, -a.im); }
  friend Gauss operator*(const Gauss& a, const Gauss& b) {
    return Gauss(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
  }
  friend Gauss operator/(const Gauss& a, const Gauss& b) {
    if (b.is_zero()) throw InvalidInput("division by zero Gaussian rational");
    Rat n = b.re * b.re + b.im * b.im;
    return Gauss((a.re * b.re + a.im * b.im) / n,
                 (a.im * b.re - a.re * b.im) / n);
  }
  Gauss& operator+=(const Gauss& b) { re += b.re; im += b.im; return *this; }
  Gauss& operator-=(const Gauss& b) { re -= b.re; im -= b.im; return *this; }
  Gauss& operator*=(const Gauss& b) { *this = *this * b; return *this; }

  friend bool operator==(const Gauss& a, const Gauss& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const Gauss& a, const Gauss& b) { return !(a == b); }
};

inline Gauss conj(const Gauss& a) { return Gauss(a.re, -a.im); }
inline bool is_zero(const Gauss& a) { return a.is_zero(); }

// Squared modulus a*conj(a), a nonnegative rational.
inline Rat norm(const Gauss& a) { return a.re * a.re + a.im * a.im; }

// Text form "p/q+r/s*i"; either part may be omitted, "i" alone means 1*i.
std::string to_string(const Gauss& a);
std::optional<Gauss> parse_gauss(std::string_view text);

// ---------------------------------------------------------------------------
// Complex floats.
using CD = std::complex<double>;

inline CD to_complex(const Rat& q) { return CD(to_double(q), 0.0); }
inline CD to_complex(const Gauss& a) {
  return CD(to_double(a.re), to_double(a.im));
}

// Default relative tolerance for float comparisons, overridable globally
// (the CLI's --tol flag) and per call where a tolerance parameter exists.
double default_tolerance();
void set_default_tolerance(double tol);

std::string to_string(CD z);  // 17 significant digits per component

}  // namespace hodge
