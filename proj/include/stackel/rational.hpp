#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace stackel {

/// Exact rational scalar. Always kept in canonical form.
using Rat = mpq_class;

/// Complex double scalar (the float tag).
using CDbl = std::complex<double>;

inline Rat rat(long num, long den = 1) {
  Rat q(num, den);
  q.canonicalize();
  return q;
}

/// Parses "p", "p/q" or a decimal-free integer string. Throws on malformed input.
inline Rat rat_from_string(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  try {
    Rat q(s);
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("malformed rational literal: " + s);
  }
}

inline std::string rat_to_string(const Rat& q) { return q.get_str(); }

inline double rat_to_double(const Rat& q) { return q.get_d(); }

inline int rat_sign(const Rat& q) { return sgn(q); }

/// Exact k-th root of a rational if one exists. Even k requires q >= 0 and
/// returns the nonnegative root.
inline std::optional<Rat> rat_kth_root(const Rat& q, int k) {
  if (k <= 0) throw std::invalid_argument("kth root needs k >= 1");
  if (k == 1) return q;
  if (q == 0) return rat(0);
  if (sgn(q) < 0 && k % 2 == 0) return std::nullopt;
  mpz_class num = abs(q.get_num());
  mpz_class den = q.get_den();
  mpz_class rn, rd;
  bool exact_n = mpz_root(rn.get_mpz_t(), num.get_mpz_t(), k) != 0;
  bool exact_d = mpz_root(rd.get_mpz_t(), den.get_mpz_t(), k) != 0;
  if (!exact_n || !exact_d) return std::nullopt;
  Rat r(rn, rd);
  r.canonicalize();
  if (sgn(q) < 0) r = -r;
  return r;
}

/// Complex rational: an ordered pair of exact rationals with field arithmetic.
struct CRat {
  Rat re, im;

  CRat() : re(0), im(0) {}
  CRat(const Rat& r) : re(r), im(0) {}
  CRat(long r) : re(rat(r)), im(0) {}
  CRat(const Rat& r, const Rat& i) : re(r), im(i) {}

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }
  CRat conj() const { return CRat(re, Rat(-im)); }
  Rat norm2() const { return re * re + im * im; }

  CRat operator-() const { return CRat(Rat(-re), Rat(-im)); }
  CRat& operator+=(const CRat& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  CRat& operator-=(const CRat& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  CRat& operator*=(const CRat& o) {
    Rat r = re * o.re - im * o.im;
    Rat i = re * o.im + im * o.re;
    re = r;
    im = i;
    return *this;
  }
  CRat& operator/=(const CRat& o) {
    Rat n2 = o.norm2();
    if (n2 == 0) throw std::domain_error("division by zero CRat");
    Rat r = (re * o.re + im * o.im) / n2;
    Rat i = (im * o.re - re * o.im) / n2;
    re = r;
    im = i;
    return *this;
  }

  friend CRat operator+(CRat a, const CRat& b) { return a += b; }
  friend CRat operator-(CRat a, const CRat& b) { return a -= b; }
  friend CRat operator*(CRat a, const CRat& b) { return a *= b; }
  friend CRat operator/(CRat a, const CRat& b) { return a /= b; }
  friend bool operator==(const CRat& a, const CRat& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const CRat& a, const CRat& b) { return !(a == b); }
};

inline CDbl to_cdbl(const CRat& c) { return CDbl(rat_to_double(c.re), rat_to_double(c.im)); }

inline std::string crat_to_string(const CRat& c) {
  if (c.im == 0) return rat_to_string(c.re);
  return rat_to_string(c.re) + (sgn(c.im) >= 0 ? "+" : "") + rat_to_string(c.im) + "i";
}

/// Scalar-tag traits. Exact arithmetic never silently degrades: each pipeline
/// is instantiated for one tag and all values stay within it.
template <class S>
struct scalar_traits;

template <>
struct scalar_traits<CRat> {
  static constexpr bool exact = true;
  static CRat from_crat(const CRat& c) { return c; }
  static CRat from_rat(const Rat& r) { return CRat(r); }
  static bool is_zero(const CRat& c) { return c.is_zero(); }
  static double magnitude(const CRat& c) { return std::abs(to_cdbl(c)); }
};

template <>
struct scalar_traits<CDbl> {
  static constexpr bool exact = false;
  static CDbl from_crat(const CRat& c) { return to_cdbl(c); }
  static CDbl from_rat(const Rat& r) { return CDbl(rat_to_double(r), 0.0); }
  static bool is_zero(const CDbl& c) { return c == CDbl(0.0, 0.0); }
  static double magnitude(const CDbl& c) { return std::abs(c); }
};

}  // namespace stackel
