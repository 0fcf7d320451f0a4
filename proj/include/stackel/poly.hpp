#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "stackel/rational.hpp"

namespace stackel {

/// Dense univariate polynomial, coefficients of ascending degree.
/// The zero polynomial has an empty coefficient list.
template <class S>
struct Poly {
  std::vector<S> c;

  Poly() = default;
  explicit Poly(std::vector<S> coeffs) : c(std::move(coeffs)) { trim(); }

  static Poly constant(const S& v) {
    Poly p;
    if (!scalar_traits<S>::is_zero(v)) p.c.push_back(v);
    return p;
  }

  void trim() {
    while (!c.empty() && scalar_traits<S>::is_zero(c.back())) c.pop_back();
  }

  bool is_zero() const { return c.empty(); }
  int degree() const { return static_cast<int>(c.size()) - 1; }

  S coeff(int k) const {
    if (k < 0 || k >= static_cast<int>(c.size())) return S();
    return c[k];
  }

  S leading() const { return c.empty() ? S() : c.back(); }

  Poly& operator+=(const Poly& o) {
    if (o.c.size() > c.size()) c.resize(o.c.size());
    for (size_t i = 0; i < o.c.size(); ++i) c[i] += o.c[i];
    trim();
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    if (o.c.size() > c.size()) c.resize(o.c.size());
    for (size_t i = 0; i < o.c.size(); ++i) c[i] -= o.c[i];
    trim();
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }

  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    Poly r;
    r.c.assign(a.c.size() + b.c.size() - 1, S());
    for (size_t i = 0; i < a.c.size(); ++i)
      for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
    r.trim();
    return r;
  }

  Poly scaled(const S& s) const {
    Poly r = *this;
    for (auto& v : r.c) v *= s;
    r.trim();
    return r;
  }

  Poly derivative() const {
    Poly r;
    for (size_t k = 1; k < c.size(); ++k) r.c.push_back(c[k] * S(static_cast<long>(k)));
    r.trim();
    return r;
  }

  /// Horner evaluation over any algebra T admitting T*T and T += coefficient.
  template <class T>
  T eval(const T& t) const {
    T acc = t - t;  // zero of the same shape as t
    for (int k = degree(); k >= 0; --k) acc = acc * t + c[k];
    return acc;
  }

  /// Synthetic division by (t - a); returns quotient, sets rem to the value at a.
  Poly divide_linear(const S& a, S* rem = nullptr) const {
    Poly q;
    if (is_zero()) {
      if (rem) *rem = S();
      return q;
    }
    q.c.assign(c.size() > 1 ? c.size() - 1 : 0, S());
    S carry = c.back();
    for (int k = degree() - 1; k >= 0; --k) {
      q.c[k] = carry;
      carry = c[k] + a * carry;
    }
    if (rem) *rem = carry;
    q.trim();
    return q;
  }

  /// Taylor coefficient (1/k!) d^k p / dt^k at a, computed exactly.
  S taylor_coeff(const S& a, int k) const {
    Poly p = *this;
    S out = S();
    for (int i = 0; i <= k; ++i) {
      S rem;
      p = p.divide_linear(a, &rem);
      if (i == k) out = rem;
    }
    return out;
  }

  friend bool operator==(const Poly& a, const Poly& b) { return a.c == b.c; }
};

template <class S>
Poly<S> poly_constant(const S& v) {
  return Poly<S>::constant(v);
}

inline Poly<CDbl> poly_cast(const Poly<CRat>& p) {
  Poly<CDbl> r;
  r.c.reserve(p.c.size());
  for (const auto& v : p.c) r.c.push_back(to_cdbl(v));
  return r;
}

/// Monic polynomial with the given values as roots.
template <class S>
Poly<S> char_poly(const std::vector<S>& xs) {
  Poly<S> p;
  p.c = {S(1)};
  for (const auto& x : xs) {
    Poly<S> lin;
    lin.c = {-x, S(1)};
    p = p * lin;
  }
  return p;
}

/// Polynomial in factored form: leading coefficient times
/// prod (t - root)^multiplicity.  Roots are exact rationals or complex
/// rational pairs; the expanded coefficient list is derived.
struct FactoredPoly {
  Rat leading;
  std::vector<std::pair<CRat, int>> roots;

  int degree() const {
    int d = 0;
    for (const auto& [r, m] : roots) d += m;
    return d;
  }

  Poly<CRat> expand() const {
    Poly<CRat> p = Poly<CRat>::constant(CRat(leading));
    for (const auto& [r, m] : roots) {
      Poly<CRat> lin;
      lin.c = {-r, CRat(1)};
      for (int i = 0; i < m; ++i) p = p * lin;
    }
    return p;
  }

  int multiplicity_of(const CRat& v) const {
    for (const auto& [r, m] : roots)
      if (r == v) return m;
    return 0;
  }

  /// Coefficient of t^k in the expansion (0 beyond the degree).
  CRat coeff_at(int k) const { return expand().coeff(k); }

  friend bool operator==(const FactoredPoly& a, const FactoredPoly& b) {
    if (a.leading != b.leading) return false;
    auto key = [](const std::pair<CRat, int>& p) {
      return std::make_tuple(p.first.re, p.first.im, p.second);
    };
    auto ra = a.roots, rb = b.roots;
    auto cmp = [&](const auto& x, const auto& y) { return key(x) < key(y); };
    std::sort(ra.begin(), ra.end(), cmp);
    std::sort(rb.begin(), rb.end(), cmp);
    return ra == rb;
  }
};

inline FactoredPoly fpoly(const Rat& leading, std::vector<std::pair<CRat, int>> roots) {
  return FactoredPoly{leading, std::move(roots)};
}

}  // namespace stackel
