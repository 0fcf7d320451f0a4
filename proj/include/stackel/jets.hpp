#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "stackel/rational.hpp"

namespace stackel {

/// Packed index into the upper triangle of a symmetric n x n array, i <= j.
inline size_t sym_idx(int i, int j) {
  if (i > j) std::swap(i, j);
  return static_cast<size_t>(i) + static_cast<size_t>(j) * (j + 1) / 2;
}

inline size_t sym_size(int n) { return static_cast<size_t>(n) * (n + 1) / 2; }

/// First-order jet: value plus gradient over n seed directions.
template <class S>
struct Jet1 {
  S v;
  std::vector<S> g;

  Jet1() = default;
  Jet1(S value, int n) : v(std::move(value)), g(n, S()) {}

  int dim() const { return static_cast<int>(g.size()); }

  static Jet1 constant(const S& value, int n) { return Jet1(value, n); }
  static Jet1 variable(const S& value, int i, int n) {
    Jet1 j(value, n);
    j.g[i] = S(1);
    return j;
  }

  Jet1 operator-() const {
    Jet1 r = *this;
    r.v = -r.v;
    for (auto& x : r.g) x = -x;
    return r;
  }

  Jet1& operator+=(const Jet1& o) {
    v += o.v;
    for (int i = 0; i < dim(); ++i) g[i] += o.g[i];
    return *this;
  }
  Jet1& operator-=(const Jet1& o) {
    v -= o.v;
    for (int i = 0; i < dim(); ++i) g[i] -= o.g[i];
    return *this;
  }
  friend Jet1 operator+(Jet1 a, const Jet1& b) { return a += b; }
  friend Jet1 operator-(Jet1 a, const Jet1& b) { return a -= b; }

  friend Jet1 operator*(const Jet1& a, const Jet1& b) {
    Jet1 r(a.v * b.v, a.dim());
    for (int i = 0; i < a.dim(); ++i) r.g[i] = a.g[i] * b.v + a.v * b.g[i];
    return r;
  }

  Jet1 recip() const {
    if (scalar_traits<S>::is_zero(v)) throw std::domain_error("jet division by zero value");
    S inv = S(1) / v;
    S inv2 = inv * inv;
    Jet1 r(inv, dim());
    for (int i = 0; i < dim(); ++i) r.g[i] = -g[i] * inv2;
    return r;
  }
  friend Jet1 operator/(const Jet1& a, const Jet1& b) { return a * b.recip(); }

  // mixed scalar ops
  friend Jet1 operator+(Jet1 a, const S& s) {
    a.v += s;
    return a;
  }
  friend Jet1 operator+(const S& s, Jet1 a) {
    a.v += s;
    return a;
  }
  friend Jet1 operator-(Jet1 a, const S& s) {
    a.v -= s;
    return a;
  }
  friend Jet1 operator-(const S& s, const Jet1& a) { return (-a) + s; }
  friend Jet1 operator*(Jet1 a, const S& s) {
    a.v *= s;
    for (auto& x : a.g) x *= s;
    return a;
  }
  friend Jet1 operator*(const S& s, Jet1 a) { return a * s; }
  friend Jet1 operator/(Jet1 a, const S& s) {
    S inv = S(1) / s;
    return a * inv;
  }
};

/// Second-order jet: value, gradient and symmetric Hessian over n directions.
/// Arithmetic is exact second-order Taylor propagation.
template <class S>
struct Jet2 {
  S v;
  std::vector<S> g;
  std::vector<S> h;  // packed upper triangle

  Jet2() = default;
  Jet2(S value, int n) : v(std::move(value)), g(n, S()), h(sym_size(n), S()) {}

  int dim() const { return static_cast<int>(g.size()); }

  static Jet2 constant(const S& value, int n) { return Jet2(value, n); }
  static Jet2 variable(const S& value, int i, int n) {
    Jet2 j(value, n);
    j.g[i] = S(1);
    return j;
  }

  const S& hess(int i, int j) const { return h[sym_idx(i, j)]; }

  Jet2 operator-() const {
    Jet2 r = *this;
    r.v = -r.v;
    for (auto& x : r.g) x = -x;
    for (auto& x : r.h) x = -x;
    return r;
  }

  Jet2& operator+=(const Jet2& o) {
    v += o.v;
    for (size_t i = 0; i < g.size(); ++i) g[i] += o.g[i];
    for (size_t i = 0; i < h.size(); ++i) h[i] += o.h[i];
    return *this;
  }
  Jet2& operator-=(const Jet2& o) {
    v -= o.v;
    for (size_t i = 0; i < g.size(); ++i) g[i] -= o.g[i];
    for (size_t i = 0; i < h.size(); ++i) h[i] -= o.h[i];
    return *this;
  }
  friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
  friend Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }

  friend Jet2 operator*(const Jet2& a, const Jet2& b) {
    int n = a.dim();
    Jet2 r(a.v * b.v, n);
    for (int i = 0; i < n; ++i) r.g[i] = a.g[i] * b.v + a.v * b.g[i];
    for (int j = 0; j < n; ++j)
      for (int i = 0; i <= j; ++i)
        r.h[sym_idx(i, j)] = a.hess(i, j) * b.v + a.g[i] * b.g[j] + a.g[j] * b.g[i] + a.v * b.hess(i, j);
    return r;
  }

  Jet2 recip() const {
    if (scalar_traits<S>::is_zero(v)) throw std::domain_error("jet division by zero value");
    int n = dim();
    S inv = S(1) / v;
    S inv2 = inv * inv;
    S inv3 = inv2 * inv;
    Jet2 r(inv, n);
    for (int i = 0; i < n; ++i) r.g[i] = -g[i] * inv2;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i <= j; ++i)
        r.h[sym_idx(i, j)] = S(2) * g[i] * g[j] * inv3 - hess(i, j) * inv2;
    return r;
  }
  friend Jet2 operator/(const Jet2& a, const Jet2& b) { return a * b.recip(); }

  // mixed scalar ops
  friend Jet2 operator+(Jet2 a, const S& s) {
    a.v += s;
    return a;
  }
  friend Jet2 operator+(const S& s, Jet2 a) {
    a.v += s;
    return a;
  }
  friend Jet2 operator-(Jet2 a, const S& s) {
    a.v -= s;
    return a;
  }
  friend Jet2 operator-(const S& s, const Jet2& a) { return (-a) + s; }
  friend Jet2 operator*(Jet2 a, const S& s) {
    a.v *= s;
    for (auto& x : a.g) x *= s;
    for (auto& x : a.h) x *= s;
    return a;
  }
  friend Jet2 operator*(const S& s, Jet2 a) { return a * s; }
  friend Jet2 operator/(Jet2 a, const S& s) {
    S inv = S(1) / s;
    return a * inv;
  }
};

/// Square root of a second-order jet (float tag only; principal branch).
inline Jet2<CDbl> sqrt(const Jet2<CDbl>& a) {
  int n = a.dim();
  CDbl s = std::sqrt(a.v);
  if (s == CDbl(0.0, 0.0)) throw std::domain_error("jet sqrt at branch point");
  Jet2<CDbl> r(s, n);
  CDbl half_inv = CDbl(0.5) / s;
  for (int i = 0; i < n; ++i) r.g[i] = a.g[i] * half_inv;
  CDbl q = CDbl(0.25) / (s * a.v);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i <= j; ++i) r.h[sym_idx(i, j)] = a.hess(i, j) * half_inv - a.g[i] * a.g[j] * q;
  return r;
}

inline Jet1<CDbl> sqrt(const Jet1<CDbl>& a) {
  int n = a.dim();
  CDbl s = std::sqrt(a.v);
  if (s == CDbl(0.0, 0.0)) throw std::domain_error("jet sqrt at branch point");
  Jet1<CDbl> r(s, n);
  CDbl half_inv = CDbl(0.5) / s;
  for (int i = 0; i < n; ++i) r.g[i] = a.g[i] * half_inv;
  return r;
}

/// Complex log of a second-order jet (float tag only; principal branch).
inline Jet2<CDbl> log(const Jet2<CDbl>& a) {
  int n = a.dim();
  if (a.v == CDbl(0.0, 0.0)) throw std::domain_error("jet log of zero");
  Jet2<CDbl> r(std::log(a.v), n);
  CDbl inv = CDbl(1.0) / a.v;
  CDbl inv2 = inv * inv;
  for (int i = 0; i < n; ++i) r.g[i] = a.g[i] * inv;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i <= j; ++i) r.h[sym_idx(i, j)] = a.hess(i, j) * inv - a.g[i] * a.g[j] * inv2;
  return r;
}

// Shape-aware algebra helpers: plain scalars and jets share generic code paths.
template <class T>
struct jet_scalar {
  using type = T;
};
template <class S>
struct jet_scalar<Jet1<S>> {
  using type = S;
};
template <class S>
struct jet_scalar<Jet2<S>> {
  using type = S;
};

template <class T>
T zero_like(const T& v) {
  return v - v;
}

template <class T>
T one_like(const T& v) {
  return v - v + typename jet_scalar<T>::type(1);
}

template <class T>
T reciprocal(const T& v) {
  return typename jet_scalar<T>::type(1) / v;
}
template <class S>
Jet1<S> reciprocal(const Jet1<S>& v) {
  return v.recip();
}
template <class S>
Jet2<S> reciprocal(const Jet2<S>& v) {
  return v.recip();
}

template <class T>
bool value_is_zero(const T& v) {
  return scalar_traits<T>::is_zero(v);
}
template <class S>
bool value_is_zero(const Jet1<S>& v) {
  return scalar_traits<S>::is_zero(v.v);
}
template <class S>
bool value_is_zero(const Jet2<S>& v) {
  return scalar_traits<S>::is_zero(v.v);
}

template <class T>
double value_magnitude(const T& v) {
  return scalar_traits<T>::magnitude(v);
}
template <class S>
double value_magnitude(const Jet1<S>& v) {
  return scalar_traits<S>::magnitude(v.v);
}
template <class S>
double value_magnitude(const Jet2<S>& v) {
  return scalar_traits<S>::magnitude(v.v);
}

/// Coordinate jets for a flat list of coordinate values.
template <class S>
std::vector<Jet2<S>> seed2(const std::vector<S>& x) {
  int n = static_cast<int>(x.size());
  std::vector<Jet2<S>> out;
  out.reserve(x.size());
  for (int i = 0; i < n; ++i) out.push_back(Jet2<S>::variable(x[i], i, n));
  return out;
}

template <class S>
std::vector<Jet1<S>> seed1(const std::vector<S>& x) {
  int n = static_cast<int>(x.size());
  std::vector<Jet1<S>> out;
  out.reserve(x.size());
  for (int i = 0; i < n; ++i) out.push_back(Jet1<S>::variable(x[i], i, n));
  return out;
}

/// Value+gradient view of a second-order jet.
template <class S>
Jet1<S> j1(const Jet2<S>& f) {
  Jet1<S> r(f.v, f.dim());
  r.g = f.g;
  return r;
}

/// First-order jet of the j-th partial derivative of f (gradient = Hessian row).
template <class S>
Jet1<S> d_of(const Jet2<S>& f, int j) {
  int n = f.dim();
  Jet1<S> r(f.g[j], n);
  for (int i = 0; i < n; ++i) r.g[i] = f.hess(i, j);
  return r;
}

}  // namespace stackel
