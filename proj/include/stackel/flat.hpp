#pragma once

#include <string>

#include "stackel/killing.hpp"

namespace stackel {

/// One flat-coordinate function. Base kinds: a square-root jet coefficient at
/// a finite root mu (order = derivative order, 1/order! normalization) or the
/// series at infinity with its constant subtracted. Step-2 modifications and
/// the Step-3 warp scaling compose on top.
struct FlatDescriptor {
  enum class Base { FiniteRoot, Infinity };
  int vertex = 0;
  Base base = Base::FiniteRoot;
  CRat mu;            // finite root
  int order = 0;      // derivative order
  CRat subtract;      // series constant (Infinity kind)
  bool modified = false;             // Step 2: subtract b * Y^0 * sum phi(children)
  CRat mod_b;
  std::vector<int> phi_vertices;
  bool warp_scaled = false;          // Step 3: multiply by f_vertex^{-1/2}
};

/// Ordered chart plus its constant Gram matrix (exact) and the curvature.
struct FlatChart {
  std::vector<FlatDescriptor> fns;
  Rat K;
  Mat<CRat> gram;
};

/// Chart over real-valued functions: constant-linear combinations of a base
/// chart's functions, with the transformed Gram.
struct RealifiedChart {
  FlatChart base;
  Mat<CRat> transform;             // rows = new functions over base functions
  Mat<CRat> gram;                  // transform * G * transform^T
  std::vector<std::string> kinds;  // per function: real / imaginary-part / pair-re / pair-im / complex
};

// --- evaluation -------------------------------------------------------------

namespace series {

template <class T>
std::vector<T> mul(const std::vector<T>& a, const std::vector<T>& b, int len) {
  std::vector<T> out(len, zero_like(a[0]));
  for (int i = 0; i < static_cast<int>(a.size()) && i < len; ++i)
    for (int j = 0; j < static_cast<int>(b.size()) && i + j < len; ++j) out[i + j] += a[i] * b[j];
  return out;
}

/// Power-series square root, principal branch of the leading coefficient.
/// Throws std::domain_error when the leading value vanishes (caustic).
template <class T>
std::vector<T> sqrt(const std::vector<T>& a, int len) {
  using std::sqrt;
  if (value_is_zero(a[0])) throw std::domain_error("series sqrt at a branch point (caustic)");
  std::vector<T> s(len, zero_like(a[0]));
  s[0] = sqrt(a[0]);
  T two_s0 = s[0] + s[0];
  for (int k = 1; k < len; ++k) {
    T acc = k < static_cast<int>(a.size()) ? a[k] : zero_like(a[0]);
    for (int i = 1; i < k; ++i) acc -= s[i] * s[k - i];
    s[k] = acc / two_s0;
  }
  return s;
}

}  // namespace series

/// Taylor coefficients (length len) of sqrt(prod_s (t - x^s)) about t = mu.
template <class T>
std::vector<T> sqrt_char_series_at(const std::vector<T>& xs,
                                   const typename jet_scalar<T>::type& mu, int len) {
  std::vector<T> acc(1, one_like(xs[0]));
  for (const T& x : xs) {
    std::vector<T> lin = {mu - x, one_like(x)};
    acc = series::mul(acc, lin, len);
  }
  return series::sqrt(acc, len);
}

/// Taylor coefficients of sqrt(prod_s (1 - t x^s)) about t = 0.
template <class T>
std::vector<T> sqrt_char_series_inf(const std::vector<T>& xs, int len) {
  std::vector<T> acc(1, one_like(xs[0]));
  for (const T& x : xs) {
    std::vector<T> lin = {one_like(x), zero_like(x) - x};
    acc = series::mul(acc, lin, len);
  }
  return series::sqrt(acc, len);
}

/// Step-3 scale factor f_vertex^{-1/2}: per ancestor edge the principal square
/// root of det(lambda_s Id - L_{next(s)}).
template <class T>
T warp_scale_factor(const SpecContext& ctx, int vertex, const Blocks<T>& x) {
  using S = typename jet_scalar<T>::type;
  using std::sqrt;
  T out = one_like(x[vertex][0]);
  std::vector<int> chain = {vertex};
  for (int a : ctx.ord.ancestors[vertex]) chain.push_back(a);
  for (int s : chain) {
    if (ctx.ord.is_root(s)) continue;
    int par = ctx.ord.parent[s];
    S lam = scalar_traits<S>::from_crat(ctx.label[s]);
    T det = one_like(x[par][0]);
    for (const auto& xi : x[par]) det = det * (lam - xi);
    out = out * sqrt(det);
  }
  return out;
}

/// The auxiliary function phi of a flat block (eq. coefficient d+1 of the
/// series at infinity, offset by half the matching constant, over c).
template <class T>
T eval_phi(const SpecContext& ctx, int vertex, const Blocks<T>& x) {
  using S = typename jet_scalar<T>::type;
  const BlockSpec& b = ctx.blk[vertex];
  int d = b.dim - b.poly.degree();
  if (d < 0) throw std::invalid_argument("phi requires a flat block");
  Rat c = -b.poly.leading / 4;
  // R^{(d+1)} of prod (1 - t mu)^k
  Poly<CRat> R = poly_constant(CRat(1));
  for (const auto& [r, m] : b.poly.roots) {
    Poly<CRat> lin;
    lin.c = {CRat(1), -r};
    for (int i = 0; i < m; ++i) R = R * lin;
  }
  CRat half_R = R.coeff(d + 1) / CRat(2);
  auto ser = sqrt_char_series_inf(x[vertex], d + 2);
  T val = ser[d + 1] - scalar_traits<S>::from_crat(half_R);
  return val * reciprocal(zero_like(val) + scalar_traits<S>::from_rat(c));
}

template <class T>
T eval_flat_fn(const SpecContext& ctx, const FlatDescriptor& f, const Blocks<T>& x) {
  using S = typename jet_scalar<T>::type;
  T val = zero_like(x[f.vertex][0]);
  if (f.base == FlatDescriptor::Base::FiniteRoot) {
    S mu = scalar_traits<S>::from_crat(f.mu);
    auto ser = sqrt_char_series_at(x[f.vertex], mu, f.order + 1);
    val = ser[f.order];
    if (f.modified) {
      T y0 = f.order == 0 ? val : sqrt_char_series_at(x[f.vertex], mu, 1)[0];
      T phis = zero_like(val);
      for (int child : f.phi_vertices) phis += eval_phi(ctx, child, x);
      val = val - scalar_traits<S>::from_crat(f.mod_b) * y0 * phis;
    }
  } else {
    auto ser = sqrt_char_series_inf(x[f.vertex], f.order + 1);
    val = ser[f.order] - scalar_traits<S>::from_crat(f.subtract);
  }
  if (f.warp_scaled) val = val * warp_scale_factor(ctx, f.vertex, x);
  return val;
}

// --- construction and verification -------------------------------------------

/// Chart of a single block (Gram per the closed Hankel-triangular forms).
/// For the whole-spec chart, including multi-block Steps 1-3, use
/// multiblock_chart; on one-block specs the two coincide.
FlatChart single_block_chart(const SpecContext& ctx, int vertex);

/// Full chart of the metric: per-block charts with redundant coordinates
/// removed (curved children), coordinates modified (flat children), and the
/// warp scaling applied; Gram is the block diagonal of the reduced blocks.
FlatChart multiblock_chart(const SpecContext& ctx);

struct ChartVerification {
  double max_residual = 0.0;
  int rank = 0;
  int expected_rank = 0;
  int points_used = 0;
  int points_skipped = 0;  // caustic
  bool rank_ok() const { return rank == expected_rank; }
};

/// Max over points and index pairs of |g*(dY^i,dY^j) - (G^{ij} - K Y^i Y^j)|,
/// plus a rank check of the differentials (cone-lifted when K != 0).
ChartVerification verify_chart(const SpecContext& ctx, const FlatChart& chart,
                               const std::vector<RatPoint>& pts);

ChartVerification verify_realified(const SpecContext& ctx, const RealifiedChart& chart,
                                   const std::vector<RatPoint>& pts);

struct PhiReport {
  double max_dphi_dy = 0.0;  // |g*(dphi, dY) - Y|
  double max_dphi_dphi = 0.0;  // |g*(dphi, dphi) - 2 phi|
  int points_used = 0;
};

/// Verifies the phi contract against the unwarped one-block metric of `vertex`.
PhiReport phi_relations_check(const SpecContext& ctx, int vertex,
                              const std::vector<RatPoint>& pts);

/// Rewrites a chart over real functions where descriptors are real, purely
/// imaginary, or conjugate pairs (classified by sampling); anything else stays
/// complex with an annotation.
RealifiedChart realify(const SpecContext& ctx, const FlatChart& chart,
                       const std::vector<RatPoint>& sample_pts);

}  // namespace stackel
