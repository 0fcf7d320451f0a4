#pragma once

#include <stdexcept>

#include "stackel/forest.hpp"
#include "stackel/jets.hpp"

namespace stackel {

/// Coordinate values partitioned into blocks (block order = positions).
template <class T>
using Blocks = std::vector<std::vector<T>>;

using RatPoint = Blocks<CRat>;

struct SingularPointError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Validated spec plus cached derived data used by every evaluation pipeline.
struct SpecContext {
  ForestSpec spec;
  OrderInfo ord;
  std::vector<BlockSpec> blk;     // re-sorted by position
  std::vector<Poly<CRat>> pexp;   // expanded block polynomials
  std::vector<Poly<CDbl>> pexp_f;
  std::vector<CRat> label;  // label of the block's own outgoing edge (roots: 0)

  explicit SpecContext(ForestSpec s) : spec(std::move(s)), ord(partial_order(spec)) {
    blk.resize(ord.B);
    for (const auto& b : spec.blocks) blk[ord.pos_of_id(b.id)] = b;
    pexp.reserve(ord.B);
    for (int p = 0; p < ord.B; ++p) pexp.push_back(blk[p].poly.expand());
    pexp_f.reserve(ord.B);
    for (int p = 0; p < ord.B; ++p) pexp_f.push_back(poly_cast(pexp[p]));
    label.resize(ord.B);
    for (int p = 0; p < ord.B; ++p)
      if (blk[p].label) label[p] = CRat(*blk[p].label);
  }

  int n() const { return ord.n; }
  int B() const { return ord.B; }

  template <class S>
  const Poly<S>& poly_at(int pos) const;
};

template <>
inline const Poly<CRat>& SpecContext::poly_at<CRat>(int pos) const {
  return pexp[pos];
}
template <>
inline const Poly<CDbl>& SpecContext::poly_at<CDbl>(int pos) const {
  return pexp_f[pos];
}

// --- point plumbing -------------------------------------------------------

template <class S>
Blocks<S> blocks_values(const RatPoint& pt) {
  Blocks<S> out(pt.size());
  for (size_t b = 0; b < pt.size(); ++b)
    for (const auto& c : pt[b]) out[b].push_back(scalar_traits<S>::from_crat(c));
  return out;
}

/// Coordinate jets for a point, seeded over all n flat coordinates.
template <class S>
Blocks<Jet2<S>> blocks_jets2(const RatPoint& pt, const OrderInfo& ord) {
  Blocks<Jet2<S>> out(pt.size());
  for (size_t b = 0; b < pt.size(); ++b)
    for (size_t i = 0; i < pt[b].size(); ++i)
      out[b].push_back(Jet2<S>::variable(scalar_traits<S>::from_crat(pt[b][i]),
                                         ord.offset[b] + static_cast<int>(i), ord.n));
  return out;
}

/// Seeds coordinate jets directly from per-block scalar values.
template <class S>
Blocks<Jet2<S>> blocks_seed2(const Blocks<S>& vals, const OrderInfo& ord) {
  Blocks<Jet2<S>> out(vals.size());
  for (size_t b = 0; b < vals.size(); ++b)
    for (size_t i = 0; i < vals[b].size(); ++i)
      out[b].push_back(Jet2<S>::variable(vals[b][i], ord.offset[b] + static_cast<int>(i), ord.n));
  return out;
}

template <class S>
Blocks<Jet1<S>> blocks_jets1(const RatPoint& pt, const OrderInfo& ord) {
  Blocks<Jet1<S>> out(pt.size());
  for (size_t b = 0; b < pt.size(); ++b)
    for (size_t i = 0; i < pt[b].size(); ++i)
      out[b].push_back(Jet1<S>::variable(scalar_traits<S>::from_crat(pt[b][i]),
                                         ord.offset[b] + static_cast<int>(i), ord.n));
  return out;
}

// --- regularity -----------------------------------------------------------

/// True iff within every block coordinates are pairwise distinct, P never
/// vanishes at a coordinate, and no warp denominator vanishes.
inline bool is_regular(const SpecContext& ctx, const RatPoint& pt) {
  const OrderInfo& ord = ctx.ord;
  if (static_cast<int>(pt.size()) != ord.B) throw std::invalid_argument("point shape mismatch");
  for (int p = 0; p < ord.B; ++p) {
    if (static_cast<int>(pt[p].size()) != ord.dims[p])
      throw std::invalid_argument("point shape mismatch");
    for (size_t i = 0; i < pt[p].size(); ++i)
      for (size_t j = i + 1; j < pt[p].size(); ++j)
        if (pt[p][i] == pt[p][j]) return false;
    for (const auto& x : pt[p])
      if (ctx.pexp[p].eval(x).is_zero()) return false;
    if (!ord.is_root(p)) {
      int par = ord.parent[p];
      for (const auto& x : pt[par])
        if (x == ctx.label[p]) return false;
    }
  }
  return true;
}

// --- metric ingredients ----------------------------------------------------

/// Levi-Civita block values: s-th contravariant entry 1/prod_{j!=s}(x^s - x^j).
/// Coincident coordinates raise a singular-point error via jet division.
template <class T>
std::vector<T> g_lc_block(const std::vector<T>& xs) {
  int m = static_cast<int>(xs.size());
  std::vector<T> out;
  out.reserve(m);
  for (int s = 0; s < m; ++s) {
    T prod = one_like(xs[s]);
    for (int j = 0; j < m; ++j)
      if (j != s) prod = prod * (xs[s] - xs[j]);
    out.push_back(reciprocal(prod));
  }
  return out;
}

/// Product over non-root s with s <= alpha of prod_i (lambda_s - x_{next(s)}^i),
/// i.e. 1/f_alpha; 1 at roots.
template <class T>
T warp_denominator(const SpecContext& ctx, int alpha, const Blocks<T>& x) {
  using S = typename jet_scalar<T>::type;
  T den = one_like(x[alpha][0]);
  std::vector<int> chain = {alpha};
  for (int a : ctx.ord.ancestors[alpha]) chain.push_back(a);
  for (int s : chain) {
    if (ctx.ord.is_root(s)) continue;
    int par = ctx.ord.parent[s];
    S lam = scalar_traits<S>::from_crat(ctx.label[s]);
    for (const auto& xi : x[par]) den = den * (lam - xi);
  }
  return den;
}

/// Warp factor f_alpha: product over non-root s with s <= alpha of
/// 1/prod_i (lambda_s - x_{next(s)}^i); 1 at roots.
template <class T>
T warp_factor(const SpecContext& ctx, int alpha, const Blocks<T>& x) {
  return reciprocal(warp_denominator(ctx, alpha, x));
}

/// Contravariant diagonal of the metric at a point (or at coordinate jets),
/// flat n-vector by coordinate. Exact on the exact tag.
template <class T>
std::vector<T> metric_diag_contra(const SpecContext& ctx, const Blocks<T>& x) {
  using S = typename jet_scalar<T>::type;
  std::vector<T> out;
  out.reserve(ctx.n());
  for (int p = 0; p < ctx.B(); ++p) {
    T f = warp_factor(ctx, p, x);
    std::vector<T> glc = g_lc_block(x[p]);
    const Poly<S>& P = ctx.poly_at<S>(p);
    for (int i = 0; i < ctx.ord.dims[p]; ++i) out.push_back(f * P.eval(x[p][i]) * glc[i]);
  }
  return out;
}

template <class T>
std::vector<T> metric_diag_cov(const SpecContext& ctx, const Blocks<T>& x) {
  std::vector<T> g = metric_diag_contra(ctx, x);
  for (auto& v : g) v = reciprocal(v);
  return g;
}

/// Covariant diagonal of the cone lift (n+1 entries) of a curvature-1 spec:
/// diag(1, (x0)^2 g_cov). Contract error unless K = 1.
template <class T>
std::vector<T> cone_metric_diag_cov(const SpecContext& ctx, const T& x0, const Blocks<T>& x) {
  if (ctx.ord.n_components() > 1 || curvature_constant(ctx.spec, ctx.ord) != Rat(1))
    throw std::invalid_argument("cone lift requires a curvature-1 spec");
  std::vector<T> cov = metric_diag_cov(ctx, x);
  std::vector<T> out;
  out.reserve(cov.size() + 1);
  out.push_back(one_like(x0));
  T x0sq = x0 * x0;
  for (const auto& v : cov) out.push_back(x0sq * v);
  return out;
}

}  // namespace stackel
