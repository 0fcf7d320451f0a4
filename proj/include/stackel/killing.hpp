#pragma once

#include <functional>
#include <optional>

#include "stackel/geometry.hpp"
#include "stackel/linalg.hpp"

namespace stackel {

inline std::pair<int, int> coord_block(const OrderInfo& ord, int i) {
  for (int p = 0; p < ord.B; ++p)
    if (i >= ord.offset[p] && i < ord.offset[p] + ord.dims[p]) return {p, i - ord.offset[p]};
  throw std::invalid_argument("coordinate index out of range");
}

// --- geodesically compatible tensor L --------------------------------------

/// Diagonal (1,1)-tensor: per block either the block coordinates themselves
/// (root block of a connected forest) or a constant.
struct CompatibleL {
  std::vector<std::optional<CRat>> block_const;  // by position; nullopt = coordinates
};

inline CompatibleL compatible_L(const SpecContext& ctx) {
  CompatibleL L;
  L.block_const.resize(ctx.B());
  if (ctx.ord.n_components() == 1) {
    int root = ctx.ord.comp_root[0];
    for (int p = 0; p < ctx.B(); ++p) {
      if (p == root) continue;
      L.block_const[p] = ctx.label[ctx.ord.top_child(p)];
    }
  } else {
    for (int p = 0; p < ctx.B(); ++p) L.block_const[p] = CRat(Rat(ctx.ord.component[p] + 1));
  }
  return L;
}

template <class T>
std::vector<T> compatible_L_values(const OrderInfo& ord, const CompatibleL& L, const Blocks<T>& x) {
  using S = typename jet_scalar<T>::type;
  std::vector<T> out;
  out.reserve(ord.n);
  for (int p = 0; p < ord.B; ++p)
    for (int i = 0; i < ord.dims[p]; ++i) {
      if (L.block_const[p])
        out.push_back(zero_like(x[p][i]) + scalar_traits<S>::from_crat(*L.block_const[p]));
      else
        out.push_back(x[p][i]);
    }
  return out;
}

template <class S>
std::function<std::vector<Jet1<S>>(const Blocks<Jet1<S>>&)> compatible_L_fn(const SpecContext& ctx) {
  CompatibleL L = compatible_L(ctx);
  OrderInfo ord = ctx.ord;
  return [L, ord](const Blocks<Jet1<S>>& x) { return compatible_L_values(ord, L, x); };
}

// --- Benenti family ---------------------------------------------------------

/// Adjugate family: entry i of (t Id - L)^{-1} det(t Id - L) for diagonal L,
/// i.e. prod_{j != i} (t - L_j). Polynomial in t; finite at eigenvalues.
template <class T>
std::vector<T> benenti_S(const std::vector<T>& Lvals, const typename jet_scalar<T>::type& t) {
  int m = static_cast<int>(Lvals.size());
  std::vector<T> out;
  out.reserve(m);
  for (int i = 0; i < m; ++i) {
    T prod = one_like(Lvals[i]);
    for (int j = 0; j < m; ++j)
      if (j != i) prod = prod * (t - Lvals[j]);
    out.push_back(prod);
  }
  return out;
}

namespace detail {

/// Ascending coefficients of prod (t - x) over any algebra T.
template <class T>
std::vector<T> monic_from_roots(const std::vector<T>& xs) {
  std::vector<T> c{one_like(xs.at(0))};
  for (const T& x : xs) {
    std::vector<T> nc(c.size() + 1, zero_like(x));
    for (size_t k = 0; k < c.size(); ++k) {
      nc[k + 1] += c[k];
      nc[k] -= x * c[k];
    }
    c = std::move(nc);
  }
  return c;
}

/// Quotient of (p(t) - p(lam)) by (t - lam) via synthetic division.
template <class T, class S>
std::vector<T> divided_difference(const std::vector<T>& coef, const S& lam) {
  int d = static_cast<int>(coef.size()) - 1;
  std::vector<T> q(d, zero_like(coef[0]));
  T carry = coef[d];
  for (int k = d - 1; k >= 0; --k) {
    q[k] = carry;
    carry = coef[k] + lam * carry;
  }
  return q;
}

template <class T, class S>
T eval_at_scalar(const std::vector<T>& coef, const S& t) {
  T acc = zero_like(coef[0]);
  for (int k = static_cast<int>(coef.size()) - 1; k >= 0; --k) acc = acc * t + coef[k];
  return acc;
}

}  // namespace detail

// --- Killing tensor families ------------------------------------------------

/// Divided-difference polynomial coupling a family at vertex alpha to a block
/// beta strictly below it; degree n_alpha - 1 in t, regular at t = lambda.
template <class T>
T phi_polynomial(const SpecContext& ctx, int alpha, int beta,
                 const typename jet_scalar<T>::type& t, const Blocks<T>& x) {
  using S = typename jet_scalar<T>::type;
  if (!ctx.ord.prec(alpha, beta)) throw std::invalid_argument("phi_polynomial needs alpha < beta");
  int gamma = beta;
  while (ctx.ord.parent[gamma] != alpha) gamma = ctx.ord.parent[gamma];
  S lam = scalar_traits<S>::from_crat(ctx.label[gamma]);
  std::vector<T> chi = detail::monic_from_roots(x[alpha]);
  std::vector<T> q = detail::divided_difference(chi, lam);
  T dd = detail::eval_at_scalar(q, t);
  return warp_denominator(ctx, alpha, x) * dd;
}

/// Diagonal of the operator family S^alpha(t): the alpha block carries the
/// Benenti family over the warp, blocks below alpha carry the coupling
/// polynomial, all other blocks are zero.
template <class T>
std::vector<T> killing_S_diag(const SpecContext& ctx, int alpha,
                              const typename jet_scalar<T>::type& t, const Blocks<T>& x) {
  std::vector<T> out;
  out.reserve(ctx.n());
  T den = warp_denominator(ctx, alpha, x);
  std::vector<T> own = benenti_S(x[alpha], t);
  for (int p = 0; p < ctx.B(); ++p) {
    if (p == alpha) {
      for (int i = 0; i < ctx.ord.dims[p]; ++i) out.push_back(own[i] * den);
    } else if (ctx.ord.prec(alpha, p)) {
      T phi = phi_polynomial(ctx, alpha, p, t, x);
      for (int i = 0; i < ctx.ord.dims[p]; ++i) out.push_back(phi);
    } else {
      for (int i = 0; i < ctx.ord.dims[p]; ++i) out.push_back(zero_like(x[p][0]));
    }
  }
  return out;
}

/// Covariant diagonal of K^alpha(t): K_ii = g_ii S^i_i.
template <class T>
std::vector<T> killing_K_cov(const SpecContext& ctx, int alpha,
                             const typename jet_scalar<T>::type& t, const Blocks<T>& x) {
  std::vector<T> S = killing_S_diag(ctx, alpha, t, x);
  std::vector<T> gcov = metric_diag_cov(ctx, x);
  for (int i = 0; i < ctx.n(); ++i) S[i] = S[i] * gcov[i];
  return S;
}

// --- integrals and brackets ---------------------------------------------------

/// Integral quadratic in momenta plus a potential: I = sum A_i p_i^2 + V.
/// The evaluator returns the diagonal coefficients and V with x-gradients.
template <class S>
struct Integral2 {
  std::function<std::pair<std::vector<Jet1<S>>, Jet1<S>>(const Blocks<Jet1<S>>&)> eval;
};

/// Momentum-square coefficients of the family integral I^alpha(t):
/// A_i = S^i_i g^{ii}.
template <class S>
std::vector<Jet1<S>> family_integral_coeffs(const SpecContext& ctx, int alpha, const S& t,
                                            const Blocks<Jet1<S>>& x) {
  std::vector<Jet1<S>> A = killing_S_diag(ctx, alpha, t, x);
  std::vector<Jet1<S>> gup = metric_diag_contra(ctx, x);
  for (int i = 0; i < ctx.n(); ++i) A[i] = A[i] * gup[i];
  return A;
}

template <class S>
Integral2<S> family_integral(const SpecContext& ctx, int alpha, const S& t) {
  const SpecContext* c = &ctx;
  return Integral2<S>{[c, alpha, t](const Blocks<Jet1<S>>& x) {
    std::vector<Jet1<S>> A = family_integral_coeffs(*c, alpha, t, x);
    return std::make_pair(std::move(A), Jet1<S>(S(), c->n()));
  }};
}

/// Exact inverse Vandermonde at nodes 0..m-1 for coefficient extraction.
inline Mat<CRat> vandermonde_inverse(int m) {
  Mat<CRat> V(m, std::vector<CRat>(m));
  for (int j = 0; j < m; ++j) {
    CRat node{Rat(j)};
    CRat pw{Rat(1)};
    for (int k = 0; k < m; ++k) {
      V[j][k] = pw;
      pw *= node;
    }
  }
  auto inv = mat_inverse(V);
  if (!inv) throw std::logic_error("Vandermonde at distinct nodes is invertible");
  return *inv;
}

/// The n coefficient-extracted integrals in Stackel order: block-major,
/// within each family by descending degree in t.
template <class S>
std::vector<Integral2<S>> extracted_integrals(const SpecContext& ctx) {
  std::vector<Integral2<S>> out;
  const SpecContext* c = &ctx;
  for (int alpha = 0; alpha < ctx.B(); ++alpha) {
    int m = ctx.ord.dims[alpha];
    Mat<CRat> W = vandermonde_inverse(m);
    for (int col = 0; col < m; ++col) {
      int deg = m - 1 - col;  // descending degree
      std::vector<S> weights;
      for (int j = 0; j < m; ++j) weights.push_back(scalar_traits<S>::from_crat(W[deg][j]));
      out.push_back(Integral2<S>{[c, alpha, m, weights](const Blocks<Jet1<S>>& x) {
        int n = c->n();
        std::vector<Jet1<S>> acc(n, Jet1<S>(S(), n));
        for (int j = 0; j < m; ++j) {
          std::vector<Jet1<S>> A = family_integral_coeffs(*c, alpha, S(j), x);
          for (int i = 0; i < n; ++i) acc[i] += weights[j] * A[i];
        }
        return std::make_pair(std::move(acc), Jet1<S>(S(), n));
      }});
    }
  }
  return out;
}

template <class S>
S integral_value(const Integral2<S>& I, const Blocks<Jet1<S>>& x, const std::vector<S>& p) {
  auto [A, V] = I.eval(x);
  S v = V.v;
  for (size_t i = 0; i < A.size(); ++i) v += A[i].v * p[i] * p[i];
  return v;
}

/// Canonical Poisson bracket of two quadratic-plus-potential integrals at (x,p).
template <class S>
S poisson_bracket(const Integral2<S>& Ia, const Integral2<S>& Ib, const Blocks<Jet1<S>>& x,
                  const std::vector<S>& p) {
  auto [A, Va] = Ia.eval(x);
  auto [B, Vb] = Ib.eval(x);
  int n = static_cast<int>(p.size());
  S two = S(2);
  S out = S();
  for (int k = 0; k < n; ++k) {
    S dxa = Va.g[k];
    S dxb = Vb.g[k];
    for (int i = 0; i < n; ++i) {
      dxa += A[i].g[k] * p[i] * p[i];
      dxb += B[i].g[k] * p[i] * p[i];
    }
    out += two * A[k].v * p[k] * dxb - dxa * two * B[k].v * p[k];
  }
  return out;
}

// --- Stackel matrix -----------------------------------------------------------

/// Stackel matrix values: rows indexed by coordinates, column block alpha of
/// width n_alpha; diagonal blocks carry powers over P, the parent rows of each
/// column block carry the coupling in the first column.
template <class T>
Mat<T> stackel_matrix(const SpecContext& ctx, const Blocks<T>& x) {
  using S = typename jet_scalar<T>::type;
  int n = ctx.n();
  T zero = zero_like(x[0][0]);
  Mat<T> M(n, std::vector<T>(n, zero));
  for (int a = 0; a < ctx.B(); ++a) {
    int na = ctx.ord.dims[a];
    int col0 = ctx.ord.offset[a];
    const Poly<S>& Pa = ctx.poly_at<S>(a);
    for (int i = 0; i < na; ++i) {
      int row = ctx.ord.offset[a] + i;
      T invP = reciprocal(Pa.eval(x[a][i]));
      T pw = one_like(x[a][i]);
      for (int j = na; j >= 1; --j) {  // columns j hold powers n_a - j
        M[row][col0 + j - 1] = pw * invP;
        if (j > 1) pw = pw * x[a][i];
      }
    }
    if (!ctx.ord.is_root(a)) {
      int b = ctx.ord.parent[a];
      const Poly<S>& Pb = ctx.poly_at<S>(b);
      S lam = scalar_traits<S>::from_crat(ctx.label[a]);
      for (int i = 0; i < ctx.ord.dims[b]; ++i) {
        int row = ctx.ord.offset[b] + i;
        M[row][col0] = reciprocal(Pb.eval(x[b][i]) * (x[b][i] - lam));
      }
    }
  }
  return M;
}

/// Exact residual of S I - P at a point and momentum, with I the extracted
/// integrals in Stackel order.
template <class S>
ResidualStat stackel_residual(const SpecContext& ctx, const RatPoint& pt,
                              const std::vector<Rat>& mom) {
  if (!is_regular(ctx, pt)) throw SingularPointError("stackel_residual at singular point");
  int n = ctx.n();
  Blocks<S> xv = blocks_values<S>(pt);
  Mat<S> M = stackel_matrix(ctx, xv);
  std::vector<S> p;
  for (const auto& q : mom) p.push_back(scalar_traits<S>::from_rat(q));

  auto x1 = blocks_jets1<S>(pt, ctx.ord);
  std::vector<Integral2<S>> ints = extracted_integrals<S>(ctx);
  std::vector<S> I;
  I.reserve(n);
  for (const auto& it : ints) I.push_back(integral_value(it, x1, p));

  ResidualStat st;
  for (int r = 0; r < n; ++r) {
    S acc = S();
    for (int cidx = 0; cidx < n; ++cidx) acc += M[r][cidx] * I[cidx];
    S resid = acc - p[r] * p[r];
    residual_update(st, resid, {r});
  }
  return st;
}

// --- separable potentials ------------------------------------------------------

/// U = sum_j (S^{-1})_{1j} f_j(x^j) for univariate polynomial potentials f_j.
template <class S>
S separable_potential_value(const SpecContext& ctx, const std::vector<Poly<CRat>>& fs,
                            const RatPoint& pt) {
  int n = ctx.n();
  Blocks<S> xv = blocks_values<S>(pt);
  Mat<S> M = stackel_matrix(ctx, xv);
  auto inv = mat_inverse(M);
  if (!inv) throw SingularPointError("Stackel matrix singular at point");
  S U = S();
  for (int j = 0; j < n; ++j) {
    auto [b, loc] = coord_block(ctx.ord, j);
    Poly<S> fj;
    for (const auto& cc : fs[j].c) fj.c.push_back(scalar_traits<S>::from_crat(cc));
    U += (*inv)[0][j] * fj.eval(xv[b][loc]);
  }
  return U;
}

/// Row a of I = S^{-1} (P + F) as a quadratic-plus-potential integral.
template <class S>
Integral2<S> modified_integral(const SpecContext& ctx, const std::vector<Poly<CRat>>& fs, int a) {
  const SpecContext* c = &ctx;
  return Integral2<S>{[c, fs, a](const Blocks<Jet1<S>>& x) {
    int n = c->n();
    Mat<Jet1<S>> M = stackel_matrix(*c, x);
    auto inv = mat_inverse(M);
    if (!inv) throw SingularPointError("Stackel matrix singular at point");
    std::vector<Jet1<S>> A = (*inv)[a];
    Jet1<S> V(S(), n);
    for (int j = 0; j < n; ++j) {
      auto [b, loc] = coord_block(c->ord, j);
      Poly<S> fj;
      for (const auto& cc : fs[j].c) fj.c.push_back(scalar_traits<S>::from_crat(cc));
      if (fj.c.empty()) continue;
      Jet1<S> fval = fj.eval(x[b][loc]);
      V += A[j] * fval;
    }
    return std::make_pair(std::move(A), V);
  }};
}

// --- empirical uniqueness of L ---------------------------------------------------

/// Dimension of the space of diagonal tensors with univariate-linear entries
/// L^i_i = a_i x^i + b_i satisfying the compatibility constraints at the given
/// points: 2 for a connected forest, m for m components.
inline int compatible_L_solution_dim(const SpecContext& ctx, const std::vector<RatPoint>& pts) {
  int n = ctx.n();
  Mat<CRat> rows;
  for (const auto& pt : pts) {
    auto x1 = blocks_jets1<CRat>(pt, ctx.ord);
    std::vector<Jet1<CRat>> gup = metric_diag_contra(ctx, x1);
    std::vector<CRat> xflat;
    for (const auto& blkv : pt)
      for (const auto& v : blkv) xflat.push_back(v);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        // d_i g^{jj} (L^j - L^i) = (d_i L^i) g^{jj} with L^k = a_k x^k + b_k
        std::vector<CRat> row(2 * n, CRat());
        CRat dg = gup[j].g[i];
        row[2 * j] += dg * xflat[j];             // a_j
        row[2 * j + 1] += dg;                    // b_j
        row[2 * i] -= dg * xflat[i] + gup[j].v;  // a_i
        row[2 * i + 1] -= dg;                    // b_i
        rows.push_back(std::move(row));
      }
  }
  if (rows.empty()) return 2 * n;
  return 2 * n - matrix_rank(rows);
}

// --- Hamilton-Jacobi quadrature ---------------------------------------------------

/// Row i of the Stackel matrix as univariate functions evaluated at xi.
std::vector<double> stackel_row(const SpecContext& ctx, int i, double xi);

/// W_i = int_a^b sqrt(sum_s S_is(xi) c_s) dxi by adaptive Gauss-Legendre,
/// relative tolerance rel_tol; throws if the integrand is negative or singular.
double hj_quadrature(const SpecContext& ctx, int i, double a, double b,
                     const std::vector<double>& c, double rel_tol = 1e-10);

}  // namespace stackel
