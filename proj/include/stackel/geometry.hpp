#pragma once

#include <functional>

#include "stackel/metric.hpp"

namespace stackel {

/// Christoffel symbols of a diagonal metric, as first-order jets (value plus
/// gradient) indexed Gamma[(i*n+j)*n+k]; symmetric in (j,k).
template <class S>
struct Connection {
  int n = 0;
  std::vector<Jet1<S>> gamma;
  const Jet1<S>& at(int i, int j, int k) const { return gamma[(i * n + j) * n + k]; }
};

/// Levi-Civita connection from covariant diagonal entries given as Jet2.
template <class S>
Connection<S> christoffel(const std::vector<Jet2<S>>& gcov) {
  int n = static_cast<int>(gcov.size());
  Connection<S> conn;
  conn.n = n;
  conn.gamma.assign(static_cast<size_t>(n) * n * n, Jet1<S>(S(), n));
  std::vector<Jet1<S>> ginv;
  ginv.reserve(n);
  for (int i = 0; i < n; ++i) ginv.push_back(j1(gcov[i]).recip());
  S half = S(1) / S(2);
  auto set = [&](int i, int j, int k, const Jet1<S>& v) {
    conn.gamma[(i * n + j) * n + k] = v;
    conn.gamma[(i * n + k) * n + j] = v;
  };
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      // Gamma^i_{ik} = 1/2 g^{ii} d_k g_ii   (covers i==k as well)
      set(i, i, k, half * (ginv[i] * d_of(gcov[i], k)));
    }
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      // Gamma^i_{jj} = -1/2 g^{ii} d_i g_jj
      Jet1<S> v = half * (ginv[i] * d_of(gcov[j], i));
      set(i, j, j, zero_like(v) - v);
    }
  }
  return conn;
}

/// Lowered Riemann tensor values R_{ijkl} with the fixed index convention
/// R^i_{jkl} = d_k Gamma^i_{lj} - d_l Gamma^i_{kj} + Gamma^i_{km} Gamma^m_{lj}
///           - Gamma^i_{lm} Gamma^m_{kj}.
template <class S>
std::vector<S> riemann_lowered(const std::vector<Jet2<S>>& gcov, const Connection<S>& conn) {
  int n = conn.n;
  std::vector<S> R(static_cast<size_t>(n) * n * n * n, S());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          S up = conn.at(i, l, j).g[k] - conn.at(i, k, j).g[l];
          for (int m = 0; m < n; ++m)
            up += conn.at(i, k, m).v * conn.at(m, l, j).v - conn.at(i, l, m).v * conn.at(m, k, j).v;
          R[((i * n + j) * n + k) * n + l] = gcov[i].v * up;
        }
  return R;
}

struct ResidualStat {
  double max_abs = 0.0;
  bool exact_zero = true;
  std::vector<int> argmax;  // index tuple of the worst entry
};

template <class S>
void residual_update(ResidualStat& st, const S& v, std::initializer_list<int> idx) {
  double a = scalar_traits<S>::magnitude(v);
  if (!scalar_traits<S>::is_zero(v)) st.exact_zero = false;
  if (a > st.max_abs) {
    st.max_abs = a;
    st.argmax.assign(idx);
  }
}

template <class S>
struct CurvatureReport {
  ResidualStat residual;
  S inferred_K = S();
  bool inferred_matches = true;
};

/// Max-norm of R_{ijkl} - K (g_ik g_jl - g_il g_jk) and the curvature value
/// inferred from one generic component.
template <class S>
CurvatureReport<S> curvature_residual_cov(const std::vector<Jet2<S>>& gcov, const S& expected_K) {
  int n = static_cast<int>(gcov.size());
  CurvatureReport<S> rep;
  if (n < 2) {
    rep.inferred_K = expected_K;  // no sectional curvature in dimension 1
    return rep;
  }
  Connection<S> conn = christoffel(gcov);
  std::vector<S> R = riemann_lowered(gcov, conn);
  rep.inferred_K = R[((0 * n + 1) * n + 0) * n + 1] / (gcov[0].v * gcov[1].v);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          S expect = S();
          if (i == k && j == l) expect += expected_K * gcov[i].v * gcov[j].v;
          if (i == l && j == k) expect -= expected_K * gcov[i].v * gcov[j].v;
          S resid = R[((i * n + j) * n + k) * n + l] - expect;
          residual_update(rep.residual, resid, {i, j, k, l});
        }
  S diff = rep.inferred_K - expected_K;
  rep.inferred_matches = scalar_traits<S>::is_zero(diff) ||
                         scalar_traits<S>::magnitude(diff) < 1e-8;
  return rep;
}

template <class S>
CurvatureReport<S> curvature_residual(const SpecContext& ctx, const RatPoint& pt) {
  if (!is_regular(ctx, pt)) throw SingularPointError("curvature_residual at singular point");
  auto x = blocks_jets2<S>(pt, ctx.ord);
  std::vector<Jet2<S>> gcov = metric_diag_cov(ctx, x);
  S K = scalar_traits<S>::from_rat(curvature_constant(ctx.spec, ctx.ord));
  return curvature_residual_cov(gcov, K);
}

/// Max-norm of the symmetrized covariant derivative of a diagonal covariant
/// 2-tensor (Killing equation residual).
template <class S>
ResidualStat killing_residual_cov(const std::vector<Jet2<S>>& gcov, const Connection<S>& conn,
                                  const std::vector<Jet1<S>>& Kdiag) {
  int n = static_cast<int>(gcov.size());
  ResidualStat st;
  auto nabla = [&](int k, int i, int j) {
    S v = S();
    if (i == j) v += Kdiag[i].g[k];
    v -= conn.at(j, k, i).v * Kdiag[j].v;
    v -= conn.at(i, k, j).v * Kdiag[i].v;
    return v;
  };
  S third = S(1) / S(3);
  for (int k = 0; k < n; ++k)
    for (int i = k; i < n; ++i)
      for (int j = i; j < n; ++j) {
        S sym = third * (nabla(k, i, j) + nabla(i, j, k) + nabla(j, k, i));
        residual_update(st, sym, {k, i, j});
      }
  return st;
}

template <class S>
ResidualStat killing_residual(const SpecContext& ctx, const RatPoint& pt,
                              const std::function<std::vector<Jet1<S>>(const Blocks<Jet1<S>>&)>& K_eval) {
  if (!is_regular(ctx, pt)) throw SingularPointError("killing_residual at singular point");
  auto x2 = blocks_jets2<S>(pt, ctx.ord);
  std::vector<Jet2<S>> gcov = metric_diag_cov(ctx, x2);
  Connection<S> conn = christoffel(gcov);
  auto x1 = blocks_jets1<S>(pt, ctx.ord);
  return killing_residual_cov(gcov, conn, K_eval(x1));
}

/// Cleared-denominator separability residuals (log-free polynomial forms of
/// the three second-order conditions), exact on the exact tag.
template <class S>
struct SeparabilityReport {
  ResidualStat eq2, eq3, eq4;
};

template <class S>
SeparabilityReport<S> separability_residuals_cov(const std::vector<Jet2<S>>& G) {
  int n = static_cast<int>(G.size());
  SeparabilityReport<S> rep;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        S e2 = G[k].v * G[k].hess(i, j) - G[k].g[i] * G[k].g[j];
        residual_update(rep.eq2, e2, {i, j, k});
        S e3 = G[i].g[j] * G[k].g[i] * G[j].v * G[k].v + G[k].g[j] * G[j].g[i] * G[i].v * G[k].v -
               G[k].g[j] * G[k].g[i] * G[i].v * G[j].v;
        residual_update(rep.eq3, e3, {i, j, k});
      }
      S e4 = G[i].v * G[j].v * G[j].hess(i, j) - G[i].v * G[j].g[i] * G[j].g[j] +
             G[j].v * G[i].g[j] * G[j].g[i];
      residual_update(rep.eq4, e4, {i, j});
    }
  return rep;
}

template <class S>
SeparabilityReport<S> separability_residuals(const SpecContext& ctx, const RatPoint& pt) {
  if (!is_regular(ctx, pt)) throw SingularPointError("separability_residuals at singular point");
  auto x = blocks_jets2<S>(pt, ctx.ord);
  return separability_residuals_cov<S>(metric_diag_cov(ctx, x));
}

/// Log-form residuals (float tag): same equations on g_i = log of the
/// covariant entry, principal complex branch.
inline SeparabilityReport<CDbl> separability_residuals_log(const SpecContext& ctx, const RatPoint& pt) {
  if (!is_regular(ctx, pt)) throw SingularPointError("separability_residuals at singular point");
  auto x = blocks_jets2<CDbl>(pt, ctx.ord);
  std::vector<Jet2<CDbl>> gl;
  for (auto& e : metric_diag_cov(ctx, x)) gl.push_back(log(e));
  int n = static_cast<int>(gl.size());
  SeparabilityReport<CDbl> rep;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        residual_update(rep.eq2, gl[k].hess(i, j), {i, j, k});
        CDbl e3 = gl[i].g[j] * gl[k].g[i] + gl[k].g[j] * gl[j].g[i] - gl[k].g[j] * gl[k].g[i];
        residual_update(rep.eq3, e3, {i, j, k});
      }
      CDbl e4 = gl[j].hess(i, j) + gl[i].g[j] * gl[j].g[i];
      residual_update(rep.eq4, e4, {i, j});
    }
  return rep;
}

/// Residual of the separability condition of the geodesic Hamiltonian,
/// a degree-4 polynomial identity in the momenta evaluated at (x, p).
template <class S>
ResidualStat levi_civita_residual_contra(const std::vector<Jet2<S>>& gup,
                                         const std::vector<S>& p) {
  int n = static_cast<int>(gup.size());
  S half = S(1) / S(2);

  std::vector<S> Hp(n), Hx(n, S());
  for (int i = 0; i < n; ++i) Hp[i] = gup[i].v * p[i];
  for (int i = 0; i < n; ++i)
    for (int s = 0; s < n; ++s) Hx[i] += half * gup[s].g[i] * p[s] * p[s];

  ResidualStat st;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      S Hxx = S();
      for (int s = 0; s < n; ++s) Hxx += half * gup[s].hess(i, j) * p[s] * p[s];
      S Hpx_ij = gup[i].g[j] * p[i];  // d2 H / dp_i dx^j
      S Hpx_ji = gup[j].g[i] * p[j];
      S resid = Hp[i] * Hp[j] * Hxx - Hx[i] * Hp[j] * Hpx_ij - Hx[j] * Hp[i] * Hpx_ji;
      residual_update(st, resid, {i, j});
    }
  return st;
}

template <class S>
ResidualStat levi_civita_residual(const SpecContext& ctx, const RatPoint& pt,
                                  const std::vector<Rat>& mom) {
  if (!is_regular(ctx, pt)) throw SingularPointError("levi_civita_residual at singular point");
  auto x = blocks_jets2<S>(pt, ctx.ord);
  std::vector<Jet2<S>> gup = metric_diag_contra(ctx, x);
  std::vector<S> p;
  p.reserve(mom.size());
  for (const auto& q : mom) p.push_back(scalar_traits<S>::from_rat(q));
  return levi_civita_residual_contra(gup, p);
}

/// Residual of the compatibility equation nabla_k L_ij = l_i g_jk + l_j g_ik
/// for a diagonal (1,1)-tensor evaluator, with l = 1/2 d(trace L).
template <class S>
ResidualStat sinjukov_residual(const SpecContext& ctx, const RatPoint& pt,
                               const std::function<std::vector<Jet1<S>>(const Blocks<Jet1<S>>&)>& L_eval) {
  if (!is_regular(ctx, pt)) throw SingularPointError("sinjukov_residual at singular point");
  int n = ctx.n();
  auto x2 = blocks_jets2<S>(pt, ctx.ord);
  std::vector<Jet2<S>> gcov = metric_diag_cov(ctx, x2);
  Connection<S> conn = christoffel(gcov);
  auto x1 = blocks_jets1<S>(pt, ctx.ord);
  std::vector<Jet1<S>> Lup = L_eval(x1);

  Jet1<S> trace(S(), n);
  for (int s = 0; s < n; ++s) trace += Lup[s];
  S half = S(1) / S(2);

  std::vector<Jet1<S>> Lcov;
  Lcov.reserve(n);
  for (int i = 0; i < n; ++i) Lcov.push_back(j1(gcov[i]) * Lup[i]);

  ResidualStat st;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        S v = S();
        if (i == j) v += Lcov[i].g[k];
        v -= conn.at(j, k, i).v * Lcov[j].v;
        v -= conn.at(i, k, j).v * Lcov[i].v;
        if (j == k) v -= half * trace.g[i] * gcov[j].v;
        if (i == k) v -= half * trace.g[j] * gcov[i].v;
        residual_update(st, v, {k, i, j});
      }
  return st;
}

// --- geodesic flow ----------------------------------------------------------

struct GeodesicResult {
  std::vector<double> times;
  std::vector<std::vector<double>> xs;  // flat coordinates per sample
  std::vector<std::vector<double>> ps;
  bool aborted = false;  // trajectory hit the singular set
};

/// Fixed-step RK4 for Hamilton's equations of H = 1/2 sum g^{ii} p_i^2.
/// Real coordinates only; aborts (keeping the last regular state) when the
/// metric evaluation becomes singular.
GeodesicResult geodesic_integrate(const SpecContext& ctx, const std::vector<double>& x0,
                                  const std::vector<double>& p0, double T, int steps,
                                  int record_every = 1);

}  // namespace stackel
