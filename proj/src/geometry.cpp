#include "stackel/geometry.hpp"

namespace stackel {

namespace {

// Contravariant entries with value+gradient at a real coordinate state.
std::vector<Jet1<CDbl>> contra_jets_at(const SpecContext& ctx, const std::vector<double>& x) {
  Blocks<Jet1<CDbl>> bl(ctx.B());
  for (int b = 0; b < ctx.B(); ++b)
    for (int i = 0; i < ctx.ord.dims[b]; ++i)
      bl[b].push_back(Jet1<CDbl>::variable(CDbl(x[ctx.ord.offset[b] + i], 0.0),
                                           ctx.ord.offset[b] + i, ctx.n()));
  return metric_diag_contra(ctx, bl);
}

struct Deriv {
  std::vector<double> dx, dp;
};

bool hamilton_rhs(const SpecContext& ctx, const std::vector<double>& x,
                  const std::vector<double>& p, Deriv& out) {
  int n = ctx.n();
  std::vector<Jet1<CDbl>> gup;
  try {
    gup = contra_jets_at(ctx, x);
  } catch (const std::domain_error&) {
    return false;
  }
  out.dx.assign(n, 0.0);
  out.dp.assign(n, 0.0);
  for (int i = 0; i < n; ++i) out.dx[i] = gup[i].v.real() * p[i];
  for (int k = 0; k < n; ++k) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += gup[i].g[k].real() * p[i] * p[i];
    out.dp[k] = -0.5 * acc;
  }
  for (int i = 0; i < n; ++i)
    if (!std::isfinite(out.dx[i]) || !std::isfinite(out.dp[i])) return false;
  return true;
}

}  // namespace

GeodesicResult geodesic_integrate(const SpecContext& ctx, const std::vector<double>& x0,
                                  const std::vector<double>& p0, double T, int steps,
                                  int record_every) {
  GeodesicResult res;
  int n = ctx.n();
  if (static_cast<int>(x0.size()) != n || static_cast<int>(p0.size()) != n)
    throw std::invalid_argument("state dimension mismatch");
  double h = T / steps;
  std::vector<double> x = x0, p = p0;
  res.times.push_back(0.0);
  res.xs.push_back(x);
  res.ps.push_back(p);

  Deriv k1, k2, k3, k4;
  std::vector<double> xt(n), pt(n);
  for (int s = 0; s < steps; ++s) {
    if (!hamilton_rhs(ctx, x, p, k1)) {
      res.aborted = true;
      break;
    }
    for (int i = 0; i < n; ++i) {
      xt[i] = x[i] + 0.5 * h * k1.dx[i];
      pt[i] = p[i] + 0.5 * h * k1.dp[i];
    }
    if (!hamilton_rhs(ctx, xt, pt, k2)) {
      res.aborted = true;
      break;
    }
    for (int i = 0; i < n; ++i) {
      xt[i] = x[i] + 0.5 * h * k2.dx[i];
      pt[i] = p[i] + 0.5 * h * k2.dp[i];
    }
    if (!hamilton_rhs(ctx, xt, pt, k3)) {
      res.aborted = true;
      break;
    }
    for (int i = 0; i < n; ++i) {
      xt[i] = x[i] + h * k3.dx[i];
      pt[i] = p[i] + h * k3.dp[i];
    }
    if (!hamilton_rhs(ctx, xt, pt, k4)) {
      res.aborted = true;
      break;
    }
    for (int i = 0; i < n; ++i) {
      x[i] += h / 6.0 * (k1.dx[i] + 2.0 * k2.dx[i] + 2.0 * k3.dx[i] + k4.dx[i]);
      p[i] += h / 6.0 * (k1.dp[i] + 2.0 * k2.dp[i] + 2.0 * k3.dp[i] + k4.dp[i]);
    }
    if ((s + 1) % record_every == 0 || s + 1 == steps) {
      res.times.push_back(h * (s + 1));
      res.xs.push_back(x);
      res.ps.push_back(p);
    }
  }
  return res;
}

}  // namespace stackel
