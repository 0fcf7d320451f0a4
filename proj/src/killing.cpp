#include "stackel/killing.hpp"

#include <cmath>

namespace stackel {

std::vector<double> stackel_row(const SpecContext& ctx, int i, double xi) {
  int n = ctx.n();
  auto [b, loc] = coord_block(ctx.ord, i);
  (void)loc;
  std::vector<double> row(n, 0.0);
  double Pb = ctx.pexp_f[b].eval(CDbl(xi, 0.0)).real();
  if (Pb == 0.0) throw SingularPointError("Stackel row at a root of P");
  int nb = ctx.ord.dims[b];
  double pw = 1.0;
  for (int j = nb; j >= 1; --j) {
    row[ctx.ord.offset[b] + j - 1] = pw / Pb;
    if (j > 1) pw *= xi;
  }
  for (int child : ctx.ord.children[b]) {
    double lam = rat_to_double(ctx.label[child].re);
    double den = Pb * (xi - lam);
    if (den == 0.0) throw SingularPointError("Stackel row coupling singular");
    row[ctx.ord.offset[child]] = 1.0 / den;
  }
  return row;
}

namespace {

struct GaussLegendre15 {
  double x[15], w[15];
  GaussLegendre15() {
    const int N = 15;
    for (int k = 0; k < N; ++k) {
      double t = std::cos(M_PI * (k + 0.75) / (N + 0.5));
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = t;
        for (int m = 2; m <= N; ++m) {
          double p2 = ((2 * m - 1) * t * p1 - (m - 1) * p0) / m;
          p0 = p1;
          p1 = p2;
        }
        double dp = N * (t * p1 - p0) / (t * t - 1.0);
        double dt = p1 / dp;
        t -= dt;
        if (std::abs(dt) < 1e-15) break;
      }
      x[k] = t;
      double p0 = 1.0, p1 = t;
      for (int m = 2; m <= N; ++m) {
        double p2 = ((2 * m - 1) * t * p1 - (m - 1) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      double dp = N * (t * p1 - p0) / (t * t - 1.0);
      w[k] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
  }
};

const GaussLegendre15& gl15() {
  static GaussLegendre15 g;
  return g;
}

double gl15_on(const std::function<double(double)>& f, double a, double b) {
  const auto& g = gl15();
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double acc = 0.0;
  for (int k = 0; k < 15; ++k) acc += g.w[k] * f(mid + half * g.x[k]);
  return acc * half;
}

double adaptive(const std::function<double(double)>& f, double a, double b, double whole,
                double rel_tol, double scale, int depth) {
  double mid = 0.5 * (a + b);
  double left = gl15_on(f, a, mid);
  double right = gl15_on(f, mid, b);
  double refined = left + right;
  if (depth > 40 || std::abs(refined - whole) <= rel_tol * std::max(scale, std::abs(refined)))
    return refined;
  return adaptive(f, a, mid, left, rel_tol, scale, depth + 1) +
         adaptive(f, mid, b, right, rel_tol, scale, depth + 1);
}

}  // namespace

double hj_quadrature(const SpecContext& ctx, int i, double a, double b,
                     const std::vector<double>& c, double rel_tol) {
  if (static_cast<int>(c.size()) != ctx.n()) throw std::invalid_argument("constant vector size");
  auto integrand = [&](double xi) {
    std::vector<double> row = stackel_row(ctx, i, xi);
    double s = 0.0;
    for (int k = 0; k < ctx.n(); ++k) s += row[k] * c[k];
    if (!std::isfinite(s)) throw SingularPointError("singular integrand in quadrature");
    if (s < 0.0) throw std::domain_error("negative integrand in quadrature");
    return std::sqrt(s);
  };
  if (a == b) return 0.0;
  double whole = gl15_on(integrand, a, b);
  double val = adaptive(integrand, a, b, whole, rel_tol, std::abs(whole), 0);
  return val;
}

}  // namespace stackel
