#include "stackel/flat.hpp"

#include <algorithm>
#include <cmath>

namespace stackel {

namespace {

Poly<CRat> root_cofactor(const FactoredPoly& f, size_t skip) {
  Poly<CRat> p = poly_constant(CRat(1));
  for (size_t s = 0; s < f.roots.size(); ++s) {
    if (s == skip) continue;
    Poly<CRat> lin;
    lin.c = {CRat() - f.roots[s].first, CRat(1)};
    for (int i = 0; i < f.roots[s].second; ++i) p = p * lin;
  }
  return p;
}

Poly<CRat> infinity_poly(const FactoredPoly& f) {
  Poly<CRat> p = poly_constant(CRat(1));
  for (const auto& [r, m] : f.roots) {
    Poly<CRat> lin;
    lin.c = {CRat(1), CRat() - r};
    for (int i = 0; i < m; ++i) p = p * lin;
  }
  return p;
}

int find_descriptor(const std::vector<FlatDescriptor>& fns, int vertex, const CRat& mu, int order) {
  for (size_t i = 0; i < fns.size(); ++i)
    if (fns[i].vertex == vertex && fns[i].base == FlatDescriptor::Base::FiniteRoot &&
        fns[i].mu == mu && fns[i].order == order)
      return static_cast<int>(i);
  return -1;
}

void erase_row_col(Mat<CRat>& m, int idx) {
  m.erase(m.begin() + idx);
  for (auto& row : m) row.erase(row.begin() + idx);
}

int numeric_rank(Mat<CDbl> m) {
  if (m.empty()) return 0;
  int rows = static_cast<int>(m.size()), cols = static_cast<int>(m[0].size());
  double scale = 0.0;
  for (auto& row : m)
    for (auto& v : row) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0;
  double tol = 1e-8 * scale;
  int rank = 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int best = -1;
    double best_abs = tol;
    for (int r = rank; r < rows; ++r)
      if (std::abs(m[r][c]) > best_abs) {
        best = r;
        best_abs = std::abs(m[r][c]);
      }
    if (best < 0) continue;
    std::swap(m[rank], m[best]);
    for (int r = 0; r < rows; ++r) {
      if (r == rank) continue;
      CDbl f = m[r][c] / m[rank][c];
      for (int k = c; k < cols; ++k) m[r][k] -= f * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

// Per-block chart piece before multi-block reduction.
struct Piece {
  std::vector<FlatDescriptor> fns;
  Mat<CRat> gram;
};

Piece block_piece(const SpecContext& ctx, int v) {
  const BlockSpec& b = ctx.blk[v];
  int deg = b.poly.degree();
  bool curved = deg == b.dim + 1;
  int d = curved ? 0 : b.dim - deg;
  CRat c{-b.poly.leading / 4};

  Piece piece;
  for (const auto& [mu, k] : b.poly.roots)
    for (int a = 0; a < k; ++a) {
      FlatDescriptor f;
      f.vertex = v;
      f.base = FlatDescriptor::Base::FiniteRoot;
      f.mu = mu;
      f.order = a;
      piece.fns.push_back(f);
    }
  Poly<CRat> Rinf = infinity_poly(b.poly);
  for (int a = 1; a <= d; ++a) {
    FlatDescriptor f;
    f.vertex = v;
    f.base = FlatDescriptor::Base::Infinity;
    f.order = a;
    f.subtract = Rinf.coeff(a);
    piece.fns.push_back(f);
  }

  int N = static_cast<int>(piece.fns.size());
  piece.gram.assign(N, std::vector<CRat>(N, CRat()));
  int off = 0;
  for (size_t i = 0; i < b.poly.roots.size(); ++i) {
    int k = b.poly.roots[i].second;
    Poly<CRat> cof = root_cofactor(b.poly, i);
    const CRat& mu = b.poly.roots[i].first;
    for (int a = 0; a < k; ++a)
      for (int bb = 0; bb < k; ++bb) {
        int kk = a + bb - k + 1;
        if (kk >= 0) piece.gram[off + a][off + bb] = c * cof.taylor_coeff(mu, kk);
      }
    off += k;
  }
  for (int a = 1; a <= d; ++a)
    for (int bb = 1; bb <= d; ++bb) {
      int kk = a + bb - (d + 1);
      if (kk >= 0) piece.gram[off + a - 1][off + bb - 1] = CRat() - c * Rinf.coeff(kk);
    }
  return piece;
}

}  // namespace

FlatChart single_block_chart(const SpecContext& ctx, int vertex) {
  Piece p = block_piece(ctx, vertex);
  FlatChart chart;
  chart.fns = std::move(p.fns);
  chart.gram = std::move(p.gram);
  chart.K = block_is_curved(ctx.blk[vertex]) ? Rat(-ctx.blk[vertex].poly.leading / 4) : Rat(0);
  return chart;
}

FlatChart multiblock_chart(const SpecContext& ctx) {
  FlatChart chart;
  chart.K = curvature_constant(ctx.spec, ctx.ord);
  std::vector<Piece> pieces;
  for (int v = 0; v < ctx.B(); ++v) {
    Piece piece = block_piece(ctx, v);

    // Step 1: each curved child removes the coordinate at its (simple) label
    for (int child : ctx.ord.children[v]) {
      if (!block_is_curved(ctx.blk[child])) continue;
      int idx = find_descriptor(piece.fns, v, ctx.label[child], 0);
      if (idx < 0) throw std::logic_error("curved child label is not a root of the parent");
      piece.fns.erase(piece.fns.begin() + idx);
      erase_row_col(piece.gram, idx);
    }

    // Step 2: flat children grouped by equal labels modify Y_lambda^{k-1}
    std::vector<std::pair<CRat, std::vector<int>>> groups;
    for (int child : ctx.ord.children[v]) {
      if (block_is_curved(ctx.blk[child])) continue;
      bool found = false;
      for (auto& [lam, kids] : groups)
        if (lam == ctx.label[child]) {
          kids.push_back(child);
          found = true;
        }
      if (!found) groups.push_back({ctx.label[child], {child}});
    }
    for (const auto& [lam, kids] : groups) {
      int k = ctx.blk[v].poly.multiplicity_of(lam);
      if (k < 2) throw std::logic_error("flat child label must be a multiple root");
      int target = find_descriptor(piece.fns, v, lam, k - 1);
      int y0 = find_descriptor(piece.fns, v, lam, 0);
      if (target < 0 || y0 < 0) throw std::logic_error("missing chart functions for a flat child");
      CRat b = piece.gram[y0][target];
      if (b.is_zero()) throw std::logic_error("step-2 coupling constant b vanished");
      piece.fns[target].modified = true;
      piece.fns[target].mod_b = b;
      piece.fns[target].phi_vertices = kids;
    }

    // Step 3: warp scaling on non-root blocks
    if (!ctx.ord.is_root(v))
      for (auto& f : piece.fns) f.warp_scaled = true;

    pieces.push_back(std::move(piece));
  }

  int total = 0;
  for (const auto& p : pieces) total += static_cast<int>(p.fns.size());
  chart.gram.assign(total, std::vector<CRat>(total, CRat()));
  int off = 0;
  for (const auto& p : pieces) {
    int N = static_cast<int>(p.fns.size());
    for (int i = 0; i < N; ++i) {
      chart.fns.push_back(p.fns[i]);
      for (int j = 0; j < N; ++j) chart.gram[off + i][off + j] = p.gram[i][j];
    }
    off += N;
  }
  return chart;
}

namespace {

ChartVerification verify_functions(
    const SpecContext& ctx, const Mat<CRat>& gram, const Rat& K,
    const std::vector<std::function<Jet1<CDbl>(const Blocks<Jet1<CDbl>>&)>>& fns,
    const std::vector<RatPoint>& pts) {
  ChartVerification rep;
  int N = static_cast<int>(fns.size());
  rep.expected_rank = N;
  double Kf = rat_to_double(K);
  bool rank_done = false;
  for (const auto& p : pts) {
    if (!is_regular(ctx, p)) {
      ++rep.points_skipped;
      continue;
    }
    auto x1 = blocks_jets1<CDbl>(p, ctx.ord);
    std::vector<Jet1<CDbl>> Y;
    try {
      for (const auto& f : fns) Y.push_back(f(x1));
    } catch (const std::domain_error&) {
      ++rep.points_skipped;  // caustic
      continue;
    }
    auto gup = metric_diag_contra(ctx, x1);
    for (int i = 0; i < N; ++i)
      for (int j = i; j < N; ++j) {
        CDbl star(0.0);
        for (int s = 0; s < ctx.n(); ++s) star += gup[s].v * Y[i].g[s] * Y[j].g[s];
        CDbl expect = to_cdbl(gram[i][j]) - Kf * Y[i].v * Y[j].v;
        rep.max_residual = std::max(rep.max_residual, std::abs(star - expect));
      }
    if (!rank_done) {
      Mat<CDbl> rows;
      for (int i = 0; i < N; ++i) {
        std::vector<CDbl> row;
        if (K != 0) row.push_back(Y[i].v);  // cone-lifted differential d(r Y) at r = 1
        for (int s = 0; s < ctx.n(); ++s) row.push_back(Y[i].g[s]);
        rows.push_back(std::move(row));
      }
      rep.rank = numeric_rank(std::move(rows));
      rank_done = true;
    }
    ++rep.points_used;
  }
  return rep;
}

}  // namespace

ChartVerification verify_chart(const SpecContext& ctx, const FlatChart& chart,
                               const std::vector<RatPoint>& pts) {
  std::vector<std::function<Jet1<CDbl>(const Blocks<Jet1<CDbl>>&)>> fns;
  for (const auto& f : chart.fns)
    fns.push_back([&ctx, f](const Blocks<Jet1<CDbl>>& x) { return eval_flat_fn(ctx, f, x); });
  return verify_functions(ctx, chart.gram, chart.K, fns, pts);
}

ChartVerification verify_realified(const SpecContext& ctx, const RealifiedChart& chart,
                                   const std::vector<RatPoint>& pts) {
  std::vector<std::function<Jet1<CDbl>(const Blocks<Jet1<CDbl>>&)>> fns;
  int N = static_cast<int>(chart.transform.size());
  for (int a = 0; a < N; ++a)
    fns.push_back([&ctx, &chart, a](const Blocks<Jet1<CDbl>>& x) {
      Jet1<CDbl> acc(CDbl(0.0), ctx.n());
      for (size_t j = 0; j < chart.base.fns.size(); ++j) {
        if (chart.transform[a][j].is_zero()) continue;
        acc += to_cdbl(chart.transform[a][j]) * eval_flat_fn(ctx, chart.base.fns[j], x);
      }
      return acc;
    });
  return verify_functions(ctx, chart.gram, chart.base.K, fns, pts);
}

PhiReport phi_relations_check(const SpecContext& ctx, int vertex,
                              const std::vector<RatPoint>& pts) {
  const BlockSpec& b = ctx.blk[vertex];
  if (block_is_curved(b)) throw std::invalid_argument("phi is defined for flat blocks only");
  Piece piece = block_piece(ctx, vertex);
  PhiReport rep;
  for (const auto& p : pts) {
    if (!is_regular(ctx, p)) continue;
    auto x1 = blocks_jets1<CDbl>(p, ctx.ord);
    Jet1<CDbl> phi;
    std::vector<Jet1<CDbl>> Y;
    try {
      phi = eval_phi(ctx, vertex, x1);
      for (const auto& f : piece.fns) Y.push_back(eval_flat_fn(ctx, f, x1));
    } catch (const std::domain_error&) {
      continue;
    }
    // one-block metric of this vertex only (no warp)
    std::vector<Jet1<CDbl>> glc = g_lc_block(x1[vertex]);
    std::vector<Jet1<CDbl>> gup;
    for (int i = 0; i < b.dim; ++i)
      gup.push_back(ctx.pexp_f[vertex].eval(x1[vertex][i]) * glc[i]);
    auto star = [&](const Jet1<CDbl>& u, const Jet1<CDbl>& v) {
      CDbl acc(0.0);
      for (int i = 0; i < b.dim; ++i) {
        int s = ctx.ord.offset[vertex] + i;
        acc += gup[i].v * u.g[s] * v.g[s];
      }
      return acc;
    };
    for (const auto& y : Y)
      rep.max_dphi_dy = std::max(rep.max_dphi_dy, std::abs(star(phi, y) - y.v));
    rep.max_dphi_dphi = std::max(rep.max_dphi_dphi, std::abs(star(phi, phi) - 2.0 * phi.v));
    ++rep.points_used;
  }
  return rep;
}

RealifiedChart realify(const SpecContext& ctx, const FlatChart& chart,
                       const std::vector<RatPoint>& sample_pts) {
  int N = static_cast<int>(chart.fns.size());
  std::vector<std::vector<CDbl>> samples(N);
  for (const auto& p : sample_pts) {
    if (!is_regular(ctx, p)) continue;
    auto xv = blocks_values<CDbl>(p);
    std::vector<CDbl> row;
    try {
      for (int i = 0; i < N; ++i) row.push_back(eval_flat_fn(ctx, chart.fns[i], xv));
    } catch (const std::domain_error&) {
      continue;
    }
    for (int i = 0; i < N; ++i) samples[i].push_back(row[i]);
  }

  auto scale_of = [&](int i) {
    double s = 1.0;
    for (auto& v : samples[i]) s = std::max(s, std::abs(v));
    return s;
  };
  auto all_real = [&](int i) {
    for (auto& v : samples[i])
      if (std::abs(v.imag()) > 1e-9 * scale_of(i)) return false;
    return true;
  };
  auto all_imag = [&](int i) {
    for (auto& v : samples[i])
      if (std::abs(v.real()) > 1e-9 * scale_of(i)) return false;
    return true;
  };
  auto conj_pair = [&](int i, int j) {
    for (size_t k = 0; k < samples[i].size(); ++k)
      if (std::abs(samples[i][k] - std::conj(samples[j][k])) >
          1e-9 * std::max(scale_of(i), scale_of(j)))
        return false;
    return true;
  };

  RealifiedChart out;
  out.base = chart;
  out.transform.assign(N, std::vector<CRat>(N, CRat()));
  out.kinds.assign(N, "");
  CRat half{rat(1, 2)};
  CRat half_i{rat(0), rat(1, 2)};
  CRat minus_i{rat(0), rat(-1)};
  std::vector<bool> done(N, false);
  int row = 0;
  for (int i = 0; i < N; ++i) {
    if (done[i]) continue;
    if (samples[i].empty() || all_real(i)) {
      out.transform[row][i] = CRat(1);
      out.kinds[row++] = "real";
      done[i] = true;
      continue;
    }
    if (all_imag(i)) {
      out.transform[row][i] = minus_i;  // imaginary part of Y
      out.kinds[row++] = "imaginary-part";
      done[i] = true;
      continue;
    }
    int partner = -1;
    for (int j = i + 1; j < N && partner < 0; ++j)
      if (!done[j] && conj_pair(i, j)) partner = j;
    if (partner >= 0) {
      out.transform[row][i] = half;
      out.transform[row][partner] = half;
      out.kinds[row++] = "pair-re";
      out.transform[row][i] = CRat() - half_i;
      out.transform[row][partner] = half_i;
      out.kinds[row++] = "pair-im";
      done[i] = done[partner] = true;
      continue;
    }
    out.transform[row][i] = CRat(1);
    out.kinds[row++] = "complex";
    done[i] = true;
  }

  out.gram.assign(N, std::vector<CRat>(N, CRat()));
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      CRat acc;
      for (int i = 0; i < N; ++i) {
        if (out.transform[a][i].is_zero()) continue;
        for (int j = 0; j < N; ++j) {
          if (out.transform[b][j].is_zero()) continue;
          acc += out.transform[a][i] * chart.gram[i][j] * out.transform[b][j];
        }
      }
      out.gram[a][b] = acc;
    }
  return out;
}

}  // namespace stackel
