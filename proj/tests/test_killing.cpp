#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "stackel/killing.hpp"

using namespace stackel;
using namespace stackel::testing;

namespace {

RatPoint random_regular_point(const SpecContext& ctx, std::mt19937_64& rng) {
  auto rnd = [&]() { return rat(static_cast<long>(rng() % 41) - 20, 1 + static_cast<long>(rng() % 9)); };
  for (int tries = 0; tries < 500; ++tries) {
    RatPoint p;
    for (int b = 0; b < ctx.B(); ++b) {
      std::vector<CRat> row;
      for (int i = 0; i < ctx.ord.dims[b]; ++i) row.push_back(CRat(rnd()));
      p.push_back(row);
    }
    if (is_regular(ctx, p)) return p;
  }
  throw std::runtime_error("no regular point found");
}

std::vector<Rat> random_momenta(int n, std::mt19937_64& rng) {
  std::vector<Rat> p;
  for (int i = 0; i < n; ++i) p.push_back(rat(static_cast<long>(rng() % 19) - 9, 1 + static_cast<long>(rng() % 5)));
  return p;
}

}  // namespace

TEST_CASE("compatible L block structure") {
  SpecContext chain(chain_spec());
  CompatibleL L = compatible_L(chain);
  auto x = blocks_values<CRat>(pt({{5}, {2}}));
  auto Lv = compatible_L_values(chain.ord, L, x);
  CHECK(Lv[0] == CRat(5));  // root block: the coordinate itself
  CHECK(Lv[1] == CRat(0));  // child block: the label lambda2 = 0

  SpecContext one(flat2_spec());
  auto Lo = compatible_L_values(one.ord, compatible_L(one), blocks_values<CRat>(pt({{0, 3}})));
  CHECK(Lo[0] == CRat(0));
  CHECK(Lo[1] == CRat(3));

  SpecContext two(euclid2_spec());
  auto Lt = compatible_L_values(two.ord, compatible_L(two), blocks_values<CRat>(pt({{2}, {5}})));
  CHECK(Lt[0] == CRat(1));  // distinct constants per component
  CHECK(Lt[1] == CRat(2));

  SpecContext fig(figure_tree_spec());
  auto Lf = compatible_L_values(fig.ord, compatible_L(fig), blocks_values<CRat>(pt({{5}, {3}, {8}, {9}})));
  // all non-root blocks take the label of the child-of-root on their path (vertex 2)
  CHECK(Lf[0] == CRat(5));
  CHECK(Lf[1] == CRat(0));
  CHECK(Lf[2] == CRat(0));
  CHECK(Lf[3] == CRat(0));
}

TEST_CASE("compatible L satisfies the Sinjukov equation exactly") {
  std::mt19937_64 rng(17);
  for (int which = 0; which < 4; ++which) {
    SpecContext ctx(which == 0   ? chain_spec()
                    : which == 1 ? figure_tree_spec()
                    : which == 2 ? euclid2_spec()
                                 : chain5_spec());
    RatPoint p = random_regular_point(ctx, rng);
    auto st = sinjukov_residual<CRat>(ctx, p, compatible_L_fn<CRat>(ctx));
    CHECK(st.exact_zero);
  }
}

TEST_CASE("benenti family frozen values") {
  std::vector<CRat> L = {CRat(1), CRat(2)};
  auto s0 = benenti_S(L, CRat(0));
  CHECK(s0[0] == CRat(-2));
  CHECK(s0[1] == CRat(-1));
  auto s1 = benenti_S(L, CRat(1));  // t equal to an eigenvalue stays finite
  CHECK(s1[0] == CRat(-1));
  CHECK(s1[1] == CRat(0));
  std::vector<CRat> single = {CRat(7)};
  CHECK(benenti_S(single, CRat(42))[0] == CRat(1));  // empty product
}

TEST_CASE("benenti family of the compatible L reproduces the one-block family") {
  SpecContext ctx(flat2_spec());
  RatPoint p = pt({{0, 3}});
  auto x = blocks_values<CRat>(p);
  auto Lv = compatible_L_values(ctx.ord, compatible_L(ctx), x);
  for (long t = -2; t <= 2; ++t) {
    auto ben = benenti_S(Lv, CRat(t));
    auto fam = killing_S_diag(ctx, 0, CRat(t), x);  // f = 1 for a root block
    CHECK(ben == fam);
  }
}

TEST_CASE("phi polynomial") {
  SpecContext chain(chain_spec());
  auto x = blocks_values<CRat>(pt({{5}, {2}}));
  int a = chain.ord.pos_of_id(1), b = chain.ord.pos_of_id(2);
  // n_alpha = 1: phi = (1/f_alpha) for all t; here alpha is the root so 1/f = 1
  CHECK(phi_polynomial(chain, a, b, CRat(9), x) == CRat(1));
  CHECK(phi_polynomial(chain, a, b, CRat(0), x) == CRat(1));  // t = lambda stays regular
  CHECK_THROWS_AS(phi_polynomial(chain, b, a, CRat(0), x), std::invalid_argument);

  // confluent value at t = lambda equals chi'(lambda)/f
  SpecContext c5(chain5_spec());
  auto x5 = blocks_values<CRat>(pt({{1, 6, 10}, {8, 12}}));
  int r = c5.ord.pos_of_id(1), c = c5.ord.pos_of_id(2);
  CRat lam(2);
  Poly<CRat> chi = char_poly<CRat>(x5[r]);
  CRat expect = chi.derivative().eval(lam);  // f_root = 1
  CHECK(phi_polynomial(c5, r, c, lam, x5) == expect);

  // degree in t is exactly n_alpha - 1 = 2: the second difference is nonzero,
  // the third vanishes
  CRat f0 = phi_polynomial(c5, r, c, CRat(0), x5);
  CRat f1 = phi_polynomial(c5, r, c, CRat(1), x5);
  CRat f2 = phi_polynomial(c5, r, c, CRat(2), x5);
  CRat f3 = phi_polynomial(c5, r, c, CRat(3), x5);
  CRat second = f2 - CRat(2) * f1 + f0;
  CHECK(!second.is_zero());
  CRat third = f3 - CRat(3) * f2 + CRat(3) * f1 - f0;
  CHECK(third.is_zero());
}

TEST_CASE("killing family vanishes on incomparable blocks") {
  SpecContext fig(figure_tree_spec());
  auto x = blocks_values<CRat>(pt({{5}, {3}, {8}, {9}}));
  int p3 = fig.ord.pos_of_id(3);
  auto S3 = killing_S_diag(fig, p3, CRat(4), x);
  CHECK(S3[0].is_zero());  // vertex 1 (ancestor)
  CHECK(S3[1].is_zero());  // vertex 2 (ancestor)
  CHECK(!S3[2].is_zero()); // vertex 3 itself
  CHECK(S3[3].is_zero());  // vertex 4 (incomparable)
}

TEST_CASE("family tensors are Killing tensors, exactly") {
  std::mt19937_64 rng(23);
  for (int which = 0; which < 3; ++which) {
    SpecContext ctx(which == 0 ? figure_tree_spec() : which == 1 ? chain5_spec() : sphere2_spec());
    RatPoint p = random_regular_point(ctx, rng);
    for (int alpha = 0; alpha < ctx.B(); ++alpha) {
      for (int k = 0; k < 5; ++k) {
        CRat t{rat(static_cast<long>(rng() % 21) - 10, 1 + static_cast<long>(rng() % 4))};
        std::function<std::vector<Jet1<CRat>>(const Blocks<Jet1<CRat>>&)> K_eval =
            [&](const Blocks<Jet1<CRat>>& xx) { return killing_K_cov(ctx, alpha, t, xx); };
        auto st = killing_residual<CRat>(ctx, p, K_eval);
        CHECK(st.exact_zero);
      }
    }
  }
}

TEST_CASE("family integrals at distinct t span the block family (Vandermonde rank)") {
  SpecContext ctx(chain5_spec());
  std::mt19937_64 rng(29);
  RatPoint p = random_regular_point(ctx, rng);
  auto x1 = blocks_jets1<CRat>(p, ctx.ord);
  Mat<CRat> rows;
  for (long t = 0; t < 3; ++t) {
    auto A = family_integral_coeffs(ctx, 0, CRat(t), x1);
    std::vector<CRat> row;
    for (auto& a : A) row.push_back(a.v);
    rows.push_back(row);
  }
  CHECK(matrix_rank(rows) == 3);
}

TEST_CASE("first extracted integral of a one-block spec is the Hamiltonian times two") {
  SpecContext ctx(flat2_spec());
  std::mt19937_64 rng(31);
  RatPoint p = random_regular_point(ctx, rng);
  auto x1 = blocks_jets1<CRat>(p, ctx.ord);
  std::vector<CRat> mom = {CRat(rat(1, 2)), CRat(3)};
  auto ints = extracted_integrals<CRat>(ctx);
  REQUIRE(ints.size() == 2);
  CRat I1 = integral_value(ints[0], x1, mom);
  auto gup = metric_diag_contra(ctx, blocks_values<CRat>(p));
  CRat expect = gup[0] * mom[0] * mom[0] + gup[1] * mom[1] * mom[1];
  CHECK(I1 == expect);
}

TEST_CASE("Poisson brackets vanish exactly") {
  std::mt19937_64 rng(37);
  for (int which = 0; which < 3; ++which) {
    SpecContext ctx(which == 0 ? figure_tree_spec() : which == 1 ? chain5_spec() : flat2_spec());
    RatPoint p = random_regular_point(ctx, rng);
    auto x1 = blocks_jets1<CRat>(p, ctx.ord);
    std::vector<CRat> mom;
    for (const auto& q : random_momenta(ctx.n(), rng)) mom.push_back(CRat(q));

    for (int a = 0; a < ctx.B(); ++a)
      for (int b = a; b < ctx.B(); ++b) {
        CRat t{rat(static_cast<long>(rng() % 15) - 7, 1 + static_cast<long>(rng() % 3))};
        CRat s{rat(static_cast<long>(rng() % 15) - 7, 1 + static_cast<long>(rng() % 3))};
        auto Ia = family_integral(ctx, a, t);
        auto Ib = family_integral(ctx, b, s);
        CHECK(poisson_bracket(Ia, Ib, x1, mom).is_zero());
      }

    const SpecContext* cp = &ctx;
    Integral2<CRat> H{[cp](const Blocks<Jet1<CRat>>& xx) {
      return std::make_pair(metric_diag_contra(*cp, xx), Jet1<CRat>(CRat(), cp->n()));
    }};
    auto Ia = family_integral(ctx, 0, CRat(rat(5, 3)));
    CHECK(poisson_bracket(Ia, H, x1, mom).is_zero());

    auto ints = extracted_integrals<CRat>(ctx);
    for (size_t a = 0; a < ints.size(); ++a)
      for (size_t b = a + 1; b < ints.size(); ++b)
        CHECK(poisson_bracket(ints[a], ints[b], x1, mom).is_zero());
  }
}

TEST_CASE("Stackel matrix of a one-block spec") {
  SpecContext ctx(flat2_spec());
  RatPoint p = pt({{0, 3}});
  auto M = stackel_matrix(ctx, blocks_values<CRat>(p));
  CRat P0 = ctx.pexp[0].eval(CRat(0));  // -8
  CRat P3 = ctx.pexp[0].eval(CRat(3));  // -8
  CHECK(M[0][0] == CRat(0) / P0);
  CHECK(M[0][1] == reciprocal(P0));
  CHECK(M[1][0] == CRat(3) / P3);
  CHECK(M[1][1] == reciprocal(P3));
}

TEST_CASE("5x5 Stackel matrix matches the displayed product form entrywise") {
  SpecContext ctx(chain5_spec());
  RatPoint p = ptq({{rat(1), rat(13, 2), rat(10)}, {rat(8), rat(12)}});
  auto xv = blocks_values<CRat>(p);
  auto M = stackel_matrix(ctx, xv);
  CRat lam(2);
  std::vector<CRat> xs = {xv[0][0], xv[0][1], xv[0][2], xv[1][0], xv[1][1]};
  const Poly<CRat>& P1 = ctx.pexp[0];
  const Poly<CRat>& P2 = ctx.pexp[1];
  for (int i = 0; i < 3; ++i) {
    CRat invP = reciprocal(P1.eval(xs[i]));
    CHECK(M[i][0] == xs[i] * xs[i] * invP);
    CHECK(M[i][1] == xs[i] * invP);
    CHECK(M[i][2] == invP);
    CHECK(M[i][3] == reciprocal(P1.eval(xs[i]) * (xs[i] - lam)));
    CHECK(M[i][4].is_zero());
  }
  for (int i = 3; i < 5; ++i) {
    CRat invP = reciprocal(P2.eval(xs[i]));
    CHECK(M[i][0].is_zero());
    CHECK(M[i][1].is_zero());
    CHECK(M[i][2].is_zero());
    CHECK(M[i][3] == xs[i] * invP);
    CHECK(M[i][4] == invP);
  }
  CHECK(!determinant(M).is_zero());
}

TEST_CASE("Stackel relation S I = P holds exactly; wrong ordering breaks it") {
  std::mt19937_64 rng(41);
  for (int which = 0; which < 3; ++which) {
    SpecContext ctx(which == 0 ? flat2_spec() : which == 1 ? chain5_spec() : figure_tree_spec());
    RatPoint p = random_regular_point(ctx, rng);
    std::vector<Rat> mom = random_momenta(ctx.n(), rng);
    auto st = stackel_residual<CRat>(ctx, p, mom);
    CHECK(st.exact_zero);
  }

  SpecContext ctx(flat2_spec());
  RatPoint p = pt({{-1, 5}});  // generic point: P(-1) != P(5)
  auto xv = blocks_values<CRat>(p);
  auto x1 = blocks_jets1<CRat>(p, ctx.ord);
  auto M = stackel_matrix(ctx, xv);
  auto ints = extracted_integrals<CRat>(ctx);
  std::vector<CRat> momc = {CRat(1), CRat(2)};
  std::vector<CRat> I = {integral_value(ints[1], x1, momc), integral_value(ints[0], x1, momc)};
  bool all_match = true;
  for (int r = 0; r < 2; ++r) {
    CRat acc;
    for (int c = 0; c < 2; ++c) acc += M[r][c] * I[c];
    all_match = all_match && (acc == momc[r] * momc[r]);
  }
  CHECK(!all_match);
}

TEST_CASE("separable potentials") {
  SpecContext ctx(flat2_spec());
  std::mt19937_64 rng(43);
  RatPoint p = random_regular_point(ctx, rng);
  auto x1 = blocks_jets1<CRat>(p, ctx.ord);
  std::vector<CRat> mom = {CRat(rat(2, 3)), CRat(rat(-1, 2))};

  SUBCASE("zero potentials change nothing") {
    std::vector<Poly<CRat>> fs(2);
    CHECK(separable_potential_value<CRat>(ctx, fs, p).is_zero());
    auto I0 = modified_integral<CRat>(ctx, fs, 0);
    auto ints = extracted_integrals<CRat>(ctx);
    CHECK(integral_value(I0, x1, mom) == integral_value(ints[0], x1, mom));
  }

  SUBCASE("linear potentials keep the integrals in involution") {
    std::vector<Poly<CRat>> fs(2);
    fs[0].c = {CRat(0), CRat(1)};  // f_1(x) = x
    fs[1].c = {CRat(0), CRat(1)};
    auto I0 = modified_integral<CRat>(ctx, fs, 0);
    auto I1 = modified_integral<CRat>(ctx, fs, 1);
    CHECK(poisson_bracket(I0, I1, x1, mom).is_zero());

    // the Hamiltonian component carries the potential: I_1 = sum g^{ii} p_i^2 + U
    CRat U = separable_potential_value<CRat>(ctx, fs, p);
    auto gup = metric_diag_contra(ctx, blocks_values<CRat>(p));
    CRat expect = gup[0] * mom[0] * mom[0] + gup[1] * mom[1] * mom[1] + U;
    CHECK(integral_value(I0, x1, mom) == expect);
  }
}

TEST_CASE("Hamilton-Jacobi quadrature") {
  SpecContext ctx(euclid2_spec());
  std::vector<double> c0(2, 0.0);
  CHECK(hj_quadrature(ctx, 0, 0.0, 2.0, c0) == doctest::Approx(0.0));

  std::vector<double> c1 = {1.0, 0.0};  // S row = (1, 0): integrand 1
  CHECK(hj_quadrature(ctx, 0, 0.0, 2.0, c1) == doctest::Approx(2.0).epsilon(1e-12));

  // derivative of W matches the integrand (fundamental theorem, FD check)
  // P < 0 on [4,5], so negative constants give a positive integrand
  SpecContext f2(flat2_spec());
  std::vector<double> c = {-3.0, -1.0};
  auto integrand = [&](double xi) {
    auto row = stackel_row(f2, 0, xi);
    return std::sqrt(row[0] * c[0] + row[1] * c[1]);
  };
  double a = 4.0, b0 = 5.0, h = 1e-6;
  double W1 = hj_quadrature(f2, 0, a, b0 + h, c);
  double W2 = hj_quadrature(f2, 0, a, b0 - h, c);
  CHECK(std::abs((W1 - W2) / (2 * h) - integrand(b0)) < 1e-8);

  std::vector<double> cneg = {3.0, 1.0};
  CHECK_THROWS_AS(hj_quadrature(f2, 0, 4.0, 5.0, cneg), std::domain_error);
}

TEST_CASE("linear-ansatz solution space for compatible L has the expected dimension") {
  std::mt19937_64 rng(47);
  auto dim_for = [&](ForestSpec spec) {
    SpecContext ctx(std::move(spec));
    std::vector<RatPoint> pts;
    for (int k = 0; k < 3; ++k) pts.push_back(random_regular_point(ctx, rng));
    return compatible_L_solution_dim(ctx, pts);
  };
  CHECK(dim_for(flat2_spec()) == 2);        // connected: A L + C Id
  CHECK(dim_for(chain_spec()) == 2);
  CHECK(dim_for(figure_tree_spec()) == 2);
  CHECK(dim_for(chain5_spec()) == 2);
  CHECK(dim_for(euclid2_spec()) == 2);      // two components: C_1, C_2

  ForestSpec three;  // three isolated blocks -> 3 parameters
  three.blocks.push_back(make_block(1, 1, rat(1), {}));
  three.blocks.push_back(make_block(2, 1, rat(2), {}));
  three.blocks.push_back(make_block(3, 2, rat(1), {{CRat(5), 1}}));
  CHECK(dim_for(std::move(three)) == 3);
}
