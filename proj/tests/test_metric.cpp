#include <doctest.h>

#include "fixtures.hpp"
#include "stackel/metric.hpp"

using namespace stackel;
using namespace stackel::testing;

TEST_CASE("regularity predicate") {
  SpecContext ctx(flat2_spec());
  CHECK(is_regular(ctx, pt({{0, 3}})));
  CHECK(!is_regular(ctx, pt({{1, 3}})));   // P(x^1) = 0
  CHECK(!is_regular(ctx, pt({{3, 3}})));   // coincident coordinates

  SpecContext chain(chain_spec());
  CHECK(!is_regular(chain, pt({{0}, {2}})));  // warp denominator lambda2 - x^1 = 0
  CHECK(is_regular(chain, pt({{5}, {2}})));
}

TEST_CASE("Levi-Civita block values") {
  std::vector<CRat> x2 = {CRat(0), CRat(3)};
  auto v2 = g_lc_block(x2);
  CHECK(v2[0] == CRat(rat(-1, 3)));
  CHECK(v2[1] == CRat(rat(1, 3)));

  std::vector<CRat> x1 = {CRat(7)};
  CHECK(g_lc_block(x1)[0] == CRat(1));  // empty product

  std::vector<CRat> x3 = {CRat(1), CRat(2), CRat(4)};
  auto v3 = g_lc_block(x3);
  CHECK(v3[0] == CRat(rat(1, 3)));
  CHECK(v3[1] == CRat(rat(-1, 2)));
  CHECK(v3[2] == CRat(rat(1, 6)));
}

TEST_CASE("warp factors") {
  SpecContext chain(chain_spec());
  auto x = blocks_values<CRat>(pt({{5}, {2}}));
  int p1 = chain.ord.pos_of_id(1), p2 = chain.ord.pos_of_id(2);
  CHECK(warp_factor(chain, p1, x) == CRat(1));  // roots have f = 1
  CHECK(warp_factor(chain, p2, x) == CRat(rat(-1, 5)));  // 1/(0-5)

  SpecContext fig(figure_tree_spec());
  // alpha = 4: f = 1/((lambda2 - x^1)(lambda4 - x^2)) with lambda2=0, lambda4=-1
  auto xf = blocks_values<CRat>(pt({{5}, {3}, {7}, {9}}));
  int p4 = fig.ord.pos_of_id(4);
  CRat expected = reciprocal(CRat(0 - 5) * CRat(-1 - 3));
  CHECK(warp_factor(fig, p4, xf) == expected);
}

TEST_CASE("metric diagonal frozen examples") {
  SpecContext ctx(flat2_spec());
  auto g = metric_diag_contra(ctx, blocks_values<CRat>(pt({{0, 3}})));
  CHECK(g[0] == CRat(rat(8, 3)));
  CHECK(g[1] == CRat(rat(-8, 3)));

  SpecContext chain(chain_spec());
  auto gc = metric_diag_contra(chain, blocks_values<CRat>(pt({{5}, {2}})));
  CHECK(gc[0] == CRat(5));            // P1(5) = 5
  CHECK(gc[1] == CRat(rat(-9, 5)));   // (-1/5) * P2(2) = (-1/5) * 9

  ForestSpec triv;
  triv.blocks.push_back(make_block(1, 1, rat(1), {}));
  SpecContext t(std::move(triv));
  CHECK(metric_diag_contra(t, blocks_values<CRat>(pt({{4}})))[0] == CRat(1));
}

TEST_CASE("metric evaluation works on jets and matches plain values") {
  SpecContext ctx(chain_spec());
  RatPoint p = pt({{5}, {2}});
  auto vals = metric_diag_contra(ctx, blocks_values<CRat>(p));
  auto jets = metric_diag_contra(ctx, blocks_jets2<CRat>(p, ctx.ord));
  for (size_t i = 0; i < vals.size(); ++i) CHECK(jets[i].v == vals[i]);
}

TEST_CASE("scaling coherence: scaling a subtree's polynomials scales its entries") {
  // Scaling P_alpha by s forces (condition ii) the polynomials strictly below
  // alpha to scale as well; the alpha-block and all descendant entries then
  // scale by s while warp factors and untouched blocks stay fixed.
  SUBCASE("root scaling propagates through the whole tree") {
    ForestSpec base = figure_tree_spec();
    ForestSpec scaled = base;
    Rat s = rat(7, 2);
    for (auto& b : scaled.blocks) b.poly.leading *= s;
    CHECK(validate(scaled).empty());
    SpecContext c0{ForestSpec(base)}, c1{ForestSpec(scaled)};
    RatPoint p = pt({{5}, {3}, {7}, {9}});
    auto g0 = metric_diag_contra(c0, blocks_values<CRat>(p));
    auto g1 = metric_diag_contra(c1, blocks_values<CRat>(p));
    for (int i = 0; i < 4; ++i) CHECK(g1[i] == CRat(s) * g0[i]);
  }
  SUBCASE("scaling a flat leaf leaves the rest of the metric alone") {
    ForestSpec base = flat_child_chain_spec();
    ForestSpec scaled = base;
    Rat s = rat(-5, 3);
    scaled.blocks[1].poly.leading *= s;  // flat leaf: top slot stays 0
    CHECK(validate(scaled).empty());
    SpecContext c0{ForestSpec(base)}, c1{ForestSpec(scaled)};
    RatPoint p = pt({{0, 3}, {2}});
    auto g0 = metric_diag_contra(c0, blocks_values<CRat>(p));
    auto g1 = metric_diag_contra(c1, blocks_values<CRat>(p));
    CHECK(g1[0] == g0[0]);
    CHECK(g1[1] == g0[1]);
    CHECK(g1[2] == CRat(s) * g0[2]);
  }
}

TEST_CASE("block entries depend only on the block and its ancestors") {
  SpecContext fig(figure_tree_spec());
  RatPoint a = pt({{5}, {3}, {7}, {9}});
  RatPoint b = pt({{5}, {3}, {7}, {11}});  // perturb block 4 (incomparable to 3)
  auto ga = metric_diag_contra(fig, blocks_values<CRat>(a));
  auto gb = metric_diag_contra(fig, blocks_values<CRat>(b));
  CHECK(ga[0] == gb[0]);
  CHECK(ga[1] == gb[1]);
  CHECK(ga[2] == gb[2]);  // vertex 3 entry unchanged
  CHECK(ga[3] != gb[3]);
}

TEST_CASE("cone lift of a curvature-1 spec") {
  // n = 1 circle spec: P = -4 t (t-1)
  ForestSpec circ;
  circ.blocks.push_back(make_block(1, 1, rat(-4), {{CRat(0), 1}, {CRat(1), 1}}));
  SpecContext ctx(std::move(circ));
  auto x = blocks_values<CRat>(ptq({{rat(1, 2)}}));
  auto cov = cone_metric_diag_cov(ctx, CRat(2), x);
  REQUIRE(cov.size() == 2);
  CHECK(cov[0] == CRat(1));
  CHECK(cov[1] == CRat(4));  // 4 * 1/(4*(1/2)*(1/2))

  SpecContext flat(flat2_spec());
  auto xf = blocks_values<CRat>(pt({{0, 3}}));
  CHECK_THROWS_AS(cone_metric_diag_cov(flat, CRat(1), xf), std::invalid_argument);
}
