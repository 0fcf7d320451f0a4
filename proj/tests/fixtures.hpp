#pragma once

#include "stackel/metric.hpp"

namespace stackel::testing {

inline BlockSpec make_block(int id, int dim, const Rat& leading,
                            std::vector<std::pair<CRat, int>> roots,
                            std::optional<int> parent = std::nullopt,
                            std::optional<Rat> label = std::nullopt) {
  BlockSpec b;
  b.id = id;
  b.dim = dim;
  b.poly = FactoredPoly{leading, std::move(roots)};
  b.parent = parent;
  b.label = label;
  return b;
}

/// One block, n=2, P = -4(t-1)(t-2): flat single-block workhorse.
inline ForestSpec flat2_spec() {
  ForestSpec s;
  s.blocks.push_back(make_block(1, 2, rat(-4), {{CRat(1), 1}, {CRat(2), 1}}));
  return s;
}

/// One block, n=2, P = -4(t-1)(t-2)(t-3): curvature 1.
inline ForestSpec sphere2_spec() {
  ForestSpec s;
  s.blocks.push_back(make_block(1, 2, rat(-4), {{CRat(1), 1}, {CRat(2), 1}, {CRat(3), 1}}));
  return s;
}

/// Chain 1 <- 2 with n1 = 1, P1 = t, lambda2 = 0,
/// P2 = (t-2-3i)(t-2+3i) = t^2 - 4t + 13, so P2(2) = 9.
inline ForestSpec chain_spec() {
  ForestSpec s;
  s.blocks.push_back(make_block(1, 1, rat(1), {{CRat(0), 1}}));
  s.blocks.push_back(make_block(2, 1, rat(1),
                                {{CRat(rat(2), rat(3)), 1}, {CRat(rat(2), rat(-3)), 1}}, 1, rat(0)));
  return s;
}

/// Two isolated 1-dim roots with P = 1: the Euclidean plane.
inline ForestSpec euclid2_spec() {
  ForestSpec s;
  s.blocks.push_back(make_block(1, 1, rat(1), {}));
  s.blocks.push_back(make_block(2, 1, rat(1), {}));
  return s;
}

/// The four-vertex in-tree 1 <- 2, 2 <- 3, 2 <- 4 (all dims 1).
inline ForestSpec figure_tree_spec() {
  ForestSpec s;
  s.blocks.push_back(make_block(1, 1, rat(1), {{CRat(0), 1}}));                        // P1 = t
  s.blocks.push_back(make_block(2, 1, rat(1), {{CRat(1), 1}, {CRat(-1), 1}}, 1, rat(0)));  // P2 = t^2-1
  s.blocks.push_back(make_block(3, 1, rat(2), {{CRat(5), 1}, {CRat(7), 1}}, 2, rat(1)));   // 2(t-5)(t-7)
  s.blocks.push_back(make_block(4, 1, rat(-2), {{CRat(3), 1}, {CRat(4), 1}}, 2, rat(-1))); // -2(t-3)(t-4)
  return s;
}

/// Chain 1 <- 2 with a flat child: lambda2 = 1 is a double root of P1.
/// n1 = 2, P1 = -4(t-1)^2 (deg 2 = n1, flat), n2 = 1, P2 = 3(t-6) (flat, slot 0).
inline ForestSpec flat_child_chain_spec() {
  ForestSpec s;
  s.blocks.push_back(make_block(1, 2, rat(-4), {{CRat(1), 2}}));
  s.blocks.push_back(make_block(2, 1, rat(3), {{CRat(6), 1}}, 1, rat(1)));
  return s;
}

/// Chain 1 <- 2 with a curved child: lambda2 = 1 simple root of curved P1.
/// n1 = 1, P1 = -4(t-1)(t-2) (deg 2 = n1+1, K = 1), n2 = 1,
/// P2 = P1'(1) (t - mu)(t - nu) with P1'(1) = 4.
inline ForestSpec curved_child_chain_spec() {
  ForestSpec s;
  s.blocks.push_back(make_block(1, 1, rat(-4), {{CRat(1), 1}, {CRat(2), 1}}));
  s.blocks.push_back(make_block(2, 1, rat(4), {{CRat(5), 1}, {CRat(8), 1}}, 1, rat(1)));
  return s;
}

/// F = 1 <- 2 with n1 = 3, n2 = 2: the 5x5 Stackel example shape.
/// lambda2 = 2 simple root of P1 = -4(t-2)(t-3)(t-4)(t-5), slot a2_3 = P1'(2) = 24.
inline ForestSpec chain5_spec() {
  ForestSpec s;
  s.blocks.push_back(make_block(1, 3, rat(-4),
                                {{CRat(2), 1}, {CRat(3), 1}, {CRat(4), 1}, {CRat(5), 1}}));
  s.blocks.push_back(make_block(2, 2, rat(24), {{CRat(7), 1}, {CRat(9), 1}, {CRat(11), 1}}, 1, rat(2)));
  return s;
}

inline RatPoint pt(std::vector<std::vector<long>> vals) {
  RatPoint p;
  for (auto& blk : vals) {
    std::vector<CRat> row;
    for (long v : blk) row.push_back(CRat(v));
    p.push_back(std::move(row));
  }
  return p;
}

inline RatPoint ptq(std::vector<std::vector<Rat>> vals) {
  RatPoint p;
  for (auto& blk : vals) {
    std::vector<CRat> row;
    for (const Rat& v : blk) row.push_back(CRat(v));
    p.push_back(std::move(row));
  }
  return p;
}

}  // namespace stackel::testing
