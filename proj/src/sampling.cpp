#include "stackel/sampling.hpp"

#include <algorithm>
#include <set>

namespace stackel {

Rat random_rat(std::mt19937_64& rng, long num_bound, long den_bound) {
  long num = draw_int(rng, -num_bound, num_bound);
  long den = draw_int(rng, 1, den_bound);
  return rat(num, den);
}

RatPoint random_regular_point(const SpecContext& ctx, std::mt19937_64& rng, int max_tries) {
  for (int t = 0; t < max_tries; ++t) {
    RatPoint p;
    for (int b = 0; b < ctx.B(); ++b) {
      std::vector<CRat> row;
      for (int i = 0; i < ctx.ord.dims[b]; ++i) row.push_back(CRat(random_rat(rng)));
      p.push_back(std::move(row));
    }
    if (is_regular(ctx, p)) return p;
  }
  throw std::runtime_error("failed to sample a regular point");
}

std::vector<Rat> random_momenta(int n, std::mt19937_64& rng) {
  std::vector<Rat> p;
  for (int i = 0; i < n; ++i) p.push_back(random_rat(rng, 9, 5));
  return p;
}

namespace {

// Distinct small rationals, avoiding a given set.
Rat fresh_value(std::mt19937_64& rng, std::set<std::pair<std::string, std::string>>& used) {
  for (;;) {
    Rat v = rat(draw_int(rng, -8, 8), draw_int(rng, 1, 3));
    auto key = std::make_pair(rat_to_string(v), std::string());
    if (used.insert(key).second) return v;
  }
}

}  // namespace

ForestSpec random_spec(std::mt19937_64& rng, int max_dim, int max_blocks) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    int B = static_cast<int>(draw_int(rng, 1, max_blocks));
    // dims >= 1 summing to <= max_dim
    if (B > max_dim) continue;
    std::vector<int> dims(B, 1);
    int budget = max_dim - B;
    for (int v = 0; v < B; ++v) {
      int extra = static_cast<int>(draw_u64(rng, budget + 1));
      dims[v] += extra;
      budget -= extra;
    }

    // parents: earlier vertex or none
    std::vector<int> parent(B, -1);
    for (int v = 1; v < B; ++v) {
      long pick = draw_int(rng, 0, v);  // 0 = root, else vertex pick-1
      parent[v] = pick == 0 ? -1 : static_cast<int>(pick - 1);
    }
    int roots = 0;
    for (int v = 0; v < B; ++v) roots += parent[v] < 0;
    bool multi = roots > 1;

    // curvature choice per vertex: roots decide freely (single component only),
    // non-roots are decided here and drive the parent's root multiplicities
    std::vector<bool> curved(B, false);
    for (int v = 0; v < B; ++v)
      if (parent[v] < 0)
        curved[v] = !multi && draw_u64(rng, 2) == 0;
      else
        curved[v] = draw_u64(rng, 2) == 0;

    // feasibility: children roots fit into the parent polynomial degree
    std::vector<std::vector<int>> children(B);
    for (int v = 1; v < B; ++v)
      if (parent[v] >= 0) children[parent[v]].push_back(v);

    bool ok = true;
    std::vector<FactoredPoly> polys(B);
    std::vector<Rat> labels(B, Rat(0));

    for (int v = 0; v < B && ok; ++v) {
      int degree_cap = curved[v] ? dims[v] + 1 : dims[v];
      // split flat children into label groups (each group needs one double root)
      std::vector<int> flat_kids, curved_kids;
      for (int c : children[v]) (curved[c] ? curved_kids : flat_kids).push_back(c);
      std::vector<std::vector<int>> groups;
      for (int c : flat_kids) {
        if (!groups.empty() && draw_u64(rng, 2) == 0)
          groups[draw_u64(rng, groups.size())].push_back(c);
        else
          groups.push_back({c});
      }
      int need = 2 * static_cast<int>(groups.size()) + static_cast<int>(curved_kids.size());
      if (need > degree_cap) {
        ok = false;
        break;
      }

      std::set<std::pair<std::string, std::string>> used;
      std::vector<std::pair<CRat, int>> roots_list;
      for (const auto& grp : groups) {
        Rat lam = fresh_value(rng, used);
        roots_list.push_back({CRat(lam), 2});
        for (int c : grp) labels[c] = lam;
      }
      for (int c : curved_kids) {
        Rat lam = fresh_value(rng, used);
        roots_list.push_back({CRat(lam), 1});
        labels[c] = lam;
      }
      int deg_now = need;
      int extra_max = degree_cap - deg_now;
      int extra = curved[v] ? extra_max : static_cast<int>(draw_u64(rng, extra_max + 1));
      for (int e = 0; e < extra; ++e) roots_list.push_back({CRat(fresh_value(rng, used)), 1});

      Rat leading;
      if (parent[v] < 0) {
        leading = Rat(0);
        while (leading == 0) leading = rat(draw_int(rng, -4, 4), draw_int(rng, 1, 2));
      } else {
        // slot condition: leading of a curved child equals P'_parent(lambda),
        // flat children have top slot zero automatically (deg <= dim)
        Poly<CRat> par = polys[parent[v]].expand();
        CRat deriv = par.derivative().eval(CRat(labels[v]));
        if (curved[v]) {
          if (deriv.is_zero() || !deriv.is_real()) {
            ok = false;
            break;
          }
          leading = deriv.re;
        } else {
          leading = Rat(0);
          while (leading == 0) leading = rat(draw_int(rng, -4, 4), draw_int(rng, 1, 2));
        }
      }
      polys[v] = FactoredPoly{leading, std::move(roots_list)};
    }
    if (!ok) continue;

    ForestSpec spec;
    for (int v = 0; v < B; ++v) {
      BlockSpec b;
      b.id = v + 1;
      b.dim = dims[v];
      b.poly = polys[v];
      if (parent[v] >= 0) {
        b.parent = parent[v] + 1;
        b.label = labels[v];
      }
      spec.blocks.push_back(std::move(b));
    }
    if (validate(spec).empty()) return spec;
  }
  throw std::runtime_error("random_spec failed to produce a valid spec");
}

}  // namespace stackel
