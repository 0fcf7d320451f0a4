#include <doctest.h>

#include <random>

#include "stackel/jets.hpp"
#include "stackel/poly.hpp"

using namespace stackel;

TEST_CASE("rational parsing and roots") {
  CHECK(rat_from_string("3/4") == rat(3, 4));
  CHECK(rat_from_string("-12/8") == rat(-3, 2));
  CHECK(rat_from_string("7") == rat(7));
  CHECK_THROWS_AS(rat_from_string("x"), std::invalid_argument);

  CHECK(*rat_kth_root(rat(8, 27), 3) == rat(2, 3));
  CHECK(*rat_kth_root(rat(-8), 3) == rat(-2));
  CHECK(*rat_kth_root(rat(9, 4), 2) == rat(3, 2));
  CHECK(!rat_kth_root(rat(-9), 2).has_value());
  CHECK(!rat_kth_root(rat(2), 2).has_value());
}

TEST_CASE("complex rational field ops") {
  CRat i(rat(0), rat(1));
  CHECK(i * i == CRat(rat(-1)));
  CRat z(rat(1, 2), rat(-3));
  CHECK(z * reciprocal(z) == CRat(1));
  CHECK((z + z.conj()).is_real());
}

TEST_CASE("expand factored polynomials") {
  // leading -4, roots {1,2} -> -4t^2 + 12t - 8
  FactoredPoly f = fpoly(rat(-4), {{CRat(1), 1}, {CRat(2), 1}});
  Poly<CRat> p = f.expand();
  CHECK(p.degree() == 2);
  CHECK(p.coeff(0) == CRat(rat(-8)));
  CHECK(p.coeff(1) == CRat(rat(12)));
  CHECK(p.coeff(2) == CRat(rat(-4)));

  FactoredPoly c = fpoly(rat(1), {});
  CHECK(c.expand().degree() == 0);
  CHECK(c.expand().coeff(0) == CRat(1));

  FactoredPoly cube = fpoly(rat(1), {{CRat(0), 3}});
  CHECK(cube.expand().degree() == 3);
  CHECK(cube.expand().coeff(3) == CRat(1));
  CHECK(cube.expand().coeff(0) == CRat(0));
}

TEST_CASE("exact root evaluation after expansion") {
  FactoredPoly f = fpoly(rat(3, 7), {{CRat(rat(2, 5)), 2}, {CRat(rat(-1, 3)), 1}, {CRat(rat(1), rat(2)), 1}, {CRat(rat(1), rat(-2)), 1}});
  Poly<CRat> p = f.expand();
  for (const auto& [r, m] : f.roots) CHECK(p.eval(r).is_zero());
}

TEST_CASE("eval and derivative") {
  Poly<CRat> sq;
  sq.c = {CRat(0), CRat(0), CRat(1)};
  CHECK(sq.eval(CRat(3)) == CRat(9));

  FactoredPoly f = fpoly(rat(-4), {{CRat(1), 1}, {CRat(2), 1}});
  Poly<CRat> d = f.expand().derivative();
  CHECK(d.eval(CRat(1)) == CRat(4));
}

TEST_CASE("derivative satisfies the Leibniz rule on random polynomials") {
  std::mt19937_64 rng(7);
  auto rand_poly = [&](int deg) {
    Poly<CRat> p;
    for (int k = 0; k <= deg; ++k)
      p.c.push_back(CRat(rat(static_cast<long>(rng() % 21) - 10, 1 + static_cast<long>(rng() % 5))));
    p.trim();
    return p;
  };
  for (int trial = 0; trial < 30; ++trial) {
    Poly<CRat> p = rand_poly(static_cast<int>(rng() % 4));
    Poly<CRat> q = rand_poly(static_cast<int>(rng() % 4));
    Poly<CRat> lhs = (p * q).derivative();
    Poly<CRat> rhs = p.derivative() * q + p * q.derivative();
    CHECK(lhs == rhs);
  }
}

TEST_CASE("char_poly") {
  Poly<CRat> p = char_poly<CRat>({CRat(1), CRat(2)});
  CHECK(p.coeff(0) == CRat(2));
  CHECK(p.coeff(1) == CRat(rat(-3)));
  CHECK(p.coeff(2) == CRat(1));

  CHECK(char_poly<CRat>({}).degree() == 0);
  CHECK(char_poly<CRat>({}).coeff(0) == CRat(1));

  Poly<CRat> z = char_poly<CRat>({CRat(0), CRat(0)});
  CHECK(z.coeff(2) == CRat(1));
  CHECK(z.coeff(1) == CRat(0));
  CHECK(z.coeff(0) == CRat(0));
}

TEST_CASE("taylor coefficients by synthetic division") {
  // p = (t-2)^3: taylor at 2 -> {0,0,0,1}
  FactoredPoly f = fpoly(rat(1), {{CRat(2), 3}});
  Poly<CRat> p = f.expand();
  CHECK(p.taylor_coeff(CRat(2), 0) == CRat(0));
  CHECK(p.taylor_coeff(CRat(2), 2) == CRat(0));
  CHECK(p.taylor_coeff(CRat(2), 3) == CRat(1));
  // generic: p(t) = 1 + t + t^2 at 1: value 3, first derivative 3, half second derivative 1
  Poly<CRat> q;
  q.c = {CRat(1), CRat(1), CRat(1)};
  CHECK(q.taylor_coeff(CRat(1), 0) == CRat(3));
  CHECK(q.taylor_coeff(CRat(1), 1) == CRat(3));
  CHECK(q.taylor_coeff(CRat(1), 2) == CRat(1));
}
