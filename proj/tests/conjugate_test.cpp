#include <gtest/gtest.h>

#include "pijet/conjugate.hpp"

using namespace pijet;

namespace {

TEST(Conjugate, Order1ClosedForms) {
  auto R = make_jet_ring(Tower::make(PadicConfig{5, 8, 1}), {"x"}, 1,
                         Flavor::delta_p);
  // d = d/dx
  std::vector<JetPoly> dx{JetPoly::one(R)};
  auto sys = build_conjugates_order1(R, dx);
  JetPoly x = JetPoly::variable(R, 0, 0);
  JetPoly dxv = JetPoly::variable(R, 0, 1);

  // d_1 x = 0, d_1 dx = phi(1) = 1
  EXPECT_TRUE(conjugate_apply(sys, 1, x).is_zero());
  EXPECT_TRUE(eq(conjugate_apply(sys, 1, dxv), JetPoly::one(R)));
  // d_0 x = 1, d_0 dx = -x^{p-1}
  EXPECT_TRUE(eq(conjugate_apply(sys, 0, x), JetPoly::one(R)));
  EXPECT_TRUE(eq(conjugate_apply(sys, 0, dxv), -x.pow(4)));
}

TEST(Conjugate, TriangularSolveMatchesClosedFormsOrder1) {
  auto R = make_jet_ring(Tower::make(PadicConfig{5, 8, 1}), {"x", "y"}, 1,
                         Flavor::delta_p);
  std::mt19937_64 rng(3);
  // a generic polynomial derivation on the base variables
  auto R0 = R;
  std::vector<JetPoly> d{random_jet_poly(R0, rng, 2, 2, 0),
                         random_jet_poly(R0, rng, 2, 2, 0)};
  auto closed = build_conjugates_order1(R, d);
  auto solved = build_conjugates(R, d);
  for (int j = 0; j <= 1; ++j)
    for (int s = 0; s < R->nslots(); ++s)
      EXPECT_TRUE(eq(closed.value[j][s], solved.value[j][s]))
          << "j=" << j << " slot=" << s;
}

TEST(Conjugate, DefiningRelations) {
  // d_j phi^s = 0 (j != s), d_j phi^j = p^j phi^j d on order-0 elements
  for (int r : {1, 2}) {
    auto R = make_jet_ring(Tower::make(PadicConfig{5, 6, 1}), {"x"}, r,
                           Flavor::delta_p);
    std::mt19937_64 rng(7);
    std::vector<JetPoly> d{random_jet_poly(R, rng, 2, 2, 0)};
    auto sys = build_conjugates(R, d);
    for (int trial = 0; trial < 5; ++trial) {
      JetPoly f = random_jet_poly(R, rng, 3, 2, 0);  // order-0 polynomial
      // d f by the chain rule through order-0 slots
      JetPoly df(R);
      for (size_t v = 0; v < R->vars.size(); ++v)
        df = df + f.partial(R->slot((int)v, 0)) * d[v];
      std::vector<JetPoly> phif(r + 1), phidf(r + 1);
      phif[0] = f;
      phidf[0] = df;
      for (int s = 1; s <= r; ++s) {
        phif[s] = phi_jet(phif[s - 1]);
        phidf[s] = phi_jet(phidf[s - 1]);
      }
      for (int j = 0; j <= r; ++j)
        for (int s = 0; s <= r; ++s) {
          JetPoly lhs = conjugate_apply(sys, j, phif[s]);
          if (j != s) {
            EXPECT_TRUE(lhs.is_zero()) << "r=" << r << " j=" << j << " s=" << s;
          } else {
            JetPoly rhs = phidf[j].scaled(R->tower.from_ll(5).pow((u64)j));
            EXPECT_TRUE(eq(lhs, rhs)) << "r=" << r << " j=" << j;
          }
        }
    }
  }
}

TEST(Conjugate, Order2SolveIsIntegral) {
  auto R = make_jet_ring(Tower::make(PadicConfig{5, 8, 1}), {"x"}, 2,
                         Flavor::delta_p);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<JetPoly> d{random_jet_poly(R, rng, 2, 3, 0)};
    auto sys = build_conjugates(R, d);  // throws integrality_error on failure
    JetPoly f = random_jet_poly(R, rng, 4, 2);
    for (int j = 0; j <= 2; ++j) {
      JetPoly out = conjugate_apply(sys, j, f);
      EXPECT_TRUE(out.is_integral());
    }
  }
}

TEST(Conjugate, IsADerivation) {
  auto R = make_jet_ring(Tower::make(PadicConfig{5, 8, 1}), {"x"}, 2,
                         Flavor::delta_p);
  std::mt19937_64 rng(13);
  std::vector<JetPoly> d{random_jet_poly(R, rng, 2, 2, 0)};
  auto sys = build_conjugates(R, d);
  JetPoly a = random_jet_poly(R, rng, 3, 2);
  JetPoly b = random_jet_poly(R, rng, 3, 2);
  for (int j = 0; j <= 2; ++j) {
    JetPoly lhs = conjugate_apply(sys, j, a * b);
    JetPoly rhs = conjugate_apply(sys, j, a) * b + a * conjugate_apply(sys, j, b);
    EXPECT_TRUE(eq(lhs, rhs));
  }
}

}  // namespace
