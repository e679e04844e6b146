#include <gtest/gtest.h>

#include "pijet/relem.hpp"

using namespace pijet;

namespace {

Tower sqrt5_tower(int K = 8) {
  EisensteinConfig ec;
  ec.e = 2;
  ec.b = {-5, 0};  // x^2 - 5
  return Tower::make(PadicConfig{5, K, 1}, ec);
}

Tower cbrt5_tower(int K = 8) {
  EisensteinConfig ec;
  ec.e = 3;
  ec.b = {-5, 0, 0};  // x^3 - 5
  return Tower::make(PadicConfig{5, K, 1}, ec);
}

TEST(RElem, ValuationBasics) {
  Tower t4 = Tower::make_cyclotomic(PadicConfig{5, 8, 1});
  EXPECT_EQ(t4.e(), 4);
  EXPECT_EQ(t4.pi().valuation(), Val(1, 4));
  EXPECT_EQ(t4.from_ll(5).valuation(), Val(1));

  Tower t3 = cbrt5_tower();
  RElem x = t3.pi() * t3.pi() + t3.from_ll(5);
  EXPECT_EQ(x.valuation(), Val(2, 3));
}

TEST(RElem, PiArithmetic) {
  Tower t = sqrt5_tower();
  RElem pi = t.pi();
  EXPECT_TRUE(eq(pi * pi, t.from_ll(5)));
  EXPECT_TRUE(eq(t.p_over_pi() * pi, t.from_ll(5)));
  RElem pop = t.pi_over_p() * t.from_ll(5);
  EXPECT_TRUE(eq(pop, pi));
  EXPECT_TRUE(eq(t.p_over_pi() * t.pi_over_p(), t.one()));
}

TEST(RElem, DivisionByPi) {
  Tower t = sqrt5_tower();
  RElem five = t.from_ll(5);
  RElem q = five.div_pi_exact();
  EXPECT_TRUE(eq(q, t.pi()));
  EXPECT_THROW(t.from_ll(3).div_pi_exact(), divisibility_error);

  Tower tc = Tower::make_cyclotomic(PadicConfig{5, 8, 1});
  RElem r = tc.from_ll(5);
  for (int i = 0; i < 4; ++i) r = r.div_pi_exact();
  EXPECT_EQ(r.valuation(), Val(0));  // p / pi^e is a unit
}

TEST(RElem, TraceNewtonSums) {
  Tower t = sqrt5_tower();
  // Tr(1) = 2, Tr(pi) = 0, Tr(pi^2) = 10
  EXPECT_TRUE(eq(t.eis->trace_pi[0], t.base->from_ll(2)));
  EXPECT_TRUE(t.eis->trace_pi[1].is_zero());
  EXPECT_TRUE(eq(t.eis->trace_pi[2], t.base->from_ll(10)));

  Tower triv = t.trivial_tower();
  EXPECT_TRUE(eq(t.one().trace(), triv.from_ll(2)));
  EXPECT_TRUE(t.pi().trace().is_zero());
}

TEST(RElem, CyclotomicTraceOfPiInverse) {
  for (long long p : {5LL, 7LL}) {
    Tower t = Tower::make_cyclotomic(PadicConfig{p, 8, 1});
    RElem inv_pi = t.one().div_pi_frac();
    RElem tr = inv_pi.trace();
    EXPECT_TRUE(eq(tr, t.trivial_tower().from_ll((p - 1) / 2)))
        << "p=" << p << " got " << tr.digits();
  }
}

TEST(RElem, TraceLinearity) {
  Tower t = Tower::make_cyclotomic(PadicConfig{5, 8, 1});
  Tower triv = t.trivial_tower();
  std::mt19937_64 rng(21);
  for (int i = 0; i < 20; ++i) {
    RElem x = t.random_int(rng), y = t.random_int(rng);
    RElem cb = t.random_base(rng);
    EXPECT_TRUE(eq((x + y).trace(), x.trace() + y.trace()));
    // base scalars come out of the trace
    RElem lhs = (cb * x).trace();
    RElem rhs = triv.from_base(cb.d[0]) * x.trace();
    EXPECT_TRUE(eq(lhs, rhs));
    // Tr(b) = e * b for base elements
    EXPECT_TRUE(eq(cb.trace(), triv.from_ll(t.e()) * triv.from_base(cb.d[0])));
  }
}

TEST(RElem, GramDeterminant) {
  Tower t = sqrt5_tower();
  EXPECT_TRUE(eq(gram_determinant(t), t.base->from_ll(20)));  // det diag(2, 2p)

  Tower tc = Tower::make_cyclotomic(PadicConfig{5, 8, 1});
  BaseElem d = gram_determinant(tc);
  EXPECT_FALSE(d.is_zero());
  // disc of the cyclotomic Eisenstein polynomial has v_p = p - 2
  EXPECT_EQ(d.valuation(), Val(3));
}

TEST(RElem, DeltaPiOnBaseFactorsThroughDeltaP) {
  for (auto mk : {&sqrt5_tower, &cbrt5_tower}) {
    Tower t = mk(8);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
      RElem x = t.random_base(rng);
      RElem lhs = x.delta_pi();
      RElem rhs = t.p_over_pi() * x.delta_p();
      EXPECT_TRUE(eq(lhs, rhs));
    }
  }
}

TEST(RElem, DeltaPiAxioms) {
  Tower t = Tower::make_cyclotomic(PadicConfig{5, 8, 1});
  std::mt19937_64 rng(7);
  long long p = 5;
  for (int i = 0; i < 30; ++i) {
    RElem x = t.random_int(rng), y = t.random_int(rng);
    EXPECT_TRUE(t.one().delta_pi().is_zero());
    RElem cpi = (x.pow(p) + y.pow(p) - (x + y).pow(p)).div_pi_exact();
    EXPECT_TRUE(eq((x + y).delta_pi(), x.delta_pi() + y.delta_pi() + cpi));
    RElem lhs = (x * y).delta_pi();
    RElem rhs = x.pow(p) * y.delta_pi() + y.pow(p) * x.delta_pi() +
                t.pi() * x.delta_pi() * y.delta_pi();
    EXPECT_TRUE(eq(lhs, rhs));
    // phi(x) = x^p + pi delta_pi(x) agrees with the Frobenius and is a hom
    RElem phi = x.pow(p) + t.pi() * x.delta_pi();
    EXPECT_TRUE(eq(phi, x.frobenius()));
  }
}

TEST(RElem, InverseAndFractions) {
  Tower t = Tower::make_cyclotomic(PadicConfig{7, 8, 1});
  std::mt19937_64 rng(13);
  for (int i = 0; i < 20; ++i) {
    RElem x = t.random_int(rng);
    if (x.divisible_by_pi()) continue;
    EXPECT_TRUE(eq(x * x.inverse(), t.one()));
  }
  // pi^{-1} has valuation -1/e and pi * pi^{-1} = 1
  RElem invpi = t.pi().inverse();
  EXPECT_EQ(invpi.valuation(), Val(-1, t.e()));
  EXPECT_TRUE(eq(invpi * t.pi(), t.one()));
}

TEST(RElem, PrecisionBudget) {
  Tower t = sqrt5_tower(2);  // eK = 4
  RElem x = t.from_ll(3);
  // each delta_pi burns one digit of pi-precision
  x = x.delta_pi();
  EXPECT_EQ(x.pprec, 3);
  x = x.delta_pi();
  x = x.delta_pi();
  EXPECT_EQ(x.pprec, 1);
  EXPECT_THROW(x.delta_pi(), precision_exhausted);

  // multiplying by p genuinely restores absolute precision
  RElem y = t.from_ll(5).div_pi_exact().div_pi_exact();
  EXPECT_EQ(y.pprec, 2);
  EXPECT_EQ((y * t.from_ll(5)).pprec, 4);
}

TEST(RElem, EisensteinValidation) {
  EisensteinConfig bad;
  bad.e = 2;
  bad.b = {-3, 0};  // constant term not divisible by p
  EXPECT_THROW(Tower::make(PadicConfig{5, 8, 1}, bad), config_error);
  bad.b = {-25, 0};  // v_p = 2
  EXPECT_THROW(Tower::make(PadicConfig{5, 8, 1}, bad), config_error);
  bad.e = 1;
  bad.b = {-5};
  EXPECT_THROW(Tower::make(PadicConfig{5, 8, 1}, bad), config_error);
}

}  // namespace
