#include <gtest/gtest.h>

#include <random>

#include "unram/scalars.hpp"

using namespace unram;

TEST(Scalars, RootsOfUnityCompareAsComplexNumbers) {
  EXPECT_EQ(RootOfUnity(4, 2), RootOfUnity(2, 1));
  EXPECT_EQ(RootOfUnity(6, 0), RootOfUnity(1, 0));
  EXPECT_NE(RootOfUnity(6, 1), RootOfUnity(3, 1));
  EXPECT_EQ(RootOfUnity(12, 8).reduced().M, 3);
  EXPECT_EQ(RootOfUnity(5, -1), RootOfUnity(5, 4));
  EXPECT_EQ(RootOfUnity(6, 1) * RootOfUnity(4, 1), RootOfUnity(12, 5));
  EXPECT_TRUE(RootOfUnity(7, 3).pow(7).is_one());
}

// low-to-high coefficients, written out by hand
TEST(Scalars, CyclotomicPolynomialsByHand) {
  EXPECT_EQ(cyclotomic_polynomial(1), (std::vector<int64_t>{-1, 1}));
  EXPECT_EQ(cyclotomic_polynomial(2), (std::vector<int64_t>{1, 1}));
  EXPECT_EQ(cyclotomic_polynomial(4), (std::vector<int64_t>{1, 0, 1}));
  EXPECT_EQ(cyclotomic_polynomial(6), (std::vector<int64_t>{1, -1, 1}));
  EXPECT_EQ(cyclotomic_polynomial(9), (std::vector<int64_t>{1, 0, 0, 1, 0, 0, 1}));
  EXPECT_EQ(cyclotomic_polynomial(12), (std::vector<int64_t>{1, 0, -1, 0, 1}));
  EXPECT_EQ(cyclotomic_polynomial(15).size(), 9u);
}

TEST(Scalars, SumOfAllRootsVanishes) {
  for (int64_t M : {2, 3, 6, 9, 10, 18}) {
    Cyclo s(M);
    for (int64_t k = 0; k < M; ++k) s += Cyclo::root(RootOfUnity(M, k));
    EXPECT_TRUE(s.is_zero()) << M;
  }
  Cyclo z3 = Cyclo::root(RootOfUnity(3, 1));
  EXPECT_EQ(z3 + z3 * RootOfUnity(3, 1), Cyclo::rational(-1));
}

TEST(Scalars, FieldArithmeticAcrossOrders) {
  Cyclo i = Cyclo::root(RootOfUnity(4, 1));
  EXPECT_EQ(i * i, Cyclo::rational(-1));
  Cyclo w = Cyclo::root(RootOfUnity(6, 1));
  EXPECT_EQ(w - Cyclo::root(RootOfUnity(6, 2)), Cyclo::rational(1));  // zeta_6 - zeta_3 = 1
  EXPECT_EQ((i + w) * Cyclo::rational(mpq_class(1, 2)), (w + i) * mpq_class(1, 2));
  EXPECT_EQ(Cyclo::root(RootOfUnity(12, 3)), i);
  EXPECT_EQ(i.canonical().size(), 2u);
  EXPECT_EQ((-i).str(), (i * Cyclo::rational(-1)).str());
}

TEST(Scalars, RingAxiomsOnRandomElements) {
  std::mt19937 rng(4);
  std::uniform_int_distribution<int> co(-4, 4), ord(1, 12);
  auto random_cyclo = [&] {
    int64_t M = ord(rng);
    Cyclo c(M);
    for (int64_t k = 0; k < M; ++k) c.add_term(k, co(rng));
    return c;
  };
  for (int t = 0; t < 40; ++t) {
    Cyclo a = random_cyclo(), b = random_cyclo(), c = random_cyclo();
    EXPECT_EQ((a + b) * c, a * c + b * c);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_TRUE((a - a).is_zero());
  }
}

TEST(Scalars, ScaledRootPowers) {
  ScaledRoot x{mpq_class(2, 3), RootOfUnity(5, 2)};
  EXPECT_EQ(x.pow(3), x * x * x);
  EXPECT_EQ(x.pow(-1), x.inv());
  EXPECT_EQ(x.pow(0), (ScaledRoot{1, RootOfUnity(1, 0)}));
  EXPECT_EQ(x.pow(5).z, RootOfUnity(1, 0));
}

// merge order does not change the value, so parallel reductions are exact
TEST(Scalars, RootCountsMergeIsOrderIndependent) {
  RootCounts a(6), b(6), whole(6);
  for (int k = 0; k < 20; ++k) {
    (k % 3 ? a : b).add(k * 5, k);
    whole.add(k * 5, k);
  }
  RootCounts ab = a, ba = b;
  ab.merge(b);
  ba.merge(a);
  EXPECT_EQ(ab.value(mpq_class(1, 7)), ba.value(mpq_class(1, 7)));
  EXPECT_EQ(ab.value(1), whole.value(1));
  EXPECT_EQ(whole.total(), 190);
}
