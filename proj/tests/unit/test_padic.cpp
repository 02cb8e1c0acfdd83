#include <gtest/gtest.h>

#include <random>
#include <set>

#include "unram/padic.hpp"

using namespace unram;

namespace {

TElem random_elem(const RingSpec& s, std::mt19937_64& rng) {
  Coeffs c{};
  for (int i = 0; i < s.e; ++i) c[i] = static_cast<int64_t>(rng() % static_cast<uint64_t>(s.pN));
  return TElem(s, c);
}

std::vector<const RingSpec*> builtin_specs() {
  std::vector<const RingSpec*> out;
  for (int p : {3, 5, 7})
    for (int e = 1; e <= 4; ++e) out.push_back(&RingSpec::get(p, e, 4));
  return out;
}

}  // namespace

TEST(Padic, SmallIntegerArithmetic) {
  const auto& s = RingSpec::get(3, 1, 4);
  EXPECT_EQ(TElem(s, 2) * TElem(s, 2), TElem(s, 4));
  EXPECT_EQ(TElem(s, 2).inv(), TElem(s, 41));
  EXPECT_THROW(TElem(s, 3).inv(), NotAUnit);
}

TEST(Padic, ConwayModuliIrreducibleAndPrimitive) {
  for (int p : {3, 5, 7, 11, 13})
    for (int e = 1; e <= 4; ++e) {
      auto low = conway_polynomial(p, e);
      EXPECT_TRUE(irreducible_mod_p(low, p)) << p << " " << e;
    }
  // x^2 + 1 factors over F_5
  EXPECT_FALSE(irreducible_mod_p({1, 0}, 5));
  EXPECT_TRUE(irreducible_mod_p({1, 0}, 3));
}

TEST(Padic, FrobeniusOfGeneratorIsConjugateRoot) {
  const auto& s = RingSpec::get(3, 2, 4);
  ASSERT_EQ(s.modulus[0], 2);
  ASSERT_EQ(s.modulus[1], 2);
  TElem x = TElem::gen(s);
  TElem z = x.frobenius(1);
  // z is a root of x^2 + 2x + 2
  EXPECT_TRUE((z * z + TElem(s, 2) * z + TElem(s, 2)).is_zero());
  EXPECT_NE(z.residue(), x.residue());
  EXPECT_EQ(z.residue(), x.pow(3).residue());
  EXPECT_EQ(z.frobenius(1), x);
}

TEST(Padic, FrobeniusFixesBaseAndHasOrderE) {
  std::mt19937_64 rng(7);
  for (const RingSpec* s : builtin_specs()) {
    for (int t = 0; t < 20; ++t) {
      TElem c(*s, static_cast<int64_t>(rng() % 1000));
      EXPECT_EQ(c.frobenius(1), c);
      TElem a = random_elem(*s, rng);
      EXPECT_EQ(a.frobenius(1).frobenius(s->e - 1), a);
      EXPECT_EQ(a.frobenius(s->e), a);
      EXPECT_EQ(a.frobenius(-1), a.frobenius(s->e - 1));
    }
  }
}

TEST(Padic, RingAxiomsAndFrobeniusHomomorphism) {
  std::mt19937_64 rng(11);
  for (const RingSpec* s : builtin_specs()) {
    for (int t = 0; t < 50; ++t) {
      TElem a = random_elem(*s, rng), b = random_elem(*s, rng), c = random_elem(*s, rng);
      EXPECT_EQ((a * b) * c, a * (b * c));
      EXPECT_EQ(a * (b + c), a * b + a * c);
      EXPECT_EQ(a * TElem(*s, 1), a);
      EXPECT_EQ(a + TElem(*s, 0), a);
      EXPECT_TRUE((a - a).is_zero());
      EXPECT_EQ((a * b).frobenius(1), a.frobenius(1) * b.frobenius(1));
      EXPECT_EQ((a + b).frobenius(1), a.frobenius(1) + b.frobenius(1));
      if (a.is_unit()) EXPECT_EQ(a * a.inv(), TElem(*s, 1));
    }
  }
}

TEST(Padic, ValuationCache) {
  const auto& s = RingSpec::get(3, 2, 4);
  EXPECT_EQ(TElem(s, 9).valuation(), 2);
  EXPECT_EQ(TElem(s, 0).valuation(), 4);
  EXPECT_EQ(TElem(s, 81).valuation(), 4);
  EXPECT_TRUE(TElem(s, 81).is_zero());
  EXPECT_EQ(TElem(s, Coeffs{3, 6}).valuation(), 1);
}

TEST(Padic, UnitDecompose) {
  const auto& s = RingSpec::get(3, 1, 4);
  auto d9 = unit_decompose(TElem(s, 9));
  EXPECT_EQ(d9.valuation, 2);
  EXPECT_EQ(d9.unit, TElem(s, 1));
  auto d6 = unit_decompose(TElem(s, 6));
  EXPECT_EQ(d6.valuation, 1);
  EXPECT_EQ(d6.unit, TElem(s, 2));
  EXPECT_THROW(unit_decompose(TElem(s, 0)), ZeroElement);
}

TEST(Padic, NormOfBaseAndUnits) {
  const auto& s = RingSpec::get(3, 2, 4);
  for (int64_t c : {1, 2, 5, 7, 40}) EXPECT_EQ(norm_to_fixed(TElem(s, c), 1), TElem(s, c * c));
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    TElem a = random_elem(s, rng);
    if (a.is_unit()) EXPECT_TRUE(norm_to_fixed(a, 1).is_unit());
  }
  EXPECT_THROW(norm_to_fixed(TElem(s, 1), 3), DegreeMismatch);
}

TEST(Padic, NormMultiplicativeAndValuationScaling) {
  std::mt19937_64 rng(5);
  for (int e : {2, 3, 4}) {
    const auto& s = RingSpec::get(3, e, 5);
    for (int d = 1; d <= e; ++d) {
      if (e % d) continue;
      for (int t = 0; t < 30; ++t) {
        TElem a = random_elem(s, rng), b = random_elem(s, rng);
        EXPECT_EQ(norm_to_fixed(a * b, d), norm_to_fixed(a, d) * norm_to_fixed(b, d));
        TElem small = a * TElem(s, 3);
        int v = small.valuation();
        if ((e / d) * v < s.N) EXPECT_EQ(norm_to_fixed(small, d).valuation(), (e / d) * v);
      }
    }
  }
}

// Frozen from exhaustive enumeration: every base unit class mod 3^N is a norm.
TEST(Padic, NormSurjectiveOntoBaseUnits) {
  for (int N = 1; N <= 3; ++N) {
    const auto& s = RingSpec::get(3, 2, N);
    std::set<int64_t> image;
    for (int64_t c0 = 0; c0 < s.pN; ++c0)
      for (int64_t c1 = 0; c1 < s.pN; ++c1) {
        TElem a(s, Coeffs{c0, c1});
        if (!a.is_unit()) continue;
        TElem n = norm_to_fixed(a, 1);
        ASSERT_TRUE(n.is_base());
        image.insert(n.coeff(0));
      }
    int64_t units = s.pN - s.pN / 3;
    EXPECT_EQ(static_cast<int64_t>(image.size()), units) << "N=" << N;
  }
}

TEST(Padic, ResidueTraceSurjective) {
  for (int e = 1; e <= 3; ++e) {
    const auto& s = RingSpec::get(3, e, 1);
    std::set<int64_t> image;
    int64_t q = s.q();
    for (int64_t code = 0; code < q; ++code) {
      Coeffs c{};
      int64_t t = code;
      for (int i = 0; i < e; ++i) {
        c[i] = t % 3;
        t /= 3;
      }
      TElem tr = trace_to_fixed(TElem(s, c), 1);
      ASSERT_TRUE(tr.is_base());
      image.insert(tr.coeff(0));
    }
    EXPECT_EQ(image.size(), 3u) << "e=" << e;
  }
}

TEST(Padic, TeichmullerAndResidueGenerator) {
  for (int e = 1; e <= 3; ++e) {
    const auto& s = RingSpec::get(3, e, 4);
    TElem g = residue_generator(s);
    int64_t q = s.q();
    EXPECT_EQ(g.pow(q - 1), TElem(s, 1));
    for (int64_t k = 1; k < q - 1; ++k) EXPECT_NE(g.pow(k), TElem(s, 1));
  }
}

TEST(Padic, TowerEmbeddingCommutesWithFrobenius) {
  std::mt19937_64 rng(9);
  for (auto [d, e] : std::vector<std::pair<int, int>>{{1, 2}, {1, 3}, {2, 4}, {1, 4}}) {
    const auto& small = RingSpec::get(3, d, 4);
    const auto& large = RingSpec::get(3, e, 4);
    ExtensionTower T(small, large);
    for (int t = 0; t < 30; ++t) {
      TElem a = random_elem(small, rng), b = random_elem(small, rng);
      EXPECT_EQ(T.embed(a * b), T.embed(a) * T.embed(b));
      EXPECT_EQ(T.embed(a + b), T.embed(a) + T.embed(b));
      EXPECT_EQ(T.embed(a.frobenius(1)), T.embed(a).frobenius(1));
      EXPECT_EQ(T.descend(T.embed(a)), a);
    }
    EXPECT_THROW(T.descend(TElem::gen(large)), SpecMismatch);
  }
}

TEST(Padic, SpecSerializationRoundTrip) {
  const auto& s = RingSpec::get(3, 2, 4);
  EXPECT_EQ(s.serialize(), "p=3 e=2 N=4 modulus=2,2");
  EXPECT_EQ(&RingSpec::parse(s.serialize()), &s);
  EXPECT_THROW(RingSpec::parse("p=3 e=2 N=4 modulus=1,1"), SpecMismatch);
  EXPECT_THROW(RingSpec::get(4, 1, 3), std::invalid_argument);
}

TEST(Padic, SpecMismatchDetected) {
  const auto& a = RingSpec::get(3, 1, 4);
  const auto& b = RingSpec::get(3, 1, 5);
  EXPECT_THROW(TElem(a, 1) + TElem(b, 1), SpecMismatch);
}

TEST(FieldElem, ArithmeticAgreesWithIntegralRing) {
  std::mt19937_64 rng(21);
  const auto& s = RingSpec::get(3, 2, 6);
  for (int t = 0; t < 200; ++t) {
    TElem a = random_elem(s, rng), b = random_elem(s, rng);
    FElem fa(a), fb(b);
    FElem prod = fa * fb;
    if (!prod.is_zero_like() && prod.abs_prec() >= s.N) {
      EXPECT_EQ(prod.to_telem(), a * b);
    }
    FElem sum = fa + fb;
    if (sum.abs_prec() >= s.N) EXPECT_EQ(sum.to_telem(), a + b);
  }
}

TEST(FieldElem, NegativeValuationsAndInverse) {
  const auto& s = RingSpec::get(3, 1, 6);
  FElem x = FElem::p_power(s, -2) * FElem(s, 5);
  EXPECT_EQ(x.valuation(), -2);
  FElem y = x.inv();
  EXPECT_EQ(y.valuation(), 2);
  EXPECT_TRUE((x * y).equals(FElem(s, 1)));
  EXPECT_FALSE(x.is_integral());
  EXPECT_TRUE(y.is_integral());
}

TEST(FieldElem, CancellationLosesRelativePrecision) {
  const auto& s = RingSpec::get(3, 1, 6);
  FElem a(s, 1), b(s, 1 + 27);
  FElem d = b - a;
  EXPECT_EQ(d.valuation(), 3);
  EXPECT_EQ(d.abs_prec(), 6);
  FElem z = a - a;
  EXPECT_TRUE(z.is_inexact_zero());
  EXPECT_THROW(z.valuation(), PrecisionExhausted);
  EXPECT_THROW(z.inv(), PrecisionExhausted);
  EXPECT_TRUE(z.val_at_least(6));
  EXPECT_THROW(z.val_at_least(7), PrecisionExhausted);
  EXPECT_TRUE(FElem(s, 0).is_exact_zero());
}
