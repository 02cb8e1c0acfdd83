#include <gtest/gtest.h>

#include <algorithm>

#include "unram/root_data.hpp"

using namespace unram;

TEST(RootData, CatalogShapes) {
  struct Row {
    const char* name;
    int npos, weyl;
    bool split;
  };
  for (const Row& r : {Row{"SL2", 1, 2, true}, Row{"GL2", 1, 2, true}, Row{"SL3", 3, 6, true}, Row{"Sp4", 4, 8, true},
                       Row{"SU3", 3, 6, false}}) {
    const RootDatum& d = build_root_datum(r.name);
    EXPECT_EQ(d.npos, r.npos) << r.name;
    EXPECT_EQ(d.weyl_order, r.weyl) << r.name;
    EXPECT_EQ(WeylGroup(d).size(), r.weyl) << r.name;
    EXPECT_EQ(d.is_split(), r.split) << r.name;
  }
  auto names = catalog_names();
  EXPECT_EQ(names.size(), 5u);
}

TEST(RootData, CorootPairingsAreCartanIntegers) {
  for (const auto& name : catalog_names()) {
    const RootDatum& d = build_root_datum(name);
    for (int a = 0; a < d.num_roots(); ++a) {
      EXPECT_EQ(d.pair(d.roots[a], d.coroots[a]), 2) << name;
      EXPECT_EQ(d.neg(d.neg(a)), a);
      for (int b = 0; b < d.num_roots(); ++b) {
        int c = d.pair(d.roots[b], d.coroots[a]);
        EXPECT_TRUE(c >= -3 && c <= 3) << name;
      }
    }
  }
  // Sp4 is doubly laced, so some off-diagonal Cartan integer has absolute value 2
  const RootDatum& sp4 = build_root_datum("Sp4");
  int twos = 0;
  for (int a = 0; a < sp4.num_roots(); ++a)
    for (int b = 0; b < sp4.num_roots(); ++b)
      if (a != b && std::abs(sp4.pair(sp4.roots[b], sp4.coroots[a])) == 2) ++twos;
  EXPECT_GT(twos, 0);
}

TEST(RootData, WeylGroupAxioms) {
  for (const auto& name : catalog_names()) {
    const RootDatum& d = build_root_datum(name);
    WeylGroup W(d);
    for (int a = 0; a < W.size(); ++a) {
      EXPECT_EQ(W.mul(a, W.inverse(a)), W.identity());
      EXPECT_EQ(W.inversions(a), W[a].length()) << name;
      for (int b = 0; b < W.size(); ++b)
        for (int c = 0; c < W.size(); c += 3) EXPECT_EQ(W.mul(W.mul(a, b), c), W.mul(a, W.mul(b, c)));
    }
    EXPECT_EQ(W.inversions(W.longest()), d.npos) << name;
    EXPECT_EQ(static_cast<int>(W.min_coset_reps(0).size()), W.size());
    EXPECT_EQ(static_cast<int>(W.min_coset_reps(full_levi_mask(d)).size()), 1);
  }
}

TEST(RootData, WeylActionPermutesRoots) {
  for (const auto& name : catalog_names()) {
    const RootDatum& d = build_root_datum(name);
    WeylGroup W(d);
    for (int w = 0; w < W.size(); ++w) {
      std::vector<int> img;
      for (int a = 0; a < d.num_roots(); ++a) img.push_back(W[w].act_root(a));
      std::sort(img.begin(), img.end());
      for (int a = 0; a < d.num_roots(); ++a) EXPECT_EQ(img[a], a) << name;
    }
  }
}

TEST(RootData, PairingHeight) {
  EXPECT_EQ(build_root_datum("SL2").pairing_height({1}), 2);
  const RootDatum& sl3 = build_root_datum("SL3");
  int highest = 0;
  for (int a = 0; a < sl3.npos; ++a)
    if (sl3.height[a] > sl3.height[highest]) highest = a;
  EXPECT_EQ(sl3.pairing_height(sl3.coroots[highest]), 4);  // 2(h - 1), Coxeter number 3
  EXPECT_TRUE(sl3.is_dominant(sl3.coroots[highest]));
  EXPECT_TRUE(sl3.is_regular(sl3.coroots[highest]));
  EXPECT_FALSE(build_root_datum("SL2").is_regular({0}));
}

TEST(RootData, PrimeGuard) {
  EXPECT_FALSE(prime_allowed(build_root_datum("Sp4"), 2));
  EXPECT_FALSE(prime_allowed(build_root_datum("SL3"), 3));
  EXPECT_FALSE(prime_allowed(build_root_datum("SU3"), 3));
  EXPECT_TRUE(prime_allowed(build_root_datum("SL3"), 5));
  EXPECT_TRUE(prime_allowed(build_root_datum("SL2"), 3));
}

TEST(RootData, GaloisActionIsInvolution) {
  const RootDatum& d = build_root_datum("SU3");
  ASSERT_EQ(d.h_order, 2);
  for (int a = 0; a < d.num_roots(); ++a) EXPECT_EQ(d.h_root[d.h_root[a]], a);
  EXPECT_EQ(mat_mul(d.h_cochar, d.h_cochar), mat_identity(d.rank));
  EXPECT_EQ(d.rel_basis.size(), 1u);
}

TEST(RootData, AffineWeylGroupLaw) {
  const RootDatum& d = build_root_datum("SL3");
  WeylGroup W(d);
  AffineWeylElement x{{1, -1}, 3}, y{{0, 2}, 1}, z{{-1, 0}, 4};
  EXPECT_TRUE(affine_equal(affine_mul(W, affine_mul(W, x, y), z), affine_mul(W, x, affine_mul(W, y, z))));
  AffineWeylElement e = affine_mul(W, x, affine_inverse(W, x));
  EXPECT_TRUE(affine_equal(e, {{0, 0}, W.identity()}));
}
