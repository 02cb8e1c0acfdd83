#include <gtest/gtest.h>

#include <random>

#include "unram/chevalley.hpp"

using namespace unram;

namespace {

struct Case {
  const char* group;
  int p;
  int e;
};

const std::vector<Case> kCases = {{"SL2", 3, 1}, {"GL2", 3, 1}, {"SL3", 5, 1}, {"Sp4", 3, 1}, {"SU3", 5, 2}};

TElem rand_elem(const RingSpec& s, std::mt19937_64& rng, int min_val = 0) {
  Coeffs c{};
  for (int i = 0; i < s.e; ++i) c[i] = static_cast<int64_t>(rng() % static_cast<uint64_t>(s.pN));
  TElem a(s, c);
  return min_val ? a * TElem(s, s.ppow[min_val]) : a;
}

TElem rand_unit(const RingSpec& s, std::mt19937_64& rng) {
  for (;;) {
    TElem a = rand_elem(s, rng);
    if (a.is_unit()) return a;
  }
}

GroupWord random_iwahori_word(const RootDatum& d, const RingSpec& s, std::mt19937_64& rng, int len) {
  GroupWord w(d, s);
  for (int k = 0; k < len; ++k) {
    int kind = static_cast<int>(rng() % 3);
    if (kind == 0) {
      std::vector<TElem> u;
      for (int j = 0; j < d.rank; ++j) u.push_back(rand_unit(s, rng));
      w.push(Generator::t(u, IVec(d.rank, 0)));
    } else {
      int r = static_cast<int>(rng() % d.num_roots());
      w.push(Generator::u(r, rand_elem(s, rng, d.positive(r) ? 0 : 1)));
    }
  }
  return w;
}

}  // namespace

TEST(Chevalley, OppositeSignIsPlusOneForStandardPinning) {
  for (const auto& c : kCases) {
    const auto& d = build_root_datum(c.group);
    ChevalleyGroup G(d, RingSpec::get(c.p, c.e, 4));
    for (int a = 0; a < d.num_roots(); ++a) EXPECT_EQ(G.opposite_sign(a), 1) << c.group << " " << a;
  }
}

TEST(Chevalley, Sp4CommutatorStructure) {
  const auto& d = build_root_datum("Sp4");
  ChevalleyGroup G(d, RingSpec::get(3, 1, 4));
  // long root a2 with short a1 yields a1+a2 and 2a1+a2
  auto terms = G.commutator(0, 1);
  ASSERT_EQ(terms.size(), 2u);
  EXPECT_EQ(terms[0].root, 2);
  EXPECT_EQ(terms[1].root, 3);
  EXPECT_EQ(terms[1].i, 2);
  EXPECT_TRUE(G.commutator(1, 3).empty());
}

TEST(Chevalley, CommutatorFormulaMatchesMatrices) {
  std::mt19937_64 rng(41);
  for (const auto& c : kCases) {
    const auto& d = build_root_datum(c.group);
    const auto& s = RingSpec::get(c.p, c.e, 4);
    ChevalleyGroup G(d, s);
    for (int a = 0; a < d.num_roots(); ++a)
      for (int b = 0; b < d.num_roots(); ++b) {
        if (a == b || b == d.neg(a)) continue;
        for (int t = 0; t < 10; ++t) {
          TElem x = rand_elem(s, rng), y = rand_elem(s, rng);
          GroupWord lhs(d, s);
          lhs.push(Generator::u(a, x)).push(Generator::u(b, y)).push(Generator::u(a, -x)).push(Generator::u(b, -y));
          GroupWord rhs(d, s);
          for (const auto& term : G.commutator(a, b))
            rhs.push(Generator::u(term.root, TElem(s, term.C) * x.pow(term.i) * y.pow(term.j)));
          EXPECT_TRUE(G.matrix_oracle(lhs).equals(G.matrix_oracle(rhs))) << c.group << " " << a << " " << b;
        }
      }
  }
}

TEST(Chevalley, OppositePairFormulaSL2) {
  const auto& d = build_root_datum("SL2");
  const auto& s = RingSpec::get(3, 1, 5);
  ChevalleyGroup G(d, s);
  TElem a(s, 2), b(s, 3 * 7);
  GroupWord w(d, s);
  w.push(Generator::u(0, a)).push(Generator::u(1, b));
  auto nf = normal_form(G, w);
  TElem c = TElem(s, 1) + a * b;
  EXPECT_EQ(nf.neg[0], b * c.inv());
  EXPECT_EQ(nf.pos[0], a * c.inv());
  EXPECT_EQ(nf.units[0], c);
  EXPECT_TRUE(G.matrix_oracle(nf.to_word(d, s)).equals(G.matrix_oracle(w)));
}

TEST(Chevalley, NormalFormReproducesMatrix) {
  std::mt19937_64 rng(43);
  for (const auto& c : kCases) {
    const auto& d = build_root_datum(c.group);
    const auto& s = RingSpec::get(c.p, c.e, 4);
    ChevalleyGroup G(d, s);
    for (int t = 0; t < 40; ++t) {
      GroupWord w = random_iwahori_word(d, s, rng, 8);
      auto nf = normal_form(G, w);
      EXPECT_TRUE(G.matrix_oracle(nf.to_word(d, s)).equals(G.matrix_oracle(w))) << c.group << "\n" << w.serialize();
      EXPECT_TRUE(membership_depth(G, w, std::vector<int>(d.num_roots(), 0)));
      // normal form of the normal form is itself
      EXPECT_EQ(normal_form(G, nf.to_word(d, s)), nf);
    }
  }
}

TEST(Chevalley, NonIwahoriElementsRejected) {
  const auto& d = build_root_datum("SL2");
  const auto& s = RingSpec::get(3, 1, 4);
  ChevalleyGroup G(d, s);
  GroupWord w(d, s);
  w.push(Generator::u(1, TElem(s, 1)));
  std::vector<int> depths = {0, 1};
  EXPECT_FALSE(membership_depth(G, w, depths));
  GroupWord n(d, s);
  n.push(Generator::n(1));
  EXPECT_THROW(normal_form(G, n), NotInIwahori);
  GroupWord lam(d, s);
  lam.push(Generator::t({TElem(s, 1)}, {1}));
  EXPECT_FALSE(membership_depth(G, lam, {0, 1}));
}

TEST(Chevalley, DepthMembership) {
  const auto& d = build_root_datum("SL3");
  const auto& s = RingSpec::get(5, 1, 4);
  ChevalleyGroup G(d, s);
  std::vector<int> depths(d.num_roots(), 2);
  GroupWord w(d, s);
  w.push(Generator::u(0, TElem(s, 25))).push(Generator::u(d.neg(1), TElem(s, 50)));
  EXPECT_TRUE(membership_depth(G, w, depths));
  w.push(Generator::u(2, TElem(s, 5)));
  EXPECT_FALSE(membership_depth(G, w, depths));
  GroupWord t(d, s);
  t.push(Generator::t({TElem(s, 26), TElem(s, 1)}, {0, 0}));
  EXPECT_TRUE(membership_depth(G, t, depths, 2));
  EXPECT_FALSE(membership_depth(G, t, depths, 3));
}

TEST(Chevalley, WeylRepresentativeConjugatesRootGroups) {
  std::mt19937_64 rng(47);
  for (const auto& c : kCases) {
    const auto& d = build_root_datum(c.group);
    const auto& s = RingSpec::get(c.p, c.e, 4);
    ChevalleyGroup G(d, s);
    const auto& W = G.weyl();
    for (int k = 0; k < static_cast<int>(d.simple.size()); ++k) {
      int sw = W.simple_reflection(k);
      FMat n = G.matrix(Generator::n(sw));
      FMat ninv = G.matrix_oracle(GroupWord(d, s).push(Generator::n(sw)).inverse(W));
      EXPECT_TRUE((n * ninv).equals(FMat::identity(s, d.n)));
      for (int b = 0; b < d.num_roots(); ++b) {
        TElem x = rand_elem(s, rng);
        FMat conj = n * G.root_matrix(b, FElem(x)) * ninv;
        int img = W[sw].act_root(b);
        bool plus = conj.equals(G.root_matrix(img, FElem(x)));
        bool minus = conj.equals(G.root_matrix(img, FElem(-x)));
        EXPECT_TRUE(plus || minus) << c.group << " root " << b;
      }
    }
  }
}

TEST(Chevalley, FrobeniusAndTwistAgreeWithMatrices) {
  std::mt19937_64 rng(53);
  for (const auto& c : kCases) {
    const auto& d = build_root_datum(c.group);
    const auto& s = RingSpec::get(c.p, d.is_split() ? 2 : c.e, 4);
    ChevalleyGroup G(d, s);
    for (int t = 0; t < 20; ++t) {
      GroupWord w = random_iwahori_word(d, s, rng, 6);
      FMat m = G.matrix_oracle(w);
      EXPECT_TRUE(G.matrix_oracle(G.theta_act(w, 1)).equals(G.theta_matrix(m, 1)));
      if (!d.is_split()) {
        EXPECT_TRUE(G.matrix_oracle(G.h_act(w, 1)).equals(G.h_matrix(m, 1))) << w.serialize();
        EXPECT_TRUE(G.matrix_oracle(G.h_act(w, 2)).equals(m));
      }
    }
  }
}

TEST(Chevalley, NormMapOfTorusIsProductOfConjugates) {
  const auto& d = build_root_datum("GL2");
  const auto& s = RingSpec::get(3, 2, 4);
  ChevalleyGroup G(d, s);
  TElem x = TElem::gen(s);
  GroupWord delta(d, s);
  delta.push(Generator::t({x, TElem(s, 1)}, {0, 0}));
  FMat m = G.matrix_oracle(G.norm_map_group(delta, 2));
  EXPECT_TRUE(m.at(0, 0).equals(FElem(norm_to_fixed(x, 1))));
}
