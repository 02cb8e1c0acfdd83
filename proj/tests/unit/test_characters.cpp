#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "unram/characters.hpp"
#include "unram/corpus.hpp"

using namespace unram;

namespace {

SmoothCharacter corpus(const std::string& name, int N = 6) { return make_character(corpus_entry(name), N); }

std::vector<TElem> random_units(const SmoothCharacter& chi, std::mt19937& rng) {
  const auto& U = UnitGroup::get(chi.ring(), chi.level()).units();
  std::uniform_int_distribution<size_t> pick(0, U.size() - 1);
  std::vector<TElem> t;
  for (int j = 0; j < chi.num_coords(); ++j) t.push_back(U[pick(rng)]);
  return t;
}

}  // namespace

TEST(UnitGroup, OrderAndLogRoundTrip) {
  for (auto [p, e, C] : {std::tuple{3, 1, 3}, std::tuple{5, 1, 2}, std::tuple{3, 2, 2}}) {
    const RingSpec& s = RingSpec::get(p, e, 4);
    const UnitGroup& U = UnitGroup::get(s, C);
    int64_t q = 1;
    for (int i = 0; i < e; ++i) q *= p;
    int64_t pc = 1;
    for (int i = 0; i < e * (C - 1); ++i) pc *= p;
    EXPECT_EQ(U.order(), (q - 1) * pc);
    int64_t pc1 = 1;
    for (int i = 1; i < C; ++i) pc1 *= p;
    EXPECT_EQ(U.exponent(), (q - 1) * pc1);
    for (const auto& u : U.units()) EXPECT_EQ(reduce_mod(U.element(U.dlog(u)), C), u);  // units are stored mod p^C
    EXPECT_EQ(U.tame_generator().pow(q - 1), TElem(s, 1));
  }
}

TEST(Characters, HomomorphismOnRandomUnits) {
  std::mt19937 rng(11);
  for (const auto& c : character_corpus()) {
    SmoothCharacter chi = make_character(c, 6);
    for (int t = 0; t < 30; ++t) {
      auto a = random_units(chi, rng), b = random_units(chi, rng);
      std::vector<TElem> ab;
      for (size_t j = 0; j < a.size(); ++j) ab.push_back(a[j] * b[j]);
      EXPECT_EQ(chi.evaluate(ab), chi.evaluate(a) * chi.evaluate(b)) << c.name;
    }
  }
}

TEST(Characters, CorpusConductors) {
  EXPECT_EQ(conductor(corpus("sl2-quadratic"), 0), 1);
  EXPECT_EQ(conductor(corpus("sl2-cond2"), 0), 2);
  EXPECT_EQ(conductor(corpus("sl2-cond3"), 0), 3);
  EXPECT_EQ(depth_plus_one(corpus("sl3-cond2")), 2);
  for (const auto& c : character_corpus()) {
    SmoothCharacter chi = make_character(c, 6);
    for (int a = 0; a < chi.datum().num_roots(); ++a) {
      int f = conductor(chi, a);
      EXPECT_TRUE(conductor_is_minimal(chi, a, f)) << c.name << " root " << a;
      EXPECT_EQ(f, conductor(chi, chi.datum().neg(a))) << c.name;
    }
  }
}

// chi_r(x) = chi(x theta(x) ... theta^{r-1}(x)), the norm written as a Frobenius product
TEST(Characters, PullbackIsCompositionWithNorm) {
  for (const char* name : {"sl2-cond2", "gl2-psi-1", "sl2-quadratic"}) {
    SmoothCharacter chi = corpus(name, 4);
    for (int r : {2, 3}) {
      SmoothCharacter chi_r = chi.pullback_norm(r);
      const RingSpec& big = chi_r.ring();
      ExtensionTower tower(chi.ring(), big);
      const auto& U = UnitGroup::get(big, chi.level()).units();
      int checked = 0;
      for (size_t i = 0; i < U.size(); i += std::max<size_t>(1, U.size() / 40)) {
        std::vector<TElem> x(chi.num_coords(), U[i]), nx;
        for (auto& u : x) {
          TElem n = u;
          for (int k = 1; k < r; ++k) n *= u.frobenius(k);
          nx.push_back(tower.descend(n));
        }
        EXPECT_EQ(chi_r.evaluate(x), chi.evaluate(nx)) << name << " r=" << r;
        ++checked;
      }
      EXPECT_GE(checked, std::min<int>(40, U.size()));
    }
  }
}

// for SL2 the nontrivial Weyl element inverts the torus
TEST(Characters, WeylActionOnSL2IsInverse) {
  for (const char* name : {"sl2-quadratic", "sl2-cond2", "sl2-cond3"}) {
    SmoothCharacter chi = corpus(name);
    WeylGroup W(chi.datum());
    EXPECT_EQ(chi.weyl_act(W, W.longest()), chi.inverse()) << name;
    EXPECT_EQ(chi.weyl_act(W, W.identity()), chi);
  }
}

TEST(Characters, WeylActionIsAGroupAction) {
  for (const char* name : {"sl3-cond2", "sp4-psi-psi", "gl2-psi-1"}) {
    SmoothCharacter chi = corpus(name);
    WeylGroup W(chi.datum());
    for (int a = 0; a < W.size(); ++a)
      for (int b = 0; b < W.size(); ++b)
        EXPECT_EQ(chi.weyl_act(W, b).weyl_act(W, a), chi.weyl_act(W, W.mul(a, b))) << name;
  }
}

TEST(Characters, StabilizerSizes) {
  auto finite = [](const char* name) {
    SmoothCharacter chi = corpus(name);
    WeylGroup W(chi.datum());
    return stabilizer_W0chi(chi, W).finite.size();
  };
  EXPECT_EQ(finite("sl2-trivial"), 2u);
  EXPECT_EQ(finite("sl2-quadratic"), 2u);
  EXPECT_EQ(finite("sl2-cond2"), 1u);
  EXPECT_EQ(finite("sl3-trivial"), 6u);
  EXPECT_EQ(finite("sp4-trivial"), 8u);
}

// the memo returns the same character as a fresh computation and keys on the ring
TEST(Characters, MemoizedOperationsAgree) {
  SmoothCharacter chi = corpus("sl2-cond2");
  SmoothCharacter a = chi.pullback_norm(2), b = chi.pullback_norm(2);
  EXPECT_TRUE(a.same_representation(b));
  SmoothCharacter wide = chi.rebind(RingSpec::get(3, 1, 8));
  SmoothCharacter c = wide.pullback_norm(2);
  EXPECT_EQ(c.ring().N, 8);
  EXPECT_EQ(a.ring().N, 6);
  EXPECT_FALSE(a.same_representation(c));
  EXPECT_EQ(c.rebind(a.ring()), a);
  EXPECT_EQ(chi.inverse().inverse(), chi);
}

TEST(Characters, ExtendedComposeNorm) {
  SmoothCharacter chi = corpus("gl2-psi-1");
  ExtendedCharacter xi(chi, {ScaledRoot{mpq_class(2), RootOfUnity(1, 0)}, ScaledRoot{mpq_class(1, 3), RootOfUnity(4, 1)}});
  ExtendedCharacter xr = xi.compose_norm(2);
  EXPECT_EQ(xr.eta()[0], xi.eta()[0].pow(2));
  EXPECT_EQ(xr.eta()[1], xi.eta()[1].pow(2));
  EXPECT_EQ(xr.compact(), chi.pullback_norm(2));
  EXPECT_EQ(xi.eta_at({1, -1}), xi.eta()[0] * xi.eta()[1].inv());
}
