#include <gtest/gtest.h>

#include <random>

#include "unram/corpus.hpp"
#include "unram/types_builder.hpp"

using namespace unram;

namespace {

TElem rand_val(const RingSpec& s, std::mt19937_64& rng, int v) {
  Coeffs c{};
  for (int i = 0; i < s.e; ++i) c[i] = static_cast<int64_t>(rng() % static_cast<uint64_t>(s.pN));
  TElem a(s, c);
  return v > 0 ? a * TElem(s, s.ppow[std::min(v, s.N)]) : a;
}

TElem rand_unit(const RingSpec& s, std::mt19937_64& rng) {
  for (;;) {
    TElem a = rand_val(s, rng, 0);
    if (a.is_unit()) return a;
  }
}

// random element of J_s over the ring of a split group
GroupWord random_type_element(const TypeDatum& t, const RingSpec& s, std::mt19937_64& rng) {
  const RootDatum& d = *t.datum;
  GroupWord w(d, s);
  for (int k = 0; k < 6; ++k) {
    if (rng() % 3 == 0) {
      std::vector<TElem> u;
      for (int j = 0; j < d.rank; ++j) u.push_back(rand_unit(s, rng));
      w.push(Generator::t(u, IVec(d.rank, 0)));
    } else {
      int a = static_cast<int>(rng() % d.num_roots());
      w.push(Generator::u(a, rand_val(s, rng, t.depths()[a])));
    }
  }
  return w;
}

}  // namespace

TEST(Types, ConcaveValuesFromConductor) {
  const auto& d = build_root_datum("SL2");
  for (auto [c, fp, fn] : std::vector<std::tuple<int, int, int>>{{1, 0, 1}, {2, 1, 1}, {3, 1, 2}, {4, 2, 2}}) {
    auto f = concave_from_conductors(d, {c, c});
    EXPECT_EQ(f.f[0], fp);
    EXPECT_EQ(f.f[1], fn);
  }
}

TEST(Types, SumRuleAndConcavityOverCorpus) {
  for (const auto& c : character_corpus()) {
    auto chi = make_character(c, 4);
    auto f = concave_function(chi);
    const auto& d = chi.datum();
    for (int a = 0; a < d.num_roots(); ++a) {
      EXPECT_EQ(f.f[a] + f.f[d.neg(a)], f.cond[a]) << c.name;
      EXPECT_EQ(f.cond[a], f.cond[d.h_root[a]]) << c.name;
      EXPECT_TRUE(conductor_is_minimal(chi, a, f.cond[a])) << c.name;
    }
    EXPECT_TRUE(is_concave(d, f.f)) << c.name;
  }
}

TEST(Types, CorpusConductors) {
  auto cond = [](const std::string& n) { return concave_function(make_character(corpus_entry(n), 4)).cond; };
  EXPECT_EQ(cond("sl2-trivial"), (std::vector<int>{1, 1}));
  EXPECT_EQ(cond("sl2-cond2"), (std::vector<int>{2, 2}));
  EXPECT_EQ(cond("sl2-cond3"), (std::vector<int>{3, 3}));
  EXPECT_EQ(cond("sl3-cond2"), (std::vector<int>(6, 2)));
  EXPECT_EQ(cond("sp4-psi-psi"), (std::vector<int>{2, 2, 1, 2, 2, 2, 1, 2}));
  EXPECT_EQ(cond("gl2-psi-1"), (std::vector<int>{2, 2}));
}

TEST(Types, DepthZeroIsIwahori) {
  for (const auto& c : character_corpus()) {
    auto t = build_type(make_character(c, 4));
    bool tame = true;
    for (int v : t.f.cond) tame = tame && v == 1;
    EXPECT_EQ(t.is_iwahori(), tame) << c.name;
  }
  EXPECT_TRUE(build_type(make_character(corpus_entry("sl2-quadratic"), 4)).is_iwahori());
}

TEST(Types, TwistedLeviSequences) {
  auto triv = build_type(make_character(corpus_entry("sl2-trivial"), 4));
  EXPECT_EQ(triv.levi.d, 1);
  EXPECT_EQ(triv.levi.r, (std::vector<int>{0}));

  auto c2 = build_type(make_character(corpus_entry("sl2-cond2"), 4));
  EXPECT_EQ(c2.levi.d, 2);
  EXPECT_EQ(c2.levi.r, (std::vector<int>{1, 1}));
  EXPECT_TRUE(c2.levi.subsystems[1].empty());

  auto c3 = build_type(make_character(corpus_entry("sl2-cond3"), 4));
  EXPECT_EQ(c3.levi.r, (std::vector<int>{2, 2}));

  // the long root 2a1+a2 has conductor 1 and spans G^2
  auto sp = build_type(make_character(corpus_entry("sp4-psi-psi"), 4));
  EXPECT_EQ(sp.levi.d, 2);
  EXPECT_EQ(sp.levi.subsystems[1], (std::vector<int>{2, 6}));
}

TEST(Types, SL3TableWithSingleDeepRootIsRejected) {
  const auto& d = build_root_datum("SL3");
  // cond(a)=2, cond(b)=cond(a+b)=1: {+-b, +-(a+b)} is not closed
  std::vector<int> cond = {2, 1, 1, 2, 1, 1};
  EXPECT_THROW(twisted_levi_from_conductors(d, cond, 1), NonClosedSubsystem);
  // cond(a+b)=2 alone: {+-a, +-b} misses a+b
  EXPECT_THROW(twisted_levi_from_conductors(d, {1, 1, 2, 1, 1, 2}, 1), NonClosedSubsystem);
  EXPECT_NO_THROW(twisted_levi_from_conductors(d, {2, 1, 2, 2, 1, 2}, 1));
}

TEST(Types, RhoIsHomomorphismOnJ) {
  std::mt19937_64 rng(101);
  for (const char* name : {"sl2-cond2", "sl2-cond3", "gl2-psi-1", "sl3-cond2", "sp4-psi-psi"}) {
    auto chi = make_character(corpus_entry(name), 5);
    auto t = build_type(chi);
    ChevalleyGroup G(*t.datum, chi.ring());
    for (int k = 0; k < 40; ++k) {
      GroupWord a = random_type_element(t, chi.ring(), rng), b = random_type_element(t, chi.ring(), rng);
      EXPECT_EQ(rho_eval(t, G, a * b), rho_eval(t, G, a) * rho_eval(t, G, b)) << name;
    }
  }
}

TEST(Types, RhoStripsUnipotentParts) {
  auto chi = make_character(corpus_entry("sl2-cond2"), 4);
  auto t = build_type(chi);
  const auto& s = chi.ring();
  ChevalleyGroup G(*t.datum, s);
  TElem m(s, 2);  // 2 = -(1+3)^2 mod 9
  GroupWord g(*t.datum, s);
  g.push(Generator::u(1, TElem(s, 3))).push(Generator::t({m}, {0})).push(Generator::u(0, TElem(s, 3)));
  EXPECT_EQ(rho_eval(t, G, g), chi.evaluate({m}));
  EXPECT_EQ(rho_eval(t, G, GroupWord(*t.datum, s)), RootOfUnity(1, 0));
  GroupWord bad(*t.datum, s);
  bad.push(Generator::u(0, TElem(s, 1)));
  EXPECT_THROW(rho_eval(t, G, bad), NotInType);
}

// |J mod p^N| = prod_a q^(N - f(a)) * |(O/p^N)^x|, counted over SL2(Z/p^N) matrices
TEST(Types, IwahoriFactorizationCount) {
  for (const char* name : {"sl2-trivial", "sl2-cond2", "sl2-cond3"}) {
    const int N = 3;
    auto t = build_type(make_character(corpus_entry(name), N));
    const int64_t pN = 27;
    auto val = [](int64_t x) {
      int v = 0;
      if (x == 0) return 3;
      while (x % 3 == 0) {
        x /= 3;
        ++v;
      }
      return v;
    };
    int64_t count = 0;
    for (int64_t a = 0; a < pN; ++a)
      for (int64_t b = 0; b < pN; ++b)
        for (int64_t c = 0; c < pN; ++c)
          for (int64_t dd = 0; dd < pN; ++dd) {
            if (((a * dd - b * c) % pN + pN) % pN != 1) continue;
            if (val(a) == 0 && val(b) >= t.depths()[0] && val(c) >= t.depths()[1]) ++count;
          }
    int64_t predicted = 18;  // units mod 27
    for (int a = 0; a < 2; ++a)
      for (int k = 0; k < N - t.depths()[a]; ++k) predicted *= 3;
    EXPECT_EQ(count, predicted) << name;
  }
}

TEST(Types, BaseChangeLayerKeepsDepthVector) {
  for (const char* name : {"sl2-cond2", "sl2-cond3", "gl2-psi-1", "sp4-psi-psi"}) {
    auto chi = make_character(corpus_entry(name), 4);
    auto base = build_type(chi);
    for (int r : {2, 3}) {
      auto up = build_type(chi.pullback_norm(r));
      EXPECT_EQ(up.depths(), base.depths()) << name << " r=" << r;
    }
  }
}

TEST(Types, StabilizerFinitePart) {
  auto c2 = build_type(make_character(corpus_entry("sl2-cond2"), 4));
  EXPECT_EQ(c2.stabilizer.finite.size(), 1u);
  EXPECT_TRUE(support_predicted(c2, {{3}, 0}));
  EXPECT_FALSE(support_predicted(c2, {{0}, 1}));
  auto quad = build_type(make_character(corpus_entry("sl2-quadratic"), 4));
  EXPECT_EQ(quad.stabilizer.finite.size(), 2u);
  auto gl = build_type(make_character(corpus_entry("gl2-psi-psi"), 4));
  EXPECT_EQ(gl.stabilizer.finite.size(), 2u);
  auto sp = build_type(make_character(corpus_entry("sp4-psi-psi"), 4));
  // the group generated by its elements is closed
  for (int a : sp.stabilizer.finite)
    for (int b : sp.stabilizer.finite) EXPECT_TRUE(sp.stabilizer.contains_finite(sp.weyl->mul(a, b)));
}

TEST(Types, ReportListsRootsAndStrata) {
  auto t = build_type(make_character(corpus_entry("sl2-cond2"), 4));
  std::string rep = type_report(t);
  EXPECT_NE(rep.find("levi d=2 r=1,1"), std::string::npos);
  EXPECT_NE(rep.find("W0chi order=1"), std::string::npos);
  EXPECT_NE(rep.find("0 (2) 2 1"), std::string::npos);
}
