#include <gtest/gtest.h>

#include "unram/corpus.hpp"
#include "unram/integrals.hpp"

using namespace unram;

namespace {

SmoothCharacter corpus_chi(const char* name) { return make_character(corpus_entry(name), 4); }

Cyclo reference_value(const ElementaryFunction& phi, const TorusClass& delta, const Window& w) {
  const RingSpec& L = phi.layer(w.N);
  SmoothCharacter chi = phi.chi_r(w.N);
  Rank1Orbital job;
  job.ring = &L;
  job.theta_power = phi.theta_power();
  job.gl2 = phi.gl2();
  job.cell = phi.cell();
  job.chi = &chi;
  job.delta = torus_class_matrix(delta, phi.gl2(), torus_class_ring(delta, phi.gl2(), L), &job.delta_det_val,
                                 &job.delta_det_unit);
  job.B = w.B;
  job.c = w.c;
  Rank1Result res = rank1_orbital_serial(job);
  mpz_class d;
  mpz_ui_pow_ui(d.get_mpz_t(), L.p, res.weight_exponent);
  return res.counts.value(mpq_class(1, d));
}

}  // namespace

TEST(Integrals, FastKernelMatchesSerialReference) {
  struct Case {
    const char* chi;
    int r;
    IVec nu;
    Window w;
  };
  for (const Case& c : {Case{"sl2-cond2", 2, {1}, {5, 1, 0}}, Case{"sl2-trivial", 1, {1}, {5, 1, 1}},
                        Case{"gl2-psi-1", 1, {1, -1}, {5, 1, 0}}, Case{"sl2-cond3", 1, {2}, {6, 0, 1}}}) {
    ElementaryFunction phi(corpus_chi(c.chi), c.r, c.nu);
    const RingSpec& L = phi.layer(c.w.N);
    for (const auto& cls : compact_torus_classes(phi.gl2(), L, 1)) {
      TorusClass delta{cls.m, c.nu};
      EXPECT_EQ(twisted_orbital_value(phi, delta, c.w, 1), reference_value(phi, delta, c.w)) << c.chi;
    }
  }
}

TEST(Integrals, ClosedFormOnSampledClasses) {
  for (const char* name : {"sl2-trivial", "sl2-quadratic", "sl2-cond2", "gl2-psi-1"}) {
    auto chi = corpus_chi(name);
    for (int r : {1, 2}) {
      IVec nu = chi.datum().name == "GL2" ? IVec{1, -1} : IVec{1};
      ElementaryFunction phi(chi, r, nu);
      auto classes = compact_torus_classes(phi.gl2(), phi.layer(6), 2);
      for (size_t i = 0; i < classes.size(); i += 7) {
        TorusClass delta{classes[i].m, nu};
        OrbitalReport rep = brute_twisted_orbital(phi, delta, {6, 0, 0}, 1);
        EXPECT_TRUE(rep.stable) << rep.str();
        EXPECT_EQ(rep.value, closed_form_orbital(phi, delta)) << name << " " << rep.str();
      }
    }
  }
}

// left translation by N(O) permutes K/J, so refining the unipotent grid changes nothing
TEST(Integrals, UnipotentModulusInvariance) {
  ElementaryFunction phi(corpus_chi("sl2-cond2"), 2, {1});
  const RingSpec& L = phi.layer(5);
  TElem m = TElem::gen(L) + TElem(L, 3);
  TorusClass delta{{m}, {1}};
  EXPECT_EQ(twisted_orbital_value(phi, delta, {5, 0, 0}, 1), twisted_orbital_value(phi, delta, {5, 0, 1}, 1));
  EXPECT_EQ(twisted_orbital_value(phi, delta, {5, 1, 0}, 1), twisted_orbital_value(phi, delta, {5, 1, 1}, 1));
}

TEST(Integrals, OtherCartanCellsVanish) {
  ElementaryFunction phi(corpus_chi("sl2-cond2"), 2, {1});
  const RingSpec& L = phi.layer(6);
  for (int k : {0, 2, 3}) {
    OrbitalReport rep = brute_twisted_orbital(phi, {{TElem(L, 2)}, {k}}, {6, 0, 0}, 1);
    EXPECT_TRUE(rep.value.is_zero()) << rep.str();
    EXPECT_TRUE(rep.stable);
  }
  ElementaryFunction g(corpus_chi("gl2-psi-psi"), 2, {1, -1});
  const RingSpec& G = g.layer(6);
  OrbitalReport rep = brute_twisted_orbital(g, {{TElem(G, 1), TElem(G, 1)}, {1, 0}}, {6, 0, 0}, 1);
  EXPECT_TRUE(rep.value.is_zero()) << rep.str();
}

// diag(m p^{-1}, m^{-1} p) = s^{-1} diag(m^{-1} p, m p^{-1}) s is theta-conjugate to m^{-1} u
TEST(Integrals, WeylConjugateClassPicksInverse) {
  ElementaryFunction phi(corpus_chi("sl2-cond2"), 2, {1});
  const RingSpec& L = phi.layer(6);
  int checked = 0;
  for (const auto& cls : compact_torus_classes(false, L, 2)) {
    TElem m = cls.m[0];
    Cyclo inv = closed_form_orbital(phi, {{m.inv()}, {1}});
    if (inv == closed_form_orbital(phi, {{m}, {1}})) continue;
    EXPECT_EQ(twisted_orbital_value(phi, {{m}, {-1}}, {6, 1, 0}, 1), inv);
    if (++checked == 4) break;
  }
  EXPECT_EQ(checked, 4);
}

TEST(Integrals, ElementaryFunctionOnConjugates) {
  auto chi = corpus_chi("sl2-cond2");
  ElementaryFunction phi(chi, 2, {1});
  const RingSpec& L = phi.layer(6);
  const RootDatum& d = chi.datum();
  ChevalleyGroup G(d, L);
  TElem m = TElem::gen(L) * TElem(L, 2) + TElem(L, 1);
  for (int64_t y : {0, 3, 6}) {
    // k = u_-a(y) u_a(x) lies in J for cond 2 (depths 1, 1)
    GroupWord k(d, L);
    k.push(Generator::u(1, TElem(L, y))).push(Generator::u(0, TElem(L, 3) * TElem::gen(L)));
    GroupWord delta(d, L);
    delta.push(Generator::t({m}, {1}));
    GroupWord x = k.inverse(G.weyl()) * delta * G.theta_act(k, phi.theta_power());
    auto v = phi.eval(G, x);
    ASSERT_TRUE(v.has_value());
    EXPECT_EQ(Cyclo::root(*v), closed_form_orbital(phi, {{m}, {1}}));
  }
  GroupWord off(d, L);
  off.push(Generator::t({m}, {2}));
  EXPECT_FALSE(phi.eval(G, off).has_value());
}

TEST(Integrals, NormDescendsToBase) {
  const RingSpec& L = RingSpec::get(3, 2, 5);
  const RingSpec& base = RingSpec::get(3, 1, 5);
  TElem m = TElem::gen(L) + TElem(L, 1);
  auto n = norm_units({m}, 2, 1, base);
  EXPECT_EQ(&n[0].spec(), &base);
  EXPECT_EQ(ExtensionTower(base, L).embed(n[0]), m * m.frobenius(1));
}

TEST(Integrals, MatchingOnSubsample) {
  MatchingReport rep = verify_matching(corpus_chi("sl2-cond2"), {1}, 2, {6, 0, 0}, 1, 9);
  EXPECT_TRUE(rep.pass) << rep.str();
  EXPECT_EQ(rep.rows.size(), 8u);
  MatchingReport gl = verify_matching(corpus_chi("gl2-psi-1"), {1, -1}, 2, {6, 0, 0}, 1, 401);
  EXPECT_TRUE(gl.pass) << gl.str();
  EXPECT_EQ(gl.non_norm.size(), 3u);
}

TEST(Integrals, StableClassTwistedConjugates) {
  ElementaryFunction phi(corpus_chi("gl2-psi-psi"), 2, {1, -1});
  const RingSpec& L = phi.layer(6);
  OrbitalReport rep = stable_orbital(phi, {{TElem::gen(L), TElem(L, 1)}, {1, -1}}, {6, 0, 0}, 1);
  EXPECT_TRUE(rep.stable) << rep.str();
  EXPECT_THROW(stable_orbital(phi, {{TElem(L, 1), TElem(L, 1)}, {0, 0}}, {6, 0, 0}, 1), UnsupportedClass);
}

// trivial character, m regular mod p: K/I = P^1(F_q) has two m-fixed points
TEST(Integrals, DescentDepthZeroCountsFixedPoints) {
  auto chi = corpus_chi("gl2-trivial");
  const RingSpec& L = RingSpec::get(3, 1, 6);
  DescentReport rep = verify_descent(chi, 1, {TElem(L, 1), TElem(L, 2)}, 6, 1);
  EXPECT_EQ(rep.j, 0);
  EXPECT_EQ(rep.lhs.value, Cyclo::rational(2));
  EXPECT_TRUE(rep.pass) << rep.str();
}

TEST(Integrals, DescentWithDeeperDiscriminant) {
  for (const char* name : {"gl2-psi-1", "gl2-psi-psi"}) {
    auto chi = corpus_chi(name);
    for (int r : {1, 2}) {
      const RingSpec& L = RingSpec::get(3, r, 6);
      // a = N(m2 / m1) = 1 + 3 * unit, so j = 1
      TElem m2 = r == 1 ? TElem(L, 4) : TElem(L, 1) + TElem(L, 3) * TElem::gen(L);
      if (r == 2) {
        auto a = norm_units({m2}, 2, 1, RingSpec::get(3, 1, 6));
        ASSERT_EQ((TElem(a[0].spec(), 1) - a[0]).valuation(), 1);
      }
      DescentReport rep = verify_descent(chi, r, {TElem(L, 1), m2}, 6, 1);
      EXPECT_EQ(rep.j, 1);
      EXPECT_TRUE(rep.pass) << rep.str();
    }
  }
  const RingSpec& L = RingSpec::get(3, 1, 6);
  EXPECT_THROW(verify_descent(corpus_chi("gl2-psi-1"), 1, {TElem(L, 2), TElem(L, 2)}, 6, 1), NotSemisimpleNorm);
}

TEST(Integrals, IndexCountsAndUnitClass) {
  auto chi = corpus_chi("sl2-cond2");
  for (int r : {1, 2}) {
    IndexComparison rep = compare_index_unit(chi, r);
    EXPECT_EQ(rep.index_IJ, 3);
    EXPECT_EQ(rep.layer_index, r == 1 ? 3 : 9);
    EXPECT_TRUE(rep.pass) << rep.str();
  }
}

TEST(Integrals, IndexAtCompactAndTranslateClasses) {
  auto chi = corpus_chi("sl2-cond2");
  ElementaryFunction unit(chi, 1, {0});
  const RingSpec& L = unit.layer(5);
  IndexComparison compact = compare_index(chi, 1, {{TElem(L, 2)}, {0}}, {5, 0, 0}, 1);
  EXPECT_TRUE(compact.pass) << compact.str();
  EXPECT_FALSE(compact.rhs.value.is_zero());
  IndexComparison translate = compare_index(chi, 1, {{TElem(L, 2)}, {1}}, {5, 0, 0}, 1);
  EXPECT_TRUE(translate.pass) << translate.str();
}

TEST(Integrals, SmallWindowIsRejected) {
  ElementaryFunction phi(corpus_chi("sl2-cond3"), 1, {0});
  const RingSpec& L = phi.layer(6);
  EXPECT_THROW(twisted_orbital_value(phi, {{TElem(L, 1)}, {0}}, {2, 0, 0}, 1), WindowTooSmall);
}
