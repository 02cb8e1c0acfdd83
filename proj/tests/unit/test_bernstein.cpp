#include <gtest/gtest.h>

#include <random>

#include "unram/bernstein.hpp"
#include "unram/corpus.hpp"

using namespace unram;

namespace {

SmoothCharacter corpus_chi(const char* name) { return make_character(corpus_entry(name), 4); }

struct BlockCase {
  const char* chi;
  int r;
};

// every split group at r = 2 and the unitary group at odd r
const BlockCase kBlocks[] = {{"sl2-cond2", 2}, {"sl2-quadratic", 2}, {"gl2-psi-1", 2}, {"gl2-psi-psi", 3},
                             {"sl3-cond2", 2}, {"sp4-psi-psi", 2}, {"su3-tame", 3}, {"su3-trivial", 3}};

LaurentPoly random_poly(std::mt19937& rng, int nvars, int terms) {
  std::uniform_int_distribution<int> ex(-2, 2), co(-3, 3), ord(1, 6);
  LaurentPoly p(nvars);
  for (int i = 0; i < terms; ++i) {
    IVec e(nvars);
    for (int& x : e) x = ex(rng);
    int M = ord(rng);
    Cyclo c = Cyclo::root(RootOfUnity(M, std::uniform_int_distribution<int>(0, M - 1)(rng))) * mpq_class(co(rng));
    p.add_term(e, c);
  }
  return p;
}

ScaledRoot random_scaled_root(std::mt19937& rng) {
  std::uniform_int_distribution<int> num(1, 5), ord(1, 12);
  int M = ord(rng);
  return {mpq_class(num(rng), num(rng)), RootOfUnity(M, std::uniform_int_distribution<int>(0, M - 1)(rng))};
}

ExtendedCharacter random_xi(std::mt19937& rng, const SmoothCharacter& chi, const WeylGroup& W) {
  auto rel = relative_weyl(W);
  int w = rel[std::uniform_int_distribution<size_t>(0, rel.size() - 1)(rng)];
  std::vector<ScaledRoot> eta;
  for (size_t k = 0; k < chi.datum().rel_basis.size(); ++k) eta.push_back(random_scaled_root(rng));
  return ExtendedCharacter(chi, eta).weyl_act(W, w);
}

std::shared_ptr<const TypeDatum> type_of(const char* name) {
  return std::make_shared<const TypeDatum>(build_type(corpus_chi(name)));
}

AffineWeylElement sl2x(int lambda, int w) { return {{lambda}, w}; }

}  // namespace

TEST(Center, TracePolynomialBaseChange) {
  auto chi = corpus_chi("sl2-trivial");
  LaurentPoly Z(1);
  Z.add_term({1}, Cyclo::rational(1));
  Z.add_term({-1}, Cyclo::rational(1));
  CenterElement z = CenterElement::make(chi.pullback_norm(2), Z);
  CenterElement b = base_change_br(z, chi, 2);
  LaurentPoly want(1);
  want.add_term({2}, Cyclo::rational(1));
  want.add_term({-2}, Cyclo::rational(1));
  EXPECT_EQ(b.poly(), want);
  EXPECT_EQ(b.poly().serialize(), "{[-2]: 1, [2]: 1}");

  std::mt19937 rng(11);
  for (int i = 0; i < 50; ++i) {
    int M = std::uniform_int_distribution<int>(1, 30)(rng);
    ScaledRoot eta{1, RootOfUnity(M, std::uniform_int_distribution<int>(0, M - 1)(rng))};
    EXPECT_EQ(b.poly().evaluate({eta}), Z.evaluate({eta.pow(2)}));
  }
}

TEST(Center, TraceActsByZetaPlusInverse) {
  auto chi = corpus_chi("sl2-trivial");
  LaurentPoly Z(1);
  Z.add_term({1}, Cyclo::rational(1));
  Z.add_term({-1}, Cyclo::rational(1));
  CenterElement z = CenterElement::make(chi, Z);
  for (int k = 0; k < 7; ++k) {
    RootOfUnity zeta(7, k);
    ExtendedCharacter xi(chi, {{1, zeta}});
    EXPECT_EQ(action_scalar(z, xi), Cyclo::root(zeta) + Cyclo::root(zeta.inv()));
  }
  CenterElement one = CenterElement::make(chi, LaurentPoly::constant(1, Cyclo::rational(1)));
  EXPECT_EQ(action_scalar(one, ExtendedCharacter(chi, {{mpq_class(2, 3), RootOfUnity(5, 2)}})), Cyclo::rational(1));
}

TEST(Center, NonInvariantInputsRejected) {
  auto chi = corpus_chi("sl2-trivial");
  LaurentPoly x = LaurentPoly::monomial({1}, Cyclo::rational(1));
  EXPECT_THROW(CenterElement::make(chi, x), NotInvariant);
  auto chi2 = chi.pullback_norm(2);
  CenterElement raw(chi2, std::make_shared<const WeylGroup>(chi2.datum()), full_levi_mask(chi2.datum()), x);
  EXPECT_FALSE(raw.is_invariant());
  EXPECT_THROW(base_change_br(raw, chi, 2), NotInvariant);
  CenterElement ok = CenterElement::symmetrize(chi2, x);
  EXPECT_THROW(base_change_br(ok, corpus_chi("sl2-cond2"), 2), WrongBlock);
}

TEST(Center, BaseChangeIsUnitalRingHomomorphism) {
  std::mt19937 rng(5);
  for (const auto& c : kBlocks) {
    auto chi = corpus_chi(c.chi);
    auto chi_r = chi.pullback_norm(c.r);
    int n = static_cast<int>(chi.datum().rel_basis.size());
    for (int trial = 0; trial < 4; ++trial) {
      CenterElement a = CenterElement::symmetrize(chi_r, random_poly(rng, n, 3));
      CenterElement b = CenterElement::symmetrize(chi_r, random_poly(rng, n, 3));
      ASSERT_TRUE(a.is_invariant()) << c.chi;
      CenterElement ba = base_change_br(a, chi, c.r), bb = base_change_br(b, chi, c.r);
      EXPECT_TRUE(ba.is_invariant()) << c.chi;
      EXPECT_EQ(base_change_br(a + b, chi, c.r), ba + bb) << c.chi;
      EXPECT_EQ(base_change_br(a * b, chi, c.r), ba * bb) << c.chi;
    }
    CenterElement one = CenterElement::make(chi_r, LaurentPoly::constant(n, Cyclo::rational(1)));
    EXPECT_EQ(base_change_br(one, chi, c.r).poly(), LaurentPoly::constant(n, Cyclo::rational(1)));
    CenterElement z = CenterElement::symmetrize(chi, random_poly(rng, n, 4));
    EXPECT_EQ(base_change_br(z, chi, 1), z) << c.chi;
  }
}

TEST(Center, ActionScalarCommutesWithNorm) {
  std::mt19937 rng(23);
  int checked = 0;
  for (const auto& c : kBlocks) {
    auto chi = corpus_chi(c.chi);
    auto chi_r = chi.pullback_norm(c.r);
    int n = static_cast<int>(chi.datum().rel_basis.size());
    WeylGroup W(chi.datum());
    for (int trial = 0; trial < 6; ++trial) {
      CenterElement Zr = CenterElement::symmetrize(chi_r, random_poly(rng, n, 3));
      ExtendedCharacter xi = random_xi(rng, chi, W);
      EXPECT_EQ(action_scalar(base_change_br(Zr, chi, c.r), xi), action_scalar(Zr, xi.compose_norm(c.r))) << c.chi;
      ++checked;
    }
  }
  EXPECT_EQ(checked, 48);
}

TEST(Center, ActionScalarIsWeylInvariant) {
  std::mt19937 rng(3);
  for (const auto& c : kBlocks) {
    auto chi = corpus_chi(c.chi);
    int n = static_cast<int>(chi.datum().rel_basis.size());
    CenterElement Z = CenterElement::symmetrize(chi, random_poly(rng, n, 4));
    ExtendedCharacter xi = random_xi(rng, chi, Z.weyl());
    Cyclo v = action_scalar(Z, xi);
    for (int w : relative_weyl(Z.weyl())) EXPECT_EQ(action_scalar(Z, xi.weyl_act(Z.weyl(), w)), v) << c.chi;
  }
}

TEST(Center, ActionScalarRejectsOtherBlocks) {
  auto chi = corpus_chi("sl2-cond2");
  CenterElement Z = CenterElement::make(chi, LaurentPoly::constant(1, Cyclo::rational(1)));
  ExtendedCharacter other(corpus_chi("sl2-trivial"), {{1, RootOfUnity(1, 0)}});
  EXPECT_THROW(action_scalar(Z, other), WrongBlock);
  ExtendedCharacter gl(corpus_chi("gl2-trivial"), {{1, RootOfUnity(1, 0)}, {1, RootOfUnity(1, 0)}});
  EXPECT_THROW(action_scalar(Z, gl), WrongBlock);
}

TEST(Center, ConstantTermSquareCommutes) {
  std::mt19937 rng(8);
  for (const auto& c : kBlocks) {
    auto chi = corpus_chi(c.chi);
    auto chi_r = chi.pullback_norm(c.r);
    const RootDatum& d = chi.datum();
    int n = static_cast<int>(d.rel_basis.size());
    CenterElement Zr = CenterElement::symmetrize(chi_r, random_poly(rng, n, 3));
    for (unsigned mask = 0; mask <= full_levi_mask(d); ++mask) {
      if (!d.is_split() && mask != 0 && mask != full_levi_mask(d)) {
        EXPECT_THROW(constant_term_cMG(Zr, mask), InvalidLevi) << c.chi << " mask " << mask;
        continue;
      }
      CenterElement left = base_change_br(constant_term_cMG(Zr, mask), chi, c.r);
      CenterElement right = constant_term_cMG(base_change_br(Zr, chi, c.r), mask);
      EXPECT_EQ(left, right) << c.chi << " mask " << mask;
      EXPECT_TRUE(left.is_invariant());
    }
    EXPECT_EQ(constant_term_cMG(Zr, full_levi_mask(d)), Zr);
    CenterElement T = constant_term_cMG(Zr, 0);
    EXPECT_EQ(T.group().size(), 1u);
    EXPECT_EQ(T.poly(), Zr.poly());
    EXPECT_THROW(constant_term_cMG(Zr, full_levi_mask(d) + 1), InvalidLevi);
  }
}

TEST(Hecke, UnitTakesCharacterInverseOnTorus) {
  auto type = type_of("sl2-cond2");
  HeckeFunction e = unit_e_rho(type);
  const RingSpec& R = RingSpec::get(3, 1, 8);
  EXPECT_EQ(e.eval(ScaledMat2::identity(R)), Cyclo::rational(1));
  SmoothCharacter chi = type->chi.rebind(R);
  for (int64_t m : {2, 4, 5, 7, 8}) {
    TElem u(R, m);
    Cyclo want = Cyclo::root(chi.evaluate({u}).inv());
    EXPECT_EQ(e.eval(ScaledMat2::diag(u, 0, u.inv(), 0)), want) << m;
  }
  EXPECT_TRUE(e.eval(ScaledMat2::diag(TElem(R, 1), 1, TElem(R, 1), -1)).is_zero());
}

TEST(Hecke, UnitIsIdempotent) {
  for (const char* name :
       {"sl2-trivial", "sl2-quadratic", "sl2-cond2", "sl2-cond3", "gl2-trivial", "gl2-psi-1", "gl2-psi-psi"}) {
    auto type = type_of(name);
    HeckeFunction e = unit_e_rho(type);
    int N = convolution_precision(e);
    ASSERT_LE(N, 5) << name;
    EXPECT_EQ(convolve(e, e, N), e) << name << "\n" << convolve(e, e, N).serialize();
  }
}

TEST(Hecke, UnitIsTwoSided) {
  auto type = type_of("sl2-trivial");
  HeckeFunction e = unit_e_rho(type);
  HeckeFunction f = indicator(type, sl2x(-1, 1)) + indicator(type, sl2x(0, 1)) * Cyclo::rational(2);
  EXPECT_EQ(convolve(f, e, convolution_precision(f)), f);
  EXPECT_EQ(convolve(e, f, convolution_precision(e)), f);
}

// n_{s1} n_{s0} = -t_1, and -1 lies in the Iwahori with trivial character
TEST(Hecke, IwahoriLengthAdditiveProduct) {
  auto type = type_of("sl2-trivial");
  ASSERT_TRUE(type->is_iwahori());
  AffineWeylElement s1 = sl2x(0, 1), s0 = sl2x(-1, 1);
  WeylGroup W(type->chi.datum());
  AffineWeylElement prod = affine_mul(W, s1, s0);
  EXPECT_EQ(prod.lambda, IVec{1});
  EXPECT_EQ(prod.w, 0);
  HeckeFunction a = indicator(type, s1), b = indicator(type, s0);
  EXPECT_EQ(convolve(a, b, convolution_precision(a)), indicator(type, prod));
  EXPECT_EQ(convolve(b, a, convolution_precision(b)), indicator(type, affine_mul(W, s0, s1)));
}

// T_s * T_s = (q - 1) T_s + q T_1 with q = 3
TEST(Hecke, IwahoriQuadraticRelation) {
  auto type = type_of("sl2-trivial");
  HeckeFunction s = indicator(type, sl2x(0, 1));
  HeckeFunction want = s * Cyclo::rational(2) + unit_e_rho(type) * Cyclo::rational(3);
  EXPECT_EQ(convolve(s, s, convolution_precision(s)), want);
}

TEST(Hecke, AssociativityOnRandomTriples) {
  auto type = type_of("sl2-trivial");
  std::vector<AffineWeylElement> basis{sl2x(0, 0), sl2x(0, 1), sl2x(-1, 1)};
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> pick(0, 2), coef(-2, 2);
  auto random_f = [&] {
    HeckeFunction f = indicator(type, basis[pick(rng)]) * Cyclo::rational(coef(rng) == 0 ? 1 : 3);
    return f;
  };
  for (int trial = 0; trial < 4; ++trial) {
    HeckeFunction f = random_f(), g = random_f(), h = random_f();
    HeckeFunction fg = convolve(f, g, convolution_precision(f));
    HeckeFunction gh = convolve(g, h, convolution_precision(g));
    EXPECT_EQ(convolve(fg, h, convolution_precision(fg)), convolve(f, gh, convolution_precision(f)));
  }
}

TEST(Hecke, BiEquivariance) {
  struct Case {
    const char* chi;
    AffineWeylElement x;
  };
  std::mt19937 rng(29);
  for (const Case& c : {Case{"sl2-cond2", sl2x(0, 0)}, Case{"sl2-cond2", sl2x(1, 0)}, Case{"sl2-trivial", sl2x(-1, 1)},
                        Case{"sl2-quadratic", sl2x(0, 1)}, Case{"gl2-psi-psi", {{0, 0}, 0}},
                        Case{"gl2-psi-psi", {{1, 0}, 0}}, Case{"gl2-trivial", {{0, -1}, 1}}}) {
    auto type = type_of(c.chi);
    HeckeFunction f = indicator(type, c.x);
    const RingSpec& R = RingSpec::get(3, 1, 12);
    auto reps = j_mod(R, f.depths(), 3, f.gl2());
    ScaledMat2 n = affine_rep(c.x, f.gl2(), R);
    std::uniform_int_distribution<size_t> pick(0, reps.size() - 1);
    for (int t = 0; t < 20; ++t) {
      const JRep& j1 = reps[pick(rng)];
      const JRep& j2 = reps[pick(rng)];
      RootOfUnity want = rho_inverse(*type, j1.t1, j1.t2) * rho_inverse(*type, j2.t1, j2.t2);
      EXPECT_EQ(f.eval(j1.j * n * j2.j), Cyclo::root(want)) << c.chi;
    }
  }
}

TEST(Hecke, OffSupportAndSmallWindowRejected) {
  auto type = type_of("sl2-cond2");
  EXPECT_FALSE(support_predicted(*type, sl2x(0, 1)));
  EXPECT_THROW(indicator(type, sl2x(0, 1)), std::invalid_argument);
  HeckeFunction e = unit_e_rho(type);
  EXPECT_THROW(convolve(e, e, convolution_precision(e) - 1), WindowTooSmall);
}
