#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "unram/integrals.hpp"
#include "unram/mat2.hpp"
#include "unram/types_builder.hpp"

namespace unram {

struct NotInvariant : std::invalid_argument { using std::invalid_argument::invalid_argument; };
struct WrongBlock : std::invalid_argument { using std::invalid_argument::invalid_argument; };

/*
 * Laurent polynomial in variables x_k indexed by the basis of X_*(A).  The
 * monomial x^lambda evaluates at eta to prod eta_k^{lambda_k}.  Zero
 * coefficients are never stored.
 */
class LaurentPoly {
 public:
  LaurentPoly() = default;
  explicit LaurentPoly(int nvars) : nvars_(nvars) {}
  static LaurentPoly constant(int nvars, const Cyclo& c);
  static LaurentPoly monomial(const IVec& exps, const Cyclo& c);

  int nvars() const { return nvars_; }
  const std::map<IVec, Cyclo>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  void add_term(const IVec& exps, const Cyclo& c);

  LaurentPoly operator+(const LaurentPoly& o) const;
  LaurentPoly operator-(const LaurentPoly& o) const;
  LaurentPoly operator*(const LaurentPoly& o) const;
  LaurentPoly operator*(const Cyclo& c) const;
  bool operator==(const LaurentPoly& o) const;
  bool operator!=(const LaurentPoly& o) const { return !(*this == o); }

  LaurentPoly scale_exponents(int r) const;      // x^lambda -> x^{r lambda}
  LaurentPoly substitute(const IMat& m) const;  // x^lambda -> x^{m lambda}
  Cyclo evaluate(const std::vector<ScaledRoot>& eta) const;
  // "{[1]: 1, [-1]: 1}" with coefficients in Cyclo::str form
  std::string serialize() const;

 private:
  int nvars_ = 0;
  std::map<IVec, Cyclo> terms_;
};

// the action of a relative Weyl element on X_*(A) coordinates
IMat relative_action(const WeylGroup& W, int w);

/*
 * Element of Z(G, rho) for the block of chi, through the Laurent invariants.
 * levi_mask names the standard Levi M whose center this is (every simple
 * root for G); the invariance group is W_{M,0chi}.
 */
class CenterElement {
 public:
  CenterElement(const SmoothCharacter& chi, std::shared_ptr<const WeylGroup> W, unsigned levi_mask,
                LaurentPoly poly);
  // group W_{0chi}; NotInvariant unless poly is invariant
  static CenterElement make(const SmoothCharacter& chi, const LaurentPoly& poly);
  // sum of the W_{0chi} translates of poly
  static CenterElement symmetrize(const SmoothCharacter& chi, const LaurentPoly& poly);

  const SmoothCharacter& chi() const { return chi_; }
  const LaurentPoly& poly() const { return poly_; }
  unsigned levi_mask() const { return mask_; }
  const std::vector<int>& group() const { return group_; }
  const WeylGroup& weyl() const { return *W_; }
  std::shared_ptr<const WeylGroup> weyl_ptr() const { return W_; }
  bool is_invariant() const;

  CenterElement operator+(const CenterElement& o) const;
  CenterElement operator*(const CenterElement& o) const;
  bool operator==(const CenterElement& o) const;
  std::string serialize() const;

 private:
  CenterElement(const SmoothCharacter& chi, std::shared_ptr<const WeylGroup> W, unsigned levi_mask,
                std::vector<int> group, LaurentPoly poly);
  friend CenterElement constant_term_cMG(const CenterElement& Z, unsigned levi_mask);

  SmoothCharacter chi_;
  std::shared_ptr<const WeylGroup> W_;
  unsigned mask_;
  std::vector<int> group_;
  LaurentPoly poly_;
};

/*
 * b_r : Z(G_r, rho_r) -> Z(G, rho).  Z_r must live on the block of
 * chi o N_r; the result lives on the block of chi.
 */
CenterElement base_change_br(const CenterElement& Z_r, const SmoothCharacter& chi, int r);

// scalar by which Z acts on i_B^G(xi)^rho; WrongBlock unless xi|^0T is W-conjugate to chi
Cyclo action_scalar(const CenterElement& Z, const ExtendedCharacter& xi);

// c_M^G for the standard Levi of a simple-root mask; InvalidLevi for masks that are not h-stable
CenterElement constant_term_cMG(const CenterElement& Z, unsigned levi_mask);

/* ---- rank-one Hecke functions (SL2, GL2) ---- */

// depths of J: upper entry in p^fplus, lower entry in p^fminus
struct Depths {
  int fplus = 0;
  int fminus = 1;
};

/*
 * Membership of X in J diag(p^a, p^b) J', returning the torus part diag(t1, t2)
 * of the decomposition.  For a >= b this needs a - b + J.fminus >= J'.fminus,
 * for a < b it needs b - a + J.fplus >= J'.fplus.
 */
bool double_coset_torus(const ScaledMat2& X, int a, int b, const Depths& J, const Depths& Jp, TElem* t1,
                        TElem* t2);

// det X = p^{val} unit
void det_split(const ScaledMat2& X, int* val, TElem* unit);

/* Element of J mod K_M as l(z) diag(t1, t2) n(y), with its inverse. */
struct JRep {
  ScaledMat2 j;
  ScaledMat2 jinv;
  TElem t1, t2;
};

std::vector<JRep> j_mod(const RingSpec& ring, const Depths& J, int M, bool gl2);

// one term of a Hecke function: f(n_x) = value, n_x = lambda(p) sigma^w, sigma = [[0, 1], [-1, 0]]
struct HeckeTerm {
  AffineWeylElement x;
  Cyclo value;
};

class HeckeFunction {
 public:
  // each x must lie in the predicted support; duplicate x are summed
  HeckeFunction(std::shared_ptr<const TypeDatum> type, std::vector<HeckeTerm> terms);

  const TypeDatum& type() const { return *type_; }
  std::shared_ptr<const TypeDatum> type_ptr() const { return type_; }
  const std::vector<HeckeTerm>& terms() const { return terms_; }
  bool gl2() const { return gl2_; }
  Depths depths() const;
  // largest |a - b| over the terms' translation parts
  int spread() const;

  Cyclo eval(const ScaledMat2& g) const;
  Cyclo eval(const AffineWeylElement& x) const;
  HeckeFunction operator+(const HeckeFunction& o) const;
  HeckeFunction operator*(const Cyclo& c) const;
  bool operator==(const HeckeFunction& o) const;
  // one record per term: "lambda=[..] w=.. value=.."
  std::string serialize() const;

 private:
  std::shared_ptr<const TypeDatum> type_;
  std::vector<HeckeTerm> terms_;
  bool gl2_;
};

// matrix of n_x over ring
ScaledMat2 affine_rep(const AffineWeylElement& x, bool gl2, const RingSpec& ring);
ScaledMat2 affine_rep_inverse(const AffineWeylElement& x, bool gl2, const RingSpec& ring);

// rho(j)^{-1} as a root of unity, j in J given by its torus part
RootOfUnity rho_inverse(const TypeDatum& type, const TElem& t1, const TElem& t2);

HeckeFunction unit_e_rho(std::shared_ptr<const TypeDatum> type);
// characteristic function of J n_x J scaled to value 1 at n_x
HeckeFunction indicator(std::shared_ptr<const TypeDatum> type, const AffineWeylElement& x);

/*
 * (f * g)(n_v) = sum over y J in supp f of f(y) g(y^{-1} n_v), enumerating
 * J mod K_precision.  WindowTooSmall when K_precision is not inside every
 * J n_x J n_x^{-1}.
 */
HeckeFunction convolve(const HeckeFunction& f, const HeckeFunction& g, int precision, int threads = 1);

// precision convolve needs for f * g
int convolution_precision(const HeckeFunction& f);

}  // namespace unram
