#pragma once

#include <functional>
#include <string>
#include <vector>

#include "unram/padic.hpp"
#include "unram/root_data.hpp"
#include "unram/scalars.hpp"

namespace unram {

struct NotInDomain : std::domain_error { using std::domain_error::domain_error; };

/*
 * (O/p^C)^x with generators g (Teichmuller lift of a residue generator, order
 * q-1) and 1 + p x^i for i < e (order p^(C-1) each; valid for odd p).  The
 * discrete log is a dense table indexed by TElem::encode(C).
 */
class UnitGroup {
 public:
  static const UnitGroup& get(const RingSpec& s, int C);

  const RingSpec& ring() const { return *s_; }
  int level() const { return C_; }
  int64_t order() const { return static_cast<int64_t>(elems_.size()); }  // (q-1) q^(C-1)
  int64_t exponent() const { return (q_ - 1) * pC1_; }
  int64_t tame_order() const { return q_ - 1; }
  int64_t wild_order() const { return pC1_; }  // p^(C-1)
  const TElem& tame_generator() const { return g_; }
  const std::vector<TElem>& wild_generators() const { return wild_; }
  int64_t table_size() const { return static_cast<int64_t>(dlog_.size()); }

  struct Log {
    int64_t a = -1;              // exponent of g, -1 marks a non-unit slot
    std::array<int64_t, kMaxDegree> b{};
  };
  const Log& dlog(const TElem& u) const;
  const Log& dlog_code(uint64_t code) const { return dlog_[code]; }
  TElem element(const Log& l) const;
  const std::vector<uint64_t>& unit_codes() const { return codes_; }
  const std::vector<TElem>& units() const { return elems_; }
  // units congruent to 1 mod p^l, enumerated mod p^C
  std::vector<TElem> principal_units(int l) const;

  UnitGroup(const RingSpec& s, int C);

 private:
  const RingSpec* s_;
  int C_;
  int64_t q_;
  int64_t pC1_;
  TElem g_;
  std::vector<TElem> wild_;
  std::vector<Log> dlog_;
  std::vector<uint64_t> codes_;
  std::vector<TElem> elems_;
};

/* Exponent data of one coordinate character: g -> z_(q-1)^A, 1+px^i -> z_(p^(C-1))^B_i. */
struct CoordSpec {
  int64_t A = 0;
  std::vector<int64_t> B;
};

/*
 * A torus point: unit coordinates in the ring of the layer plus a lattice part
 * lambda, the point prod_j b_j(c_j) * lambda(p).  For split groups both use
 * the X_* basis; for SU3 the F-points of the torus use the single coordinate
 * t -> c1 and lambda is written against the X_*(A) basis.
 */
struct TorusPoint {
  std::vector<TElem> units;
  IVec lambda;
};

/*
 * Character of the maximal compact torus ^0T at one field layer.  Stored as
 * per-coordinate exponent tables over (O/p^C)^x with values in mu_M,
 * M = (q-1) p^(C-1) of the ring it was first defined on.
 */
class SmoothCharacter {
 public:
  SmoothCharacter() = default;
  static SmoothCharacter from_coords(const RootDatum& d, const RingSpec& ring, int C,
                                     const std::vector<CoordSpec>& coords);
  static SmoothCharacter trivial(const RootDatum& d, const RingSpec& ring);

  const RootDatum& datum() const { return *d_; }
  const RingSpec& ring() const { return *ring_; }
  int level() const { return C_; }
  int64_t order() const { return M_; }
  int num_coords() const { return static_cast<int>(tables_.size()); }
  const std::vector<std::vector<int32_t>>& tables() const { return tables_; }

  // exponent k with value zeta_M^k
  int64_t exponent(const std::vector<TElem>& units) const;
  RootOfUnity evaluate(const std::vector<TElem>& units) const { return {M_, exponent(units)}; }
  RootOfUnity evaluate(const TorusPoint& t) const;  // NotInDomain for a nonzero lattice part
  // ^0chi_E on ^0T(E), coordinates in the X_* basis over the splitting ring
  RootOfUnity evaluate_E(const std::vector<TElem>& units_E) const;

  // precompose with a homomorphism f from ^0T of another layer
  SmoothCharacter precompose(const RingSpec& new_ring, int new_coords,
                             const std::function<std::vector<TElem>(const std::vector<TElem>&)>& f) const;
  SmoothCharacter pullback_norm(int r) const;
  // same character over a ring with the same p and e and precision >= level
  SmoothCharacter rebind(const RingSpec& ring) const;
  SmoothCharacter weyl_act(const WeylGroup& W, int w) const;
  SmoothCharacter inverse() const;
  bool operator==(const SmoothCharacter& o) const;
  bool operator!=(const SmoothCharacter& o) const { return !(*this == o); }
  bool is_trivial() const;

  std::string serialize() const;
  // same datum, ring, level and exponent tables; the memo caches key on this
  bool same_representation(const SmoothCharacter& o) const;

 private:
  SmoothCharacter pullback_norm_uncached(int r) const;
  SmoothCharacter weyl_act_uncached(const WeylGroup& W, int w) const;

  const RootDatum* d_ = nullptr;
  const RingSpec* ring_ = nullptr;
  int C_ = 1;
  int64_t M_ = 1;
  std::vector<std::vector<int32_t>> tables_;  // indexed by encode(C); units only
};

TorusPoint torus_mul(const TorusPoint& a, const TorusPoint& b);
TorusPoint torus_theta(const TorusPoint& a, int power);  // Frobenius^power on the units, p fixed

// coordinates of alpha^vee(x) in the X_* basis over the splitting ring
std::vector<TElem> coroot_point(const RootDatum& d, int root, const TElem& x);
// F-points of the torus inside T(E) and back (identity for split groups)
std::vector<TElem> torus_F_to_E(const RootDatum& d, const std::vector<TElem>& units);
std::vector<TElem> torus_E_to_F(const RootDatum& d, const std::vector<TElem>& units_E);
// h acting on T(E) coordinates, with Frobenius on the entries
std::vector<TElem> torus_h(const RootDatum& d, const std::vector<TElem>& units_E);
// w^{-1} t w on T(E) coordinates
std::vector<TElem> torus_weyl_conj(const WeylGroup& W, int w, const std::vector<TElem>& units_E);

int conductor(const SmoothCharacter& chi, int root);
int depth_plus_one(const SmoothCharacter& chi);  // max conductor over roots
// minimality: trivial on alpha^vee(1+p^c), nontrivial on alpha^vee(1+p^(c-1)) when c >= 2
bool conductor_is_minimal(const SmoothCharacter& chi, int root, int c);

/* Finite part W_{0chi} of the stabilizer plus the full translation lattice X_*(A). */
struct Stabilizer {
  const WeylGroup* W = nullptr;
  std::vector<int> finite;     // indices into W, inside the relative Weyl group
  std::vector<int> generators;
  bool contains(const AffineWeylElement& x) const;
  bool contains_finite(int w) const;
};

std::vector<int> relative_weyl(const WeylGroup& W);  // W itself when split, else W^h
Stabilizer stabilizer_W0chi(const SmoothCharacter& chi, const WeylGroup& W);

/* chi on T = ^0T x X_*(A): trivial extension on the lattice times eta. */
class ExtendedCharacter {
 public:
  ExtendedCharacter(SmoothCharacter chi, std::vector<ScaledRoot> eta);
  const SmoothCharacter& compact() const { return chi_; }
  const std::vector<ScaledRoot>& eta() const { return eta_; }
  ScaledRoot eta_at(const IVec& lambda) const;
  Cyclo evaluate(const TorusPoint& t) const;
  // xi o N_r: compact part pulled back, eta raised to the r-th power
  ExtendedCharacter compose_norm(int r) const;
  ExtendedCharacter weyl_act(const WeylGroup& W, int w) const;

 private:
  SmoothCharacter chi_;
  std::vector<ScaledRoot> eta_;
};

}  // namespace unram
