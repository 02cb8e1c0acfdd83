#pragma once

#include <optional>
#include <string>
#include <vector>

#include "unram/chevalley.hpp"
#include "unram/mat2.hpp"
#include "unram/types_builder.hpp"

namespace unram {

struct WindowTooSmall : std::runtime_error { using std::runtime_error::runtime_error; };
struct UnsupportedClass : std::invalid_argument { using std::invalid_argument::invalid_argument; };
struct NotSemisimpleNorm : std::invalid_argument { using std::invalid_argument::invalid_argument; };

/* Precision N, unipotent floor p^{-B}, unipotent modulus p^c. */
struct Window {
  int N = 6;
  int B = 0;
  int c = 0;
  std::string str() const;
};

struct LadderStep {
  Window window;
  Cyclo value;
};

struct OrbitalReport {
  std::string label;
  Cyclo value;
  int64_t points = 0;
  int64_t evaluations = 0;
  std::vector<LadderStep> ladder;  // base window first, then N+1 and B+1
  bool stable = false;
  std::string str() const;
};

/*
 * Torus translate m * lambda(p) in GL2 or SL2 over a layer ring.  SL2 uses one
 * coordinate, diag(m p^l, m^{-1} p^{-l}); GL2 uses two.
 */
struct TorusClass {
  std::vector<TElem> m;
  IVec lambda;
};

/*
 * The elementary function on G(F_r) supported on J_r nu(p) J_r with value
 * chi_r^{-1}(m) at k^{-1} m nu(p) theta(k), for GL2 and SL2.  nu = 0 gives
 * the unit e_rho of the Hecke algebra.
 */
class ElementaryFunction {
 public:
  ElementaryFunction(const SmoothCharacter& chi, int r, const IVec& nu);

  bool gl2() const { return gl2_; }
  int r() const { return r_; }
  const IVec& nu() const { return nu_; }
  const Cell2& cell() const { return cell_; }
  const SmoothCharacter& base_character() const { return chi_; }
  // chi_r over the layer ring at precision N
  SmoothCharacter chi_r(int N) const { return chi_r_.rebind(layer(N)); }
  const RingSpec& layer(int N) const;
  int theta_power() const { return r_ == 1 ? 0 : chi_.ring().e; }

  // value at a 2x2 matrix over the layer ring; nullopt off the support
  std::optional<RootOfUnity> eval(const FMat& g) const;
  std::optional<RootOfUnity> eval(const ChevalleyGroup& G, const GroupWord& g) const;

 private:
  SmoothCharacter chi_;
  SmoothCharacter chi_r_;
  int r_;
  IVec nu_;
  bool gl2_;
  Cell2 cell_;
};

// largest exponent gap of the lattice part, and the layer ring widened by it
int torus_class_spread(const TorusClass& t, bool gl2);
const RingSpec& torus_class_ring(const TorusClass& t, bool gl2, const RingSpec& layer);
// WindowTooSmall unless the spread is below the ring precision
ScaledMat2 torus_class_matrix(const TorusClass& t, bool gl2, const RingSpec& ring, int* det_val, TElem* det_unit);

// one window, no ladder
Cyclo twisted_orbital_value(const ElementaryFunction& phi, const TorusClass& delta, const Window& w, int threads,
                            int64_t* points = nullptr, int64_t* evaluations = nullptr);
// value with the stabilization ladder; r = 1 gives the untwisted integral
OrbitalReport brute_twisted_orbital(const ElementaryFunction& phi, const TorusClass& delta, const Window& w,
                                    int threads);

// chi_r^{-1}(m), or chi^{-1}(m_0) for r = 1
Cyclo closed_form_orbital(const ElementaryFunction& phi, const TorusClass& delta);

// scalar norm m theta(m) ... theta^{r-1}(m), descended to the base ring
std::vector<TElem> norm_units(const std::vector<TElem>& m, int r, int base_degree, const RingSpec& base);

/*
 * Stable orbital integrals on the torus-translate family.  For a twisted class
 * m nu(p) the stable class is a single ^0T_r-theta class; for r = 1 the class
 * m_0 t is its own stable class.  Other lattice parts raise UnsupportedClass.
 */
OrbitalReport stable_orbital(const ElementaryFunction& phi, const TorusClass& delta, const Window& w, int threads);

struct MatchingRow {
  std::string m;
  Cyclo twisted;    // SO_{delta theta}(phi^{u,chi_r}) at delta = m u
  Cyclo untwisted;  // SO_gamma(f^{t,chi}) at gamma = N(m) t
  Cyclo closed;     // chi_r^{-1}(m)
  bool stable = false;
};

struct MatchingReport {
  std::vector<MatchingRow> rows;
  std::vector<std::pair<std::string, Cyclo>> non_norm;  // SO_gamma(f) at non-norm gamma
  bool pass = false;
  std::string str() const;
};

// all m in ^0T_r mod (1 + p^2), or every stride-th class
MatchingReport verify_matching(const SmoothCharacter& chi, const IVec& nu, int r, const Window& w, int threads,
                               int stride = 1);

std::vector<TorusClass> compact_torus_classes(bool gl2, const RingSpec& layer, int level);

/*
 * Descent for the unit e_rho of GL2 at a compact class delta = m of G_r whose
 * norm gamma = N(m) is regular, with M = T:
 *   TO(e_rho) = |D(gamma)|^{-1/2} sum_{w in W} TO^{T_r}(e_{w rho_T}),
 * D(gamma) = (1 - a)(1 - a^{-1}), a = gamma_2 / gamma_1, so |D|^{-1/2} = q^j with
 * j = val(1 - a).  The torus terms are averages over ^0T_r mod (1 + p^C).
 */
struct DescentReport {
  std::string label;
  int j = 0;
  OrbitalReport lhs;
  std::vector<Cyclo> torus_terms;
  Cyclo rhs;
  bool pass = false;
  std::string str() const;
};

DescentReport verify_descent(const SmoothCharacter& chi, int r, const std::vector<TElem>& m, int N, int threads);

/*
 * TO(e_{rho_r^I}) with vol(I_r) = 1 against [I:J] TO(e_rho_r) with vol(J_r) = 1,
 * for SL2.  [I:J] is the index of F-points: only the theta-fixed cosets of
 * J_r in I_r contribute, and those are J\I.  The left side sums
 * e_rho(a^{-1} X a) over a in I_r/J_r and k in K_r mod K_M, independent of the
 * K/J kernel used on the right.  delta = 1 goes through H^1(theta, I_r) = 1:
 * {g : g^{-1} theta(g) in I_r} = G(F) I_r, so both sides are averages over
 * I_r mod K_M with vol(I(F)) = 1.
 */
struct IndexComparison {
  std::string label;
  int64_t index_IJ = 0;       // |I mod K_M| / |J mod K_M| over F
  int64_t base_reps = 0;      // |I/J| representatives over F
  int64_t layer_index = 0;    // [I_r:J_r] = dim rho_r^I
  OrbitalReport lhs;
  OrbitalReport rhs;          // TO(e_rho), before the factor [I:J]
  bool pass = false;
  std::string str() const;
};

IndexComparison compare_index_unit(const SmoothCharacter& chi, int r);
IndexComparison compare_index(const SmoothCharacter& chi, int r, const TorusClass& delta, const Window& w, int threads);

// representatives of SL2(O/p^M), or of the Iwahori subgroup, each of determinant exactly 1 in the ring
std::vector<ScaledMat2> sl2_mod(const RingSpec& ring, int M, bool iwahori);

}  // namespace unram
