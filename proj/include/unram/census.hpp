#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "unram/bernstein.hpp"
#include "unram/integrals.hpp"
#include "unram/types_builder.hpp"

namespace unram {

/*
 * Card(J_{r,u} \ J_r) for u = nu(p), J_{r,u} = J_r cap u J_r u^{-1}.  Each
 * root alpha contributes [U_alpha cap J : U_alpha cap J_u], counted by
 * enumerating payloads mod p^M and testing u^{-1} u_alpha(b) u against the
 * matrix oracle; J_u has an Iwahori factorization, so the index is the
 * product.  For SL2 the whole of J mod K_M can also be enumerated.
 */
struct VolumeReport {
  std::string label;
  int64_t predicted = 0;              // q^{r <2rho, nu>}
  std::vector<int64_t> per_root;      // index per root at the base M
  int64_t product = 0;                // product over roots at the base M
  int64_t full = -1;                  // whole-group count, -1 when not run
  std::vector<std::pair<int, int64_t>> ladder;  // (M, product)
  bool stable = false;
  bool pass = false;
  std::string str() const;
};

VolumeReport volume_check(const SmoothCharacter& chi, const IVec& nu, int r, bool full_enumeration);

// smallest regular dominant cocharacter by <2rho, nu>, ties by coordinates
IVec minimal_regular_dominant(const RootDatum& d);

/*
 * Census of u in (I cap ^{w^{-1}}Nbar) / (J cap ^{w^{-1}}Nbar): u satisfies
 * the axiom when rho is trivial on J cap u^{-1} ^{w^{-1}}N u.  A coset fails
 * once some u' = u_beta(b), w beta > 0, gives u^{-1} u' u in J with
 * rho != 1; b runs over c p^k for c a nonzero residue and k < search_depth.
 * The constructive witness is u_{-alpha_k}(b), b in p^{c_u}, for the root
 * alpha_k singled out by the valuations of u.
 */
struct AxiomCoset {
  std::string u;          // "a0:val,..." payload of each root factor
  bool satisfies = true;
  std::string witness;    // first witness found, empty when none
  bool constructive = false;
};

struct AxiomCensus {
  std::string label;
  int w = 0;
  int64_t cosets = 0;
  int64_t satisfying = 0;
  bool identity_satisfies = false;
  int64_t failing = 0;
  int64_t constructive = 0;  // failing cosets refuted by the constructive witness
  std::vector<AxiomCoset> rows;
  bool stable = false;       // same census at N + 1 and search_depth + 1
  bool pass = false;
  std::string str() const;
};

// chi over a ring with precision N >= max cond + 3
AxiomCensus verify_axiom_u(const SmoothCharacter& chi, int w, int search_depth = 4);

/*
 * Relations among Chevalley generators against the matrix oracle:
 * (1) commutators of non-opposite roots, (2) commutators of opposite roots,
 * (3) commutators of coroot points with root elements; plus round trips
 * of random Iwahori words through normal_form.
 */
struct RelationReport {
  std::string group;
  int64_t tuples[3] = {0, 0, 0};
  int64_t failures[3] = {0, 0, 0};
  int64_t normal_forms = 0;
  int64_t normal_form_failures = 0;
  bool pass = false;
  std::string str() const;
};

RelationReport chevalley_relations(const RootDatum& d, const RingSpec& ring, int tuples, uint64_t seed);

/*
 * Sampled closure checks on U_c and T_c around a random coset
 * representative u with c >= c_u, read through normal forms:
 * (a) [x^{-1}, y^{-1}] lies in the group generated by U_c, with the sign
 *     of x and y when they agree;
 * (b) for x = u_{-alpha_p}(a) in U_{c_u} the commutator lies in
 *     <U_{c_u}, T_{c_u}>, the torus part on the coroot of alpha_p;
 * (c) [t^{-1}, y^{-1}] lies in <U_c> for t in T_c.
 * y = u_{alpha_p}(a_p) is a factor of u.
 */
struct LemmaReport {
  std::string label;
  int64_t samples[3] = {0, 0, 0};
  int64_t failures[3] = {0, 0, 0};
  std::vector<std::string> failure_lines;
  bool pass = false;
  std::string str() const;
};

LemmaReport commutator_lemma(const SmoothCharacter& chi, int samples, uint64_t seed);

/*
 * Hecke support of (J, rho) on SL2 or GL2 over double cosets J x n_v y J,
 * x in J\I, y in I/J, n_v over W~ with translation length <= max_len.  A
 * double coset is observed unsupported once some j in J has g^{-1} j g in J
 * and rho(j) != rho(g^{-1} j g).  The candidates j are l(z) t n(y) with z, y
 * zero or c p^k (c a nonzero residue, k < M) and t a unit mod p^{level+1};
 * conjugating by a translation of length l moves entries by p^{2l}, so M
 * has to clear the depths by twice the translation length.  The prediction
 * is membership in J n_x J for x in W~_{0chi}.
 */
struct SupportCensus {
  std::string label;
  int64_t double_cosets = 0;  // representatives tested, with repeats
  int64_t observed = 0;
  int64_t predicted = 0;
  int64_t disagreements = 0;
  std::vector<std::string> disagreement_lines;
  bool pass = false;
  std::string str() const;
};

SupportCensus support_census(const SmoothCharacter& chi, int max_len, int M);

/*
 * phi_P(m) = delta_P^{1/2}(m) int_{N_r} int_{K_r} phi(k^{-1} m n theta(k)) dk dn
 * for P = B on SL2 or GL2, with vol(K_r) = vol(N(O_r)) = 1.  phi is given on
 * 2x2 matrices over the layer ring and must be right-invariant under the J
 * of kdepths, which indexes the k-sum.  WindowTooSmall when widening the
 * unipotent window or refining its modulus changes the value.
 */
using MatrixFunction = std::function<Cyclo(const ScaledMat2&)>;

struct ConstantTermJob {
  bool gl2 = false;
  const RingSpec* ring = nullptr;  // layer ring
  int theta_power = 0;
  Depths kdepths;
  TorusClass m;
  Window window;
};

Cyclo constant_term_numeric(const MatrixFunction& phi, const ConstantTermJob& job);

// e_rho on G(F_r) for the layer character chi_r, J of the given depths
MatrixFunction e_rho_function(const SmoothCharacter& chi_r, bool gl2, const Depths& J);
// characteristic function of K
MatrixFunction char_K_function();

}  // namespace unram
