#pragma once

#include <vector>

#include "unram/characters.hpp"
#include "unram/padic.hpp"
#include "unram/scalars.hpp"

namespace unram {

/*
 * p^{-s} [[a, b], [c, d]] with integral entries over one ring.  All entries
 * are exact residues mod p^P of the ring; with P = N + s the matrix is known
 * to absolute precision N.
 */
struct ScaledMat2 {
  TElem a, b, c, d;
  int s = 0;

  static ScaledMat2 identity(const RingSpec& ring);
  static ScaledMat2 upper(const TElem& x, int s);  // [[1, p^{-s} x], [0, 1]]
  static ScaledMat2 lower(const TElem& x, int s);
  static ScaledMat2 diag(const TElem& u1, int v1, const TElem& u2, int v2);  // diag(p^v1 u1, p^v2 u2)

  const RingSpec& ring() const { return a.spec(); }
  ScaledMat2 operator*(const ScaledMat2& o) const;
  ScaledMat2 rescale(int new_s) const;  // new_s >= s
  ScaledMat2 frobenius(int power) const;
  // scaled entry valuations, i.e. valuation of the true entry
  int val_a() const { return a.valuation() - s; }
  int val_b() const { return b.valuation() - s; }
  int val_c() const { return c.valuation() - s; }
  int val_d() const { return d.valuation() - s; }
  int min_val() const;
  bool operator==(const ScaledMat2& o) const;
};

// coefficient copy into a ring with the same p and e
TElem lift_to(const TElem& x, const RingSpec& ring);
ScaledMat2 lift_to(const ScaledMat2& m, const RingSpec& ring);

/*
 * The double coset J diag(p^a, p^b) J, a >= b, where J has unit diagonal,
 * upper entry in p^fplus and lower entry in p^fminus, fplus + fminus >= 1.
 * Writing X = n(y) u j, membership is
 *   val X22 = b, val X21 >= b + fminus, val X12 >= b + fplus, val det X = a + b,
 * and the torus part of j is diag(det_unit / t2, t2) with t2 = p^{-b} X22.
 */
struct Cell2 {
  int a = 1;
  int b = -1;
  int fplus = 0;
  int fminus = 1;
};

// t2 of the cell decomposition, or false when X is outside the cell (det checked by the caller)
bool cell_torus(const ScaledMat2& X, const Cell2& cell, TElem* t2);
// K diag(p^a, p^b) K: smallest entry valuation b and det valuation a + b
bool in_cartan_cell(const ScaledMat2& X, int det_val, const Cell2& cell);

/* Representatives k of K/J for the depths of a cell, with k^{-1}. */
struct CosetRep {
  ScaledMat2 k;
  ScaledMat2 kinv;
  TElem det;  // det k
};
std::vector<CosetRep> k_over_j(const RingSpec& ring, int fplus, int fminus);
// representatives of I/J only: l(z) n(y), z in p/p^fminus, y in O/p^fplus
std::vector<CosetRep> i_over_j(const RingSpec& ring, int fplus, int fminus);

// every element of p^{-B} O / p^c O, as x' = p^B x mod p^(B+c)
std::vector<TElem> window_points(const RingSpec& ring, int B, int c);

/*
 * Twisted orbital integral of the elementary function supported on
 * J diag(p^a, p^b) J at a 2x2 element delta, as counts of roots of unity
 * weighted by q^{-c} per point of the unipotent window:
 *   sum_x q^{-c} sum_{k in K/J} phi(k^{-1} n(x)^{-1} delta theta(n(x)) theta(k)).
 * chi is the torus character of the layer: one coordinate (SL2, via the
 * coroot t1) or two (GL2, (t1, t2)).
 */
struct Rank1Orbital {
  const RingSpec* ring = nullptr;  // layer ring at working precision N
  int theta_power = 0;             // Frobenius power acting as theta; 0 untwisted
  bool gl2 = false;
  Cell2 cell;
  const SmoothCharacter* chi = nullptr;
  ScaledMat2 delta;                // entries over any ring with the layer's p and e
  int delta_det_val = 0;
  TElem delta_det_unit;            // det delta = p^val * unit
  int B = 0;
  int c = 0;
};

struct Rank1Result {
  RootCounts counts;
  int64_t points = 0;      // unipotent window size
  int64_t surviving = 0;   // points passing the Cartan test
  int64_t evaluations = 0;
  int weight_exponent = 0; // value = p^{-weight_exponent} * sum counts
};

Rank1Result rank1_orbital_parallel(const Rank1Orbital& job, int threads);
// FElem arithmetic, one element at a time; kept as the reference for the kernel
Rank1Result rank1_orbital_serial(const Rank1Orbital& job);

}  // namespace unram
