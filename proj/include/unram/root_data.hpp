#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace unram {

struct UnknownGroup : std::invalid_argument { using std::invalid_argument::invalid_argument; };
struct InvalidLevi : std::invalid_argument { using std::invalid_argument::invalid_argument; };

using IVec = std::vector<int>;
using IMat = std::vector<IVec>;  // row major, square

int dot(const IVec& a, const IVec& b);
IVec mat_vec(const IMat& m, const IVec& v);
IMat mat_mul(const IMat& a, const IMat& b);
IMat mat_identity(int n);
IMat mat_transpose(const IMat& m);
IVec vec_add(const IVec& a, const IVec& b);
IVec vec_scale(const IVec& a, int s);

/* One nonzero entry of a root vector in the defining matrix representation. */
struct MatrixEntry {
  int row;
  int col;
  int sign;
};

/*
 * Based root datum together with its defining matrix realization.  Roots are
 * indexed 0..2*npos-1: positive roots sorted by height, then their negatives
 * in the same order, so root npos+i is the negative of root i.  X* and X_*
 * coordinates are dual bases; the pairing is the dot product.
 */
struct RootDatum {
  std::string name;
  int rank = 0;          // dimension of X*(T)
  int npos = 0;
  std::vector<IVec> roots;       // X* coordinates
  std::vector<IVec> coroots;     // X_* coordinates
  std::vector<IVec> simple_coeffs;  // expansion in simple roots
  std::vector<int> simple;       // indices of simple roots, in order
  std::vector<int> height;
  int weyl_order = 0;            // |W_E|, used by the p guard

  // Galois action (identity when split)
  int h_order = 1;
  std::vector<int> h_root;       // permutation of root indices
  IMat h_cochar;                 // action on X_* coordinates
  std::vector<int> x_const;      // per-root sign: h(u_a(t)) = u_{h a}(x_a sigma(t))
  std::vector<IVec> rel_basis;   // basis of X_*(A) = X_*(T)^h

  // defining representation
  int n = 0;
  std::vector<std::vector<MatrixEntry>> root_vector;  // per root
  IMat torus_exponents;          // n x rank: diag_i = prod_j c_j^(E[i][j])

  int num_roots() const { return 2 * npos; }
  int neg(int i) const { return i < npos ? i + npos : i - npos; }
  bool positive(int i) const { return i < npos; }
  bool is_split() const { return h_order == 1; }
  int pair(const IVec& chi, const IVec& lambda) const { return dot(chi, lambda); }
  int root_index(const IVec& chi) const;  // -1 when not a root
  int sum_index(int i, int j) const;      // index of root_i + root_j or -1
  IVec two_rho() const;
  int pairing_height(const IVec& nu) const;
  bool is_dominant(const IVec& nu) const;
  bool is_regular(const IVec& nu) const;
  IVec restrict_root(int i) const;        // coordinates against rel_basis
  std::string serialize() const;
};

const RootDatum& build_root_datum(const std::string& name);
std::vector<std::string> catalog_names();
bool prime_allowed(const RootDatum& d, int p);  // p does not divide |W_E|

/* Finite Weyl group element, stored through its action on X_*. */
struct WeylElement {
  IMat cochar;              // matrix on X_* coordinates
  std::vector<int> perm;    // action on root indices
  std::vector<int> word;    // reduced word in simple reflection positions
  int length() const { return static_cast<int>(word.size()); }
  IVec act_cochar(const IVec& l) const { return mat_vec(cochar, l); }
  int act_root(int i) const { return perm[i]; }
  bool operator==(const WeylElement& o) const { return cochar == o.cochar; }
};

class WeylGroup {
 public:
  explicit WeylGroup(const RootDatum& d);

  const RootDatum& datum() const { return *d_; }
  const std::vector<WeylElement>& elements() const { return elems_; }
  int size() const { return static_cast<int>(elems_.size()); }
  const WeylElement& operator[](int i) const { return elems_[i]; }
  int identity() const { return 0; }
  int mul(int a, int b) const { return table_[a][b]; }
  int inverse(int a) const { return inv_[a]; }
  int index_of(const IMat& cochar) const;
  int simple_reflection(int k) const { return simple_idx_[k]; }
  int longest() const;
  int inversions(int a) const;                 // positive roots sent negative
  std::vector<int> h_fixed() const;            // elements commuting with h
  std::vector<int> levi_subgroup(unsigned mask) const;
  std::vector<int> min_coset_reps(unsigned mask) const;  // minimal reps of W_M \ W

 private:
  const RootDatum* d_;
  std::vector<WeylElement> elems_;
  std::vector<std::vector<int>> table_;
  std::vector<int> inv_;
  std::vector<int> simple_idx_;
  std::map<IMat, int> lookup_;
};

/* t_lambda * w with lambda in X_* and w an index into a WeylGroup. */
struct AffineWeylElement {
  IVec lambda;
  int w = 0;
};

AffineWeylElement affine_mul(const WeylGroup& W, const AffineWeylElement& a, const AffineWeylElement& b);
AffineWeylElement affine_inverse(const WeylGroup& W, const AffineWeylElement& a);
bool affine_equal(const AffineWeylElement& a, const AffineWeylElement& b);

// all simple-root masks; mask bit k selects simple root k
unsigned full_levi_mask(const RootDatum& d);

}  // namespace unram
