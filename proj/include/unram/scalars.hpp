#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace unram {

int64_t gcd64(int64_t a, int64_t b);
int64_t lcm64(int64_t a, int64_t b);

/* zeta_M^k, kept with k in [0, M).  Equality is as complex numbers. */
struct RootOfUnity {
  int64_t M = 1;
  int64_t k = 0;

  RootOfUnity() = default;
  RootOfUnity(int64_t order, int64_t exponent);

  RootOfUnity operator*(const RootOfUnity& o) const;
  RootOfUnity inv() const { return {M, -k}; }
  RootOfUnity pow(int64_t n) const;
  bool is_one() const { return k == 0; }
  bool operator==(const RootOfUnity& o) const;
  bool operator!=(const RootOfUnity& o) const { return !(*this == o); }
  RootOfUnity reduced() const;  // smallest order representing the same value
  std::string str() const;
};

/*
 * Element of Q(zeta_M) as sum c[k] zeta_M^k with k < M.  The representation
 * is redundant; comparisons go through the remainder modulo Phi_M.
 */
class Cyclo {
 public:
  Cyclo() : M_(1), c_(1) {}
  explicit Cyclo(int64_t M) : M_(M), c_(M) {}
  static Cyclo rational(const mpq_class& v, int64_t M = 1);
  static Cyclo root(const RootOfUnity& z);

  int64_t order() const { return M_; }
  const std::vector<mpq_class>& raw() const { return c_; }
  void add_term(int64_t k, const mpq_class& v);

  Cyclo lift(int64_t multiple_order) const;
  Cyclo operator+(const Cyclo& o) const;
  Cyclo operator-(const Cyclo& o) const;
  Cyclo operator-() const;
  Cyclo operator*(const Cyclo& o) const;
  Cyclo operator*(const mpq_class& s) const;
  Cyclo operator*(const RootOfUnity& z) const;
  Cyclo& operator+=(const Cyclo& o) { return *this = *this + o; }

  std::vector<mpq_class> canonical() const;  // coefficients mod Phi_M, length phi(M)
  bool operator==(const Cyclo& o) const;
  bool operator!=(const Cyclo& o) const { return !(*this == o); }
  bool is_zero() const;
  std::string str() const;

 private:
  int64_t M_;
  std::vector<mpq_class> c_;
};

// Phi_M with integer coefficients, low to high
const std::vector<int64_t>& cyclotomic_polynomial(int64_t M);

/* Nonzero scalar c * zeta, the admissible values of unramified characters. */
struct ScaledRoot {
  mpq_class c = 1;
  RootOfUnity z;

  ScaledRoot operator*(const ScaledRoot& o) const { return {c * o.c, z * o.z}; }
  ScaledRoot inv() const { return {1 / c, z.inv()}; }
  ScaledRoot pow(int64_t n) const;
  Cyclo to_cyclo() const { return Cyclo::root(z) * c; }
  bool operator==(const ScaledRoot& o) const { return c == o.c && z == o.z; }
};

/*
 * Accumulator for sums weight * sum_k count[k] zeta_M^k.  Integer counts keep
 * parallel reductions exact and order independent.
 */
struct RootCounts {
  int64_t M = 1;
  std::vector<int64_t> count;

  explicit RootCounts(int64_t order = 1) : M(order), count(order, 0) {}
  void add(int64_t k, int64_t n = 1) { count[((k % M) + M) % M] += n; }
  void merge(const RootCounts& o);
  int64_t total() const;
  Cyclo value(const mpq_class& weight) const;
};

}  // namespace unram
