#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace unram {

constexpr int kMaxDegree = 6;
using Coeffs = std::array<int64_t, kMaxDegree>;

struct SpecMismatch : std::runtime_error { using std::runtime_error::runtime_error; };
struct NotAUnit : std::runtime_error { using std::runtime_error::runtime_error; };
struct PrecisionExhausted : std::runtime_error { using std::runtime_error::runtime_error; };
struct DegreeMismatch : std::runtime_error { using std::runtime_error::runtime_error; };
struct ZeroElement : std::runtime_error { using std::runtime_error::runtime_error; };

/*
 * O_E / p^N for E/Q_p unramified of degree e.  The modulus is the Conway
 * polynomial lifted coefficient-wise; Frobenius is the Hensel lift of the
 * root congruent to x^p.  Specs are interned: one object per (p, e, N), never
 * freed, so raw pointers to them stay valid for the life of the process.
 */
class RingSpec {
 public:
  static const RingSpec& get(int p, int e, int N);
  static const RingSpec& parse(const std::string& record);

  int p = 0;
  int e = 0;
  int N = 0;
  int64_t pN = 1;
  std::vector<int64_t> ppow;        // ppow[k] = p^k, k <= N
  Coeffs modulus{};                 // x^e + sum modulus[i] x^i, reduced mod p^N
  std::array<Coeffs, kMaxDegree> frob{};  // frob[i] = image of x^i

  int64_t q() const;                // residue field size p^e
  std::string serialize() const;    // "p=3 e=2 N=4 modulus=2,2"

  RingSpec(int p, int e, int N);
};

bool is_prime(int64_t n);
std::vector<int64_t> conway_polynomial(int p, int e);  // low-to-high, monic term omitted
bool irreducible_mod_p(const std::vector<int64_t>& low_coeffs, int p);

/* An element of O_E/p^N stored as polynomial coefficients in x. */
class TElem {
 public:
  TElem() = default;
  explicit TElem(const RingSpec& s) : s_(&s) {}
  TElem(const RingSpec& s, int64_t c0);
  TElem(const RingSpec& s, const Coeffs& c);

  static TElem gen(const RingSpec& s);  // the class of x

  const RingSpec& spec() const { return *s_; }
  const RingSpec* spec_ptr() const { return s_; }
  const Coeffs& coeffs() const { return c_; }
  int64_t coeff(int i) const { return c_[i]; }

  int valuation() const;  // N when the element is zero
  bool is_zero() const { return valuation() >= s_->N; }
  bool is_unit() const { return valuation() == 0; }
  bool is_base() const;   // lies in Z_p / p^N

  TElem operator+(const TElem& o) const;
  TElem operator-(const TElem& o) const;
  TElem operator-() const;
  TElem operator*(const TElem& o) const;
  TElem& operator+=(const TElem& o) { return *this = *this + o; }
  TElem& operator*=(const TElem& o) { return *this = *this * o; }
  bool operator==(const TElem& o) const;
  bool operator!=(const TElem& o) const { return !(*this == o); }

  TElem inv() const;                  // NotAUnit unless valuation 0
  TElem pow(int64_t k) const;         // k < 0 requires a unit
  TElem frobenius(int power) const;   // power taken mod e
  TElem residue() const;              // reduction mod p, as an element of this spec
  std::string str() const;

  // flat index of the residue class mod p^k, used for table lookups
  uint64_t encode(int k) const;

 private:
  const RingSpec* s_ = nullptr;
  Coeffs c_{};
  friend TElem reduce_mod(const TElem&, int);
};

TElem reduce_mod(const TElem& a, int k);  // zero the digits at and above p^k
TElem norm_to_fixed(const TElem& a, int subdegree);
TElem trace_to_fixed(const TElem& a, int subdegree);
struct UnitDecomposition { int valuation; TElem unit; };
UnitDecomposition unit_decompose(const TElem& a);
TElem teichmuller(const TElem& a);  // the root of unity congruent to a unit
TElem residue_generator(const RingSpec& s);  // lift of a generator of k_E^x

/*
 * Embedding O_{E_d} -> O_{E_e} for d | e, sending x_d to the Hensel lift of
 * the Conway-compatible residue root.  Commutes with Frobenius.
 */
class ExtensionTower {
 public:
  ExtensionTower(const RingSpec& small, const RingSpec& large);
  TElem embed(const TElem& a) const;
  // inverse of embed on its image; SpecMismatch when a is not in the image
  TElem descend(const TElem& a) const;
  const RingSpec& small() const { return *small_; }
  const RingSpec& large() const { return *large_; }
  const TElem& image_of_generator() const { return z_; }

 private:
  const RingSpec* small_;
  const RingSpec* large_;
  TElem z_;
};

/*
 * Capped-relative element of E: value p^v * u with u a unit known mod
 * p^prec (prec <= N).  prec == 0 is an inexact zero O(p^v); an exact zero has
 * v == kExactZero.
 */
class FElem {
 public:
  static constexpr int kExactZero = 1 << 28;

  FElem() = default;
  explicit FElem(const RingSpec& s) : s_(&s), v_(kExactZero), prec_(s.N) {}
  FElem(const RingSpec& s, int64_t n);
  explicit FElem(const TElem& a);        // integral element, absolute precision N
  static FElem p_power(const RingSpec& s, int k);
  static FElem from_unit(const TElem& u, int v);
  static FElem inexact_zero(const RingSpec& s, int abs_prec);

  const RingSpec& spec() const { return *s_; }
  const RingSpec* spec_ptr() const { return s_; }
  bool is_exact_zero() const { return v_ == kExactZero; }
  bool is_inexact_zero() const { return v_ != kExactZero && prec_ == 0; }
  bool is_zero_like() const { return v_ == kExactZero || prec_ == 0; }
  int valuation() const;      // throws PrecisionExhausted for inexact zero
  int val_lower_bound() const { return v_; }
  int abs_prec() const { return v_ == kExactZero ? kExactZero : v_ + prec_; }
  int rel_prec() const { return prec_; }
  const Coeffs& unit_coeffs() const { return c_; }

  // true/false when decidable at current precision, otherwise PrecisionExhausted
  bool val_at_least(int k) const;
  bool is_integral() const { return val_at_least(0); }
  bool is_unit() const;

  FElem operator+(const FElem& o) const;
  FElem operator-(const FElem& o) const;
  FElem operator-() const;
  FElem operator*(const FElem& o) const;
  FElem& operator+=(const FElem& o) { return *this = *this + o; }
  FElem& operator*=(const FElem& o) { return *this = *this * o; }
  FElem inv() const;
  FElem operator/(const FElem& o) const { return *this * o.inv(); }
  FElem shift(int k) const;   // multiply by p^k
  FElem frobenius(int power) const;

  // integral elements only; result carries the element mod p^min(N, abs_prec)
  TElem to_telem() const;
  TElem unit_part() const;    // u as a TElem (digits above prec are zero)

  // equal as elements known to the common precision
  bool equals(const FElem& o) const;
  std::string str() const;

 private:
  const RingSpec* s_ = nullptr;
  int v_ = kExactZero;
  int prec_ = 0;
  Coeffs c_{};
  void normalize(int abs_prec);
};

}  // namespace unram
