#include "unram/padic.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <tuple>

namespace unram {

namespace {

int64_t mod(int64_t a, int64_t m) {
  a %= m;
  return a < 0 ? a + m : a;
}

int vp(int64_t a, int p, int cap) {
  if (a == 0) return cap;
  int v = 0;
  while (a % p == 0 && v < cap) {
    a /= p;
    ++v;
  }
  return v;
}

// product of two reduced polynomials modulo (modulus, m); coefficients < 2^29
Coeffs poly_mulmod(const Coeffs& a, const Coeffs& b, const Coeffs& modulus, int e, int64_t m) {
  std::array<int64_t, 2 * kMaxDegree - 1> prod{};
  for (int i = 0; i < e; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < e; ++j) prod[i + j] += a[i] * b[j];
  }
  for (int k = 0; k < 2 * e - 1; ++k) prod[k] = mod(prod[k], m);
  for (int k = 2 * e - 2; k >= e; --k) {
    int64_t top = prod[k];
    if (top == 0) continue;
    prod[k] = 0;
    for (int i = 0; i < e; ++i) prod[k - e + i] = mod(prod[k - e + i] - top * modulus[i], m);
  }
  Coeffs out{};
  for (int i = 0; i < e; ++i) out[i] = prod[i];
  return out;
}

Coeffs poly_powmod(Coeffs base, int64_t k, const Coeffs& modulus, int e, int64_t m) {
  Coeffs acc{};
  acc[0] = 1 % m;
  while (k > 0) {
    if (k & 1) acc = poly_mulmod(acc, base, modulus, e, m);
    base = poly_mulmod(base, base, modulus, e, m);
    k >>= 1;
  }
  return acc;
}

// remainder of monic-free poly division mod p; returns true when d divides f
bool divides_mod_p(std::vector<int64_t> f, const std::vector<int64_t>& d, int p) {
  // f, d high-to-low, d monic
  while (f.size() >= d.size()) {
    int64_t lead = mod(f.front(), p);
    for (size_t i = 0; i < d.size(); ++i) f[i] = mod(f[i] - lead * d[i], p);
    f.erase(f.begin());
  }
  for (int64_t c : f)
    if (mod(c, p) != 0) return false;
  return true;
}

std::vector<int64_t> prime_factors(int64_t n) {
  std::vector<int64_t> out;
  for (int64_t d = 2; d * d <= n; ++d) {
    if (n % d) continue;
    out.push_back(d);
    while (n % d == 0) n /= d;
  }
  if (n > 1) out.push_back(n);
  return out;
}

bool x_is_primitive(const std::vector<int64_t>& low, int p) {
  int e = static_cast<int>(low.size());
  Coeffs modulus{};
  for (int i = 0; i < e; ++i) modulus[i] = mod(low[i], p);
  Coeffs x{};
  if (e == 1) {
    x[0] = mod(-low[0], p);
  } else {
    x[1] = 1;
  }
  int64_t q = 1;
  for (int i = 0; i < e; ++i) q *= p;
  Coeffs one{};
  one[0] = 1;
  if (poly_powmod(x, q - 1, modulus, e, p) != one) return false;
  for (int64_t l : prime_factors(q - 1))
    if (poly_powmod(x, (q - 1) / l, modulus, e, p) == one) return false;
  return true;
}

std::vector<int64_t> search_conway_like(int p, int e) {
  // lexicographically first monic irreducible polynomial whose root is primitive
  int64_t count = 1;
  for (int i = 0; i < e; ++i) count *= p;
  for (int64_t code = 0; code < count; ++code) {
    std::vector<int64_t> low(e);
    int64_t c = code;
    for (int i = 0; i < e; ++i) {
      low[i] = c % p;
      c /= p;
    }
    if (low[0] == 0) continue;
    if (irreducible_mod_p(low, p) && x_is_primitive(low, p)) return low;
  }
  throw std::logic_error("no primitive polynomial found");
}

}  // namespace

bool is_prime(int64_t n) {
  if (n < 2) return false;
  for (int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

bool irreducible_mod_p(const std::vector<int64_t>& low, int p) {
  int e = static_cast<int>(low.size());
  if (e <= 1) return true;
  std::vector<int64_t> f(e + 1);
  f[0] = 1;
  for (int i = 0; i < e; ++i) f[e - i] = mod(low[i], p);
  // any factorization has a monic factor of degree <= e/2
  for (int d = 1; d <= e / 2; ++d) {
    int64_t count = 1;
    for (int i = 0; i < d; ++i) count *= p;
    for (int64_t code = 0; code < count; ++code) {
      std::vector<int64_t> g(d + 1);
      g[0] = 1;
      int64_t c = code;
      for (int i = 1; i <= d; ++i) {
        g[i] = c % p;
        c /= p;
      }
      if (divides_mod_p(f, g, p)) return false;
    }
  }
  return true;
}

std::vector<int64_t> conway_polynomial(int p, int e) {
  static const std::map<std::pair<int, int>, std::vector<int64_t>> table = {
      {{3, 1}, {1}},           {{3, 2}, {2, 2}},        {{3, 3}, {1, 2, 0}},
      {{3, 4}, {2, 0, 0, 2}},  {{5, 1}, {3}},           {{5, 2}, {2, 4}},
      {{5, 3}, {3, 3, 0}},     {{5, 4}, {2, 1, 4, 0}},  {{7, 1}, {4}},
      {{7, 2}, {3, 6}},        {{7, 3}, {4, 0, 6}},     {{7, 4}, {3, 4, 5, 0}},
      {{11, 1}, {9}},          {{11, 2}, {2, 7}},       {{11, 3}, {9, 2, 0}},
      {{11, 4}, {2, 10, 8, 0}}, {{13, 1}, {11}},        {{13, 2}, {2, 12}},
      {{13, 3}, {11, 2, 0}},   {{13, 4}, {2, 12, 3, 0}},
  };
  auto it = table.find({p, e});
  if (it != table.end() && irreducible_mod_p(it->second, p) && x_is_primitive(it->second, p))
    return it->second;
  return search_conway_like(p, e);
}

RingSpec::RingSpec(int p_, int e_, int N_) : p(p_), e(e_), N(N_) {
  if (!is_prime(p)) throw std::invalid_argument("p must be prime");
  if (e < 1 || e > kMaxDegree) throw std::invalid_argument("degree out of range 1..6");
  if (N < 1) throw std::invalid_argument("precision must be positive");
  ppow.assign(N + 1, 1);
  for (int k = 1; k <= N; ++k) {
    ppow[k] = ppow[k - 1] * p;
    if (ppow[k] >= (int64_t{1} << 29)) throw std::invalid_argument("p^N must stay below 2^29");
  }
  pN = ppow[N];
  auto low = conway_polynomial(p, e);
  for (int i = 0; i < e; ++i) modulus[i] = mod(low[i], pN);
}

int64_t RingSpec::q() const {
  int64_t out = 1;
  for (int i = 0; i < e; ++i) out *= p;
  return out;
}

std::string RingSpec::serialize() const {
  std::ostringstream os;
  os << "p=" << p << " e=" << e << " N=" << N << " modulus=";
  for (int i = 0; i < e; ++i) os << (i ? "," : "") << modulus[i];
  return os.str();
}

const RingSpec& RingSpec::get(int p, int e, int N) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, std::unique_ptr<RingSpec>> registry;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(p, e, N);
  auto it = registry.find(key);
  if (it != registry.end()) return *it->second;
  auto spec = std::make_unique<RingSpec>(p, e, N);
  RingSpec& s = *spec;
  // Frobenius: Newton-lift the root of the modulus congruent to x^p
  TElem x = TElem::gen(s);
  TElem z = x.pow(p);
  auto eval = [&](const TElem& t, bool derivative) {
    TElem acc(s, 0);
    TElem pw(s, 1);
    for (int i = 0; i <= e; ++i) {
      int64_t c = (i == e) ? 1 : s.modulus[i];
      if (derivative) {
        if (i + 1 <= e) {
          int64_t c1 = (i + 1 == e) ? 1 : s.modulus[i + 1];
          acc += pw * TElem(s, c1 * (i + 1));
        }
      } else {
        acc += pw * TElem(s, c);
      }
      pw *= t;
    }
    return acc;
  };
  for (int it2 = 0; it2 <= N + 1; ++it2) z = z - eval(z, false) * eval(z, true).inv();
  if (!eval(z, false).is_zero()) throw std::logic_error("Frobenius lift failed");
  TElem pw(s, 1);
  for (int i = 0; i < e; ++i) {
    s.frob[i] = pw.coeffs();
    pw *= z;
  }
  registry.emplace(key, std::move(spec));
  return s;
}

const RingSpec& RingSpec::parse(const std::string& record) {
  std::istringstream is(record);
  std::string tok;
  int p = 0, e = 0, N = 0;
  std::string modulus;
  while (is >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("malformed spec record: " + record);
    std::string k = tok.substr(0, eq), v = tok.substr(eq + 1);
    if (k == "p") p = std::stoi(v);
    else if (k == "e") e = std::stoi(v);
    else if (k == "N") N = std::stoi(v);
    else if (k == "modulus") modulus = v;
    else throw std::invalid_argument("unknown spec key: " + k);
  }
  const RingSpec& s = get(p, e, N);
  if (!modulus.empty() && modulus != s.serialize().substr(s.serialize().find("modulus=") + 8))
    throw SpecMismatch("modulus differs from the built-in choice");
  return s;
}

// ---------------------------------------------------------------- TElem

TElem::TElem(const RingSpec& s, int64_t c0) : s_(&s) { c_[0] = mod(c0, s.pN); }

TElem::TElem(const RingSpec& s, const Coeffs& c) : s_(&s) {
  for (int i = 0; i < s.e; ++i) c_[i] = mod(c[i], s.pN);
}

TElem TElem::gen(const RingSpec& s) {
  if (s.e == 1) return TElem(s, -s.modulus[0]);
  Coeffs c{};
  c[1] = 1;
  return TElem(s, c);
}

int TElem::valuation() const {
  int v = s_->N;
  for (int i = 0; i < s_->e; ++i) v = std::min(v, vp(c_[i], s_->p, s_->N));
  return v;
}

bool TElem::is_base() const {
  for (int i = 1; i < s_->e; ++i)
    if (c_[i] != 0) return false;
  return true;
}

TElem TElem::operator+(const TElem& o) const {
  if (s_ != o.s_) throw SpecMismatch("add across specs");
  TElem r(*s_);
  for (int i = 0; i < s_->e; ++i) {
    int64_t v = c_[i] + o.c_[i];
    r.c_[i] = v >= s_->pN ? v - s_->pN : v;
  }
  return r;
}

TElem TElem::operator-() const {
  TElem r(*s_);
  for (int i = 0; i < s_->e; ++i) r.c_[i] = c_[i] ? s_->pN - c_[i] : 0;
  return r;
}

TElem TElem::operator-(const TElem& o) const { return *this + (-o); }

TElem TElem::operator*(const TElem& o) const {
  if (s_ != o.s_) throw SpecMismatch("mul across specs");
  TElem r(*s_);
  r.c_ = poly_mulmod(c_, o.c_, s_->modulus, s_->e, s_->pN);
  return r;
}

bool TElem::operator==(const TElem& o) const { return s_ == o.s_ && c_ == o.c_; }

TElem TElem::inv() const {
  if (!is_unit()) throw NotAUnit("inverse of a non-unit");
  // residue inverse a^(q-2) mod p, then Newton y <- y(2 - ay)
  TElem y = pow(s_->q() - 2);
  TElem two(*s_, 2);
  for (int prec = 1; prec < s_->N; prec *= 2) y = y * (two - *this * y);
  return y;
}

TElem TElem::pow(int64_t k) const {
  if (k < 0) return inv().pow(-k);
  TElem r(*s_);
  r.c_ = poly_powmod(c_, k, s_->modulus, s_->e, s_->pN);
  return r;
}

TElem TElem::frobenius(int power) const {
  int e = s_->e;
  int k = ((power % e) + e) % e;
  TElem cur = *this;
  for (int step = 0; step < k; ++step) {
    TElem next(*s_);
    for (int i = 0; i < e; ++i) {
      if (cur.c_[i] == 0) continue;
      for (int j = 0; j < e; ++j) next.c_[j] = mod(next.c_[j] + cur.c_[i] * s_->frob[i][j], s_->pN);
    }
    cur = next;
  }
  return cur;
}

TElem TElem::residue() const { return reduce_mod(*this, 1); }

std::string TElem::str() const {
  if (s_->e == 1) return std::to_string(c_[0]);
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < s_->e; ++i) os << (i ? "," : "") << c_[i];
  os << ")";
  return os.str();
}

uint64_t TElem::encode(int k) const {
  uint64_t out = 0;
  uint64_t base = static_cast<uint64_t>(s_->ppow[k]);
  for (int i = s_->e - 1; i >= 0; --i) out = out * base + static_cast<uint64_t>(c_[i] % s_->ppow[k]);
  return out;
}

TElem reduce_mod(const TElem& a, int k) {
  TElem r(a.spec());
  if (k >= a.spec().N) return a;
  for (int i = 0; i < a.spec().e; ++i) r.c_[i] = a.c_[i] % a.spec().ppow[k];
  return r;
}

TElem norm_to_fixed(const TElem& a, int subdegree) {
  int e = a.spec().e;
  if (subdegree < 1 || e % subdegree) throw DegreeMismatch("subdegree must divide the degree");
  TElem acc(a.spec(), 1);
  for (int i = 0; i < e / subdegree; ++i) acc *= a.frobenius(i * subdegree);
  if (acc.frobenius(subdegree) != acc) throw std::logic_error("norm left the fixed subring");
  return acc;
}

TElem trace_to_fixed(const TElem& a, int subdegree) {
  int e = a.spec().e;
  if (subdegree < 1 || e % subdegree) throw DegreeMismatch("subdegree must divide the degree");
  TElem acc(a.spec(), 0);
  for (int i = 0; i < e / subdegree; ++i) acc += a.frobenius(i * subdegree);
  if (acc.frobenius(subdegree) != acc) throw std::logic_error("trace left the fixed subring");
  return acc;
}

UnitDecomposition unit_decompose(const TElem& a) {
  int v = a.valuation();
  if (v >= a.spec().N) throw ZeroElement("unit_decompose of zero");
  Coeffs c{};
  for (int i = 0; i < a.spec().e; ++i) c[i] = a.coeff(i) / a.spec().ppow[v];
  return {v, TElem(a.spec(), c)};
}

TElem teichmuller(const TElem& a) {
  if (!a.is_unit()) throw NotAUnit("Teichmuller lift of a non-unit");
  int64_t k = 1;
  for (int i = 1; i < a.spec().N; ++i) k *= a.spec().q();
  return a.pow(k);
}

TElem residue_generator(const RingSpec& s) {
  // the modulus is chosen so that x is primitive mod p
  return teichmuller(TElem::gen(s));
}

// ------------------------------------------------------- ExtensionTower

ExtensionTower::ExtensionTower(const RingSpec& small, const RingSpec& large)
    : small_(&small), large_(&large), z_(large) {
  if (small.p != large.p || small.N != large.N || large.e % small.e)
    throw DegreeMismatch("tower requires same p, same N and d | e");
  auto eval = [&](const TElem& t, bool derivative) {
    TElem acc(large, 0), pw(large, 1);
    int d = small.e;
    for (int i = 0; i <= d; ++i) {
      int64_t c = (i == d) ? 1 : small.modulus[i];
      if (derivative) {
        if (i + 1 <= d) acc += pw * TElem(large, ((i + 1 == d) ? 1 : small.modulus[i + 1]) * (i + 1));
      } else {
        acc += pw * TElem(large, c);
      }
      pw *= t;
    }
    return acc;
  };
  auto lift = [&](TElem z) {
    for (int it = 0; it <= large.N + 1; ++it) z = z - eval(z, false) * eval(z, true).inv();
    return z;
  };
  // Conway compatibility puts the root at x^((q_e-1)/(q_d-1))
  TElem start = TElem::gen(large).pow((large.q() - 1) / (small.q() - 1));
  TElem cand = reduce_mod(start, 1);
  if (!eval(cand, false).residue().is_zero()) {
    bool found = false;
    uint64_t total = static_cast<uint64_t>(large.q());
    for (uint64_t code = 0; code < total && !found; ++code) {
      Coeffs c{};
      uint64_t t = code;
      for (int i = 0; i < large.e; ++i) {
        c[i] = static_cast<int64_t>(t % large.p);
        t /= large.p;
      }
      TElem r(large, c);
      if (eval(r, false).residue().is_zero() && eval(r, true).is_unit()) {
        cand = r;
        found = true;
      }
    }
    if (!found) throw std::logic_error("no residue root for the embedding");
  }
  z_ = lift(cand);
  if (!eval(z_, false).is_zero()) throw std::logic_error("embedding root lift failed");
}

TElem ExtensionTower::embed(const TElem& a) const {
  if (a.spec_ptr() != small_) throw SpecMismatch("embed: element not in the small ring");
  TElem acc(*large_, 0), pw(*large_, 1);
  for (int i = 0; i < small_->e; ++i) {
    acc += pw * TElem(*large_, a.coeff(i));
    pw *= z_;
  }
  return acc;
}

TElem ExtensionTower::descend(const TElem& a) const {
  if (a.spec_ptr() != large_) throw SpecMismatch("descend: element not in the large ring");
  const RingSpec& L = *large_;
  int d = small_->e, e = L.e;
  // columns: coefficients of z^j; solve by elimination on unit pivots
  std::vector<std::vector<int64_t>> rows(e, std::vector<int64_t>(d + 1));
  TElem pw(L, 1);
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < e; ++i) rows[i][j] = pw.coeff(i);
    pw *= z_;
  }
  for (int i = 0; i < e; ++i) rows[i][d] = a.coeff(i);
  std::vector<int> pivot_row(d, -1);
  int next = 0;
  for (int j = 0; j < d; ++j) {
    int piv = -1;
    for (int i = next; i < e; ++i)
      if (rows[i][j] % L.p != 0) {
        piv = i;
        break;
      }
    if (piv < 0) throw std::logic_error("descend: embedding basis degenerate mod p");
    std::swap(rows[piv], rows[next]);
    int64_t inv = TElem(L, rows[next][j]).inv().coeff(0);
    for (auto& v : rows[next]) v = mod(v * inv, L.pN);
    for (int i = 0; i < e; ++i) {
      if (i == next || rows[i][j] == 0) continue;
      int64_t f = rows[i][j];
      for (int k = 0; k <= d; ++k) rows[i][k] = mod(rows[i][k] - f * rows[next][k], L.pN);
    }
    pivot_row[j] = next++;
  }
  Coeffs c{};
  for (int j = 0; j < d; ++j) c[j] = rows[pivot_row[j]][d];
  TElem out(*small_, c);
  if (embed(out) != a) throw SpecMismatch("descend: element is not in the subring");
  return out;
}

// ---------------------------------------------------------------- FElem

namespace {

Coeffs reduce_coeffs(const Coeffs& c, int e, int64_t m) {
  Coeffs out{};
  for (int i = 0; i < e; ++i) out[i] = mod(c[i], m);
  return out;
}

}  // namespace

FElem::FElem(const RingSpec& s, int64_t n) : s_(&s) {
  if (n == 0) {
    v_ = kExactZero;
    prec_ = s.N;
    return;
  }
  int v = 0;
  while (n % s.p == 0) {
    n /= s.p;
    ++v;
  }
  v_ = v;
  prec_ = s.N;
  c_[0] = mod(n, s.pN);
}

FElem::FElem(const TElem& a) : s_(a.spec_ptr()) {
  if (a.is_zero()) {
    v_ = a.spec().N;
    prec_ = 0;
    return;
  }
  auto d = unit_decompose(a);
  v_ = d.valuation;
  prec_ = a.spec().N - d.valuation;
  c_ = reduce_coeffs(d.unit.coeffs(), s_->e, s_->ppow[prec_]);
}

FElem FElem::p_power(const RingSpec& s, int k) {
  FElem r(s, 1);
  r.v_ = k;
  return r;
}

FElem FElem::from_unit(const TElem& u, int v) {
  if (!u.is_unit()) throw NotAUnit("from_unit requires a unit");
  FElem r(u.spec());
  r.v_ = v;
  r.prec_ = u.spec().N;
  r.c_ = u.coeffs();
  return r;
}

FElem FElem::inexact_zero(const RingSpec& s, int abs_prec) {
  FElem r(s);
  r.v_ = abs_prec;
  r.prec_ = 0;
  return r;
}

int FElem::valuation() const {
  if (is_exact_zero()) throw ZeroElement("valuation of exact zero");
  if (prec_ == 0) throw PrecisionExhausted("valuation of an inexact zero");
  return v_;
}

bool FElem::val_at_least(int k) const {
  if (is_exact_zero() || v_ >= k) return true;
  if (prec_ > 0) return false;
  throw PrecisionExhausted("valuation undecidable at current precision");
}

bool FElem::is_unit() const { return !is_zero_like() && v_ == 0; }

void FElem::normalize(int abs_prec) {
  // c_ holds p^(v_) * c_ mod p^abs_prec with c_ possibly divisible by p
  int rel = abs_prec - v_;
  if (rel <= 0) {
    *this = inexact_zero(*s_, abs_prec);
    return;
  }
  int w = rel;
  for (int i = 0; i < s_->e; ++i) w = std::min(w, vp(c_[i], s_->p, rel));
  if (w >= rel) {
    *this = inexact_zero(*s_, abs_prec);
    return;
  }
  v_ += w;
  prec_ = rel - w;
  for (int i = 0; i < s_->e; ++i) c_[i] = (c_[i] / s_->ppow[w]) % s_->ppow[prec_];
}

FElem FElem::operator+(const FElem& o) const {
  if (s_ != o.s_) throw SpecMismatch("add across specs");
  if (is_exact_zero()) return o;
  if (o.is_exact_zero()) return *this;
  int A = std::min(abs_prec(), o.abs_prec());
  int v = std::min(v_, o.v_);
  FElem r(*s_);
  r.v_ = v;
  int rel = A - v;
  if (rel <= 0) return inexact_zero(*s_, A);
  int64_t m = s_->ppow[std::min(rel, s_->N)];
  for (int i = 0; i < s_->e; ++i) {
    int64_t acc = 0;
    if (prec_ > 0 && v_ - v < rel) acc += (c_[i] % m) * s_->ppow[v_ - v] % m;
    if (o.prec_ > 0 && o.v_ - v < rel) acc += (o.c_[i] % m) * s_->ppow[o.v_ - v] % m;
    r.c_[i] = acc % m;
  }
  r.normalize(A);
  return r;
}

FElem FElem::operator-() const {
  FElem r = *this;
  if (is_zero_like()) return r;
  int64_t m = s_->ppow[prec_];
  for (int i = 0; i < s_->e; ++i) r.c_[i] = c_[i] ? m - c_[i] : 0;
  return r;
}

FElem FElem::operator-(const FElem& o) const { return *this + (-o); }

FElem FElem::operator*(const FElem& o) const {
  if (s_ != o.s_) throw SpecMismatch("mul across specs");
  if (is_exact_zero() || o.is_exact_zero()) return FElem(*s_);
  if (prec_ == 0 || o.prec_ == 0) return inexact_zero(*s_, v_ + o.v_);
  FElem r(*s_);
  r.v_ = v_ + o.v_;
  r.prec_ = std::min(prec_, o.prec_);
  r.c_ = reduce_coeffs(poly_mulmod(c_, o.c_, s_->modulus, s_->e, s_->pN), s_->e, s_->ppow[r.prec_]);
  return r;
}

FElem FElem::inv() const {
  if (is_exact_zero()) throw ZeroElement("inverse of zero");
  if (prec_ == 0) throw PrecisionExhausted("inverse of an inexact zero");
  FElem r(*s_);
  r.v_ = -v_;
  r.prec_ = prec_;
  r.c_ = reduce_coeffs(TElem(*s_, c_).inv().coeffs(), s_->e, s_->ppow[prec_]);
  return r;
}

FElem FElem::shift(int k) const {
  if (is_exact_zero()) return *this;
  FElem r = *this;
  r.v_ += k;
  return r;
}

FElem FElem::frobenius(int power) const {
  if (is_zero_like()) return *this;
  FElem r = *this;
  r.c_ = reduce_coeffs(TElem(*s_, c_).frobenius(power).coeffs(), s_->e, s_->ppow[prec_]);
  return r;
}

TElem FElem::to_telem() const {
  if (is_exact_zero()) return TElem(*s_, 0);
  if (v_ < 0) throw std::domain_error("to_telem of a non-integral element");
  if (abs_prec() < s_->N) throw PrecisionExhausted("element known below working precision");
  if (v_ >= s_->N) return TElem(*s_, 0);
  return TElem(*s_, c_) * TElem(*s_, s_->ppow[v_]);
}

TElem FElem::unit_part() const {
  if (is_zero_like()) throw ZeroElement("unit part of zero");
  return TElem(*s_, c_);
}

bool FElem::equals(const FElem& o) const {
  if (is_exact_zero() && o.is_exact_zero()) return true;
  return (*this - o).is_zero_like();
}

std::string FElem::str() const {
  if (is_exact_zero()) return "0";
  if (prec_ == 0) return "O(p^" + std::to_string(v_) + ")";
  std::ostringstream os;
  os << "p^" << v_ << "*" << TElem(*s_, c_).str() << "+O(p^" << abs_prec() << ")";
  return os.str();
}

}  // namespace unram
