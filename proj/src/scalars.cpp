#include "unram/scalars.hpp"

#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace unram {

int64_t gcd64(int64_t a, int64_t b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b) {
    int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

int64_t lcm64(int64_t a, int64_t b) { return a / gcd64(a, b) * b; }

RootOfUnity::RootOfUnity(int64_t order, int64_t exponent) : M(order), k(((exponent % order) + order) % order) {
  if (order <= 0) throw std::invalid_argument("root of unity order must be positive");
}

RootOfUnity RootOfUnity::operator*(const RootOfUnity& o) const {
  int64_t L = lcm64(M, o.M);
  return RootOfUnity(L, k * (L / M) + o.k * (L / o.M)).reduced();
}

RootOfUnity RootOfUnity::pow(int64_t n) const {
  __int128 e = static_cast<__int128>(k) * n;
  int64_t r = static_cast<int64_t>(((e % M) + M) % M);
  return RootOfUnity(M, r).reduced();
}

RootOfUnity RootOfUnity::reduced() const {
  int64_t g = gcd64(k, M);
  if (k == 0) return {1, 0};
  return {M / g, k / g};
}

bool RootOfUnity::operator==(const RootOfUnity& o) const {
  RootOfUnity a = reduced(), b = o.reduced();
  return a.M == b.M && a.k == b.k;
}

std::string RootOfUnity::str() const {
  RootOfUnity r = reduced();
  if (r.k == 0) return "1";
  return "z" + std::to_string(r.M) + "^" + std::to_string(r.k);
}

const std::vector<int64_t>& cyclotomic_polynomial(int64_t M) {
  static std::mutex mu;
  static std::map<int64_t, std::vector<int64_t>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(M);
    if (it != cache.end()) return it->second;
  }
  // x^M - 1 divided by Phi_d for every proper divisor d
  std::vector<int64_t> num(M + 1, 0);
  num[0] = -1;
  num[M] = 1;
  for (int64_t d = 1; d < M; ++d) {
    if (M % d) continue;
    const auto& den = cyclotomic_polynomial(d);
    int64_t dn = static_cast<int64_t>(den.size()) - 1;
    int64_t nn = static_cast<int64_t>(num.size()) - 1;
    std::vector<int64_t> quo(nn - dn + 1, 0);
    for (int64_t i = nn; i >= dn; --i) {
      int64_t c = num[i];  // den is monic
      quo[i - dn] = c;
      for (int64_t j = 0; j <= dn; ++j) num[i - dn + j] -= c * den[j];
    }
    num = quo;
  }
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(M, num).first->second;
}

Cyclo Cyclo::rational(const mpq_class& v, int64_t M) {
  Cyclo r(M);
  r.c_[0] = v;
  return r;
}

Cyclo Cyclo::root(const RootOfUnity& z) {
  Cyclo r(z.M);
  r.c_[z.k] = 1;
  return r;
}

void Cyclo::add_term(int64_t k, const mpq_class& v) { c_[((k % M_) + M_) % M_] += v; }

Cyclo Cyclo::lift(int64_t L) const {
  if (L % M_) throw std::invalid_argument("lift order must be a multiple");
  Cyclo r(L);
  int64_t s = L / M_;
  for (int64_t k = 0; k < M_; ++k)
    if (c_[k] != 0) r.c_[k * s] = c_[k];
  return r;
}

Cyclo Cyclo::operator+(const Cyclo& o) const {
  int64_t L = lcm64(M_, o.M_);
  Cyclo a = lift(L), b = o.lift(L);
  for (int64_t k = 0; k < L; ++k) a.c_[k] += b.c_[k];
  return a;
}

Cyclo Cyclo::operator-() const {
  Cyclo r = *this;
  for (auto& v : r.c_) v = -v;
  return r;
}

Cyclo Cyclo::operator-(const Cyclo& o) const { return *this + (-o); }

Cyclo Cyclo::operator*(const Cyclo& o) const {
  int64_t L = lcm64(M_, o.M_);
  Cyclo a = lift(L), b = o.lift(L), r(L);
  for (int64_t i = 0; i < L; ++i) {
    if (a.c_[i] == 0) continue;
    for (int64_t j = 0; j < L; ++j)
      if (b.c_[j] != 0) r.c_[(i + j) % L] += a.c_[i] * b.c_[j];
  }
  return r;
}

Cyclo Cyclo::operator*(const mpq_class& s) const {
  Cyclo r = *this;
  for (auto& v : r.c_) v *= s;
  return r;
}

Cyclo Cyclo::operator*(const RootOfUnity& z) const {
  int64_t L = lcm64(M_, z.M);
  Cyclo a = lift(L), r(L);
  int64_t shift = z.k * (L / z.M);
  for (int64_t i = 0; i < L; ++i)
    if (a.c_[i] != 0) r.c_[(i + shift) % L] = a.c_[i];
  return r;
}

std::vector<mpq_class> Cyclo::canonical() const {
  const auto& phi = cyclotomic_polynomial(M_);
  int64_t deg = static_cast<int64_t>(phi.size()) - 1;
  std::vector<mpq_class> rem = c_;
  for (int64_t i = M_ - 1; i >= deg; --i) {
    if (rem[i] == 0) continue;
    mpq_class c = rem[i];
    for (int64_t j = 0; j <= deg; ++j) rem[i - deg + j] -= c * phi[j];
  }
  rem.resize(deg);
  return rem;
}

bool Cyclo::operator==(const Cyclo& o) const {
  int64_t L = lcm64(M_, o.M_);
  return (lift(L) - o.lift(L)).is_zero();
}

bool Cyclo::is_zero() const {
  for (const auto& v : canonical())
    if (v != 0) return false;
  return true;
}

std::string Cyclo::str() const {
  // smallest order whose lift reproduces the value keeps output canonical
  int64_t best = M_;
  for (int64_t d = 1; d < M_; ++d) {
    if (M_ % d) continue;
    bool fits = true;
    for (int64_t k = 0; k < M_ && fits; ++k)
      if (c_[k] != 0 && k % (M_ / d)) fits = false;
    if (fits) {
      best = d;
      break;
    }
  }
  Cyclo small(best);
  for (int64_t k = 0; k < M_; ++k)
    if (c_[k] != 0) small.c_[k / (M_ / best)] += c_[k];
  auto can = small.canonical();
  std::ostringstream os;
  bool first = true;
  for (size_t k = 0; k < can.size(); ++k) {
    if (can[k] == 0) continue;
    if (!first) os << " + ";
    first = false;
    os << can[k].get_str();
    if (k) os << "*z" << best << "^" << k;
  }
  if (first) os << "0";
  return os.str();
}

ScaledRoot ScaledRoot::pow(int64_t n) const {
  ScaledRoot r{1, {}};
  ScaledRoot b = n < 0 ? inv() : *this;
  for (int64_t i = 0; i < (n < 0 ? -n : n); ++i) r = r * b;
  return r;
}

void RootCounts::merge(const RootCounts& o) {
  if (o.M != M) throw std::invalid_argument("RootCounts order mismatch");
  for (int64_t k = 0; k < M; ++k) count[k] += o.count[k];
}

int64_t RootCounts::total() const {
  int64_t t = 0;
  for (auto c : count) t += c;
  return t;
}

Cyclo RootCounts::value(const mpq_class& weight) const {
  Cyclo r(M);
  for (int64_t k = 0; k < M; ++k)
    if (count[k]) r.add_term(k, weight * mpq_class(count[k]));
  return r;
}

}  // namespace unram
