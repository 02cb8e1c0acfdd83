#include "unram/characters.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

namespace unram {

namespace {

int64_t mod_floor(int64_t a, int64_t m) { return ((a % m) + m) % m; }

}  // namespace

// ------------------------------------------------------------ UnitGroup

UnitGroup::UnitGroup(const RingSpec& s, int C) : s_(&s), C_(C), q_(s.q()), pC1_(s.ppow.at(C - 1)), g_(s) {
  if (s.p == 2) throw std::invalid_argument("unit group coordinates need odd p");
  if (C > s.N) throw PrecisionExhausted("unit group level exceeds ring precision");
  g_ = residue_generator(s);
  for (int i = 0; i < s.e; ++i) {
    Coeffs c{};
    c[i] = s.p;
    wild_.push_back(TElem(s, 1) + TElem(s, c));
  }
  uint64_t size = 1;
  for (int k = 0; k < C; ++k) size *= static_cast<uint64_t>(q_);
  dlog_.assign(size, Log{});
  // enumerate g^a * prod (1+p x^i)^(b_i); each class must be hit once
  std::vector<TElem> tame(q_ - 1, TElem(s, 1));
  for (int64_t a = 1; a < q_ - 1; ++a) tame[a] = tame[a - 1] * g_;
  std::vector<std::vector<TElem>> wild_pows(s.e, std::vector<TElem>(pC1_, TElem(s, 1)));
  for (int i = 0; i < s.e; ++i)
    for (int64_t b = 1; b < pC1_; ++b) wild_pows[i][b] = wild_pows[i][b - 1] * wild_[i];
  int64_t wild_count = 1;
  for (int i = 0; i < s.e; ++i) wild_count *= pC1_;
  for (int64_t w = 0; w < wild_count; ++w) {
    Log l;
    TElem prod(s, 1);
    int64_t t = w;
    for (int i = 0; i < s.e; ++i) {
      l.b[i] = t % pC1_;
      t /= pC1_;
      prod *= wild_pows[i][l.b[i]];
    }
    for (int64_t a = 0; a < q_ - 1; ++a) {
      TElem u = reduce_mod(tame[a] * prod, C);
      uint64_t code = u.encode(C);
      if (dlog_[code].a >= 0) throw std::logic_error("unit group generators are not independent");
      l.a = a;
      dlog_[code] = l;
      codes_.push_back(code);
      elems_.push_back(u);
    }
  }
}

const UnitGroup& UnitGroup::get(const RingSpec& s, int C) {
  static std::mutex mu;
  static std::map<std::pair<const RingSpec*, int>, std::unique_ptr<UnitGroup>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(&s, C);
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;
  return *cache.emplace(key, std::make_unique<UnitGroup>(s, C)).first->second;
}

const UnitGroup::Log& UnitGroup::dlog(const TElem& u) const {
  const Log& l = dlog_[u.encode(C_)];
  if (l.a < 0) throw NotAUnit("discrete log of a non-unit");
  return l;
}

TElem UnitGroup::element(const Log& l) const {
  TElem out = g_.pow(l.a);
  for (int i = 0; i < s_->e; ++i) out *= wild_[i].pow(l.b[i]);
  return out;
}

std::vector<TElem> UnitGroup::principal_units(int l) const {
  std::vector<TElem> out;
  for (const auto& u : elems_)
    if ((u - TElem(*s_, 1)).valuation() >= l) out.push_back(u);
  return out;
}

// ------------------------------------------------------ torus coordinates

std::vector<TElem> coroot_point(const RootDatum& d, int root, const TElem& x) {
  std::vector<TElem> out;
  for (int j = 0; j < d.rank; ++j) out.push_back(x.pow(d.coroots[root][j]));
  return out;
}

std::vector<TElem> torus_F_to_E(const RootDatum& d, const std::vector<TElem>& units) {
  if (d.is_split()) return units;
  return {units[0], units[0].frobenius(1)};
}

std::vector<TElem> torus_E_to_F(const RootDatum& d, const std::vector<TElem>& units_E) {
  if (d.is_split()) return units_E;
  return {units_E[0]};
}

std::vector<TElem> torus_h(const RootDatum& d, const std::vector<TElem>& units_E) {
  std::vector<TElem> out;
  for (int i = 0; i < d.rank; ++i) {
    TElem acc(units_E[0].spec(), 1);
    for (int j = 0; j < d.rank; ++j) acc *= units_E[j].pow(d.h_cochar[i][j]);
    out.push_back(d.is_split() ? acc : acc.frobenius(1));
  }
  return out;
}

std::vector<TElem> torus_weyl_conj(const WeylGroup& W, int w, const std::vector<TElem>& units_E) {
  const IMat& B = W[W.inverse(w)].cochar;
  std::vector<TElem> out;
  for (size_t i = 0; i < B.size(); ++i) {
    TElem acc(units_E[0].spec(), 1);
    for (size_t j = 0; j < B.size(); ++j) acc *= units_E[j].pow(B[i][j]);
    out.push_back(acc);
  }
  return out;
}

// ------------------------------------------------------ SmoothCharacter

SmoothCharacter SmoothCharacter::from_coords(const RootDatum& d, const RingSpec& ring, int C,
                                             const std::vector<CoordSpec>& coords) {
  SmoothCharacter chi;
  chi.d_ = &d;
  chi.ring_ = &ring;
  chi.C_ = C;
  const UnitGroup& G = UnitGroup::get(ring, C);
  chi.M_ = G.exponent();
  int expected = d.is_split() ? d.rank : 1;
  if (static_cast<int>(coords.size()) != expected)
    throw std::invalid_argument("character needs one coordinate per torus factor");
  for (const auto& cs : coords) {
    std::vector<int32_t> table(G.table_size(), -1);
    for (uint64_t code : G.unit_codes()) {
      const auto& l = G.dlog_code(code);
      int64_t k = mod_floor(cs.A * l.a, G.tame_order()) * G.wild_order();
      for (int i = 0; i < ring.e; ++i) {
        int64_t b = i < static_cast<int>(cs.B.size()) ? cs.B[i] : 0;
        k += mod_floor(b * l.b[i], G.wild_order()) * G.tame_order();
      }
      table[code] = static_cast<int32_t>(k % chi.M_);
    }
    chi.tables_.push_back(std::move(table));
  }
  return chi;
}

SmoothCharacter SmoothCharacter::trivial(const RootDatum& d, const RingSpec& ring) {
  int n = d.is_split() ? d.rank : 1;
  return from_coords(d, ring, 1, std::vector<CoordSpec>(n));
}

int64_t SmoothCharacter::exponent(const std::vector<TElem>& units) const {
  int64_t k = 0;
  for (size_t j = 0; j < tables_.size(); ++j) {
    if (units[j].spec_ptr() != ring_) throw SpecMismatch("torus point on the wrong layer");
    int32_t v = tables_[j][units[j].encode(C_)];
    if (v < 0) throw NotInDomain("torus coordinate is not a unit");
    k += v;
  }
  return k % M_;
}

RootOfUnity SmoothCharacter::evaluate(const TorusPoint& t) const {
  for (int v : t.lambda)
    if (v != 0) throw NotInDomain("compact character applied to a non-compact torus point");
  return evaluate(t.units);
}

RootOfUnity SmoothCharacter::evaluate_E(const std::vector<TElem>& units_E) const {
  std::vector<TElem> acc = units_E;
  std::vector<TElem> cur = units_E;
  for (int i = 1; i < d_->h_order; ++i) {
    cur = torus_h(*d_, cur);
    for (size_t j = 0; j < acc.size(); ++j) acc[j] *= cur[j];
  }
  return evaluate(torus_E_to_F(*d_, acc));
}

SmoothCharacter SmoothCharacter::precompose(
    const RingSpec& new_ring, int new_coords,
    const std::function<std::vector<TElem>(const std::vector<TElem>&)>& f) const {
  SmoothCharacter out;
  out.d_ = d_;
  out.ring_ = &new_ring;
  out.C_ = C_;
  out.M_ = M_;
  const UnitGroup& G = UnitGroup::get(new_ring, C_);
  for (int j = 0; j < new_coords; ++j) {
    std::vector<int32_t> table(G.table_size(), -1);
    std::vector<TElem> point(new_coords, TElem(new_ring, 1));
    for (size_t idx = 0; idx < G.units().size(); ++idx) {
      point[j] = G.units()[idx];
      table[G.unit_codes()[idx]] = static_cast<int32_t>(exponent(f(point)));
    }
    out.tables_.push_back(std::move(table));
  }
  return out;
}

bool SmoothCharacter::same_representation(const SmoothCharacter& o) const {
  return d_ == o.d_ && ring_ == o.ring_ && C_ == o.C_ && M_ == o.M_ && tables_ == o.tables_;
}

namespace {

// small memo keyed by the exact representation of a character; lookups are linear
template <class Key, class Value>
class CharacterMemo {
 public:
  template <class Make>
  Value get(const SmoothCharacter& chi, const Key& key, Make make) {
    {
      std::lock_guard<std::mutex> lock(mu_);
      for (const auto& e : entries_)
        if (e.key == key && e.chi.same_representation(chi)) return e.value;
    }
    Value v = make();
    std::lock_guard<std::mutex> lock(mu_);
    if (entries_.size() >= 64) entries_.erase(entries_.begin());
    entries_.push_back({chi, key, v});
    return v;
  }

 private:
  struct Entry {
    SmoothCharacter chi;
    Key key;
    Value value;
  };
  std::mutex mu_;
  std::vector<Entry> entries_;
};

}  // namespace

SmoothCharacter SmoothCharacter::pullback_norm(int r) const {
  if (r < 1) throw std::invalid_argument("r must be positive");
  if (r == 1) return *this;
  static CharacterMemo<int, SmoothCharacter> memo;
  return memo.get(*this, r, [&] { return pullback_norm_uncached(r); });
}

SmoothCharacter SmoothCharacter::pullback_norm_uncached(int r) const {
  const RingSpec& big = RingSpec::get(ring_->p, ring_->e * r, ring_->N);
  ExtensionTower tower(*ring_, big);
  int e = ring_->e;
  return precompose(big, num_coords(), [&](const std::vector<TElem>& t) {
    std::vector<TElem> out;
    for (const auto& c : t) out.push_back(tower.descend(norm_to_fixed(c, e)));
    return out;
  });
}

SmoothCharacter SmoothCharacter::rebind(const RingSpec& ring) const {
  if (ring.p != ring_->p || ring.e != ring_->e || ring.N < C_)
    throw SpecMismatch("rebind needs the same p and e and precision at least the level");
  SmoothCharacter out = *this;
  out.ring_ = &ring;
  return out;
}

SmoothCharacter SmoothCharacter::weyl_act(const WeylGroup& W, int w) const {
  auto rel = relative_weyl(W);
  if (std::find(rel.begin(), rel.end(), w) == rel.end())
    throw std::invalid_argument("Weyl element outside the relative Weyl group");
  if (w == W.identity()) return *this;
  static CharacterMemo<std::pair<const RootDatum*, int>, SmoothCharacter> memo;
  return memo.get(*this, {&W.datum(), w}, [&] { return weyl_act_uncached(W, w); });
}

SmoothCharacter SmoothCharacter::weyl_act_uncached(const WeylGroup& W, int w) const {
  const RootDatum& d = *d_;
  return precompose(*ring_, num_coords(), [&](const std::vector<TElem>& t) {
    return torus_E_to_F(d, torus_weyl_conj(W, w, torus_F_to_E(d, t)));
  });
}

SmoothCharacter SmoothCharacter::inverse() const {
  SmoothCharacter out = *this;
  for (auto& t : out.tables_)
    for (auto& v : t)
      if (v > 0) v = static_cast<int32_t>(M_ - v);
  return out;
}

bool SmoothCharacter::operator==(const SmoothCharacter& o) const {
  if (ring_ != o.ring_ || tables_.size() != o.tables_.size()) return false;
  if (C_ == o.C_ && M_ == o.M_ && tables_ == o.tables_) return true;
  const UnitGroup& G = UnitGroup::get(*ring_, std::max(C_, o.C_));
  for (size_t j = 0; j < tables_.size(); ++j)
    for (const auto& u : G.units()) {
      RootOfUnity a(M_, tables_[j][u.encode(C_)]), b(o.M_, o.tables_[j][u.encode(o.C_)]);
      if (a != b) return false;
    }
  return true;
}

bool SmoothCharacter::is_trivial() const {
  for (const auto& t : tables_)
    for (auto v : t)
      if (v > 0) return false;
  return true;
}

std::string SmoothCharacter::serialize() const {
  const UnitGroup& G = UnitGroup::get(*ring_, C_);
  std::ostringstream os;
  os << "character group=" << d_->name << " ring={" << ring_->serialize() << "} level=" << C_
     << " order=" << M_ << "\n";
  for (size_t j = 0; j < tables_.size(); ++j) {
    os << "coord " << j << " tame=" << tables_[j][reduce_mod(G.tame_generator(), C_).encode(C_)];
    for (const auto& w : G.wild_generators()) os << " wild=" << tables_[j][reduce_mod(w, C_).encode(C_)];
    os << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------- conductors

bool conductor_is_minimal(const SmoothCharacter& chi, int root, int c) {
  const UnitGroup& G = UnitGroup::get(chi.ring(), chi.level());
  auto trivial_on = [&](int l) {
    if (l >= chi.level()) return true;
    for (const auto& x : G.principal_units(l))
      if (!chi.evaluate_E(coroot_point(chi.datum(), root, x)).is_one()) return false;
    return true;
  };
  if (!trivial_on(c)) return false;
  return c == 1 || !trivial_on(c - 1);
}

int conductor(const SmoothCharacter& chi, int root) {
  const UnitGroup& G = UnitGroup::get(chi.ring(), chi.level());
  for (int l = 1; l < chi.level(); ++l) {
    bool trivial = true;
    for (const auto& x : G.principal_units(l)) {
      if (!chi.evaluate_E(coroot_point(chi.datum(), root, x)).is_one()) {
        trivial = false;
        break;
      }
    }
    if (trivial) return l;
  }
  return chi.level();
}

int depth_plus_one(const SmoothCharacter& chi) {
  int c = 1;
  for (int a = 0; a < chi.datum().num_roots(); ++a) c = std::max(c, conductor(chi, a));
  return c;
}

// ------------------------------------------------------------ stabilizer

std::vector<int> relative_weyl(const WeylGroup& W) {
  if (W.datum().is_split()) {
    std::vector<int> all(W.size());
    for (int i = 0; i < W.size(); ++i) all[i] = i;
    return all;
  }
  return W.h_fixed();
}

bool Stabilizer::contains_finite(int w) const { return std::find(finite.begin(), finite.end(), w) != finite.end(); }

bool Stabilizer::contains(const AffineWeylElement& x) const { return contains_finite(x.w); }

Stabilizer stabilizer_W0chi(const SmoothCharacter& chi, const WeylGroup& W) {
  Stabilizer st;
  st.W = &W;
  // element indices depend only on the datum, so the fixed list is shared across WeylGroup copies
  static CharacterMemo<const RootDatum*, std::vector<int>> memo;
  st.finite = memo.get(chi, &W.datum(), [&] {
    std::vector<int> fixed;
    for (int w : relative_weyl(W))
      if (chi.weyl_act(W, w) == chi) fixed.push_back(w);
    return fixed;
  });
  // greedy generating set, by increasing length
  std::vector<int> sorted = st.finite;
  std::sort(sorted.begin(), sorted.end(), [&](int a, int b) { return W[a].length() < W[b].length(); });
  std::vector<int> span{W.identity()};
  for (int w : sorted) {
    if (std::find(span.begin(), span.end(), w) != span.end()) continue;
    st.generators.push_back(w);
    bool grew = true;
    std::vector<int> gens = st.generators;
    while (grew) {
      grew = false;
      for (size_t i = 0, n = span.size(); i < n; ++i)
        for (int g : gens) {
          int x = W.mul(span[i], g);
          if (std::find(span.begin(), span.end(), x) == span.end()) {
            span.push_back(x);
            grew = true;
          }
        }
    }
  }
  return st;
}

// ---------------------------------------------------- ExtendedCharacter

ExtendedCharacter::ExtendedCharacter(SmoothCharacter chi, std::vector<ScaledRoot> eta)
    : chi_(std::move(chi)), eta_(std::move(eta)) {
  if (eta_.size() != chi_.datum().rel_basis.size())
    throw std::invalid_argument("eta needs one value per X_*(A) basis vector");
}

ScaledRoot ExtendedCharacter::eta_at(const IVec& lambda) const {
  ScaledRoot acc;
  for (size_t k = 0; k < eta_.size(); ++k) acc = acc * eta_[k].pow(lambda[k]);
  return acc;
}

Cyclo ExtendedCharacter::evaluate(const TorusPoint& t) const {
  ScaledRoot v = eta_at(t.lambda);
  v.z = v.z * chi_.evaluate(t.units);
  return v.to_cyclo();
}

ExtendedCharacter ExtendedCharacter::compose_norm(int r) const {
  SmoothCharacter chi_r = chi_.pullback_norm(r);
  const RingSpec& base = chi_.ring();
  const RingSpec& big = chi_r.ring();
  ExtensionTower tower(base, big);
  int n = chi_.num_coords();
  std::vector<ScaledRoot> eta_r;
  for (size_t k = 0; k < eta_.size(); ++k) {
    // N_r(b_k(p)) = b_k(p) theta(b_k(p)) ... theta^(r-1)(b_k(p)) in T(F_r)
    TorusPoint bk{std::vector<TElem>(n, TElem(big, 1)), IVec(eta_.size(), 0)};
    bk.lambda[k] = 1;
    TorusPoint acc{std::vector<TElem>(n, TElem(big, 1)), IVec(eta_.size(), 0)};
    for (int i = 0; i < r; ++i) acc = torus_mul(acc, torus_theta(bk, i * base.e));
    std::vector<TElem> units;
    for (const auto& u : acc.units) units.push_back(tower.descend(u));
    eta_r.push_back(ScaledRoot{1, chi_.evaluate(units)} * eta_at(acc.lambda));
  }
  return ExtendedCharacter(chi_r, eta_r);
}

TorusPoint torus_mul(const TorusPoint& a, const TorusPoint& b) {
  TorusPoint out = a;
  for (size_t j = 0; j < a.units.size(); ++j) out.units[j] = a.units[j] * b.units[j];
  out.lambda = vec_add(a.lambda, b.lambda);
  return out;
}

TorusPoint torus_theta(const TorusPoint& a, int power) {
  TorusPoint out = a;
  for (auto& u : out.units) u = u.frobenius(power);
  return out;
}

ExtendedCharacter ExtendedCharacter::weyl_act(const WeylGroup& W, int w) const {
  SmoothCharacter c = chi_.weyl_act(W, w);
  const RootDatum& d = chi_.datum();
  std::vector<ScaledRoot> eta2;
  int winv = W.inverse(w);
  for (const auto& b : d.rel_basis) {
    IVec img = W[winv].act_cochar(b);
    // coordinates of img against rel_basis
    IVec coords;
    if (d.is_split()) {
      coords = img;
    } else {
      coords = {img[0]};
    }
    eta2.push_back(eta_at(coords));
  }
  return ExtendedCharacter(c, eta2);
}

}  // namespace unram
