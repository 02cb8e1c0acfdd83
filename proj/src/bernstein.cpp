#include "unram/bernstein.hpp"

#include <omp.h>

#include <algorithm>
#include <sstream>

namespace unram {

namespace {

// coordinates of a vector of X_*(A) against rel_basis
IVec rel_coords(const RootDatum& d, const IVec& v) {
  if (d.is_split()) return v;
  IVec out;
  for (const auto& b : d.rel_basis) {
    size_t k = 0;
    while (k < b.size() && b[k] == 0) ++k;
    out.push_back(v[k] / b[k]);
  }
  return out;
}

IVec from_rel(const RootDatum& d, const IVec& c) {
  if (d.is_split()) return c;
  IVec v(d.rank, 0);
  for (size_t i = 0; i < c.size(); ++i)
    for (int k = 0; k < d.rank; ++k) v[k] += c[i] * d.rel_basis[i][k];
  return v;
}

bool h_stable(const RootDatum& d, unsigned mask) {
  if (d.is_split()) return true;
  for (size_t k = 0; k < d.simple.size(); ++k) {
    if (!(mask >> k & 1u)) continue;
    int img = d.h_root[d.simple[k]];
    auto it = std::find(d.simple.begin(), d.simple.end(), img);
    if (it == d.simple.end() || !(mask >> (it - d.simple.begin()) & 1u)) return false;
  }
  return true;
}

// Weyl elements of the Levi of mask that act on X_*(A)
std::vector<int> block_weyl(const WeylGroup& W, unsigned mask) {
  auto rel = relative_weyl(W);
  auto levi = W.levi_subgroup(mask);
  std::vector<int> out;
  for (int w : rel)
    if (std::find(levi.begin(), levi.end(), w) != levi.end()) out.push_back(w);
  return out;
}

SmoothCharacter on_ring_of(const SmoothCharacter& c, const SmoothCharacter& like) {
  if (&c.ring() == &like.ring()) return c;
  return c.rebind(like.ring());
}

bool same_block_character(const SmoothCharacter& a, const SmoothCharacter& b) {
  if (&a.datum() != &b.datum()) return false;
  if (a.ring().p != b.ring().p || a.ring().e != b.ring().e) return false;
  return on_ring_of(a, b) == b;
}

}  // namespace

/* ---- LaurentPoly ---- */

LaurentPoly LaurentPoly::constant(int nvars, const Cyclo& c) {
  LaurentPoly out(nvars);
  out.add_term(IVec(nvars, 0), c);
  return out;
}

LaurentPoly LaurentPoly::monomial(const IVec& exps, const Cyclo& c) {
  LaurentPoly out(static_cast<int>(exps.size()));
  out.add_term(exps, c);
  return out;
}

void LaurentPoly::add_term(const IVec& exps, const Cyclo& c) {
  if (static_cast<int>(exps.size()) != nvars_) throw std::invalid_argument("monomial has the wrong number of variables");
  auto it = terms_.find(exps);
  Cyclo v = it == terms_.end() ? c : it->second + c;
  if (v.is_zero()) {
    if (it != terms_.end()) terms_.erase(it);
  } else {
    terms_[exps] = v;
  }
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& o) const {
  if (o.nvars_ != nvars_) throw std::invalid_argument("variable count mismatch");
  LaurentPoly out = *this;
  for (const auto& [e, c] : o.terms_) out.add_term(e, c);
  return out;
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& o) const { return *this + o * Cyclo::rational(-1); }

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
  if (o.nvars_ != nvars_) throw std::invalid_argument("variable count mismatch");
  LaurentPoly out(nvars_);
  for (const auto& [e1, c1] : terms_)
    for (const auto& [e2, c2] : o.terms_) {
      IVec e(nvars_);
      for (int k = 0; k < nvars_; ++k) e[k] = e1[k] + e2[k];
      out.add_term(e, c1 * c2);
    }
  return out;
}

LaurentPoly LaurentPoly::operator*(const Cyclo& c) const {
  LaurentPoly out(nvars_);
  for (const auto& [e, v] : terms_) out.add_term(e, v * c);
  return out;
}

bool LaurentPoly::operator==(const LaurentPoly& o) const {
  if (nvars_ != o.nvars_ || terms_.size() != o.terms_.size()) return false;
  for (const auto& [e, c] : terms_) {
    auto it = o.terms_.find(e);
    if (it == o.terms_.end() || it->second != c) return false;
  }
  return true;
}

LaurentPoly LaurentPoly::scale_exponents(int r) const {
  LaurentPoly out(nvars_);
  for (const auto& [e, c] : terms_) {
    IVec f = e;
    for (int& x : f) x *= r;
    out.add_term(f, c);
  }
  return out;
}

LaurentPoly LaurentPoly::substitute(const IMat& m) const {
  LaurentPoly out(nvars_);
  for (const auto& [e, c] : terms_) out.add_term(mat_vec(m, e), c);
  return out;
}

Cyclo LaurentPoly::evaluate(const std::vector<ScaledRoot>& eta) const {
  if (static_cast<int>(eta.size()) != nvars_) throw std::invalid_argument("eta needs one value per variable");
  Cyclo acc;
  for (const auto& [e, c] : terms_) {
    ScaledRoot m;
    for (int k = 0; k < nvars_; ++k) m = m * eta[k].pow(e[k]);
    acc += c * m.to_cyclo();
  }
  return acc;
}

std::string LaurentPoly::serialize() const {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& [e, c] : terms_) {
    os << (first ? "" : ", ") << "[";
    for (size_t k = 0; k < e.size(); ++k) os << (k ? "," : "") << e[k];
    os << "]: " << c.str();
    first = false;
  }
  os << "}";
  return os.str();
}

IMat relative_action(const WeylGroup& W, int w) {
  const RootDatum& d = W.datum();
  size_t n = d.rel_basis.size();
  IMat m(n, IVec(n, 0));
  for (size_t j = 0; j < n; ++j) {
    IVec unit(n, 0);
    unit[j] = 1;
    IVec img = rel_coords(d, W[w].act_cochar(from_rel(d, unit)));
    for (size_t i = 0; i < n; ++i) m[i][j] = img[i];
  }
  return m;
}

/* ---- CenterElement ---- */

CenterElement::CenterElement(const SmoothCharacter& chi, std::shared_ptr<const WeylGroup> W, unsigned levi_mask,
                             LaurentPoly poly)
    : chi_(chi), W_(std::move(W)), mask_(levi_mask), poly_(std::move(poly)) {
  if (&W_->datum() != &chi_.datum()) throw std::invalid_argument("Weyl group of another root datum");
  if (poly_.nvars() != static_cast<int>(chi_.datum().rel_basis.size()))
    throw std::invalid_argument("polynomial needs one variable per X_*(A) basis vector");
  auto stab = stabilizer_W0chi(chi_, *W_).finite;
  for (int w : block_weyl(*W_, mask_))
    if (std::find(stab.begin(), stab.end(), w) != stab.end()) group_.push_back(w);
}

CenterElement::CenterElement(const SmoothCharacter& chi, std::shared_ptr<const WeylGroup> W, unsigned levi_mask,
                             std::vector<int> group, LaurentPoly poly)
    : chi_(chi), W_(std::move(W)), mask_(levi_mask), group_(std::move(group)), poly_(std::move(poly)) {}

CenterElement CenterElement::make(const SmoothCharacter& chi, const LaurentPoly& poly) {
  auto W = std::make_shared<const WeylGroup>(chi.datum());
  CenterElement z(chi, W, full_levi_mask(chi.datum()), poly);
  if (!z.is_invariant()) throw NotInvariant("polynomial is not W_{0chi}-invariant");
  return z;
}

CenterElement CenterElement::symmetrize(const SmoothCharacter& chi, const LaurentPoly& poly) {
  auto W = std::make_shared<const WeylGroup>(chi.datum());
  CenterElement z(chi, W, full_levi_mask(chi.datum()), poly);
  LaurentPoly acc(poly.nvars());
  for (int w : z.group_) acc = acc + poly.substitute(relative_action(*W, w));
  z.poly_ = acc;
  return z;
}

bool CenterElement::is_invariant() const {
  for (int w : group_)
    if (poly_.substitute(relative_action(*W_, w)) != poly_) return false;
  return true;
}

namespace {

void require_same_block(const CenterElement& a, const CenterElement& b) {
  if (a.levi_mask() != b.levi_mask() || !same_block_character(a.chi(), b.chi()))
    throw WrongBlock("center elements of different blocks");
}

}  // namespace

CenterElement CenterElement::operator+(const CenterElement& o) const {
  require_same_block(*this, o);
  return CenterElement(chi_, W_, mask_, group_, poly_ + o.poly_);
}

CenterElement CenterElement::operator*(const CenterElement& o) const {
  require_same_block(*this, o);
  return CenterElement(chi_, W_, mask_, group_, poly_ * o.poly_);
}

bool CenterElement::operator==(const CenterElement& o) const {
  return mask_ == o.mask_ && same_block_character(chi_, o.chi_) && poly_ == o.poly_;
}

std::string CenterElement::serialize() const {
  std::ostringstream os;
  os << "{\"group\": \"" << chi_.datum().name << "\", \"levi_mask\": " << mask_ << ", \"invariance\": [";
  for (size_t i = 0; i < group_.size(); ++i) os << (i ? "," : "") << group_[i];
  os << "], \"poly\": \"" << poly_.serialize() << "\"}";
  return os.str();
}

CenterElement base_change_br(const CenterElement& Z_r, const SmoothCharacter& chi, int r) {
  if (r < 1) throw std::invalid_argument("r must be positive");
  if (!Z_r.is_invariant()) throw NotInvariant("Z_r is not invariant under its W_{0chi_r}");
  SmoothCharacter chi_r = r == 1 ? chi : chi.pullback_norm(r);
  if (!same_block_character(chi_r, Z_r.chi())) throw WrongBlock("Z_r does not live on the block of chi o N_r");
  CenterElement out(chi, Z_r.weyl_ptr(), Z_r.levi_mask(), Z_r.poly().scale_exponents(r));
  // W_{0chi} sits inside W_{0chi_r}, so invariance carries over
  if (!out.is_invariant()) throw std::logic_error("base change left the invariants");
  return out;
}

Cyclo action_scalar(const CenterElement& Z, const ExtendedCharacter& xi) {
  const WeylGroup& W = Z.weyl();
  if (&xi.compact().datum() != &Z.chi().datum()) throw WrongBlock("character of another group");
  for (int w : block_weyl(W, Z.levi_mask())) {
    ExtendedCharacter x = xi.weyl_act(W, w);
    if (same_block_character(x.compact(), Z.chi())) return Z.poly().evaluate(x.eta());
  }
  throw WrongBlock("xi does not restrict to a Weyl conjugate of the block character");
}

CenterElement constant_term_cMG(const CenterElement& Z, unsigned levi_mask) {
  const RootDatum& d = Z.chi().datum();
  if (levi_mask > full_levi_mask(d)) throw InvalidLevi("Levi mask names a nonexistent simple root");
  if ((levi_mask & ~Z.levi_mask()) != 0) throw InvalidLevi("M is not inside the Levi of Z");
  if (!h_stable(d, levi_mask)) throw InvalidLevi("Levi mask is not stable under the Galois action");
  // W_{M,0chi} = W_{0chi} cap W_M, and Z.group() already lies in W_{0chi}
  auto levi = Z.weyl().levi_subgroup(levi_mask);
  std::vector<int> group;
  for (int w : Z.group())
    if (std::find(levi.begin(), levi.end(), w) != levi.end()) group.push_back(w);
  return CenterElement(Z.chi(), Z.weyl_ptr(), levi_mask, group, Z.poly());
}

/* ---- rank-one Hecke functions ---- */

void det_split(const ScaledMat2& X, int* val, TElem* unit) {
  TElem det = X.a * X.d - X.b * X.c;
  int v = det.valuation();
  if (v >= X.ring().N) throw PrecisionExhausted("determinant vanishes at working precision");
  *val = v - 2 * X.s;
  const RingSpec& s = X.ring();
  Coeffs c{};
  for (int i = 0; i < s.e; ++i) c[i] = det.coeff(i) / s.ppow[v];
  *unit = TElem(s, c);
}

bool double_coset_torus(const ScaledMat2& X, int a, int b, const Depths& J, const Depths& Jp, TElem* t1,
                        TElem* t2) {
  int dv = 0;
  TElem du;
  det_split(X, &dv, &du);
  if (dv != a + b) return false;
  const RingSpec& s = X.ring();
  auto unit_of = [&](const TElem& x, int v) {
    Coeffs c{};
    for (int i = 0; i < s.e; ++i) c[i] = x.coeff(i) / s.ppow[v + X.s];
    return TElem(s, c);
  };
  if (a >= b) {
    if (a - b + J.fminus < Jp.fminus) throw std::invalid_argument("double coset test outside its range");
    if (X.val_d() != b) return false;
    if (X.val_c() < b + Jp.fminus) return false;
    if (X.val_b() < std::min(a + Jp.fplus, b + J.fplus)) return false;
    *t2 = unit_of(X.d, b);
    *t1 = du * t2->inv();
  } else {
    if (b - a + J.fplus < Jp.fplus) throw std::invalid_argument("double coset test outside its range");
    if (X.val_a() != a) return false;
    if (X.val_b() < a + Jp.fplus) return false;
    if (X.val_c() < std::min(b + Jp.fminus, a + J.fminus)) return false;
    *t1 = unit_of(X.a, a);
    *t2 = du * t1->inv();
  }
  return true;
}

namespace {

// every element of p^lo O / p^hi O
std::vector<TElem> residues(const RingSpec& ring, int lo, int hi) {
  std::vector<TElem> out;
  if (lo >= hi) {
    out.emplace_back(ring, 0);
    return out;
  }
  int64_t per = ring.ppow[hi - lo];
  int64_t total = 1;
  for (int i = 0; i < ring.e; ++i) total *= per;
  for (int64_t code = 0; code < total; ++code) {
    Coeffs c{};
    int64_t t = code;
    for (int i = 0; i < ring.e; ++i) {
      c[i] = (t % per) * ring.ppow[lo];
      t /= per;
    }
    out.emplace_back(ring, c);
  }
  return out;
}

int cap_precision(int p) {
  int N = 1;
  int64_t v = p;
  while (v * p < (int64_t{1} << 29)) {
    v *= p;
    ++N;
  }
  return N;
}

// (a, b) with n_x = diag(p^a, p^b) sigma^w
std::pair<int, int> translation(const AffineWeylElement& x, bool gl2) {
  return gl2 ? std::make_pair(x.lambda[0], x.lambda[1]) : std::make_pair(x.lambda[0], -x.lambda[0]);
}

bool is_swap(const AffineWeylElement& x) { return x.w != 0; }

ScaledMat2 sigma(const RingSpec& ring, bool inverse) {
  TElem z(ring, 0), o(ring, 1);
  return inverse ? ScaledMat2{z, -o, o, z, 0} : ScaledMat2{z, o, -o, z, 0};
}

bool is_gl2_datum(const RootDatum& d) {
  if (d.name == "GL2") return true;
  if (d.name == "SL2") return false;
  throw std::invalid_argument("rank-one Hecke functions exist for SL2 and GL2 only");
}

int64_t chi_exponent(const SmoothCharacter& chi, bool gl2, const TElem& t1, const TElem& t2) {
  return gl2 ? chi.exponent({t1, t2}) : chi.exponent({t1});
}

// value of the term at X, as the root exponent of chi^{-1}(torus part)
bool term_exponent(const HeckeTerm& term, bool gl2, const Depths& J, const SmoothCharacter& chi, const ScaledMat2& g,
                   int64_t* k) {
  auto [a, b] = translation(term.x, gl2);
  bool swap = is_swap(term.x);
  ScaledMat2 X = swap ? g * sigma(g.ring(), true) : g;
  Depths Jp = swap ? Depths{J.fminus, J.fplus} : J;
  TElem t1, t2;
  if (!double_coset_torus(X, a, b, J, Jp, &t1, &t2)) return false;
  *k = -chi_exponent(chi, gl2, t1, t2);
  return true;
}

bool same_x(const AffineWeylElement& a, const AffineWeylElement& b) { return a.w == b.w && a.lambda == b.lambda; }

bool x_less(const HeckeTerm& a, const HeckeTerm& b) {
  return std::tie(a.x.w, a.x.lambda) < std::tie(b.x.w, b.x.lambda);
}

}  // namespace

std::vector<JRep> j_mod(const RingSpec& ring, const Depths& J, int M, bool gl2) {
  if (M < std::max(J.fplus, J.fminus) || M >= ring.N) throw std::invalid_argument("J mod K_M needs depth <= M < N");
  auto zs = residues(ring, J.fminus, M);
  auto ys = residues(ring, J.fplus, M);
  const auto& units = UnitGroup::get(ring, M).units();
  std::vector<std::pair<TElem, TElem>> tori;
  for (const auto& u : units) {
    if (gl2) {
      for (const auto& v : units) tori.emplace_back(u, v);
    } else {
      tori.emplace_back(u, u.inv());
    }
  }
  std::vector<JRep> out;
  out.reserve(zs.size() * ys.size() * tori.size());
  for (const auto& z : zs)
    for (const auto& [t1, t2] : tori)
      for (const auto& y : ys) {
        ScaledMat2 t = ScaledMat2::diag(t1, 0, t2, 0);
        ScaledMat2 tinv = ScaledMat2::diag(t1.inv(), 0, t2.inv(), 0);
        out.push_back({ScaledMat2::lower(z, 0) * t * ScaledMat2::upper(y, 0),
                       ScaledMat2::upper(-y, 0) * tinv * ScaledMat2::lower(-z, 0), t1, t2});
      }
  return out;
}

ScaledMat2 affine_rep(const AffineWeylElement& x, bool gl2, const RingSpec& ring) {
  auto [a, b] = translation(x, gl2);
  TElem one(ring, 1);
  ScaledMat2 d = ScaledMat2::diag(one, a, one, b);
  return is_swap(x) ? d * sigma(ring, false) : d;
}

ScaledMat2 affine_rep_inverse(const AffineWeylElement& x, bool gl2, const RingSpec& ring) {
  auto [a, b] = translation(x, gl2);
  TElem one(ring, 1);
  ScaledMat2 d = ScaledMat2::diag(one, -a, one, -b);
  return is_swap(x) ? sigma(ring, true) * d : d;
}

RootOfUnity rho_inverse(const TypeDatum& type, const TElem& t1, const TElem& t2) {
  bool gl2 = is_gl2_datum(*type.datum);
  SmoothCharacter chi = type.chi.rebind(t1.spec());
  return RootOfUnity(chi.order(), -chi_exponent(chi, gl2, t1, t2));
}

HeckeFunction::HeckeFunction(std::shared_ptr<const TypeDatum> type, std::vector<HeckeTerm> terms)
    : type_(std::move(type)), gl2_(is_gl2_datum(*type_->datum)) {
  std::sort(terms.begin(), terms.end(), x_less);
  for (auto& t : terms) {
    size_t want = gl2_ ? 2 : 1;
    if (t.x.lambda.size() != want) throw std::invalid_argument("affine Weyl element of the wrong rank");
    if (!support_predicted(*type_, t.x)) throw std::invalid_argument("term outside the predicted support");
    if (!terms_.empty() && same_x(terms_.back().x, t.x)) {
      terms_.back().value += t.value;
    } else {
      terms_.push_back(t);
    }
  }
  terms_.erase(std::remove_if(terms_.begin(), terms_.end(), [](const HeckeTerm& t) { return t.value.is_zero(); }),
               terms_.end());
}

Depths HeckeFunction::depths() const { return {type_->depths()[0], type_->depths()[1]}; }

int HeckeFunction::spread() const {
  int s = 0;
  for (const auto& t : terms_) {
    auto [a, b] = translation(t.x, gl2_);
    s = std::max(s, std::abs(a - b));
  }
  return s;
}

Cyclo HeckeFunction::eval(const ScaledMat2& g) const {
  SmoothCharacter chi = type_->chi.rebind(g.ring());
  Cyclo acc;
  for (const auto& t : terms_) {
    int64_t k = 0;
    if (term_exponent(t, gl2_, depths(), chi, g, &k)) acc += t.value * RootOfUnity(chi.order(), k);
  }
  return acc;
}

Cyclo HeckeFunction::eval(const AffineWeylElement& x) const {
  for (const auto& t : terms_)
    if (same_x(t.x, x)) return t.value;
  return Cyclo();
}

HeckeFunction HeckeFunction::operator+(const HeckeFunction& o) const {
  if (!same_block_character(type_->chi, o.type_->chi)) throw WrongBlock("Hecke functions of different types");
  std::vector<HeckeTerm> all = terms_;
  all.insert(all.end(), o.terms_.begin(), o.terms_.end());
  return HeckeFunction(type_, all);
}

HeckeFunction HeckeFunction::operator*(const Cyclo& c) const {
  std::vector<HeckeTerm> all = terms_;
  for (auto& t : all) t.value = t.value * c;
  return HeckeFunction(type_, all);
}

bool HeckeFunction::operator==(const HeckeFunction& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  for (size_t i = 0; i < terms_.size(); ++i)
    if (!same_x(terms_[i].x, o.terms_[i].x) || terms_[i].value != o.terms_[i].value) return false;
  return true;
}

std::string HeckeFunction::serialize() const {
  std::ostringstream os;
  for (const auto& t : terms_) {
    os << "lambda=[";
    for (size_t k = 0; k < t.x.lambda.size(); ++k) os << (k ? "," : "") << t.x.lambda[k];
    os << "] w=" << t.x.w << " value=" << t.value.str() << "\n";
  }
  return os.str();
}

HeckeFunction unit_e_rho(std::shared_ptr<const TypeDatum> type) {
  bool gl2 = is_gl2_datum(*type->datum);
  AffineWeylElement one{IVec(gl2 ? 2 : 1, 0), 0};
  return HeckeFunction(std::move(type), {{one, Cyclo::rational(1)}});
}

HeckeFunction indicator(std::shared_ptr<const TypeDatum> type, const AffineWeylElement& x) {
  return HeckeFunction(std::move(type), {{x, Cyclo::rational(1)}});
}

int convolution_precision(const HeckeFunction& f) {
  Depths J = f.depths();
  return std::max({J.fplus, J.fminus, f.type().chi.level(), 1}) + f.spread();
}

HeckeFunction convolve(const HeckeFunction& f, const HeckeFunction& g, int precision, int threads) {
  if (!same_block_character(f.type().chi, g.type().chi) || f.depths().fplus != g.depths().fplus ||
      f.depths().fminus != g.depths().fminus)
    throw WrongBlock("convolution of Hecke functions of different types");
  int need = convolution_precision(f);
  if (precision < need)
    throw WindowTooSmall("convolution needs K_" + std::to_string(need) + " inside J n_x J n_x^{-1}");
  const bool gl2 = f.gl2();
  const Depths J = f.depths();
  const SmoothCharacter& chi0 = f.type().chi;

  // the product lives on K-double cosets of lambda with coordinates in [lo, hi]
  int lo = 0, hi = 0;
  auto bounds = [&](const HeckeFunction& h, int* l, int* u) {
    *l = 1 << 20;
    *u = -(1 << 20);
    for (const auto& t : h.terms()) {
      auto [a, b] = translation(t.x, gl2);
      *l = std::min({*l, a, b});
      *u = std::max({*u, a, b});
    }
  };
  int lf, uf, lg, ug;
  bounds(f, &lf, &uf);
  bounds(g, &lg, &ug);
  if (f.terms().empty() || g.terms().empty()) return HeckeFunction(f.type_ptr(), {});
  lo = lf + lg;
  hi = uf + ug;
  int reach = std::max(std::abs(lo), std::abs(hi));

  int scale = 2 * reach + std::max(std::abs(lf), std::abs(uf));
  int threshold = reach + std::max({J.fplus, J.fminus}) + chi0.level() + 1;
  int N = std::max(precision + 1, scale + threshold + 1);
  if (N > cap_precision(chi0.ring().p)) throw WindowTooSmall("convolution window exceeds the ring precision cap");
  const RingSpec& ring = RingSpec::get(chi0.ring().p, chi0.ring().e, N);
  SmoothCharacter chi = chi0.rebind(ring);
  const int64_t order = chi.order();

  std::vector<AffineWeylElement> targets;
  for (int w = 0; w < 2; ++w) {
    if (gl2) {
      for (int a = lo; a <= hi; ++a)
        for (int b = lo; b <= hi; ++b) targets.push_back({{a, b}, w});
    } else {
      for (int a = lo; a <= hi; ++a) targets.push_back({{a}, w});
    }
  }

  std::vector<JRep> reps = j_mod(ring, J, precision, gl2);
  const int64_t n = static_cast<int64_t>(reps.size());
  const auto& fterms = f.terms();
  const auto& gterms = g.terms();
  const size_t nf = fterms.size(), ng = gterms.size(), nt = targets.size();

  std::vector<ScaledMat2> nw, nw_inv, nv;
  for (const auto& t : fterms) {
    nw.push_back(affine_rep(t.x, gl2, ring));
    nw_inv.push_back(affine_rep_inverse(t.x, gl2, ring));
  }
  for (const auto& v : targets) nv.push_back(affine_rep(v, gl2, ring));

  // counts[(v * nf + i) * ng + k] and stabilizer sizes |J_w mod K_M| per f term
  std::vector<RootCounts> counts(nt * nf * ng, RootCounts(order));
  std::vector<int64_t> stab(nf, 0);
#pragma omp parallel num_threads(std::max(1, threads))
  {
    std::vector<RootCounts> local(nt * nf * ng, RootCounts(order));
    std::vector<int64_t> lstab(nf, 0);
#pragma omp for schedule(dynamic, 16)
    for (int64_t idx = 0; idx < n; ++idx) {
      const JRep& j = reps[idx];
      int64_t rj = -chi_exponent(chi, gl2, j.t1, j.t2);
      for (size_t i = 0; i < nf; ++i) {
        TElem s1, s2;
        if (double_coset_torus(nw_inv[i] * j.j * nw[i], 0, 0, J, J, &s1, &s2)) ++lstab[i];
        ScaledMat2 left = nw_inv[i] * j.jinv;
        for (size_t v = 0; v < nt; ++v) {
          ScaledMat2 Y = left * nv[v];
          for (size_t k = 0; k < ng; ++k) {
            int64_t e = 0;
            if (term_exponent(gterms[k], gl2, J, chi, Y, &e)) local[(v * nf + i) * ng + k].add(rj + e);
          }
        }
      }
    }
#pragma omp critical
    {
      for (size_t c = 0; c < counts.size(); ++c) counts[c].merge(local[c]);
      for (size_t i = 0; i < nf; ++i) stab[i] += lstab[i];
    }
  }

  std::vector<HeckeTerm> out;
  for (size_t v = 0; v < nt; ++v) {
    Cyclo acc;
    for (size_t i = 0; i < nf; ++i)
      for (size_t k = 0; k < ng; ++k) {
        const RootCounts& c = counts[(v * nf + i) * ng + k];
        if (c.total() == 0) continue;
        acc += c.value(mpq_class(1, stab[i])) * fterms[i].value * gterms[k].value;
      }
    if (acc.is_zero()) continue;
    if (!support_predicted(f.type(), targets[v]))
      throw std::logic_error("convolution produced a value off the predicted support");
    out.push_back({targets[v], acc});
  }
  return HeckeFunction(f.type_ptr(), out);
}

}  // namespace unram
